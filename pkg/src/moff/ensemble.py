"""System C: rule-based combination of two binary predictions."""

from __future__ import annotations

import math

from moff.classifiers import Prediction
from moff.data import LABELS, NOT, OFF


def _validate(p: Prediction) -> None:
    if p.label not in LABELS:
        raise ValueError(f"invalid label {p.label!r}")
    if not (0.0 <= p.prob <= 1.0) or math.isnan(p.prob):
        raise ValueError(f"probability {p.prob!r} outside [0, 1]")


def combine(a: Prediction, b: Prediction) -> Prediction:
    """Agreeing labels win outright; otherwise OFF iff a.prob + b.prob > 1.

    The returned prob is the mean of the two inputs and is informational
    only; the label is what the rule decides.
    """
    _validate(a)
    _validate(b)
    if a.label == b.label:
        label = a.label
    elif a.prob + b.prob > 1.0:
        label = OFF
    else:
        label = NOT
    return Prediction(label, (a.prob + b.prob) / 2.0)

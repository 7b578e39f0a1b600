"""The ``moff-model`` v1 JSON container for Systems A, B and paragraph vectors.

Tensors are stored as ``{"shape": [rows, cols], "data": [...]}`` with
row-major floats; 1-D arrays are written as a single row.  Python's float
repr round-trips exactly, so save/load is value-exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from moff.classifiers import SystemA, SystemAConfig, SystemB, SystemBConfig
from moff.paravec import PvConfig, PvModel

FORMAT = "moff-model"
VERSION = 1


def _tensor(arr: np.ndarray) -> dict:
    a = np.asarray(arr, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise ValueError("refusing to save non-finite values")
    shape = [1, a.size] if a.ndim == 1 else list(a.shape)
    return {"shape": shape, "data": a.ravel().tolist()}


def _array(t: dict, like: np.ndarray | None = None) -> np.ndarray:
    a = np.asarray(t["data"], dtype=np.float64)
    if len(t["shape"]) != 2 or a.size != t["shape"][0] * t["shape"][1]:
        raise ValueError(f"tensor data does not match shape {t['shape']}")
    a = a.reshape(t["shape"])
    if like is not None:
        if a.size != like.size:
            raise ValueError(f"tensor of shape {t['shape']} cannot fill {like.shape}")
        a = a.reshape(like.shape)
    return a


def _write(path: str | Path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def _read(path: str | Path, system: str) -> dict:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != FORMAT or doc.get("version") != VERSION:
        raise ValueError(f"{path}: not a {FORMAT} v{VERSION} file")
    if doc.get("system") != system:
        raise ValueError(f"{path}: holds system {doc.get('system')!r}, expected {system!r}")
    return doc


def peek_system(path: str | Path) -> str:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != FORMAT:
        raise ValueError(f"{path}: not a {FORMAT} file")
    return doc["system"]


def save_classifier(model: SystemA | SystemB, path: str | Path, vocab_ref: str | None,
                    extra: dict | None = None) -> None:
    config = model.cfg.to_dict()
    config.update(extra or {})
    _write(path, {
        "format": FORMAT,
        "version": VERSION,
        "system": model.system,
        "config": config,
        "vocab_ref": vocab_ref,
        "epoch_losses": list(model.epoch_losses),
        "tensors": {name: _tensor(p) for name, p in model.named_params().items()},
    })


def load_classifier(path: str | Path, system: str) -> tuple[SystemA | SystemB, dict]:
    """Return the model and the raw document (for ``vocab_ref`` and config extras)."""
    doc = _read(path, system)
    cfg = dict(doc["config"])
    if system == "A":
        fields = SystemAConfig.__dataclass_fields__
        model = SystemA(SystemAConfig(**{k: v for k, v in cfg.items() if k in fields}))
    else:
        fields = SystemBConfig.__dataclass_fields__
        model = SystemB(SystemBConfig(**{k: v for k, v in cfg.items() if k in fields}))
    params = model.named_params()
    if set(params) != set(doc["tensors"]):
        raise ValueError(f"{path}: tensor names do not match system {system}")
    for name, p in params.items():
        p[...] = _array(doc["tensors"][name], p)
    model.epoch_losses = list(doc.get("epoch_losses", []))
    return model, doc


def save_pv(model: PvModel, path: str | Path) -> None:
    _write(path, {
        "format": FORMAT,
        "version": VERSION,
        "system": "PV",
        "config": model.config.to_dict(),
        "vocab_ref": None,
        "words": list(model.words),
        "counts": [int(c) for c in model.counts],
        "epoch_losses": list(model.epoch_losses),
        "noise": _tensor(model.noise),
        "tensors": {
            "doc_vectors": _tensor(model.doc_vectors),
            "word_in_vectors": _tensor(model.word_in_vectors),
            "word_out_vectors": _tensor(model.word_out_vectors),
        },
    })


def load_pv(path: str | Path) -> PvModel:
    doc = _read(path, "PV")
    t = doc["tensors"]
    return PvModel(
        words=list(doc["words"]),
        counts=np.asarray(doc["counts"], dtype=np.int64),
        doc_vectors=_array(t["doc_vectors"]),
        word_in_vectors=_array(t["word_in_vectors"]),
        word_out_vectors=_array(t["word_out_vectors"]),
        noise=_array(doc["noise"]).ravel(),
        config=PvConfig(**doc["config"]),
        epoch_losses=list(doc.get("epoch_losses", [])),
    )

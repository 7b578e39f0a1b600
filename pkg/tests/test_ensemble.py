import pytest
from hypothesis import given
from hypothesis import strategies as st

from moff.classifiers import Prediction
from moff.data import NOT, OFF
from moff.ensemble import combine

probs = st.floats(0.0, 1.0)
labels = st.sampled_from([NOT, OFF])


@pytest.mark.parametrize("a, b, expected", [
    (Prediction(OFF, 0.9), Prediction(OFF, 0.6), OFF),
    (Prediction(OFF, 0.7), Prediction(NOT, 0.4), OFF),
    (Prediction(NOT, 0.3), Prediction(OFF, 0.7), NOT),
])
def test_documented_cases(a, b, expected):
    assert combine(a, b).label == expected


def test_output_prob_is_mean():
    assert combine(Prediction(OFF, 0.8), Prediction(NOT, 0.4)).prob == pytest.approx(0.6)


@pytest.mark.parametrize("bad", [Prediction("MAYBE", 0.5), Prediction(OFF, 1.2),
                                 Prediction(NOT, -0.1), Prediction(OFF, float("nan"))])
def test_invalid_inputs_rejected(bad):
    with pytest.raises(ValueError):
        combine(bad, Prediction(NOT, 0.2))
    with pytest.raises(ValueError):
        combine(Prediction(NOT, 0.2), bad)


def test_hundredths_summing_to_one_give_not():
    for i in range(101):
        a, b = i / 100, (100 - i) / 100
        assert combine(Prediction(OFF, a), Prediction(NOT, b)).label == NOT
        assert combine(Prediction(NOT, a), Prediction(OFF, b)).label == NOT


@given(probs, probs, labels)
def test_agreement_wins(pa, pb, label):
    assert combine(Prediction(label, pa), Prediction(label, pb)).label == label


@given(probs, probs, labels, labels)
def test_symmetric(pa, pb, la, lb):
    assert combine(Prediction(la, pa), Prediction(lb, pb)).label == \
        combine(Prediction(lb, pb), Prediction(la, pa)).label


@given(probs, probs, st.floats(0.0, 1.0))
def test_raising_a_prob_never_flips_off_to_not(pa, pb, bump):
    a, b = Prediction(OFF, pa), Prediction(NOT, pb)
    if combine(a, b).label == OFF:
        higher = min(1.0, pa + bump)
        assert combine(Prediction(OFF, higher), b).label == OFF
        assert combine(a, Prediction(NOT, min(1.0, pb + bump))).label == OFF

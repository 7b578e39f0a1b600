import json

import numpy as np
import pytest

from moff.classifiers import SystemA, SystemAConfig, SystemB, SystemBConfig
from moff.modelio import load_classifier, load_pv, peek_system, save_classifier, save_pv
from moff.paravec import PvConfig, train_pv


def assert_same_params(a, b):
    pa, pb = a.named_params(), b.named_params()
    assert pa.keys() == pb.keys()
    for name in pa:
        assert pa[name].shape == pb[name].shape
        assert np.array_equal(pa[name], pb[name]), name


def test_system_a_round_trip(tmp_path):
    model = SystemA(SystemAConfig(vocab_size=12, max_len=7, dim=6, hidden=5, seed=3))
    model.epoch_losses = [0.7, 0.1 + 0.2]
    save_classifier(model, tmp_path / "a.json", "a.json.vocab")
    loaded, doc = load_classifier(tmp_path / "a.json", "A")
    assert_same_params(model, loaded)
    assert loaded.cfg == model.cfg
    assert loaded.epoch_losses == model.epoch_losses
    assert doc["vocab_ref"] == "a.json.vocab"


def test_system_b_round_trip(tmp_path):
    model = SystemB(SystemBConfig(input_dim=9, hidden=(7, 5, 3), seed=4))
    save_classifier(model, tmp_path / "b.json", None)
    loaded, _ = load_classifier(tmp_path / "b.json", "B")
    assert_same_params(model, loaded)
    x = np.linspace(-1, 1, 18).reshape(2, 9)
    assert np.array_equal(model.predict_proba(x), loaded.predict_proba(x))


def test_container_layout(tmp_path):
    model = SystemB(SystemBConfig(input_dim=4, hidden=(3, 3, 2)))
    save_classifier(model, tmp_path / "b.json", None)
    doc = json.loads((tmp_path / "b.json").read_text())
    assert doc["format"] == "moff-model" and doc["version"] == 1 and doc["system"] == "B"
    for t in doc["tensors"].values():
        assert len(t["shape"]) == 2 and len(t["data"]) == t["shape"][0] * t["shape"][1]
    assert peek_system(tmp_path / "b.json") == "B"


def test_wrong_system_rejected(tmp_path):
    save_classifier(SystemB(SystemBConfig()), tmp_path / "b.json", None)
    with pytest.raises(ValueError):
        load_classifier(tmp_path / "b.json", "A")


def test_shape_mismatch_rejected(tmp_path):
    save_classifier(SystemB(SystemBConfig()), tmp_path / "b.json", None)
    doc = json.loads((tmp_path / "b.json").read_text())
    doc["tensors"]["output.W"]["data"].pop()
    (tmp_path / "b.json").write_text(json.dumps(doc))
    with pytest.raises(ValueError):
        load_classifier(tmp_path / "b.json", "B")


def test_non_finite_refused(tmp_path):
    model = SystemB(SystemBConfig())
    model.output.params["b"][...] = np.nan
    with pytest.raises(ValueError):
        save_classifier(model, tmp_path / "b.json", None)


def test_pv_round_trip(tmp_path, two_vocab):
    pv = train_pv(two_vocab[:20], PvConfig(dim=6, epochs=2, seed=2))
    save_pv(pv, tmp_path / "pv.json")
    loaded = load_pv(tmp_path / "pv.json")
    assert loaded.words == pv.words and loaded.config == pv.config
    for name in ("doc_vectors", "word_in_vectors", "word_out_vectors", "noise", "counts"):
        assert np.array_equal(getattr(loaded, name), getattr(pv, name)), name
    assert np.array_equal(loaded.infer_vector(two_vocab[0]), pv.infer_vector(two_vocab[0]))

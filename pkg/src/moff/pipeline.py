"""End-to-end train / predict / evaluate steps shared by the CLI and demos."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from moff import modelio
from moff.classifiers import (Prediction, SystemA, SystemAConfig, SystemB, SystemBConfig,
                              label_for, train_system_a, train_system_b)
from moff.data import OFF, DataRecord
from moff.ensemble import combine
from moff.paravec import PvConfig, PvModel, infer_vector, train_pv
from moff.preprocess import load_stopwords, preprocess
from moff.vocab import Vocabulary, build_vocab, default_max_len, encode_batch


@dataclass
class TrainSettings:
    seed: int = 42
    epochs: int | None = None
    dim: int = 50
    max_len: int | None = None
    min_count: int = 1
    hidden: int = 64
    hidden_b: tuple[int, int, int] = (64, 32, 16)
    batch_size: int = 32
    lr: float = 0.001
    recurrent_dropout: float = 0.2
    pv_epochs: int = 20
    pv_window: int = 5
    pv_negative: int = 5
    infer_steps: int = 50
    stopwords: str | None = None
    extra: dict = field(default_factory=dict)


# Overrides for the 500-comment synthetic corpus.  Batch 4 gives 125 updates
# per epoch, the count batch 32 gives on the 4000-comment training set; PV
# needs more passes and negatives to lift the rare keywords out of the noise
# on so little text.
DESK_SCALE = {"batch_size": 4, "pv_epochs": 40, "pv_negative": 10}


def _labels(records: Sequence[DataRecord]) -> np.ndarray:
    if any(r.label is None for r in records):
        raise ValueError("training data contains unlabeled records")
    return np.array([r.label == OFF for r in records], dtype=np.float64)


def tokenize_records(records: Sequence[DataRecord], stops) -> list[list[str]]:
    return [preprocess(r.text, stops) for r in records]


def _sidecar(model_path: Path, suffix: str) -> Path:
    return model_path.with_name(model_path.name + suffix)


def train_a(records: Sequence[DataRecord], s: TrainSettings) -> tuple[SystemA, Vocabulary]:
    stops = load_stopwords(s.stopwords)
    docs = tokenize_records(records, stops)
    y = _labels(records)
    vocab = build_vocab(docs, s.min_count)
    max_len = s.max_len or default_max_len(docs)
    vocab = vocab.with_max_len(max_len)
    ids, lengths = encode_batch(docs, vocab, max_len)
    cfg = SystemAConfig(vocab_size=vocab.size, max_len=max_len, dim=s.dim, hidden=s.hidden,
                        recurrent_dropout=s.recurrent_dropout,
                        epochs=s.epochs if s.epochs is not None else 5,
                        batch_size=s.batch_size, lr=s.lr, seed=s.seed)
    return train_system_a(ids, lengths, y, cfg), vocab


def pv_config(s: TrainSettings) -> PvConfig:
    return PvConfig(dim=s.dim, window=s.pv_window, negative_samples=s.pv_negative,
                    epochs=s.pv_epochs, min_count=s.min_count, seed=s.seed,
                    infer_steps=s.infer_steps)


def doc_features(pv: PvModel, docs: Sequence[Sequence[str]]) -> np.ndarray:
    """Inferred paragraph vectors, one row per document."""
    return np.stack([infer_vector(d, pv) for d in docs]) if docs else np.zeros((0, pv.dim))


def train_b(records: Sequence[DataRecord], s: TrainSettings) -> tuple[SystemB, PvModel]:
    stops = load_stopwords(s.stopwords)
    docs = tokenize_records(records, stops)
    y = _labels(records)
    pv = train_pv(docs, pv_config(s))
    # train on inferred vectors so training and test features come from the
    # same procedure
    x = doc_features(pv, docs)
    cfg = SystemBConfig(input_dim=s.dim, hidden=s.hidden_b,
                        epochs=s.epochs if s.epochs is not None else 50,
                        batch_size=s.batch_size, lr=s.lr, seed=s.seed)
    return train_system_b(x, y, cfg), pv


def save_a(model: SystemA, vocab: Vocabulary, path: str | Path, stopwords: str | None) -> None:
    path = Path(path)
    vocab_path = _sidecar(path, ".vocab")
    vocab.save(vocab_path)
    modelio.save_classifier(model, path, vocab_path.name, {"stopwords": stopwords})


def save_b(model: SystemB, pv: PvModel, path: str | Path, stopwords: str | None) -> None:
    path = Path(path)
    pv_path = _sidecar(path, ".pv.json")
    modelio.save_pv(pv, pv_path)
    modelio.save_classifier(model, path, pv_path.name, {"stopwords": stopwords})


def _ref(path: Path, doc: dict) -> Path:
    ref = doc.get("vocab_ref")
    if not ref:
        raise ValueError(f"{path}: missing vocab_ref")
    ref_path = Path(ref) if os.path.isabs(ref) else path.parent / ref
    if not ref_path.exists():
        raise FileNotFoundError(f"{path}: referenced file {ref_path} not found")
    return ref_path


class LoadedA:
    def __init__(self, path: str | Path):
        path = Path(path)
        self.model, doc = modelio.load_classifier(path, "A")
        self.vocab = Vocabulary.load(_ref(path, doc))
        self.stops = load_stopwords(doc["config"].get("stopwords"))

    def probs(self, records: Sequence[DataRecord]) -> np.ndarray:
        docs = tokenize_records(records, self.stops)
        ids, lengths = encode_batch(docs, self.vocab, self.model.cfg.max_len)
        return self.model.predict_proba(ids, lengths)


class LoadedB:
    def __init__(self, path: str | Path):
        path = Path(path)
        self.model, doc = modelio.load_classifier(path, "B")
        self.pv = modelio.load_pv(_ref(path, doc))
        self.stops = load_stopwords(doc["config"].get("stopwords"))

    def probs(self, records: Sequence[DataRecord]) -> np.ndarray:
        x = doc_features(self.pv, tokenize_records(records, self.stops))
        return self.model.predict_proba(x)


def load_system(path: str | Path):
    system = modelio.peek_system(path)
    if system == "A":
        return LoadedA(path)
    if system == "B":
        return LoadedB(path)
    raise ValueError(f"{path}: system {system!r} cannot classify")


def predictions(probs: np.ndarray) -> list[Prediction]:
    return [Prediction(label_for(float(p)), float(p)) for p in probs]


def ensemble_predictions(probs_a: np.ndarray, probs_b: np.ndarray) -> list[Prediction]:
    return [combine(a, b) for a, b in zip(predictions(probs_a), predictions(probs_b))]

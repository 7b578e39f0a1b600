"""System A (embedding + LSTM) and System B (dense net over document vectors)."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import NamedTuple, Sequence

import numpy as np

from moff._rng import stream
from moff.data import NOT, OFF
from moff.nn import LSTM, Adam, Dense, Embedding, EPSILON, bce_loss

THRESHOLD = 0.5


class Prediction(NamedTuple):
    label: str
    prob: float


@dataclass(frozen=True)
class SystemAConfig:
    vocab_size: int
    max_len: int
    dim: int = 50
    hidden: int = 64
    recurrent_dropout: float = 0.2
    epochs: int = 5
    batch_size: int = 32
    lr: float = 0.001
    seed: int = 42

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SystemBConfig:
    input_dim: int = 50
    hidden: tuple[int, ...] = (64, 32, 16)
    epochs: int = 50
    batch_size: int = 32
    lr: float = 0.001
    seed: int = 42

    def __post_init__(self):
        if len(self.hidden) != 3:
            raise ValueError("System B has exactly three hidden layers")
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hidden"] = list(self.hidden)
        return d


def _check_labels(labels: np.ndarray) -> np.ndarray:
    y = np.asarray(labels, dtype=np.float64)
    if y.size == 0:
        raise ValueError("training set is empty")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 (NOT) or 1 (OFF)")
    if y.min() == y.max():
        raise ValueError("training set holds a single class")
    return y


def _clamp(p: np.ndarray) -> np.ndarray:
    return np.clip(p, EPSILON, 1.0 - EPSILON)


class SystemA:
    """Embedding -> LSTM (final real step) -> dense sigmoid."""

    system = "A"

    def __init__(self, cfg: SystemAConfig):
        self.cfg = cfg
        rng = stream(cfg.seed, "systemA.init")
        self.embedding = Embedding(cfg.vocab_size, cfg.dim, rng)
        self.lstm = LSTM(cfg.dim, cfg.hidden, cfg.recurrent_dropout, rng)
        self.output = Dense(cfg.hidden, 1, "sigmoid", rng)
        self.epoch_losses: list[float] = []

    @property
    def layers(self) -> dict:
        return {"embedding": self.embedding, "lstm": self.lstm, "output": self.output}

    def named_params(self) -> dict[str, np.ndarray]:
        return {f"{ln}.{pn}": p for ln, layer in self.layers.items()
                for pn, p in layer.params.items()}

    def named_grads(self) -> dict[str, np.ndarray]:
        return {f"{ln}.{pn}": g for ln, layer in self.layers.items()
                for pn, g in layer.grads.items()}

    def forward(self, ids: np.ndarray, lengths: np.ndarray, mask=None) -> np.ndarray:
        ids = np.asarray(ids)
        if ids.ndim != 2 or ids.shape[1] != self.cfg.max_len:
            raise ValueError(f"expected index matrix with {self.cfg.max_len} columns")
        h = self.lstm.forward(self.embedding.forward(ids), lengths, mask)
        return self.output.forward(h)[:, 0]

    def backward(self, p: np.ndarray, y: np.ndarray) -> None:
        # sigmoid + mean BCE: dL/dz = (p - y) / n
        dz = ((p - y) / len(y))[:, None]
        dh = self.output.backward(dz, pre_activation=True)
        self.embedding.backward(self.lstm.backward(dh))

    def predict_proba(self, ids: np.ndarray, lengths: np.ndarray) -> np.ndarray:
        return _clamp(self.forward(ids, lengths))


class SystemB:
    """Three relu dense layers -> dense sigmoid."""

    system = "B"

    def __init__(self, cfg: SystemBConfig):
        self.cfg = cfg
        rng = stream(cfg.seed, "systemB.init")
        widths = (cfg.input_dim, *cfg.hidden)
        self.hidden_layers = [Dense(a, b, "relu", rng) for a, b in zip(widths, widths[1:])]
        self.output = Dense(widths[-1], 1, "sigmoid", rng)
        self.epoch_losses: list[float] = []

    @property
    def layers(self) -> dict:
        named = {f"dense{i}": layer for i, layer in enumerate(self.hidden_layers)}
        named["output"] = self.output
        return named

    named_params = SystemA.named_params
    named_grads = SystemA.named_grads

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        for layer in self.hidden_layers:
            x = layer.forward(x)
        return self.output.forward(x)[:, 0]

    def backward(self, p: np.ndarray, y: np.ndarray) -> None:
        d = self.output.backward(((p - y) / len(y))[:, None], pre_activation=True)
        for layer in reversed(self.hidden_layers):
            d = layer.backward(d)

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return _clamp(self.forward(x))


def _train(model, inputs: tuple, y: np.ndarray, epochs: int, batch_size: int,
           lr: float, seed: int, name: str, dropout: bool = False):
    opt = Adam(lr=lr)
    rng = stream(seed, f"{name}.shuffle")
    drop_rng = stream(seed, f"{name}.dropout")
    params = model.named_params()
    n = len(y)
    model.epoch_losses = []
    for _ in range(epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            batch = [a[idx] for a in inputs]
            if dropout:
                p = model.forward(*batch, mask=model.lstm.sample_mask(len(idx), drop_rng))
            else:
                p = model.forward(*batch)
            total += float(bce_loss(p, y[idx]).sum())
            model.backward(p, y[idx])
            opt.step(params, model.named_grads())
        model.epoch_losses.append(total / n)
    return model


def train_system_a(ids: np.ndarray, lengths: np.ndarray, labels: Sequence[int],
                   cfg: SystemAConfig) -> SystemA:
    """Train System A on encoded sequences (rows of `ids`) with 0/1 labels."""
    y = _check_labels(labels)
    ids = np.asarray(ids)
    if len(ids) != len(y):
        raise ValueError("inputs and labels differ in length")
    model = SystemA(cfg)
    return _train(model, (ids, np.asarray(lengths)), y, cfg.epochs, cfg.batch_size,
                  cfg.lr, cfg.seed, "systemA", dropout=cfg.recurrent_dropout > 0)


def train_system_b(vectors: np.ndarray, labels: Sequence[int], cfg: SystemBConfig) -> SystemB:
    y = _check_labels(labels)
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2 or len(x) != len(y):
        raise ValueError("expected one document vector per label")
    if x.shape[1] != cfg.input_dim:
        raise ValueError(f"document vectors have width {x.shape[1]}, config says {cfg.input_dim}")
    model = SystemB(cfg)
    return _train(model, (x,), y, cfg.epochs, cfg.batch_size, cfg.lr, cfg.seed, "systemB")


def label_for(prob: float, threshold: float = THRESHOLD) -> str:
    return OFF if prob > threshold else NOT


def predict_prob(model, *inputs) -> float:
    """Probability of OFF for a single example."""
    if isinstance(model, SystemA):
        seq = inputs[0]
        ids = np.asarray(seq.indices)[None, :]
        return float(model.predict_proba(ids, np.array([seq.true_length]))[0])
    return float(model.predict_proba(np.asarray(inputs[0])[None, :])[0])


def predict_label(model, *inputs, threshold: float = THRESHOLD) -> Prediction:
    prob = predict_prob(model, *inputs)
    return Prediction(label_for(prob, threshold), prob)

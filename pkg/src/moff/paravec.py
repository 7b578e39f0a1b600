"""Paragraph vectors, distributed-memory variant, trained with negative sampling.

Each (document, centre word) pair adds the document vector to the mean input
vector of the surrounding words and asks that sum to score the centre word
above `negative_samples` noise words.  Plain per-word SGD with a
linearly decaying learning rate.
"""

from __future__ import annotations

import zlib
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from moff._rng import stream
from moff.nn import sigmoid


@dataclass(frozen=True)
class PvConfig:
    dim: int = 50
    window: int = 5
    negative_samples: int = 5
    epochs: int = 20
    initial_lr: float = 0.025
    final_lr: float = 0.0001
    min_count: int = 1
    seed: int = 42
    infer_steps: int = 50

    def __post_init__(self):
        if self.dim < 1 or self.window < 1 or self.negative_samples < 1:
            raise ValueError("dim, window and negative_samples must be positive")
        if self.epochs < 1 or self.infer_steps < 1:
            raise ValueError("epochs and infer_steps must be positive")
        if not self.initial_lr > self.final_lr > 0:
            raise ValueError("need initial_lr > final_lr > 0")

    def to_dict(self) -> dict:
        return asdict(self)


def noise_distribution(counts: Sequence[int], power: float = 0.75) -> np.ndarray:
    weights = np.asarray(counts, dtype=np.float64) ** power
    total = weights.sum()
    if total <= 0:
        raise ValueError("noise distribution needs at least one positive count")
    return weights / total


class NoiseSampler:
    """Draws vocabulary indices with probability given by `noise`."""

    def __init__(self, noise: np.ndarray):
        self.noise = np.asarray(noise, dtype=np.float64)
        self.cdf = np.cumsum(self.noise)
        self._last = int(np.flatnonzero(self.noise > 0)[-1])

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random(size) * self.cdf[-1]
        # side="right" skips zero-width (zero-frequency) slots
        idx = np.searchsorted(self.cdf, u, side="right")
        return np.minimum(idx, self._last)


def negative_sample(noise: np.ndarray, rng: np.random.Generator) -> int:
    return int(NoiseSampler(noise).draw(rng, 1)[0])


@dataclass
class PvModel:
    words: list[str]
    counts: np.ndarray
    doc_vectors: np.ndarray
    word_in_vectors: np.ndarray
    word_out_vectors: np.ndarray
    noise: np.ndarray
    config: PvConfig
    epoch_losses: list[float]

    def __post_init__(self):
        self.word_index = {w: i for i, w in enumerate(self.words)}
        self._sampler = NoiseSampler(self.noise)

    @property
    def dim(self) -> int:
        return self.config.dim

    def ids(self, tokens: Sequence[str]) -> np.ndarray:
        """Known-word indices of `tokens`; unknown words are dropped."""
        return np.array([self.word_index[t] for t in tokens if t in self.word_index],
                        dtype=np.int64)

    def infer_vector(self, tokens: Sequence[str], steps: int | None = None) -> np.ndarray:
        return infer_vector(tokens, self, steps)


def _contexts(n: int, window: int) -> list[np.ndarray]:
    return [np.r_[max(0, i - window):i, i + 1:min(n, i + window + 1)] for i in range(n)]


def _sgd_document(doc_vec: np.ndarray, ids: np.ndarray, w_in: np.ndarray,
                  w_out: np.ndarray, sampler: NoiseSampler, cfg: PvConfig,
                  rng: np.random.Generator, lr: float, update_words: bool) -> tuple[float, int]:
    """One pass over a document; returns (summed loss, number of predictions)."""
    loss = 0.0
    negs = sampler.draw(rng, len(ids) * cfg.negative_samples).reshape(len(ids), -1)
    labels = np.zeros(cfg.negative_samples + 1)
    labels[0] = 1.0
    for pos, ctx in enumerate(_contexts(len(ids), cfg.window)):
        centre = ids[pos]
        ctx_ids = ids[ctx]
        h = doc_vec + (w_in[ctx_ids].mean(axis=0) if len(ctx_ids) else 0.0)
        targets = np.concatenate(([centre], negs[pos]))
        keep = np.ones(len(targets), dtype=bool)
        keep[1:] = targets[1:] != centre
        targets, lab = targets[keep], labels[keep]
        out = w_out[targets]
        p = sigmoid(out @ h)
        loss -= np.log(np.where(lab > 0, p, 1.0 - p) + 1e-12).sum()
        g = p - lab
        dh = g @ out
        if update_words:
            # duplicates among targets must accumulate
            np.subtract.at(w_out, targets, lr * g[:, None] * h[None, :])
            if len(ctx_ids):
                np.subtract.at(w_in, ctx_ids, lr * dh / len(ctx_ids))
        doc_vec -= lr * dh
    return loss, len(ids)


def train_pv(corpus: Sequence[Sequence[str]], cfg: PvConfig | None = None) -> PvModel:
    """Learn one vector per document in `corpus`."""
    cfg = cfg or PvConfig()
    if not corpus:
        raise ValueError("cannot train paragraph vectors on an empty corpus")
    counts = Counter(t for doc in corpus for t in doc)
    words = sorted((w for w, n in counts.items() if n >= cfg.min_count),
                   key=lambda w: (-counts[w], w))
    if not words:
        raise ValueError(f"no token occurs at least {cfg.min_count} times")
    freq = np.array([counts[w] for w in words], dtype=np.int64)
    noise = noise_distribution(freq)
    sampler = NoiseSampler(noise)
    index = {w: i for i, w in enumerate(words)}
    docs = [np.array([index[t] for t in doc if t in index], dtype=np.int64) for doc in corpus]

    init = stream(cfg.seed, "pv.init")
    scale = 0.5 / cfg.dim
    doc_vectors = init.uniform(-scale, scale, size=(len(docs), cfg.dim))
    w_in = init.uniform(-scale, scale, size=(len(words), cfg.dim))
    w_out = np.zeros((len(words), cfg.dim))
    rng = stream(cfg.seed, "pv.train")

    total = max(1, cfg.epochs * sum(len(d) for d in docs))
    done = 0
    losses = []
    for _ in range(cfg.epochs):
        epoch_loss, epoch_n = 0.0, 0
        for d, ids in enumerate(docs):
            if len(ids) == 0:
                continue
            lr = cfg.initial_lr - (cfg.initial_lr - cfg.final_lr) * done / total
            loss, n = _sgd_document(doc_vectors[d], ids, w_in, w_out, sampler, cfg, rng,
                                    lr, update_words=True)
            epoch_loss += loss
            epoch_n += n
            done += n
        losses.append(float(epoch_loss) / max(1, epoch_n))
    return PvModel(words, freq, doc_vectors, w_in, w_out, noise, cfg, losses)


def infer_vector(tokens: Sequence[str], model: PvModel, steps: int | None = None) -> np.ndarray:
    """Fit a vector for an unseen document with every word vector frozen.

    The starting point and noise draws are seeded from the model seed and the
    token string, so the same tokens always give the same vector.
    """
    cfg = model.config
    steps = cfg.infer_steps if steps is None else steps
    if steps < 1:
        raise ValueError("steps must be positive")
    ids = model.ids(tokens)
    if len(ids) == 0:
        return np.zeros(cfg.dim)
    key = zlib.crc32(" ".join(tokens).encode("utf-8"))
    rng = stream(cfg.seed, f"pv.infer.{key}")
    scale = 0.5 / cfg.dim
    vec = rng.uniform(-scale, scale, size=cfg.dim)
    for step in range(steps):
        lr = cfg.initial_lr - (cfg.initial_lr - cfg.final_lr) * step / steps
        _sgd_document(vec, ids, model.word_in_vectors, model.word_out_vectors,
                      model._sampler, cfg, rng, lr, update_words=False)
    return vec


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(a @ b / (na * nb))

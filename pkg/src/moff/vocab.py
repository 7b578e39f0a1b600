"""Deterministic vocabulary and fixed-length index encoding."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

PAD = 0
UNK = 1
_HEADER = "vocab v1"


@dataclass(frozen=True)
class Vocabulary:
    index_to_token: tuple[str, ...]
    frequencies: tuple[int, ...]
    max_len: int | None = None
    token_to_index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # real tokens start after the two reserved slots
        mapping = {tok: i + 2 for i, tok in enumerate(self.index_to_token)}
        if len(mapping) != len(self.index_to_token):
            raise ValueError("duplicate tokens in vocabulary")
        object.__setattr__(self, "token_to_index", mapping)

    pad_index = PAD
    unk_index = UNK

    @property
    def size(self) -> int:
        return len(self.index_to_token) + 2

    def __len__(self) -> int:
        return self.size

    def index(self, token: str) -> int:
        return self.token_to_index.get(token, UNK)

    def token(self, index: int) -> str:
        if index == PAD:
            return "<pad>"
        if index == UNK:
            return "<unk>"
        return self.index_to_token[index - 2]

    def with_max_len(self, max_len: int) -> Vocabulary:
        return Vocabulary(self.index_to_token, self.frequencies, max_len)

    def save(self, path: str | Path) -> None:
        lines = [f"{_HEADER} {self.size} {self.max_len if self.max_len is not None else 0}"]
        for i, (tok, freq) in enumerate(zip(self.index_to_token, self.frequencies)):
            lines.append(f"{i + 2}\t{tok}\t{freq}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> Vocabulary:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or not lines[0].startswith(_HEADER + " "):
            raise ValueError(f"{path}: not a vocabulary file")
        size, max_len = (int(x) for x in lines[0][len(_HEADER) + 1:].split())
        tokens, freqs = [], []
        for lineno, line in enumerate(lines[1:], start=2):
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 3 columns")
            idx, tok, freq = int(parts[0]), parts[1], int(parts[2])
            if idx != len(tokens) + 2:
                raise ValueError(f"{path}: line {lineno}: index {idx} out of order")
            tokens.append(tok)
            freqs.append(freq)
        vocab = cls(tuple(tokens), tuple(freqs), max_len or None)
        if vocab.size != size:
            raise ValueError(f"{path}: header size {size} != {vocab.size}")
        return vocab


@dataclass(frozen=True)
class EncodedSequence:
    indices: np.ndarray
    true_length: int


def build_vocab(corpus: Sequence[Sequence[str]], min_count: int = 1) -> Vocabulary:
    """Index every token seen at least `min_count` times.

    Tokens are ordered by descending frequency, ties broken lexicographically.
    """
    if not corpus:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    if min_count < 1:
        raise ValueError("min_count must be positive")
    counts = Counter(tok for doc in corpus for tok in doc)
    kept = sorted((tok for tok, n in counts.items() if n >= min_count),
                  key=lambda t: (-counts[t], t))
    if not kept:
        raise ValueError(f"no token occurs at least {min_count} times")
    return Vocabulary(tuple(kept), tuple(counts[t] for t in kept))


def default_max_len(corpus: Sequence[Sequence[str]]) -> int:
    """95th percentile of sequence lengths, rounded up, never below 8."""
    if not corpus:
        return 8
    p95 = float(np.percentile([len(doc) for doc in corpus], 95))
    return max(8, math.ceil(p95))


def encode_pad(tokens: Sequence[str], vocab: Vocabulary, max_len: int) -> EncodedSequence:
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    head = tokens[:max_len]
    indices = np.full(max_len, PAD, dtype=np.int64)
    indices[:len(head)] = [vocab.index(t) for t in head]
    return EncodedSequence(indices, len(head))


def encode_batch(docs: Sequence[Sequence[str]], vocab: Vocabulary,
                 max_len: int) -> tuple[np.ndarray, np.ndarray]:
    """Encode many documents into an (n, max_len) index matrix plus lengths."""
    encoded = [encode_pad(doc, vocab, max_len) for doc in docs]
    ids = np.stack([e.indices for e in encoded]) if encoded else np.zeros((0, max_len), np.int64)
    lengths = np.array([e.true_length for e in encoded], dtype=np.int64)
    return ids, lengths


def decode(seq: EncodedSequence, vocab: Vocabulary) -> list[str]:
    return [vocab.token(int(i)) for i in seq.indices[:seq.true_length]]

"""Labeled comment files, dataset statistics and the synthetic corpus."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from moff._rng import stream

OFF = "OFF"
NOT = "NOT"
LABELS = (NOT, OFF)

_ALIASES = {
    "off": OFF,
    "offensive": OFF,
    "not": NOT,
    "not offensive": NOT,
    "not_offensive": NOT,
}

# Class counts of the official Manglish (Task 2) training set.
REFERENCE_STATS = (1953, 2047, 4000)


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class DataRecord:
    id: str
    text: str
    label: str | None = None

    def __post_init__(self):
        if not self.id:
            raise DataError("record id must be non-empty")
        if self.label is not None and self.label not in LABELS:
            raise DataError(f"invalid label {self.label!r}")


@dataclass(frozen=True)
class DatasetStats:
    count_off: int
    count_not: int
    total: int

    def as_tuple(self) -> tuple[int, int, int]:
        return self.count_off, self.count_not, self.total


def normalize_label(raw: str) -> str:
    """Map a label alias (case-insensitive) to OFF or NOT."""
    key = " ".join(raw.strip().lower().split())
    try:
        return _ALIASES[key]
    except KeyError:
        raise DataError(f"unknown label {raw!r}") from None


def _is_header(parts: list[str]) -> bool:
    return [p.strip().lower() for p in parts[:2]] == ["id", "text"]


def parse_tsv(lines: Iterable[str], source: str = "<input>") -> list[DataRecord]:
    records = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if lineno == 1 and _is_header(parts):
            continue
        if len(parts) not in (2, 3):
            raise DataError(f"{source}: line {lineno}: expected 2 or 3 tab-separated "
                            f"columns, found {len(parts)}")
        label = None
        if len(parts) == 3 and parts[2].strip():
            try:
                label = normalize_label(parts[2])
            except DataError as exc:
                raise DataError(f"{source}: line {lineno}: {exc}") from None
        if not parts[0].strip():
            raise DataError(f"{source}: line {lineno}: empty id")
        records.append(DataRecord(parts[0].strip(), parts[1], label))
    return records


def load_tsv(path: str | Path) -> list[DataRecord]:
    """Read an ``id<TAB>text[<TAB>label]`` file; a header line is optional."""
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        return parse_tsv(fh, str(path))


def save_tsv(records: Sequence[DataRecord], path: str | Path, header: bool = False) -> None:
    lines = ["id\ttext\tlabel"] if header else []
    for r in records:
        if "\t" in r.text or "\n" in r.text:
            raise DataError(f"record {r.id}: text contains a tab or newline")
        lines.append(f"{r.id}\t{r.text}" + (f"\t{r.label}" if r.label else ""))
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def stats(records: Sequence[DataRecord]) -> DatasetStats:
    n_off = n_not = 0
    for r in records:
        if r.label is None:
            raise DataError(f"record {r.id} is unlabeled")
        if r.label == OFF:
            n_off += 1
        else:
            n_not += 1
    return DatasetStats(n_off, n_not, n_off + n_not)


def check_reference_stats(s: DatasetStats) -> bool:
    """Compare against the official training split; warn on mismatch."""
    if s.as_tuple() == REFERENCE_STATS:
        return True
    if s.total == REFERENCE_STATS[2]:
        warnings.warn(f"4000-comment training set with class counts {s.as_tuple()[:2]}; "
                      f"the official split has OFF={REFERENCE_STATS[0]} NOT={REFERENCE_STATS[1]}",
                      stacklevel=2)
    return False


# -- predictions --------------------------------------------------------------

def write_predictions(rows: Iterable[tuple[str, str, float]], path: str | Path) -> None:
    """Write ``id<TAB>label<TAB>prob`` lines."""
    text = "".join(f"{rid}\t{label}\t{prob!r}\n" for rid, label, prob in rows)
    Path(path).write_text(text, encoding="utf-8")


def read_predictions(path: str | Path) -> list[tuple[str, str, float]]:
    rows = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise DataError(f"{path}: line {lineno}: expected id, label, prob")
        try:
            prob = float(parts[2])
        except ValueError:
            raise DataError(f"{path}: line {lineno}: bad probability {parts[2]!r}") from None
        rows.append((parts[0], normalize_label(parts[1]), prob))
    return rows


# -- synthetic corpus -----------------------------------------------------------

_ONSETS = "b d g k l m n p r s t v y".split()
_VOWELS = "a e i o u".split()
_KEYWORD_ONSETS = "ch j sh th zh".split()


def _pseudo_words(onsets: Sequence[str], n: int, syllables: int) -> list[str]:
    combos = itertools.product([o + v for o in onsets for v in _VOWELS], repeat=syllables)
    return ["".join(c) for c in itertools.islice(combos, n)]


NEUTRAL_LEXICON = tuple(_pseudo_words(_ONSETS, 200, 2))
KEYWORD_LEXICON = tuple(w + "x" for w in _pseudo_words(_KEYWORD_ONSETS, 10, 2))


def synth_corpus(seed: int, n_train: int = 500, n_test: int = 200
                 ) -> tuple[list[DataRecord], list[DataRecord]]:
    """Keyword-separable two-class corpus for desk-scale checks.

    Every comment holds 5-15 neutral words; OFF comments also hold 1-3
    keywords at random positions.  Each split is exactly half OFF (the
    extra record of an odd-sized split is NOT).
    """
    if n_train < 10 or n_test < 10:
        raise ValueError("split sizes must be at least 10")
    rng = stream(seed, "data.synth")

    def make(prefix: str, n: int) -> list[DataRecord]:
        labels = [OFF] * (n // 2) + [NOT] * (n - n // 2)
        order = rng.permutation(n)
        out = []
        for k, idx in enumerate(order):
            words = list(rng.choice(NEUTRAL_LEXICON, size=int(rng.integers(5, 16))))
            label = labels[idx]
            if label == OFF:
                for kw in rng.choice(KEYWORD_LEXICON, size=int(rng.integers(1, 4))):
                    words.insert(int(rng.integers(0, len(words) + 1)), str(kw))
            out.append(DataRecord(f"{prefix}-{k:05d}", " ".join(map(str, words)), label))
        return out

    return make("train", n_train), make("test", n_test)

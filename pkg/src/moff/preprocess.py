"""Comment cleaning and tokenization for romanized code-mixed text.

Rule order: URL / mention / hash removal, lowercasing, symbol stripping,
run collapsing, tokenization, numeric-token removal, stopword removal.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path
from typing import Iterable

URL_RE = re.compile(r"(?:https?://|www\.)\S*", re.IGNORECASE)
MENTION_RE = re.compile(r"@\w+")
# Everything that is not a word character or an apostrophe is a separator.
SYMBOL_RE = re.compile(r"[^\w']|_")
RUN_RE = re.compile(r"(.)\1{2,}")
_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'"})
_URL_PREFIXES = ("http", "www")


def _collapse_runs(token: str) -> str:
    return RUN_RE.sub(r"\1\1", token)


def _keep(token: str) -> bool:
    if not token:
        return False
    if token.startswith(_URL_PREFIXES):
        return False
    # purely numeric: no letter anywhere in the token
    return any(ch.isalpha() for ch in token)


def clean_text(raw: str) -> str:
    """Apply the cleaning rules to one comment and return a space-joined string.

    >>> clean_text("@user123 see https://t.co/abc #Mass Padam")
    'see mass padam'
    >>> clean_text("Pooooli aaaanu")
    'pooli aanu'
    """
    text = URL_RE.sub(" ", raw)
    text = MENTION_RE.sub(" ", text)
    text = text.replace("#", " ")
    text = text.lower().translate(_APOSTROPHES)
    text = SYMBOL_RE.sub(" ", text)
    tokens = []
    for tok in text.split():
        tok = _collapse_runs(tok.strip("'"))
        if _keep(tok):
            tokens.append(tok)
    return " ".join(tokens)


def tokenize(cleaned: str) -> list[str]:
    return cleaned.split()


def remove_stopwords(tokens: Iterable[str], stops: set[str] | frozenset[str]) -> list[str]:
    return [t for t in tokens if t not in stops]


def preprocess(raw: str, stops: set[str] | frozenset[str] = frozenset()) -> list[str]:
    return remove_stopwords(tokenize(clean_text(raw)), stops)


def parse_stopwords(lines: Iterable[str]) -> frozenset[str]:
    words = set()
    for line in lines:
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        words.add(word.lower())
    return frozenset(words)


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Read a stopword file (one word per line, ``#`` comments).

    With no path, the bundled 127-word English list is returned.
    """
    if path is None:
        text = resources.files("moff").joinpath("data/stopwords_en.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return parse_stopwords(text.splitlines())

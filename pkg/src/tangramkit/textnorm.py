"""Deterministic text normalization shared by every metric.

Pipeline order is fixed: lowercase, tokenize on whitespace and
punctuation, Porter-stem to a fixed point, drop stopwords.  The
stopword list ships with the package; its content hash is exposed so
metric reports can record exactly which list produced their numbers.
"""

from __future__ import annotations

import hashlib
import re
from importlib import resources

from .porter import stem

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# Part annotations may carry this sentinel for unidentifiable pieces; it
# is kept verbatim and never stopword-filtered.
UNKNOWN_TOKEN = "unknown"


def _load_stopwords() -> tuple[frozenset[str], str]:
    data = resources.files("tangramkit.data").joinpath("stopwords.txt").read_bytes()
    words = frozenset(line.strip() for line in data.decode("utf-8").splitlines() if line.strip())
    return words, hashlib.sha256(data).hexdigest()


STOPWORDS, STOPWORDS_SHA256 = _load_stopwords()


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric runs; punctuation and whitespace separate tokens."""
    return _TOKEN_RE.findall(text.lower())


def normalize(text: str) -> list[str]:
    """Lowercase, tokenize, stem, and stopword-filter a string."""
    out = []
    for token in tokenize(text):
        if token == UNKNOWN_TOKEN:
            out.append(token)
            continue
        stemmed = stem(token)
        if stemmed not in STOPWORDS:
            out.append(stemmed)
    return out


def vocab_normalize(text: str) -> list[str]:
    """Lowercase, tokenize, and stem WITHOUT stopword removal.

    Vocabulary-size statistics use this pipeline; divergence metrics use
    ``normalize``.  The two differ only in stopword filtering.
    """
    return [stem(token) for token in tokenize(text)]


def whitespace_length(text: str) -> int:
    """Count of maximal non-whitespace runs."""
    return len(text.split())

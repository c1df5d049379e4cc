"""Text cleanup rules, vocabulary construction, and bag-of-words vectors.

The tokenizer applies a fixed rule order so its behavior is testable rule
by rule:

1.  URL removal
2.  user-mention removal (configurable)
3.  whole-hashtag-token removal
4.  non-ASCII character removal
5.  punctuation replaced with whitespace
6.  number-token removal (whole tokens only, e.g. "25" but not "25people")
7.  lowercasing
8.  whitespace tokenization
9.  stopword removal
10. drop tokens shorter than the configured minimum

Stemming, lemmatization and n-grams are deliberately out of scope; every
text model downstream consumes unigram counts.
"""

from __future__ import annotations

import re
import string
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

_URL = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION = re.compile(r"@\w+")
_HASHTAG = re.compile(r"#\w+")
_PUNCT_TO_SPACE = str.maketrans({c: " " for c in string.punctuation})


@dataclass(frozen=True)
class PrepConfig:
    """Tokenizer knobs; stopwords must already be lowercase."""

    stopwords: frozenset[str] = frozenset()
    remove_mentions: bool = True
    min_token_len: int = 2

    def __post_init__(self) -> None:
        bad = [w for w in self.stopwords if w != w.lower()]
        if bad:
            raise ValueError(f"stopwords must be lowercase: {bad[:5]}")


def preprocess(text: str, config: PrepConfig = PrepConfig()) -> list[str]:
    """Tokenize ``text`` by the ten rules above, in that order."""
    s = _URL.sub(" ", text)
    if config.remove_mentions:
        s = _MENTION.sub(" ", s)
    s = _HASHTAG.sub(" ", s)
    s = s.encode("ascii", "ignore").decode("ascii")
    s = s.translate(_PUNCT_TO_SPACE)
    tokens = [t.lower() for t in s.split() if not t.isdigit()]
    return [
        t
        for t in tokens
        if t not in config.stopwords and len(t) >= config.min_token_len
    ]


def load_stopwords(path: str) -> frozenset[str]:
    """Read a stopword file: UTF-8, one token per line, ``#`` comments allowed."""
    words: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            token = line.split("#", 1)[0].strip()
            if token:
                words.add(token.lower())
    return frozenset(words)


@dataclass
class Vocabulary:
    """Bijective term/index maps with per-term document frequencies.

    Indices are contiguous from 0 and assigned in sorted-term order, so a
    vocabulary built from the same documents is always identical.
    """

    terms: list[str]
    index_of: dict[str, int]
    document_frequency: dict[str, int]

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index_of


def build_vocabulary(docs: Iterable[Sequence[str]], min_df: int = 1) -> Vocabulary:
    """Collect terms appearing in at least ``min_df`` distinct documents."""
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    df: Counter[str] = Counter()
    for doc in docs:
        df.update(set(doc))
    kept = sorted(t for t, c in df.items() if c >= min_df)
    return Vocabulary(
        terms=kept,
        index_of={t: i for i, t in enumerate(kept)},
        document_frequency={t: df[t] for t in kept},
    )


@dataclass(frozen=True)
class BowVector:
    """Sparse term-count vector: (index, count) pairs, indices strictly increasing."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prev = -1
        for idx, count in self.pairs:
            if idx <= prev:
                raise ValueError("indices must be strictly increasing")
            if count < 1:
                raise ValueError("counts must be >= 1")
            prev = idx

    @property
    def total(self) -> int:
        return sum(c for _, c in self.pairs)


def vectorize(tokens: Sequence[str], vocab: Vocabulary) -> BowVector:
    """Count in-vocabulary tokens; out-of-vocabulary tokens are ignored."""
    counts: Counter[int] = Counter()
    for t in tokens:
        idx = vocab.index_of.get(t)
        if idx is not None:
            counts[idx] += 1
    return BowVector(pairs=tuple(sorted(counts.items())))


def devectorize(vector: BowVector, vocab: Vocabulary) -> list[str]:
    """Reconstruct the in-vocabulary token multiset (index order)."""
    out: list[str] = []
    for idx, count in vector.pairs:
        out.extend([vocab.terms[idx]] * count)
    return out

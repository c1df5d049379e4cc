"""Lexicon-based five-class sentiment scoring, three-class collapse, daily rollups.

The scorer is a deliberately small baseline behind a stable interface:
aggregation downstream consumes only labels, so a stronger model can be
plugged in without touching anything else.  Scoring runs on raw text so
emoticons survive; negation flips a hit's polarity when a negation token
appears within the configured window of preceding tokens.
"""

from __future__ import annotations

import csv
import string
from dataclasses import dataclass
from datetime import date
from typing import Mapping, Sequence

from .series import DailySeries

LABELS5 = ("very_negative", "negative", "neutral", "positive", "very_positive")
LABELS3 = ("negative", "neutral", "positive")

_COLLAPSE = {
    "very_negative": "negative",
    "negative": "negative",
    "neutral": "neutral",
    "positive": "positive",
    "very_positive": "positive",
}

_STRIP_CHARS = string.punctuation


@dataclass(frozen=True)
class ScoredSentiment:
    label: str  # one of LABELS5
    score: float  # mean polarity contribution in [-1, 1]


@dataclass(frozen=True)
class SentimentLexicon:
    polarity: Mapping[str, float]  # token (or emoticon) -> polarity in [-1, 1]
    negations: frozenset[str]

    def __post_init__(self) -> None:
        bad = {t: p for t, p in self.polarity.items() if p < -1 or p > 1}
        if bad:
            raise ValueError(f"polarities must lie in [-1, 1]: {bad}")


@dataclass(frozen=True)
class ScorerConfig:
    negation_window: int = 3
    strong_threshold: float = 0.5
    weak_threshold: float = 0.05


def load_lexicon(path: str) -> SentimentLexicon:
    """Tab-separated ``token<TAB>polarity``; negation tokens carry the tag ``NEG``."""
    polarity: dict[str, float] = {}
    negations: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'token<TAB>polarity'")
            token, value = parts[0], parts[1].strip()
            if value == "NEG":
                negations.add(token)
            else:
                polarity[token] = float(value)
    return SentimentLexicon(polarity=polarity, negations=frozenset(negations))


def _label_for(score: float, config: ScorerConfig) -> str:
    if score >= config.strong_threshold:
        return "very_positive"
    if score >= config.weak_threshold:
        return "positive"
    if score <= -config.strong_threshold:
        return "very_negative"
    if score <= -config.weak_threshold:
        return "negative"
    return "neutral"


def score_sentiment(
    text: str,
    lexicon: SentimentLexicon,
    config: ScorerConfig = ScorerConfig(),
) -> ScoredSentiment:
    """Mean polarity of lexicon hits, negation-flipped; neutral when no hits.

    Tokens are whitespace-split; each is looked up verbatim first (so
    emoticons like ``:(`` match) and then in punctuation-stripped lowercase
    form.
    """
    raw_tokens = text.split()
    normalized = [t.strip(_STRIP_CHARS).lower() for t in raw_tokens]
    contributions: list[float] = []
    for i, raw in enumerate(raw_tokens):
        hit = lexicon.polarity.get(raw)
        if hit is None:
            hit = lexicon.polarity.get(normalized[i])
        if hit is None:
            continue
        lo = max(0, i - config.negation_window)
        negated = any(
            raw_tokens[j] in lexicon.negations or normalized[j] in lexicon.negations
            for j in range(lo, i)
        )
        contributions.append(-hit if negated else hit)
    score = sum(contributions) / len(contributions) if contributions else 0.0
    return ScoredSentiment(label=_label_for(score, config), score=score)


def collapse_sentiment(label5: str) -> str:
    """Five-to-three collapse: both positives merge, both negatives merge."""
    try:
        return _COLLAPSE[label5]
    except KeyError:
        raise ValueError(f"unknown sentiment label: {label5!r}") from None


def daily_sentiment_distribution(
    labels3: Sequence[str],
    buckets: dict[date, list[int]],
    event: str,
) -> dict[str, DailySeries]:
    """Percent of each day's tweets per collapsed label; zeros on empty days."""
    days = sorted(buckets)
    per_label: dict[str, list[float]] = {lbl: [] for lbl in LABELS3}
    for d in days:
        idxs = buckets[d]
        n = len(idxs)
        counts = {lbl: 0 for lbl in LABELS3}
        for i in idxs:
            counts[labels3[i]] += 1
        for lbl in LABELS3:
            per_label[lbl].append(100.0 * counts[lbl] / n if n else 0.0)
    return {
        lbl: DailySeries(
            name=f"sentiment_{lbl}", event=event, values=tuple(vals), unit="percent"
        )
        for lbl, vals in per_label.items()
    }


def write_sentiment(
    records_ids: Sequence[str],
    scored: Sequence[ScoredSentiment],
    path: str,
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["tweet_id", "label5", "score", "label3"])
        for rid, s in zip(records_ids, scored):
            writer.writerow([rid, s.label, repr(s.score), collapse_sentiment(s.label)])


def read_sentiment_labels3(path: str) -> list[str]:
    out: list[str] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            out.append(row["label3"])
    return out

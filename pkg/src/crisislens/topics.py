"""Per-day topic models: collapsed Gibbs sampling over token/topic assignments.

One model is fit per calendar-day bucket.  The sampler keeps the usual
count statistics (topic-word, doc-topic, per-topic totals) and resamples
every token's topic each sweep from the conditional

    p(z = k) proportional to (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta)

with the token's own assignment excluded.  Point estimates phi and theta
come from the final counts with the same smoothing.  The inner loop is
plain Python over lists, which at day-bucket scale outruns per-token numpy
dispatch by a wide margin.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .textprep import Vocabulary


@dataclass(frozen=True)
class LdaConfig:
    topics: int = 10
    alpha: Optional[float] = None  # None -> 50 / topics
    beta: float = 0.01
    iterations: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.topics < 2:
            raise ValueError("topics must be >= 2")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    def resolved_alpha(self) -> float:
        return self.alpha if self.alpha is not None else 50.0 / self.topics


@dataclass(frozen=True)
class TopicTermRow:
    term: str
    p_topic: float  # phi value
    topic_count: int  # occurrences assigned to the topic
    day_count: int  # occurrences across the whole day


class GibbsSampler:
    """Mutable sampler state; drive with :meth:`sweep`, snapshot with :meth:`model`."""

    def __init__(
        self,
        docs: Sequence[Sequence[str]],
        config: LdaConfig,
        vocab: Vocabulary,
    ) -> None:
        if len(vocab) == 0:
            raise ValueError("vocabulary is empty")
        encoded = [
            [vocab.index_of[t] for t in doc if t in vocab.index_of] for doc in docs
        ]
        if not any(encoded):
            raise ValueError("no non-empty documents to model")
        self.config = config
        self.vocab = vocab
        self.docs = encoded
        k = config.topics
        v = len(vocab)
        self.n_kw = [[0] * v for _ in range(k)]
        self.n_dk = [[0] * k for _ in range(len(encoded))]
        self.n_k = [0] * k
        self.assignments: list[list[int]] = []
        self._rng = random.Random(config.seed)
        for d, doc in enumerate(encoded):
            zs = []
            for w in doc:
                z = self._rng.randrange(k)
                zs.append(z)
                self.n_kw[z][w] += 1
                self.n_dk[d][z] += 1
                self.n_k[z] += 1
            self.assignments.append(zs)
        self.total_tokens = sum(len(doc) for doc in encoded)

    def sweep(self) -> None:
        """One full Gibbs pass over every token."""
        k_total = self.config.topics
        alpha = self.config.resolved_alpha()
        beta = self.config.beta
        vbeta = len(self.vocab) * beta
        n_kw = self.n_kw
        n_k = self.n_k
        rand = self._rng.random
        for d, doc in enumerate(self.docs):
            ndk = self.n_dk[d]
            zs = self.assignments[d]
            for i, w in enumerate(doc):
                z = zs[i]
                n_kw[z][w] -= 1
                ndk[z] -= 1
                n_k[z] -= 1
                total = 0.0
                cumulative = []
                for kk in range(k_total):
                    total += (ndk[kk] + alpha) * (n_kw[kk][w] + beta) / (n_k[kk] + vbeta)
                    cumulative.append(total)
                u = rand() * total
                z = 0
                while cumulative[z] < u:
                    z += 1
                zs[i] = z
                n_kw[z][w] += 1
                ndk[z] += 1
                n_k[z] += 1

    def model(self) -> "TopicModel":
        return TopicModel(
            config=self.config,
            vocab=self.vocab,
            assignments=[list(zs) for zs in self.assignments],
            n_kw=[list(row) for row in self.n_kw],
            n_dk=[list(row) for row in self.n_dk],
            n_k=list(self.n_k),
        )


@dataclass
class TopicModel:
    """Final sampler counts plus smoothed phi/theta point estimates."""

    config: LdaConfig
    vocab: Vocabulary
    assignments: list[list[int]]
    n_kw: list[list[int]]
    n_dk: list[list[int]]
    n_k: list[int]

    @property
    def n_topics(self) -> int:
        return self.config.topics

    def phi(self) -> np.ndarray:
        beta = self.config.beta
        counts = np.asarray(self.n_kw, dtype=np.float64)
        totals = np.asarray(self.n_k, dtype=np.float64)
        return (counts + beta) / (totals + len(self.vocab) * beta)[:, None]

    def theta(self) -> np.ndarray:
        alpha = self.config.resolved_alpha()
        counts = np.asarray(self.n_dk, dtype=np.float64)
        lengths = counts.sum(axis=1)
        return (counts + alpha) / (lengths + self.n_topics * alpha)[:, None]


def fit_lda(
    docs: Sequence[Sequence[str]],
    config: LdaConfig,
    vocab: Vocabulary,
) -> TopicModel:
    """Seeded initialization plus ``config.iterations`` full sweeps."""
    sampler = GibbsSampler(docs, config, vocab)
    for _ in range(config.iterations):
        sampler.sweep()
    return sampler.model()


def top_terms(
    model: TopicModel,
    topic: int,
    day_counts: Mapping[str, int],
    n: int = 30,
) -> list[TopicTermRow]:
    """Terms of one topic ranked by phi, descending; ties break lexicographically."""
    if not 0 <= topic < model.n_topics:
        raise ValueError(f"topic {topic} out of range")
    phi_row = model.phi()[topic]
    ranked = sorted(
        range(len(model.vocab)),
        key=lambda w: (-phi_row[w], model.vocab.terms[w]),
    )
    rows: list[TopicTermRow] = []
    for w in ranked[:n]:
        term = model.vocab.terms[w]
        rows.append(
            TopicTermRow(
                term=term,
                p_topic=float(phi_row[w]),
                topic_count=model.n_kw[topic][w],
                day_count=int(day_counts.get(term, 0)),
            )
        )
    return rows


def prevalent_topic(model: TopicModel) -> int:
    """Topic with the most assigned tokens; ties go to the lowest index."""
    best = 0
    for k in range(1, model.n_topics):
        if model.n_k[k] > model.n_k[best]:
            best = k
    return best


def export_day_topics(
    model: TopicModel,
    day_counts: Mapping[str, int],
    n: int = 30,
) -> dict:
    """JSON-ready day summary: every topic's top terms, prevalent topic flagged."""
    prevalent = prevalent_topic(model)
    topics = []
    for k in range(model.n_topics):
        rows = top_terms(model, k, day_counts, n=n)
        topics.append(
            {
                "topic": k,
                "prevalent": k == prevalent,
                "token_count": model.n_k[k],
                "terms": [
                    {
                        "term": r.term,
                        "p_topic": r.p_topic,
                        "topic_count": r.topic_count,
                        "day_count": r.day_count,
                    }
                    for r in rows
                ],
            }
        )
    return {"n_topics": model.n_topics, "prevalent_topic": prevalent, "topics": topics}

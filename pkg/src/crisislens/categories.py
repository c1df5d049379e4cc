"""Ten-class humanitarian-category classifier and daily category distributions.

The category set is fixed: nine informative classes plus ``not_related``.
A trained model bundles the forest together with the vocabulary and the
preprocessing configuration used at training time, so classification always
reproduces the training-time text treatment.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from datetime import date
from typing import Sequence

from .corpus import Corpus
from .learn import (
    ForestModel,
    ForestParams,
    LabeledDataset,
    bow_to_dense,
    predict,
    train_random_forest,
)
from .series import DailySeries
from .textprep import PrepConfig, Vocabulary, build_vocabulary, preprocess, vectorize

logger = logging.getLogger(__name__)

TAXONOMY = (
    "injured_or_dead",
    "infrastructure_damage",
    "caution_advice",
    "donation_volunteering",
    "affected_individual",
    "missing_found",
    "sympathy_support",
    "personal",
    "other_useful",
    "not_related",
)

RELEVANT_CATEGORIES = tuple(c for c in TAXONOMY if c != "not_related")

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class CategoryAssignment:
    tweet_id: str
    category: str
    confidence: float


@dataclass
class TaxonomyModel:
    """Forest plus the vocabulary and prep settings it was trained with."""

    forest: ForestModel
    vocabulary: Vocabulary
    prep: PrepConfig

    def save(self, path: str) -> None:
        obj = {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "taxonomy_model",
            "forest": json.loads(self.forest.to_json()),
            "vocabulary": self.vocabulary.terms,
            "prep": {
                "stopwords": sorted(self.prep.stopwords),
                "remove_mentions": self.prep.remove_mentions,
                "min_token_len": self.prep.min_token_len,
            },
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True, separators=(",", ":"))
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "TaxonomyModel":
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        if obj.get("format_version") != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format: {obj.get('format_version')}")
        terms = list(obj["vocabulary"])
        vocab = Vocabulary(
            terms=terms,
            index_of={t: i for i, t in enumerate(terms)},
            document_frequency={},
        )
        prep = PrepConfig(
            stopwords=frozenset(obj["prep"]["stopwords"]),
            remove_mentions=obj["prep"]["remove_mentions"],
            min_token_len=obj["prep"]["min_token_len"],
        )
        return cls(
            forest=ForestModel.from_json(json.dumps(obj["forest"])),
            vocabulary=vocab,
            prep=prep,
        )


def load_labeled_texts(path: str) -> tuple[list[str], list[str]]:
    """Read training data: delimited text with ``text`` and ``label`` columns."""
    texts: list[str] = []
    labels: list[str] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"text", "label"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected columns 'text' and 'label'")
        for row in reader:
            texts.append(row["text"])
            labels.append(row["label"])
    return texts, labels


def train_taxonomy_model(
    texts: Sequence[str],
    labels: Sequence[str],
    params: ForestParams,
    prep: PrepConfig,
    min_df: int = 1,
) -> TaxonomyModel:
    """Preprocess, build the vocabulary, and fit the forest on training texts.

    Labels must be taxonomy names.  A category absent from the training data
    only triggers a warning; an empty training set is an error.
    """
    if not texts:
        raise ValueError("empty training set")
    if len(texts) != len(labels):
        raise ValueError("texts and labels must have equal length")
    unknown = sorted(set(labels) - set(TAXONOMY))
    if unknown:
        raise ValueError(f"labels outside the taxonomy: {unknown}")
    missing = [c for c in TAXONOMY if c not in set(labels)]
    if missing:
        logger.warning("training data has no examples for: %s", ", ".join(missing))
    docs = [preprocess(t, prep) for t in texts]
    vocab = build_vocabulary(docs, min_df=min_df)
    vectors = [vectorize(doc, vocab) for doc in docs]
    label_ids = [TAXONOMY.index(lbl) for lbl in labels]
    data = LabeledDataset.from_bow(vectors, label_ids, TAXONOMY, len(vocab))
    forest = train_random_forest(data, params)
    return TaxonomyModel(forest=forest, vocabulary=vocab, prep=prep)


def classify_text(model: TaxonomyModel, text: str) -> tuple[str, float]:
    tokens = preprocess(text, model.prep)
    vec = vectorize(tokens, model.vocabulary)
    row = bow_to_dense(vec.pairs, model.forest.n_features)
    cls, conf = predict(model.forest, row)
    return TAXONOMY[cls], conf


def classify_corpus(model: TaxonomyModel, corpus: Corpus) -> list[CategoryAssignment]:
    """One assignment per record, in record order.

    Tweets whose tokens are all out of vocabulary still get classified: the
    all-zero vector routes through every tree deterministically.
    """
    out: list[CategoryAssignment] = []
    cache: dict[str, tuple[str, float]] = {}
    for rec in corpus.records:
        hit = cache.get(rec.text)
        if hit is None:
            hit = classify_text(model, rec.text)
            cache[rec.text] = hit
        out.append(CategoryAssignment(tweet_id=rec.id, category=hit[0], confidence=hit[1]))
    return out


def daily_category_distribution(
    assignments: Sequence[CategoryAssignment],
    buckets: dict[date, list[int]],
    event: str,
) -> dict[str, DailySeries]:
    """Percent of each day's tweets per category; zero rows for empty days."""
    days = sorted(buckets)
    per_cat: dict[str, list[float]] = {c: [] for c in TAXONOMY}
    for d in days:
        idxs = buckets[d]
        n = len(idxs)
        counts = {c: 0 for c in TAXONOMY}
        for i in idxs:
            counts[assignments[i].category] += 1
        for c in TAXONOMY:
            per_cat[c].append(100.0 * counts[c] / n if n else 0.0)
    return {
        c: DailySeries(
            name=f"category_{c}", event=event, values=tuple(vals), unit="percent"
        )
        for c, vals in per_cat.items()
    }


def relevance_rollup(
    assignments: Sequence[CategoryAssignment],
    buckets: dict[date, list[int]],
    event: str,
) -> DailySeries:
    """Per-day fraction of tweets in any informative category."""
    days = sorted(buckets)
    values: list[float] = []
    for d in days:
        idxs = buckets[d]
        if not idxs:
            values.append(0.0)
            continue
        relevant = sum(1 for i in idxs if assignments[i].category != "not_related")
        values.append(relevant / len(idxs))
    return DailySeries(
        name="relevant_fraction", event=event, values=tuple(values), unit="fraction"
    )


def write_assignments(assignments: Sequence[CategoryAssignment], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["tweet_id", "category", "confidence"])
        for a in assignments:
            writer.writerow([a.tweet_id, a.category, repr(a.confidence)])


def read_assignments(path: str) -> list[CategoryAssignment]:
    out: list[CategoryAssignment] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            out.append(
                CategoryAssignment(
                    tweet_id=row["tweet_id"],
                    category=row["category"],
                    confidence=float(row["confidence"]),
                )
            )
    return out

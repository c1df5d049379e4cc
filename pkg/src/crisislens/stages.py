"""Pipeline stages with file-based handoff.

Every stage reads its inputs from disk and writes inspectable intermediate
files, so stages rerun independently and ``all`` is nothing more than the
stages in order.  All outputs are byte-stable for a fixed config and seed.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from datetime import date
from typing import Optional

import numpy as np

from . import categories as cat
from . import entities as ent
from . import sentiment as sent
from .config import PipelineConfig, derive_seed
from .corpus import Corpus, bucket_by_day, corpus_stats, load_corpus, write_corpus
from .imagery import (
    DAMAGE_CLASSES,
    RELEVANCY_CLASSES,
    DedupConfig,
    calibrate_threshold,
    compute_phash,
    load_image,
    run_image_pipeline,
)
from .learn import ForestModel, ForestParams, LabeledDataset, train_random_forest
from .report import build_report, emit_charts, emit_tabular
from .series import DailySeries
from .textprep import PrepConfig, build_vocabulary, load_stopwords, preprocess
from .topics import LdaConfig, export_day_topics, fit_lda


def _ensure_dirs(cfg: PipelineConfig) -> None:
    os.makedirs(cfg.intermediate_dir(), exist_ok=True)
    os.makedirs(cfg.models_dir(), exist_ok=True)


def _corpus_path(cfg: PipelineConfig) -> str:
    return os.path.join(cfg.intermediate_dir(), "corpus.jsonl")


def _read_intermediate_corpus(cfg: PipelineConfig) -> Corpus:
    path = _corpus_path(cfg)
    if not os.path.isfile(path):
        raise ValueError("no ingested corpus found; run the ingest stage first")
    # Records already passed the window/keyword filters, so re-loading with
    # the same window reproduces the corpus exactly.
    return load_corpus(path, cfg.window)


def _prep_config(cfg: PipelineConfig) -> PrepConfig:
    stopwords = frozenset()
    stopword_path = cfg.input_path("stopwords")
    if stopword_path:
        stopwords = load_stopwords(stopword_path)
    return PrepConfig(
        stopwords=stopwords,
        remove_mentions=cfg.remove_mentions,
        min_token_len=cfg.min_token_len,
    )


def _forest_params(cfg: PipelineConfig, label: str) -> ForestParams:
    return ForestParams(
        n_trees=cfg.forest_trees,
        max_features=cfg.forest_max_features,
        min_leaf=cfg.forest_min_leaf,
        max_depth=cfg.forest_max_depth,
        seed=derive_seed(cfg.seed, label),
    )


def stage_ingest(cfg: PipelineConfig) -> None:
    _ensure_dirs(cfg)
    corpus = load_corpus(cfg.require_input("corpus"), cfg.window)
    write_corpus(corpus, _corpus_path(cfg))
    stats = corpus_stats(corpus)
    payload = {
        "event": cfg.window.name,
        "total": stats.total,
        "skipped": corpus.skipped_count,
        "image_tweets": stats.image_tweets,
        "per_day": {d.isoformat(): stats.per_day[d] for d in sorted(stats.per_day)},
        "image_tweets_per_day": {
            d.isoformat(): stats.image_tweets_per_day[d]
            for d in sorted(stats.image_tweets_per_day)
        },
        "mean_image_tweets_per_day": stats.mean_image_tweets_per_day,
    }
    with open(os.path.join(cfg.intermediate_dir(), "corpus_stats.json"), "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def stage_train_taxonomy(cfg: PipelineConfig) -> None:
    _ensure_dirs(cfg)
    texts, labels = cat.load_labeled_texts(cfg.require_input("taxonomy_labels"))
    model = cat.train_taxonomy_model(
        texts,
        labels,
        params=_forest_params(cfg, "taxonomy"),
        prep=_prep_config(cfg),
        min_df=cfg.min_df,
    )
    model.save(os.path.join(cfg.models_dir(), "taxonomy.json"))


def _load_image_labels(path: str) -> list[tuple[str, str]]:
    import csv

    rows: list[tuple[str, str]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"id", "label"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected columns 'id' and 'label'")
        for row in reader:
            rows.append((row["id"], row["label"]))
    return rows


def _train_image_model(
    cfg: PipelineConfig,
    labels_key: str,
    class_names: tuple[str, ...],
    seed_label: str,
    jobs: int,
) -> ForestModel:
    from .imagery import extract_image_features

    images_dir = cfg.require_input("images_dir")
    rows = _load_image_labels(cfg.require_input(labels_key))
    unknown = sorted({lbl for _, lbl in rows} - set(class_names))
    if unknown:
        raise ValueError(f"{labels_key}: labels outside {class_names}: {unknown}")

    def featurize(image_id: str) -> np.ndarray:
        return extract_image_features(load_image(os.path.join(images_dir, image_id)))

    ids = [image_id for image_id, _ in rows]
    features = list(_ordered_map(featurize, ids, jobs))
    data = LabeledDataset(
        features=np.stack(features),
        labels=np.array([class_names.index(lbl) for _, lbl in rows]),
        class_names=class_names,
    )
    return train_random_forest(data, _forest_params(cfg, seed_label))


def stage_train_relevancy(cfg: PipelineConfig, jobs: int = 1) -> None:
    _ensure_dirs(cfg)
    model = _train_image_model(cfg, "relevancy_labels", RELEVANCY_CLASSES, "relevancy", jobs)
    model.save(os.path.join(cfg.models_dir(), "relevancy.json"))


def stage_train_damage(cfg: PipelineConfig, jobs: int = 1) -> None:
    _ensure_dirs(cfg)
    model = _train_image_model(cfg, "damage_labels", DAMAGE_CLASSES, "damage", jobs)
    model.save(os.path.join(cfg.models_dir(), "damage.json"))


def stage_classify(cfg: PipelineConfig) -> None:
    corpus = _read_intermediate_corpus(cfg)
    model_path = os.path.join(cfg.models_dir(), "taxonomy.json")
    if not os.path.isfile(model_path):
        raise ValueError("no taxonomy model found; run 'train taxonomy' first")
    model = cat.TaxonomyModel.load(model_path)
    assignments = cat.classify_corpus(model, corpus)
    cat.write_assignments(
        assignments, os.path.join(cfg.intermediate_dir(), "assignments.csv")
    )


def stage_sentiment(cfg: PipelineConfig) -> None:
    corpus = _read_intermediate_corpus(cfg)
    lexicon = sent.load_lexicon(cfg.require_input("lexicon"))
    scorer = sent.ScorerConfig(negation_window=cfg.negation_window)
    scored = [sent.score_sentiment(rec.text, lexicon, scorer) for rec in corpus.records]
    sent.write_sentiment(
        [rec.id for rec in corpus.records],
        scored,
        os.path.join(cfg.intermediate_dir(), "sentiment.csv"),
    )


def stage_topics(cfg: PipelineConfig) -> None:
    corpus = _read_intermediate_corpus(cfg)
    prep = _prep_config(cfg)
    buckets = bucket_by_day(corpus)
    out_dir = os.path.join(cfg.intermediate_dir(), "topics")
    os.makedirs(out_dir, exist_ok=True)
    for day in sorted(buckets):
        docs = [preprocess(corpus.records[i].text, prep) for i in buckets[day]]
        docs = [d for d in docs if d]
        if not docs:
            continue
        vocab = build_vocabulary(docs, min_df=1)
        config = LdaConfig(
            topics=cfg.lda_topics,
            alpha=cfg.lda_alpha,
            beta=cfg.lda_beta,
            iterations=cfg.lda_iterations,
            seed=derive_seed(cfg.seed, f"lda:{day.isoformat()}"),
        )
        model = fit_lda(docs, config, vocab)
        day_counts = Counter(t for doc in docs for t in doc)
        payload = export_day_topics(model, day_counts, n=cfg.lda_top_terms)
        payload["day"] = day.isoformat()
        with open(os.path.join(out_dir, f"{day.isoformat()}.json"), "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")


def stage_entities(cfg: PipelineConfig) -> None:
    corpus = _read_intermediate_corpus(cfg)
    resources = ent.load_gazetteers(
        persons=cfg.input_path("gazetteer_persons"),
        organizations=cfg.input_path("gazetteer_organizations"),
        locations=cfg.input_path("gazetteer_locations"),
    )
    mentions: list[ent.EntityMention] = []
    for rec in corpus.records:
        mentions.extend(ent.extract_entities(rec.text, resources, rec.id))
    curation_path = cfg.input_path("curation")
    if curation_path:
        rules = ent.load_curation(curation_path)
        mentions = ent.apply_curation(mentions, rules)
    tables = ent.aggregate_topk(mentions, corpus, k=cfg.entity_topk)
    ent.write_tables(tables, os.path.join(cfg.intermediate_dir(), "entities.json"))


def _ordered_map(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _arrival_images(corpus: Corpus) -> list[tuple[str, date]]:
    """Distinct image ids in arrival order, tagged with first-reference day."""
    seen: set[str] = set()
    out: list[tuple[str, date]] = []
    for rec in corpus.records:
        for ref in rec.image_refs:
            if ref not in seen:
                seen.add(ref)
                out.append((ref, rec.day()))
    return out


def stage_images(cfg: PipelineConfig, jobs: int = 1) -> None:
    corpus = _read_intermediate_corpus(cfg)
    images_dir = cfg.require_input("images_dir")
    relevancy_path = os.path.join(cfg.models_dir(), "relevancy.json")
    damage_path = os.path.join(cfg.models_dir(), "damage.json")
    for path, stage in ((relevancy_path, "relevancy"), (damage_path, "damage")):
        if not os.path.isfile(path):
            raise ValueError(f"no {stage} model found; run 'train {stage}' first")
    relevancy_model = ForestModel.load(relevancy_path)
    damage_model = ForestModel.load(damage_path)

    tau = cfg.dedup_tau
    roc_payload: Optional[dict] = None
    pairs_path = cfg.input_path("calibration_pairs")
    if cfg.calibrate_tau:
        if not pairs_path:
            raise ValueError("calibrate_tau is set but no calibration_pairs input given")
        tau, curve = _calibrate_from_pairs(pairs_path, images_dir)
        roc_payload = {
            "tau": tau,
            "curve": [
                {
                    "tau": pt.tau,
                    "tpr": pt.tpr,
                    "fpr": pt.fpr,
                    "precision": pt.precision,
                    "recall": pt.recall,
                }
                for pt in curve
            ],
        }

    def load_or_none(image_id: str):
        path = os.path.join(images_dir, image_id)
        try:
            pixels = load_image(path)
        except (OSError, ValueError):
            return None
        # too small to hash: treat like an undecodable file
        if pixels.shape[0] < 8 or pixels.shape[1] < 8:
            return None
        return pixels

    arrivals = _arrival_images(corpus)
    pixel_list = _ordered_map(lambda item: load_or_none(item[0]), arrivals, jobs)
    items = [
        (image_id, day, pixels)
        for (image_id, day), pixels in zip(arrivals, pixel_list)
    ]
    result = run_image_pipeline(
        items,
        relevancy_model,
        damage_model,
        DedupConfig(tau=tau),
        cfg.window.days(),
        cfg.window.name,
    )

    inter = cfg.intermediate_dir()
    with open(os.path.join(inter, "image_verdicts.csv"), "w", newline="") as fh:
        fh.write("image_id,missing,relevant,duplicate_of,damage\n")
        for v in result.verdicts:
            fh.write(
                f"{v.image_id},{int(v.missing)},{int(v.relevant)},"
                f"{v.duplicate_of or ''},{v.damage or ''}\n"
            )
    days = cfg.window.days()
    stats = {
        "tau": tau,
        "relevant_ratio": list(result.relevant_ratio.values),
        "unique_ratio": list(result.unique_ratio.values),
        "damage_ratio": list(result.damage_ratio.values),
        "damage_breakdown": {
            name: list(series.values)
            for name, series in result.damage_breakdown.items()
        },
        "missing_per_day": {
            d.isoformat(): result.missing_per_day.get(d, 0) for d in days
        },
        "missing_total": result.missing_total,
    }
    if roc_payload is not None:
        stats["roc"] = roc_payload
    with open(os.path.join(inter, "image_stats.json"), "w") as fh:
        json.dump(stats, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _calibrate_from_pairs(pairs_path: str, images_dir: str) -> tuple[int, list]:
    import csv

    hashes: dict[str, int] = {}

    def hash_of(image_id: str) -> int:
        if image_id not in hashes:
            hashes[image_id] = compute_phash(
                load_image(os.path.join(images_dir, image_id))
            )
        return hashes[image_id]

    pairs: list[tuple[int, int, bool]] = []
    with open(pairs_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        expected = {"idA", "idB", "is_duplicate"}
        if reader.fieldnames is None or not expected <= set(reader.fieldnames):
            raise ValueError(f"{pairs_path}: expected columns idA,idB,is_duplicate")
        for row in reader:
            pairs.append(
                (
                    hash_of(row["idA"]),
                    hash_of(row["idB"]),
                    row["is_duplicate"].strip() in ("1", "true", "True"),
                )
            )
    return calibrate_threshold(pairs)


def stage_report(cfg: PipelineConfig) -> None:
    inter = cfg.intermediate_dir()
    stats_path = os.path.join(inter, "corpus_stats.json")
    if not os.path.isfile(stats_path):
        raise ValueError("no corpus stats found; run the ingest stage first")
    with open(stats_path) as fh:
        cstats = json.load(fh)
    corpus = _read_intermediate_corpus(cfg)
    buckets = bucket_by_day(corpus)
    days = cfg.window.days()
    event = cfg.window.name

    tweet_counts = DailySeries(
        name="tweets_total",
        event=event,
        values=tuple(float(cstats["per_day"][d.isoformat()]) for d in days),
        unit="count",
    )
    image_counts = DailySeries(
        name="image_tweets",
        event=event,
        values=tuple(float(cstats["image_tweets_per_day"][d.isoformat()]) for d in days),
        unit="count",
    )

    assignments_path = os.path.join(inter, "assignments.csv")
    if not os.path.isfile(assignments_path):
        raise ValueError("no category assignments found; run the classify stage first")
    assignments = cat.read_assignments(assignments_path)
    if len(assignments) != corpus.total:
        raise ValueError("assignments do not cover the ingested corpus")
    category_dist = cat.daily_category_distribution(assignments, buckets, event)
    relevance = cat.relevance_rollup(assignments, buckets, event)

    sentiment_path = os.path.join(inter, "sentiment.csv")
    if not os.path.isfile(sentiment_path):
        raise ValueError("no sentiment scores found; run the sentiment stage first")
    labels3 = sent.read_sentiment_labels3(sentiment_path)
    if len(labels3) != corpus.total:
        raise ValueError("sentiment scores do not cover the ingested corpus")
    sentiment_dist = sent.daily_sentiment_distribution(labels3, buckets, event)

    image_stats_path = os.path.join(inter, "image_stats.json")
    if not os.path.isfile(image_stats_path):
        raise ValueError("no image statistics found; run the images stage first")
    with open(image_stats_path) as fh:
        istats = json.load(fh)

    def fraction_series(name: str, values) -> DailySeries:
        return DailySeries(
            name=name, event=event, values=tuple(float(v) for v in values), unit="fraction"
        )

    report = build_report(
        event,
        days,
        tweet_counts=tweet_counts,
        image_counts=image_counts,
        sentiment=sentiment_dist,
        categories=category_dist,
        relevance=relevance,
        image_relevant_ratio=fraction_series(
            "image_relevant_ratio", istats["relevant_ratio"]
        ),
        image_unique_ratio=fraction_series("image_unique_ratio", istats["unique_ratio"]),
        image_damage_ratio=fraction_series("image_damage_ratio", istats["damage_ratio"]),
        damage_breakdown={
            name: fraction_series(f"damage_{name}", values)
            for name, values in istats["damage_breakdown"].items()
        },
        seed=cfg.seed,
        config_digest=cfg.digest,
    )
    emit_tabular(report, cfg.out_dir)
    emit_charts(report, cfg.out_dir)


def stage_all(cfg: PipelineConfig, jobs: int = 1) -> None:
    stage_ingest(cfg)
    stage_train_taxonomy(cfg)
    stage_train_relevancy(cfg, jobs)
    stage_train_damage(cfg, jobs)
    stage_classify(cfg)
    stage_sentiment(cfg)
    stage_topics(cfg)
    stage_entities(cfg)
    stage_images(cfg, jobs)
    stage_report(cfg)

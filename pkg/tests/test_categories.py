import random
from datetime import date

import pytest

from crisislens.categories import (
    TAXONOMY,
    TaxonomyModel,
    classify_corpus,
    classify_text,
    daily_category_distribution,
    load_labeled_texts,
    read_assignments,
    relevance_rollup,
    train_taxonomy_model,
    write_assignments,
    CategoryAssignment,
)
from crisislens.learn import ForestParams
from crisislens.textprep import PrepConfig

from conftest import make_corpus, make_record, utc

MARKERS = {
    "injured_or_dead": "casualties",
    "infrastructure_damage": "collapsed",
    "caution_advice": "evacuate",
    "donation_volunteering": "donate",
    "affected_individual": "stranded",
    "missing_found": "whereabouts",
    "sympathy_support": "prayers",
    "personal": "basement",
    "other_useful": "detour",
    "not_related": "giveaway",
}

FILLERS = ["storm", "water", "city", "night", "people", "roads"]


def planted_texts(n_per_class: int, seed: int) -> tuple[list[str], list[str]]:
    rng = random.Random(seed)
    texts, labels = [], []
    for category in TAXONOMY:
        for _ in range(n_per_class):
            tokens = [MARKERS[category]]
            tokens += [rng.choice(FILLERS) for _ in range(rng.randrange(2, 5))]
            rng.shuffle(tokens)
            texts.append(" ".join(tokens))
            labels.append(category)
    return texts, labels


@pytest.fixture(scope="module")
def planted_model() -> TaxonomyModel:
    texts, labels = planted_texts(20, seed=71)
    return train_taxonomy_model(
        texts, labels, params=ForestParams(n_trees=15, seed=4), prep=PrepConfig()
    )


class TestTraining:
    def test_planted_markers_classify_held_out_texts(self, planted_model):
        held_out, labels = planted_texts(5, seed=72)
        hits = sum(
            classify_text(planted_model, text)[0] == label
            for text, label in zip(held_out, labels)
        )
        assert hits / len(held_out) >= 0.95

    def test_donation_fixture_sentence(self, planted_model):
        category, confidence = classify_text(
            planted_model, "please donate blood for storm victims"
        )
        assert category == "donation_volunteering"
        assert 0.0 <= confidence <= 1.0

    def test_empty_training_set_raises(self):
        with pytest.raises(ValueError):
            train_taxonomy_model([], [], ForestParams(n_trees=1), PrepConfig())

    def test_unknown_label_raises(self):
        with pytest.raises(ValueError):
            train_taxonomy_model(
                ["x"], ["mystery"], ForestParams(n_trees=1), PrepConfig()
            )

    def test_missing_category_warns_but_trains(self, caplog):
        with caplog.at_level("WARNING"):
            model = train_taxonomy_model(
                ["donate now", "giveaway show"],
                ["donation_volunteering", "not_related"],
                ForestParams(n_trees=3, seed=1),
                PrepConfig(),
            )
        assert model.forest.params.n_trees == 3
        assert any("sympathy_support" in rec.message for rec in caplog.records)

    def test_taxonomy_is_fixed(self):
        assert len(TAXONOMY) == 10
        assert TAXONOMY[-1] == "not_related"


class TestClassifyCorpus:
    def test_one_assignment_per_record_in_order(self, planted_model):
        records = [
            make_record("t1", utc(2017, 8, 25), text="donate storm"),
            make_record("t2", utc(2017, 8, 26), text="prayers city"),
        ]
        assignments = classify_corpus(planted_model, make_corpus(records))
        assert [a.tweet_id for a in assignments] == ["t1", "t2"]
        assert assignments[0].category == "donation_volunteering"
        assert assignments[1].category == "sympathy_support"

    def test_all_oov_text_is_still_classified(self, planted_model):
        records = [make_record("t1", utc(2017, 8, 25), text="zzz qqq vvv")]
        a1 = classify_corpus(planted_model, make_corpus(records))[0]
        a2 = classify_corpus(planted_model, make_corpus(records))[0]
        assert a1.category in TAXONOMY
        assert (a1.category, a1.confidence) == (a2.category, a2.confidence)

    def test_identical_texts_get_identical_assignments(self, planted_model):
        records = [
            make_record("t1", utc(2017, 8, 25), text="donate storm water"),
            make_record("t2", utc(2017, 8, 26), text="donate storm water"),
        ]
        a = classify_corpus(planted_model, make_corpus(records))
        assert (a[0].category, a[0].confidence) == (a[1].category, a[1].confidence)


def assignment(i: int, category: str) -> CategoryAssignment:
    return CategoryAssignment(tweet_id=f"t{i}", category=category, confidence=1.0)


class TestDailyDistribution:
    def test_forced_arithmetic(self):
        assignments = [
            assignment(0, "donation_volunteering"),
            assignment(1, "donation_volunteering"),
            assignment(2, "sympathy_support"),
            assignment(3, "not_related"),
        ]
        buckets = {date(2017, 8, 25): [0, 1, 2, 3]}
        dist = daily_category_distribution(assignments, buckets, "storm")
        assert dist["donation_volunteering"].values == (50.0,)
        assert dist["sympathy_support"].values == (25.0,)
        assert dist["not_related"].values == (25.0,)
        assert dist["personal"].values == (0.0,)

    def test_empty_day_is_all_zero(self):
        dist = daily_category_distribution([], {date(2017, 8, 25): []}, "storm")
        assert all(s.values == (0.0,) for s in dist.values())

    def test_random_assignment_matches_recount_oracle(self):
        rng = random.Random(79)
        assignments = [assignment(i, rng.choice(TAXONOMY)) for i in range(1000)]
        buckets = {
            date(2017, 8, 25 + d): list(range(d * 250, (d + 1) * 250)) for d in range(4)
        }
        dist = daily_category_distribution(assignments, buckets, "storm")
        for d_idx, day in enumerate(sorted(buckets)):
            total = 0.0
            for category in TAXONOMY:
                expected = sum(
                    1 for i in buckets[day] if assignments[i].category == category
                )
                value = dist[category].values[d_idx]
                assert value == pytest.approx(100.0 * expected / 250, abs=1e-12)
                total += value
            assert total == pytest.approx(100.0, abs=1e-9)


class TestRelevanceRollup:
    def test_seven_of_ten_informative(self):
        assignments = [
            assignment(i, "caution_advice" if i < 7 else "not_related") for i in range(10)
        ]
        series = relevance_rollup(assignments, {date(2017, 8, 25): list(range(10))}, "s")
        assert series.values == (0.7,)

    def test_all_not_related(self):
        assignments = [assignment(i, "not_related") for i in range(5)]
        series = relevance_rollup(assignments, {date(2017, 8, 25): list(range(5))}, "s")
        assert series.values == (0.0,)

    def test_complement_of_not_related_fraction(self):
        rng = random.Random(83)
        assignments = [assignment(i, rng.choice(TAXONOMY)) for i in range(400)]
        buckets = {date(2017, 8, 25 + d): list(range(d * 100, (d + 1) * 100)) for d in range(4)}
        series = relevance_rollup(assignments, buckets, "s")
        dist = daily_category_distribution(assignments, buckets, "s")
        for d in range(4):
            assert series.values[d] == 1.0 - dist["not_related"].values[d] / 100.0


class TestPersistence:
    def test_model_round_trip(self, planted_model, tmp_path):
        path = tmp_path / "model.json"
        planted_model.save(str(path))
        restored = TaxonomyModel.load(str(path))
        for text in ("donate storm", "zzz unknown", "prayers people"):
            assert classify_text(restored, text) == classify_text(planted_model, text)

    def test_assignment_csv_round_trip(self, tmp_path):
        path = tmp_path / "assignments.csv"
        original = [
            CategoryAssignment("t1", "personal", 0.625),
            CategoryAssignment("t2", "not_related", 1.0),
        ]
        write_assignments(original, str(path))
        assert read_assignments(str(path)) == original

    def test_labeled_text_csv(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text('text,label\n"donate, please",donation_volunteering\n')
        texts, labels = load_labeled_texts(str(path))
        assert texts == ["donate, please"]
        assert labels == ["donation_volunteering"]

    def test_labeled_text_csv_requires_columns(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("message,tag\na,b\n")
        with pytest.raises(ValueError):
            load_labeled_texts(str(path))

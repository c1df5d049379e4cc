import random
from datetime import date

import pytest

from crisislens.corpus import (
    EventWindow,
    bucket_by_day,
    corpus_stats,
    load_corpus,
    normalize_for_dedup,
    parse_utc,
    write_corpus,
)

from conftest import make_corpus, make_record, make_window, random_text, utc, write_jsonl


def record_obj(rid, ts, text="storm update", **extra):
    obj = {"id": rid, "created_at": ts, "text": text}
    obj.update(extra)
    return obj


class TestLoadCorpus:
    def test_skips_and_counts_malformed_lines(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                record_obj("a", "2017-08-25T10:00:00Z"),
                record_obj("b", "2017-08-25T11:00:00Z"),
                "{ not json at all",
            ],
        )
        corpus = load_corpus(str(path), make_window())
        assert corpus.total == 2
        assert corpus.skipped_count == 1

    def test_record_after_end_day_is_excluded(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(path, [record_obj("a", "2017-08-28T00:00:00Z")])
        corpus = load_corpus(str(path), make_window(end=date(2017, 8, 27)))
        assert corpus.total == 0
        assert corpus.skipped_count == 0

    def test_keyword_match_is_case_insensitive_substring(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                record_obj("a", "2017-08-25T10:00:00Z", text="STORM landfall"),
                record_obj("b", "2017-08-25T11:00:00Z", text="sunny day"),
                record_obj("c", "2017-08-25T12:00:00Z", text="rainstorms ahead"),
            ],
        )
        corpus = load_corpus(str(path), make_window(keywords=("storm",)))
        assert [r.id for r in corpus.records] == ["a", "c"]

    def test_records_sorted_by_created_at(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                record_obj("late", "2017-08-26T10:00:00Z"),
                record_obj("early", "2017-08-25T10:00:00Z"),
                record_obj("mid", "2017-08-25T23:00:00Z"),
            ],
        )
        corpus = load_corpus(str(path), make_window())
        assert [r.id for r in corpus.records] == ["early", "mid", "late"]

    def test_duplicate_id_skipped_and_counted(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                record_obj("a", "2017-08-25T10:00:00Z", text="storm one"),
                record_obj("a", "2017-08-25T11:00:00Z", text="storm two"),
            ],
        )
        corpus = load_corpus(str(path), make_window())
        assert corpus.total == 1
        assert corpus.records[0].text == "storm one"
        assert corpus.skipped_count == 1

    def test_unparseable_timestamp_counts_as_skipped(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(path, [record_obj("a", "yesterday-ish")])
        corpus = load_corpus(str(path), make_window())
        assert corpus.total == 0
        assert corpus.skipped_count == 1

    def test_image_refs_deduplicated_and_optional(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                record_obj("a", "2017-08-25T10:00:00Z", images=["x.png", "y.png", "x.png"]),
                record_obj("b", "2017-08-25T11:00:00Z"),
            ],
        )
        corpus = load_corpus(str(path), make_window())
        assert corpus.records[0].image_refs == ("x.png", "y.png")
        assert corpus.records[1].image_refs == ()

    def test_unreadable_file_raises(self):
        with pytest.raises(OSError):
            load_corpus("/nonexistent/corpus.jsonl", make_window())

    def test_deterministic_byte_for_byte(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        rng = random.Random(7)
        objs = [
            record_obj(
                f"r{i}",
                f"2017-08-{25 + rng.randrange(3):02d}T{rng.randrange(24):02d}:00:00Z",
                text=f"storm {random_text(rng)}",
            )
            for i in range(50)
        ]
        write_jsonl(path, objs)
        out_a, out_b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_corpus(load_corpus(str(path), make_window()), str(out_a))
        write_corpus(load_corpus(str(path), make_window()), str(out_b))
        assert out_a.read_bytes() == out_b.read_bytes()


class TestParseUtc:
    def test_z_suffix_and_offset_agree(self):
        assert parse_utc("2017-08-25T10:00:00Z") == parse_utc("2017-08-25T10:00:00+00:00")

    def test_offset_converted_to_utc(self):
        assert parse_utc("2017-08-25T12:00:00+02:00") == utc(2017, 8, 25, 10)


class TestBucketByDay:
    def test_direct_partition(self):
        records = [
            make_record("a", utc(2017, 8, 25, 1)),
            make_record("b", utc(2017, 8, 25, 2)),
            make_record("c", utc(2017, 8, 25, 3)),
            make_record("d", utc(2017, 8, 26, 1)),
        ]
        buckets = bucket_by_day(make_corpus(records))
        assert buckets[date(2017, 8, 25)] == [0, 1, 2]
        assert buckets[date(2017, 8, 26)] == [3]

    def test_empty_corpus_has_empty_buckets_for_every_day(self):
        buckets = bucket_by_day(make_corpus([]))
        assert sorted(buckets) == [date(2017, 8, 25), date(2017, 8, 26), date(2017, 8, 27)]
        assert all(v == [] for v in buckets.values())

    def test_utc_day_boundary(self):
        records = [
            make_record("a", utc(2017, 8, 25, 23, 59, 59)),
            make_record("b", utc(2017, 8, 26, 0, 0, 1)),
        ]
        buckets = bucket_by_day(make_corpus(records))
        assert buckets[date(2017, 8, 25)] == [0]
        assert buckets[date(2017, 8, 26)] == [1]

    def test_partition_property_random_corpus(self):
        rng = random.Random(3)
        records = [
            make_record(f"r{i}", utc(2017, 8, 25 + rng.randrange(3), rng.randrange(24)))
            for i in range(200)
        ]
        records.sort(key=lambda r: r.created_at)
        corpus = make_corpus(records)
        buckets = bucket_by_day(corpus)
        sizes = sum(len(v) for v in buckets.values())
        assert sizes == corpus.total
        seen = [i for v in buckets.values() for i in v]
        assert sorted(seen) == list(range(corpus.total))


class TestNormalizeForDedup:
    def test_strips_leading_retweet_marker(self):
        text = "RT @billprady: Correcting a rumor: Trump Hotels…"
        assert normalize_for_dedup(text) == "correcting a rumor: trump hotels…"

    def test_whitespace_and_case_fold_to_same_canonical(self):
        assert normalize_for_dedup("Hello   World") == normalize_for_dedup("hello world")

    def test_appended_short_url_is_ignored(self):
        a = "Flood waters rising downtown"
        b = "Flood waters rising downtown https://t.co/Ab1"
        assert normalize_for_dedup(a) == normalize_for_dedup(b)

    def test_nested_retweet_markers_removed(self):
        assert normalize_for_dedup("RT @a: RT @b: hello") == "hello"

    def test_idempotent_on_random_strings(self):
        rng = random.Random(11)
        for _ in range(500):
            text = random_text(rng)
            once = normalize_for_dedup(text)
            assert normalize_for_dedup(once) == once


class TestCorpusStats:
    def test_counts_records_and_image_tweets(self):
        records = [
            make_record("a", utc(2017, 8, 25), images=("x.png",)),
            make_record("b", utc(2017, 8, 25)),
            make_record("c", utc(2017, 8, 26), images=("y.png", "z.png")),
            make_record("d", utc(2017, 8, 26)),
        ]
        stats = corpus_stats(make_corpus(records))
        assert stats.total == 4
        assert stats.image_tweets == 2
        assert sum(stats.per_day.values()) == 4
        assert stats.per_day[date(2017, 8, 27)] == 0

    def test_empty_corpus_all_zero(self):
        stats = corpus_stats(make_corpus([]))
        assert stats.total == 0
        assert stats.image_tweets == 0
        assert all(v == 0 for v in stats.per_day.values())
        assert stats.mean_image_tweets_per_day == 0.0

    def test_mean_image_tweets_per_day(self):
        records = [
            make_record("a", utc(2017, 8, 25), images=("x.png",)),
            make_record("b", utc(2017, 8, 26), images=("y.png",)),
            make_record("c", utc(2017, 8, 26), images=("z.png",)),
        ]
        stats = corpus_stats(make_corpus(records))
        assert stats.mean_image_tweets_per_day == pytest.approx(1.0)


class TestEventWindow:
    def test_rejects_uppercase_keywords(self):
        with pytest.raises(ValueError):
            EventWindow(
                name="x", keywords=("Storm",), start_day=date(2017, 8, 25),
                end_day=date(2017, 8, 26),
            )

    def test_rejects_empty_keywords_and_bad_range(self):
        with pytest.raises(ValueError):
            EventWindow(name="x", keywords=(), start_day=date(2017, 8, 25),
                        end_day=date(2017, 8, 26))
        with pytest.raises(ValueError):
            EventWindow(name="x", keywords=("a",), start_day=date(2017, 8, 27),
                        end_day=date(2017, 8, 26))

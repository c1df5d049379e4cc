"""Tweet data model, corpus ingestion, day bucketing, and message canonicalization.

A corpus is an archived line-delimited file: one JSON object per line with
fields ``id`` (string), ``created_at`` (ISO-8601 UTC), ``text`` (string),
``images`` (array of strings, optional) and ``retweet`` (bool, optional).
Ingestion filters records to an event window (date range + keyword match),
skips and counts malformed lines, and yields an immutable, time-sorted
corpus that every downstream analysis consumes.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from typing import Iterator

logger = logging.getLogger(__name__)

# Leading retweet marker, e.g. "RT @somebody:".  Matched case-insensitively
# so canonicalization stays idempotent after lowercasing.
_RT_PREFIX = re.compile(r"^\s*rt\s+@\w+\s*:\s*", re.IGNORECASE)
_URL = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_WS = re.compile(r"\s+")


def parse_utc(value: str) -> datetime:
    """Parse an ISO-8601 timestamp into an aware UTC datetime.

    Accepts a trailing ``Z`` as well as explicit offsets; naive timestamps
    are taken to already be UTC.
    """
    s = value.strip()
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_utc(dt: datetime) -> str:
    """Inverse of :func:`parse_utc` (``Z`` suffix form)."""
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


@dataclass(frozen=True)
class TweetRecord:
    """One archived message; the unit flowing through every pipeline stage."""

    id: str
    created_at: datetime  # always timezone-aware UTC
    text: str
    image_refs: tuple[str, ...] = ()
    is_retweet: bool = False

    def day(self) -> date:
        return self.created_at.date()

    def to_json_line(self) -> str:
        obj = {
            "id": self.id,
            "created_at": format_utc(self.created_at),
            "text": self.text,
            "images": list(self.image_refs),
            "retweet": self.is_retweet,
        }
        return json.dumps(obj, sort_keys=True, ensure_ascii=False)


@dataclass(frozen=True)
class EventWindow:
    """Named collection window: keyword filters plus an inclusive date range."""

    name: str
    keywords: tuple[str, ...]
    start_day: date
    end_day: date

    def __post_init__(self) -> None:
        if not self.keywords:
            raise ValueError("event window needs at least one keyword")
        if any(k != k.lower() for k in self.keywords):
            raise ValueError("keywords must be lowercase")
        if self.start_day > self.end_day:
            raise ValueError("start_day must not be after end_day")

    def days(self) -> list[date]:
        n = (self.end_day - self.start_day).days + 1
        return [self.start_day + timedelta(days=i) for i in range(n)]

    def contains(self, day: date) -> bool:
        return self.start_day <= day <= self.end_day

    def matches(self, text: str) -> bool:
        lowered = text.lower()
        return any(k in lowered for k in self.keywords)


@dataclass
class Corpus:
    """Loaded, filtered, time-sorted records for one event window."""

    window: EventWindow
    records: list[TweetRecord]
    skipped_count: int = 0

    @property
    def total(self) -> int:
        return len(self.records)


@dataclass
class CorpusStats:
    total: int
    per_day: dict[date, int]
    image_tweets: int
    image_tweets_per_day: dict[date, int]

    @property
    def mean_image_tweets_per_day(self) -> float:
        if not self.image_tweets_per_day:
            return 0.0
        return self.image_tweets / len(self.image_tweets_per_day)


def _parse_record(line: str) -> TweetRecord:
    obj = json.loads(line)
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    rid = obj.get("id")
    if not isinstance(rid, str) or not rid:
        raise ValueError("missing or empty id")
    raw_ts = obj.get("created_at")
    if not isinstance(raw_ts, str):
        raise ValueError("missing created_at")
    created = parse_utc(raw_ts)
    text = obj.get("text")
    if not isinstance(text, str):
        raise ValueError("missing text")
    images = obj.get("images", [])
    if images is None:
        images = []
    if not isinstance(images, list) or any(not isinstance(x, str) for x in images):
        raise ValueError("images must be an array of strings")
    # Keep first occurrence only; image_refs carries no duplicates.
    deduped: list[str] = []
    seen: set[str] = set()
    for ref in images:
        if ref not in seen:
            seen.add(ref)
            deduped.append(ref)
    retweet = obj.get("retweet", False)
    if not isinstance(retweet, bool):
        raise ValueError("retweet must be a boolean")
    return TweetRecord(
        id=rid,
        created_at=created,
        text=text,
        image_refs=tuple(deduped),
        is_retweet=retweet,
    )


def iter_json_lines(path: str) -> Iterator[str]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            stripped = line.strip()
            if stripped:
                yield stripped


def load_corpus(path: str, window: EventWindow) -> Corpus:
    """Ingest a line-delimited corpus file, keeping in-window keyword matches.

    Malformed lines (bad JSON, missing fields, unparseable timestamps,
    duplicate ids among kept records) are skipped and counted, never fatal;
    an unreadable file raises ``OSError``.  Kept records are sorted by
    ``created_at`` (stable, so equal timestamps keep file order).
    """
    records: list[TweetRecord] = []
    skipped = 0
    seen_ids: set[str] = set()
    for line in iter_json_lines(path):
        try:
            rec = _parse_record(line)
        except (ValueError, json.JSONDecodeError):
            skipped += 1
            continue
        if not window.contains(rec.day()) or not window.matches(rec.text):
            continue
        if rec.id in seen_ids:
            skipped += 1
            continue
        seen_ids.add(rec.id)
        records.append(rec)
    records.sort(key=lambda r: r.created_at)
    if skipped:
        logger.info("skipped %d malformed line(s) in %s", skipped, path)
    return Corpus(window=window, records=records, skipped_count=skipped)


def write_corpus(corpus: Corpus, path: str) -> None:
    """Serialize records back to the line-delimited wire format (byte-stable)."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in corpus.records:
            fh.write(rec.to_json_line())
            fh.write("\n")


def bucket_by_day(corpus: Corpus) -> dict[date, list[int]]:
    """Partition record indices by UTC calendar date.

    Every day of the window appears as a key, empty days included; each
    record lands in exactly one bucket.
    """
    buckets: dict[date, list[int]] = {d: [] for d in corpus.window.days()}
    for i, rec in enumerate(corpus.records):
        buckets[rec.day()].append(i)
    return buckets


def normalize_for_dedup(text: str) -> str:
    """Canonical form used for unique-message counting.

    URLs are removed, then any leading retweet markers ("RT @handle:") are
    stripped repeatedly, whitespace is collapsed, and the result is trimmed
    and lowercased.  Two texts are the same unique message iff their
    canonical forms are equal.  Idempotent.  Used only for dedup counting,
    never as model input.
    """
    s = _URL.sub(" ", text)
    while True:
        stripped = _RT_PREFIX.sub("", s, count=1)
        if stripped == s:
            break
        s = stripped
    s = _WS.sub(" ", s).strip()
    return s.lower()


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Exact per-day tallies of records and image-bearing records."""
    per_day: dict[date, int] = {d: 0 for d in corpus.window.days()}
    image_per_day: dict[date, int] = {d: 0 for d in corpus.window.days()}
    image_total = 0
    for rec in corpus.records:
        d = rec.day()
        per_day[d] += 1
        if rec.image_refs:
            image_per_day[d] += 1
            image_total += 1
    return CorpusStats(
        total=corpus.total,
        per_day=per_day,
        image_tweets=image_total,
        image_tweets_per_day=image_per_day,
    )

"""Shared test fixtures and helpers."""

from __future__ import annotations

import json
import random
from datetime import date, datetime, timezone

import numpy as np
import pytest

from crisislens.corpus import Corpus, EventWindow, TweetRecord


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {name}: {outcome}")


def utc(y: int, mo: int, d: int, h: int = 0, mi: int = 0, s: int = 0) -> datetime:
    return datetime(y, mo, d, h, mi, s, tzinfo=timezone.utc)


def make_window(
    name: str = "storm",
    keywords: tuple[str, ...] = ("storm",),
    start: date = date(2017, 8, 25),
    end: date = date(2017, 8, 27),
) -> EventWindow:
    return EventWindow(name=name, keywords=keywords, start_day=start, end_day=end)


def make_record(
    rid: str,
    created: datetime,
    text: str = "storm update",
    images: tuple[str, ...] = (),
    retweet: bool = False,
) -> TweetRecord:
    return TweetRecord(
        id=rid, created_at=created, text=text, image_refs=images, is_retweet=retweet
    )


def make_corpus(records, window=None) -> Corpus:
    window = window or make_window()
    return Corpus(window=window, records=list(records), skipped_count=0)


def write_jsonl(path, objs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for obj in objs:
            fh.write(obj if isinstance(obj, str) else json.dumps(obj))
            fh.write("\n")


def random_text(rng: random.Random, max_len: int = 60) -> str:
    alphabet = (
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
        "     \t@#:/.!?,'\"-_()éü☔🌀…"
    )
    n = rng.randrange(max_len)
    body = "".join(rng.choice(alphabet) for _ in range(n))
    prefix = rng.choice(["", "RT @user: ", "rt @x:  ", "http://t.co/abc "])
    return prefix + body


@pytest.fixture
def banner_image():
    def build(seed: int = 0, size: int = 64) -> np.ndarray:
        rng = np.random.default_rng(seed)
        color = rng.integers(30, 226, size=3)
        return np.tile(color, (size, size, 1)).astype(np.uint8)

    return build


@pytest.fixture
def scene_image():
    def build(seed: int = 0, size: int = 64, noise: float = 0.0) -> np.ndarray:
        from PIL import Image

        rng = np.random.default_rng(seed)
        coarse = rng.integers(20, 236, size=(8, 8, 3)).astype(np.uint8)
        img = np.asarray(
            Image.fromarray(coarse).resize((size, size), Image.BILINEAR),
            dtype=np.float64,
        )
        if noise > 0:
            img = img + rng.normal(0.0, noise, size=img.shape)
        return np.clip(img, 0, 255).astype(np.uint8)

    return build


@pytest.fixture(scope="session")
def e2e_fixture_dir(tmp_path_factory):
    """Full synthetic fixture tree, built once per session."""
    from crisislens.fixtures import make_fixture

    root = tmp_path_factory.mktemp("e2e")
    config_path = make_fixture(str(root), n_tweets=10000, n_images=500, n_days=14)
    return config_path

"""Deterministic synthetic fixture: corpus, images, labels, resources, config.

``make_fixture`` writes a complete, self-contained input tree that the CLI
can run end to end.  Tweets are drawn from per-category token pools with a
planted event keyword, so every analysis has learnable structure; images
split into flat banner-like graphics and textured scenes with graded damage
texture, with near-duplicate rescales mixed in for the dedup stage.  Same
seed, same bytes.
"""

from __future__ import annotations

import csv
import json
import os
import random
from datetime import date, datetime, timedelta, timezone

import numpy as np

EVENT_NAME = "demostorm"
KEYWORD_FORMS = ("DemoStorm", "#DemoStorm", "demostorm")
START_DAY = date(2017, 8, 25)

CATEGORY_POOLS: dict[str, tuple[str, ...]] = {
    "injured_or_dead": (
        "casualties", "fatalities", "hospitalized", "perished", "morgue", "wounded",
    ),
    "infrastructure_damage": (
        "collapsed", "powerlines", "substation", "rubble", "girder", "washout",
    ),
    "caution_advice": (
        "evacuate", "advisory", "curfew", "sirens", "preparedness", "floodgate",
    ),
    "donation_volunteering": (
        "donate", "volunteers", "fundraiser", "pledged", "carpool", "foodbank",
    ),
    "affected_individual": (
        "stranded", "trapped", "displaced", "rooftop", "evacuee", "waistdeep",
    ),
    "missing_found": (
        "missing", "whereabouts", "lastseen", "reunited", "unaccounted", "locating",
    ),
    "sympathy_support": (
        "prayers", "condolences", "solidarity", "courage", "blessings", "heartfelt",
    ),
    "personal": (
        "apartment", "basement", "backyard", "garage", "landlord", "commute",
    ),
    "other_useful": (
        "airport", "closure", "schools", "detour", "curbside", "utilities",
    ),
    "not_related": (
        "giveaway", "promo", "gaming", "episode", "playlist", "concert",
    ),
}

CATEGORY_WEIGHTS: dict[str, float] = {
    "injured_or_dead": 0.05,
    "infrastructure_damage": 0.08,
    "caution_advice": 0.08,
    "donation_volunteering": 0.15,
    "affected_individual": 0.05,
    "missing_found": 0.02,
    "sympathy_support": 0.14,
    "personal": 0.04,
    "other_useful": 0.19,
    "not_related": 0.20,
}

FILLERS = (
    "water", "wind", "rain", "surge", "coast", "city", "people", "homes",
    "night", "morning", "streets", "video", "photos", "news", "live",
    "reports", "county", "officials", "crews", "residents",
)

POSITIVE_WORDS = ("grateful", "hopeful", "amazing", "wonderful", "inspiring", "relieved")
NEGATIVE_WORDS = ("terrible", "awful", "devastating", "horrific", "scary", "heartbreaking")
NEGATIONS = ("not", "never")

ENTITY_PHRASES = (
    "Port Haven", "Port Haven City", "Riverton", "Bayview", "Cedar County",
    "Coastal Relief Fund", "Harbor Light Radio", "Jordan Pike", "Delia",
    "Gov. Maria Quinn", "Rescue Operations Center",
)

LEXICON_ROWS = (
    [(w, 1.0) for w in ("grateful", "amazing", "wonderful", "inspiring")]
    + [(w, 0.6) for w in ("hopeful", "relieved")]
    + [(w, -1.0) for w in ("terrible", "devastating", "horrific")]
    + [(w, -0.6) for w in ("awful", "scary", "heartbreaking")]
    + [(":)", 0.8), (":(", -0.8)]
)


def _compose_text(rng: random.Random, category: str, allow_retweet_of: list[str]) -> str:
    if allow_retweet_of and rng.random() < 0.18:
        quoted = rng.choice(allow_retweet_of)
        return f"RT @user{rng.randrange(500)}: {quoted}"
    parts = [rng.choice(KEYWORD_FORMS)]
    pool = CATEGORY_POOLS[category]
    parts.extend(rng.choice(pool) for _ in range(rng.randint(3, 5)))
    parts.extend(rng.choice(FILLERS) for _ in range(rng.randint(2, 4)))
    if rng.random() < 0.35:
        word = rng.choice(POSITIVE_WORDS if rng.random() < 0.4 else NEGATIVE_WORDS)
        if rng.random() < 0.2:
            parts.append(rng.choice(NEGATIONS))
        parts.append(word)
    if rng.random() < 0.08:
        parts.append(rng.choice((":)", ":(")))
    if rng.random() < 0.20:
        parts.append(rng.choice(ENTITY_PHRASES))
        parts.append(rng.choice(FILLERS))
    if rng.random() < 0.15:
        parts.append(f"@user{rng.randrange(500)}")
    if rng.random() < 0.10:
        parts.append(str(rng.randrange(2, 500)))
    if rng.random() < 0.25:
        parts.append(f"https://t.co/{rng.randrange(100000):05x}")
    return " ".join(parts)


def _banner_pixels(rng: np.random.Generator) -> np.ndarray:
    color = rng.integers(30, 226, size=3)
    img = np.tile(color, (64, 64, 1)).astype(np.float64)
    for _ in range(int(rng.integers(0, 3))):
        y = int(rng.integers(8, 52))
        stripe = rng.integers(30, 226, size=3)
        img[y : y + 6, :, :] = stripe
    return np.clip(img, 0, 255).astype(np.uint8)


def _scene_pixels(rng: np.random.Generator, damage: str) -> np.ndarray:
    from PIL import Image

    coarse = rng.integers(20, 236, size=(8, 8, 3)).astype(np.uint8)
    img = np.asarray(
        Image.fromarray(coarse).resize((64, 64), Image.BILINEAR), dtype=np.float64
    )
    if damage == "mild":
        noise = rng.normal(0.0, 18.0, size=(64, 64, 1))
        mask = np.zeros((64, 64, 1))
        mask[16:48, 16:48] = 1.0
        img = img + noise * mask
    elif damage == "severe":
        img = img + rng.normal(0.0, 48.0, size=(64, 64, 3))
        for _ in range(4):
            y, x = int(rng.integers(0, 48)), int(rng.integers(0, 48))
            img[y : y + 12, x : x + 12] *= 0.3
    return np.clip(img, 0, 255).astype(np.uint8)


def _rescaled_duplicate(pixels: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    from PIL import Image

    side = int(rng.choice([44, 52, 96]))
    img = Image.fromarray(pixels).resize((side, side), Image.BILINEAR)
    return np.asarray(img)


def _save_png(pixels: np.ndarray, path: str) -> None:
    from PIL import Image

    Image.fromarray(pixels).save(path, format="PNG")


def _write_labeled_texts(path: str, rng: random.Random, n_rows: int) -> None:
    names = list(CATEGORY_POOLS)
    weights = [CATEGORY_WEIGHTS[c] for c in names]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["text", "label"])
        for _ in range(n_rows):
            category = rng.choices(names, weights=weights)[0]
            writer.writerow([_compose_text(rng, category, []), category])


def _default_stopwords() -> str:
    from importlib import resources

    return resources.files("crisislens.data").joinpath("stopwords.txt").read_text("utf-8")


def make_fixture(
    out_dir: str,
    n_tweets: int = 10000,
    n_images: int = 500,
    n_days: int = 14,
    seed: int = 20170825,
) -> str:
    """Write the fixture tree under ``out_dir`` and return the config path."""
    if n_days < 1:
        raise ValueError("n_days must be >= 1")
    if n_images < n_days:
        raise ValueError("need at least one image per day")
    os.makedirs(out_dir, exist_ok=True)
    images_dir = os.path.join(out_dir, "images")
    os.makedirs(images_dir, exist_ok=True)
    rng = random.Random(seed)
    np_rng = np.random.default_rng(seed)
    days = [START_DAY + timedelta(days=i) for i in range(n_days)]

    # -- images ------------------------------------------------------------
    image_meta: list[dict] = []  # id, relevant, damage, duplicate_of
    originals: list[int] = []  # indices of non-duplicate relevant scenes
    pixels_by_index: list[np.ndarray] = []
    for i in range(n_images):
        image_id = f"img_{i:04d}.png"
        make_dup = bool(originals) and rng.random() < 0.15
        if make_dup:
            src = rng.choice(originals)
            pixels = _rescaled_duplicate(pixels_by_index[src], np_rng)
            meta = {
                "id": image_id,
                "relevant": True,
                "damage": image_meta[src]["damage"],
                "duplicate_of": image_meta[src]["id"],
            }
        elif rng.random() < 0.40:
            pixels = _banner_pixels(np_rng)
            meta = {"id": image_id, "relevant": False, "damage": None, "duplicate_of": None}
        else:
            damage = rng.choices(["none", "mild", "severe"], weights=[0.5, 0.3, 0.2])[0]
            pixels = _scene_pixels(np_rng, damage)
            meta = {"id": image_id, "relevant": True, "damage": damage, "duplicate_of": None}
            originals.append(i)
        _save_png(pixels, os.path.join(images_dir, image_id))
        pixels_by_index.append(pixels)
        image_meta.append(meta)

    # -- training images and label files ------------------------------------
    relevancy_rows: list[tuple[str, str]] = []
    for i in range(120):
        image_id = f"train_rel_{i:03d}.png"
        if i % 2 == 0:
            pixels = _banner_pixels(np_rng)
            label = "irrelevant"
        else:
            damage = ["none", "mild", "severe"][i % 3]
            pixels = _scene_pixels(np_rng, damage)
            label = "relevant"
        _save_png(pixels, os.path.join(images_dir, image_id))
        relevancy_rows.append((image_id, label))
    damage_rows: list[tuple[str, str]] = []
    for i in range(90):
        damage = ["none", "mild", "severe"][i % 3]
        image_id = f"train_dmg_{i:03d}.png"
        _save_png(_scene_pixels(np_rng, damage), os.path.join(images_dir, image_id))
        damage_rows.append((image_id, damage))
    for name, rows in (("relevancy_labels.csv", relevancy_rows), ("damage_labels.csv", damage_rows)):
        with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["id", "label"])
            writer.writerows(rows)

    # -- calibration pairs ---------------------------------------------------
    dup_pairs = [
        (m["duplicate_of"], m["id"]) for m in image_meta if m["duplicate_of"]
    ][:40]
    neg_pairs: list[tuple[str, str]] = []
    candidates = [m["id"] for m in image_meta if m["duplicate_of"] is None]
    while len(neg_pairs) < 2 * len(dup_pairs) and len(candidates) > 1:
        a, b = rng.sample(candidates, 2)
        neg_pairs.append((a, b))
    with open(os.path.join(out_dir, "calibration_pairs.csv"), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["idA", "idB", "is_duplicate"])
        for a, b in dup_pairs:
            writer.writerow([a, b, 1])
        for a, b in neg_pairs:
            writer.writerow([a, b, 0])

    # -- tweets ---------------------------------------------------------------
    day_weights = [1.0 + 2.5 * np.exp(-((i - n_days * 0.35) ** 2) / 6.0) for i in range(n_days)]
    names = list(CATEGORY_POOLS)
    weights = [CATEGORY_WEIGHTS[c] for c in names]
    recent_texts: list[str] = []
    tweets: list[dict] = []
    for i in range(n_tweets):
        category = rng.choices(names, weights=weights)[0]
        text = _compose_text(rng, category, recent_texts)
        if len(recent_texts) < 400 and not text.startswith("RT @"):
            recent_texts.append(text)
        day = rng.choices(range(n_days), weights=day_weights)[0]
        moment = datetime(
            days[day].year, days[day].month, days[day].day,
            rng.randrange(24), rng.randrange(60), rng.randrange(60),
            tzinfo=timezone.utc,
        )
        tweets.append(
            {
                "id": f"t{i:06d}",
                "created_at": moment.isoformat().replace("+00:00", "Z"),
                "text": text,
                "retweet": text.startswith("RT @"),
            }
        )

    # Attach each image to one tweet; spread first references over all days.
    by_day: dict[int, list[int]] = {d: [] for d in range(n_days)}
    for idx, tw in enumerate(tweets):
        day_idx = (date.fromisoformat(tw["created_at"][:10]) - START_DAY).days
        by_day[day_idx].append(idx)
    for img_idx, meta in enumerate(image_meta):
        day = img_idx % n_days
        holders = by_day[day] or list(range(n_tweets))
        tweet = tweets[holders[img_idx % len(holders)]]
        tweet.setdefault("images", []).append(meta["id"])
    # A handful of later re-references plus one dangling reference.
    for _ in range(40):
        tweets[rng.randrange(n_tweets)].setdefault("images", []).append(
            image_meta[rng.randrange(n_images)]["id"]
        )
    tweets[rng.randrange(n_tweets)].setdefault("images", []).append("img_missing.png")

    corpus_path = os.path.join(out_dir, "tweets.jsonl")
    malformed = [
        "{ this is not json",
        '{"id": "bad1", "text": "missing timestamp"}',
        '{"id": "bad2", "created_at": "not-a-date", "text": "DemoStorm broken"}',
        '["not", "an", "object"]',
        '{"id": "", "created_at": "2017-08-25T00:00:00Z", "text": "DemoStorm empty id"}',
    ]
    malformed_at = sorted(rng.sample(range(n_tweets), len(malformed)))
    with open(corpus_path, "w", encoding="utf-8") as fh:
        bad = 0
        for i, tw in enumerate(tweets):
            while bad < len(malformed) and malformed_at[bad] == i:
                fh.write(malformed[bad] + "\n")
                bad += 1
            fh.write(json.dumps(tw, sort_keys=True, ensure_ascii=False) + "\n")
        for line in malformed[bad:]:
            fh.write(line + "\n")

    # -- resources -------------------------------------------------------------
    with open(os.path.join(out_dir, "stopwords.txt"), "w", encoding="utf-8") as fh:
        fh.write(_default_stopwords())
    with open(os.path.join(out_dir, "lexicon.tsv"), "w", encoding="utf-8") as fh:
        for token, polarity in LEXICON_ROWS:
            fh.write(f"{token}\t{polarity}\n")
        for token in NEGATIONS + ("no",):
            fh.write(f"{token}\tNEG\n")
    gazetteers = {
        "gazetteer_persons.txt": ["Delia", "Jordan Pike"],
        "gazetteer_organizations.txt": ["Coastal Relief Fund", "Harbor Light Radio", "Cedar County"],
        "gazetteer_locations.txt": ["Port Haven", "Port Haven City", "Riverton", "Bayview"],
    }
    for name, phrases in gazetteers.items():
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            fh.write("\n".join(phrases) + "\n")
    with open(os.path.join(out_dir, "curation.txt"), "w", encoding="utf-8") as fh:
        fh.write("# storm name tagged as a person by the gazetteer\n")
        fh.write("block person Delia\n")
        fh.write("retype organization location Cedar County\n")
        fh.write("alias Port Haven City => Port Haven\n")

    _write_labeled_texts(os.path.join(out_dir, "taxonomy_labels.csv"), rng, 2000)

    config_path = os.path.join(out_dir, "pipeline.conf")
    with open(config_path, "w", encoding="utf-8") as fh:
        fh.write(
            "\n".join(
                [
                    "[event]",
                    f"name = {EVENT_NAME}",
                    "keywords = demostorm",
                    f"start_day = {days[0].isoformat()}",
                    f"end_day = {days[-1].isoformat()}",
                    "",
                    "[inputs]",
                    "corpus = tweets.jsonl",
                    "images_dir = images",
                    "stopwords = stopwords.txt",
                    "lexicon = lexicon.tsv",
                    "gazetteer_persons = gazetteer_persons.txt",
                    "gazetteer_organizations = gazetteer_organizations.txt",
                    "gazetteer_locations = gazetteer_locations.txt",
                    "curation = curation.txt",
                    "taxonomy_labels = taxonomy_labels.csv",
                    "relevancy_labels = relevancy_labels.csv",
                    "damage_labels = damage_labels.csv",
                    "calibration_pairs = calibration_pairs.csv",
                    "",
                    "[params]",
                    "seed = 1234",
                    "forest_trees = 30",
                    "min_df = 2",
                    "lda_topics = 10",
                    "lda_iterations = 60",
                    "dedup_tau = 10",
                    "calibrate_tau = true",
                    "negation_window = 3",
                    "entity_topk = 10",
                    "",
                    "[output]",
                    "dir = out",
                    "",
                ]
            )
        )
    return config_path

"""Three-stage image pipeline: relevancy filter, de-duplication, damage grading.

Stage order is fixed.  De-duplication runs over the whole event's stream of
relevant images in arrival order (not per day), because reposts of an old
image recur across days; daily ratios are then computed against each day's
image total.  Files that fail to load are recorded as missing and excluded
from every denominator.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import date
from typing import Optional, Sequence

import numpy as np

from ..learn import ForestModel, predict
from ..series import DailySeries
from .bktree import BKTree, DedupConfig
from .features import extract_image_features
from .phash import compute_phash

logger = logging.getLogger(__name__)

RELEVANCY_CLASSES = ("irrelevant", "relevant")
DAMAGE_CLASSES = ("none", "mild", "severe")


@dataclass(frozen=True)
class ImageVerdict:
    """Stage outcomes for one image; ``damage`` exists only for retained images."""

    image_id: str
    relevant: bool
    duplicate_of: Optional[str] = None
    damage: Optional[str] = None
    missing: bool = False


@dataclass
class ImagePipelineResult:
    verdicts: list[ImageVerdict]
    relevant_ratio: DailySeries
    unique_ratio: DailySeries
    damage_ratio: DailySeries
    damage_breakdown: dict[str, DailySeries]  # severe / mild / none over retained
    missing_per_day: dict[date, int] = field(default_factory=dict)

    @property
    def missing_total(self) -> int:
        return sum(self.missing_per_day.values())


def load_image(path: str) -> np.ndarray:
    """Decode PNG/JPEG into an RGB uint8 array."""
    from PIL import Image

    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"))


def classify_relevancy(model: ForestModel, features: np.ndarray) -> bool:
    if tuple(model.class_names) != RELEVANCY_CLASSES:
        raise ValueError(f"relevancy model must have classes {RELEVANCY_CLASSES}")
    cls, _ = predict(model, features)
    return model.class_names[cls] == "relevant"


def classify_damage(model: ForestModel, features: np.ndarray) -> str:
    if tuple(model.class_names) != DAMAGE_CLASSES:
        raise ValueError(f"damage model must have classes {DAMAGE_CLASSES}")
    cls, _ = predict(model, features)
    return model.class_names[cls]


def run_image_pipeline(
    items: Sequence[tuple[str, date, Optional[np.ndarray]]],
    relevancy_model: ForestModel,
    damage_model: ForestModel,
    dedup: DedupConfig,
    window_days: Sequence[date],
    event: str,
) -> ImagePipelineResult:
    """Run all stages over (image id, day, pixels) triples in arrival order.

    ``pixels=None`` marks an image whose file was missing or undecodable.
    Daily ratio series: relevant/total, relevant-and-unique/total, and
    relevant-and-unique-with-damage/total; the damage breakdown gives the
    severe/mild/none fractions among each day's retained images.
    """
    verdicts: list[ImageVerdict] = []
    tree = BKTree()
    retained_ids: list[str] = []
    day_of: dict[str, date] = {}

    for image_id, day, pixels in items:
        day_of[image_id] = day
        if pixels is None:
            verdicts.append(ImageVerdict(image_id=image_id, relevant=False, missing=True))
            continue
        features = extract_image_features(pixels)
        if not classify_relevancy(relevancy_model, features):
            verdicts.append(ImageVerdict(image_id=image_id, relevant=False))
            continue
        h = compute_phash(pixels)
        match = tree.earliest_within(h, dedup.tau)
        if match is not None:
            verdicts.append(
                ImageVerdict(
                    image_id=image_id,
                    relevant=True,
                    duplicate_of=retained_ids[match],
                )
            )
            continue
        tree.insert(h, len(retained_ids))
        retained_ids.append(image_id)
        verdicts.append(
            ImageVerdict(
                image_id=image_id,
                relevant=True,
                damage=classify_damage(damage_model, features),
            )
        )

    days = list(window_days)
    totals = {d: 0 for d in days}
    relevant = {d: 0 for d in days}
    unique = {d: 0 for d in days}
    damaged = {d: 0 for d in days}
    breakdown = {d: {c: 0 for c in DAMAGE_CLASSES} for d in days}
    missing = {d: 0 for d in days}
    for v in verdicts:
        d = day_of[v.image_id]
        if v.missing:
            missing[d] += 1
            continue
        totals[d] += 1
        if not v.relevant:
            continue
        relevant[d] += 1
        if v.duplicate_of is not None:
            continue
        unique[d] += 1
        breakdown[d][v.damage] += 1
        if v.damage != "none":
            damaged[d] += 1

    def ratio_series(name: str, num: dict[date, int]) -> DailySeries:
        values = tuple(num[d] / totals[d] if totals[d] else 0.0 for d in days)
        return DailySeries(name=name, event=event, values=values, unit="fraction")

    breakdown_series: dict[str, DailySeries] = {}
    for cls in DAMAGE_CLASSES:
        values = tuple(
            breakdown[d][cls] / unique[d] if unique[d] else 0.0 for d in days
        )
        breakdown_series[cls] = DailySeries(
            name=f"damage_{cls}", event=event, values=values, unit="fraction"
        )

    total_missing = sum(missing.values())
    if total_missing:
        logger.warning("%d image(s) missing or undecodable", total_missing)

    return ImagePipelineResult(
        verdicts=verdicts,
        relevant_ratio=ratio_series("image_relevant_ratio", relevant),
        unique_ratio=ratio_series("image_unique_ratio", unique),
        damage_ratio=ratio_series("image_damage_ratio", damaged),
        damage_breakdown=breakdown_series,
        missing_per_day=missing,
    )

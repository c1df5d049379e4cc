"""Image pipeline: perceptual hashing, dedup indexing, feature classifiers."""

from .bktree import BKTree, DedupConfig, dedup_stream
from .features import N_FEATURES, extract_image_features, sobel_magnitude
from .phash import (
    HASH_BITS,
    bilinear_resize,
    compute_phash,
    dct2,
    hamming,
    hash_from_hex,
    hash_to_hex,
    to_grayscale,
)
from .pipeline import (
    DAMAGE_CLASSES,
    RELEVANCY_CLASSES,
    ImagePipelineResult,
    ImageVerdict,
    classify_damage,
    classify_relevancy,
    load_image,
    run_image_pipeline,
)
from .roc import RocPoint, calibrate_threshold

__all__ = [
    "BKTree",
    "DedupConfig",
    "dedup_stream",
    "N_FEATURES",
    "extract_image_features",
    "sobel_magnitude",
    "HASH_BITS",
    "bilinear_resize",
    "compute_phash",
    "dct2",
    "hamming",
    "hash_from_hex",
    "hash_to_hex",
    "to_grayscale",
    "DAMAGE_CLASSES",
    "RELEVANCY_CLASSES",
    "ImagePipelineResult",
    "ImageVerdict",
    "classify_damage",
    "classify_relevancy",
    "load_image",
    "run_image_pipeline",
    "RocPoint",
    "calibrate_threshold",
]

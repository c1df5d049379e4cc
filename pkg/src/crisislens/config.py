"""Pipeline configuration: INI file parsing, path validation, seed derivation."""

from __future__ import annotations

import configparser
import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import date
from typing import Optional

from .corpus import EventWindow

_INPUT_KEYS = (
    "corpus",
    "images_dir",
    "stopwords",
    "lexicon",
    "gazetteer_persons",
    "gazetteer_organizations",
    "gazetteer_locations",
    "curation",
    "taxonomy_labels",
    "relevancy_labels",
    "damage_labels",
    "calibration_pairs",
)


@dataclass
class PipelineConfig:
    window: EventWindow
    inputs: dict[str, str]  # resolved absolute paths, present keys only
    out_dir: str
    seed: int = 0
    forest_trees: int = 200
    forest_min_leaf: int = 1
    forest_max_depth: Optional[int] = None
    forest_max_features: Optional[int] = None
    min_df: int = 1
    min_token_len: int = 2
    remove_mentions: bool = True
    lda_topics: int = 10
    lda_alpha: Optional[float] = None
    lda_beta: float = 0.01
    lda_iterations: int = 1000
    lda_top_terms: int = 30
    dedup_tau: int = 10
    calibrate_tau: bool = False
    negation_window: int = 3
    entity_topk: int = 10
    digest: str = field(default="", repr=False)

    def input_path(self, key: str) -> Optional[str]:
        return self.inputs.get(key)

    def require_input(self, key: str) -> str:
        path = self.inputs.get(key)
        if path is None:
            raise ValueError(f"config is missing required input {key!r}")
        return path

    def event_dir(self) -> str:
        return os.path.join(self.out_dir, self.window.name)

    def intermediate_dir(self) -> str:
        return os.path.join(self.event_dir(), "intermediate")

    def models_dir(self) -> str:
        return os.path.join(self.event_dir(), "models")


def derive_seed(seed: int, label: str) -> int:
    """Stable per-stage seed so every stochastic component gets its own stream."""
    digest = hashlib.sha256(f"{seed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def load_config(
    path: str,
    seed_override: Optional[int] = None,
    out_override: Optional[str] = None,
) -> PipelineConfig:
    """Parse an INI config file; every referenced input path must exist.

    Relative paths resolve against the config file's directory.  The
    returned config carries a digest of its effective contents, recorded in
    report metadata so outputs are traceable to their configuration.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise ValueError(f"cannot read config file: {path}")
    base = os.path.dirname(os.path.abspath(path))

    try:
        event = parser["event"]
        window = EventWindow(
            name=event["name"].strip(),
            keywords=tuple(
                k.strip().lower() for k in event["keywords"].split(",") if k.strip()
            ),
            start_day=date.fromisoformat(event["start_day"].strip()),
            end_day=date.fromisoformat(event["end_day"].strip()),
        )
    except KeyError as exc:
        raise ValueError(f"config [event] section is missing {exc}") from None

    inputs: dict[str, str] = {}
    if parser.has_section("inputs"):
        for key in parser["inputs"]:
            if key not in _INPUT_KEYS:
                raise ValueError(f"unknown [inputs] key: {key}")
            raw = parser["inputs"][key].strip()
            if not raw:
                continue
            resolved = raw if os.path.isabs(raw) else os.path.join(base, raw)
            if key == "images_dir":
                if not os.path.isdir(resolved):
                    raise ValueError(f"[inputs] {key}: not a directory: {raw}")
            elif not os.path.isfile(resolved):
                raise ValueError(f"[inputs] {key}: no such file: {raw}")
            inputs[key] = resolved

    params = parser["params"] if parser.has_section("params") else {}

    def get_int(key: str, default: int) -> int:
        return int(params.get(key, default))

    def get_opt_int(key: str) -> Optional[int]:
        raw = params.get(key, "")
        return int(raw) if str(raw).strip() else None

    def get_opt_float(key: str) -> Optional[float]:
        raw = params.get(key, "")
        return float(raw) if str(raw).strip() else None

    def get_bool(key: str, default: bool) -> bool:
        raw = str(params.get(key, default)).strip().lower()
        if raw in ("1", "true", "yes", "on"):
            return True
        if raw in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"[params] {key}: expected a boolean, got {raw!r}")

    out_raw = (
        parser["output"]["dir"].strip()
        if parser.has_section("output") and "dir" in parser["output"]
        else "out"
    )
    out_dir = out_raw if os.path.isabs(out_raw) else os.path.join(base, out_raw)
    if out_override is not None:
        out_dir = os.path.abspath(out_override)

    seed = get_int("seed", 0)
    if seed_override is not None:
        seed = seed_override

    cfg = PipelineConfig(
        window=window,
        inputs=inputs,
        out_dir=out_dir,
        seed=seed,
        forest_trees=get_int("forest_trees", 200),
        forest_min_leaf=get_int("forest_min_leaf", 1),
        forest_max_depth=get_opt_int("forest_max_depth"),
        forest_max_features=get_opt_int("forest_max_features"),
        min_df=get_int("min_df", 1),
        min_token_len=get_int("min_token_len", 2),
        remove_mentions=get_bool("remove_mentions", True),
        lda_topics=get_int("lda_topics", 10),
        lda_alpha=get_opt_float("lda_alpha"),
        lda_beta=float(params.get("lda_beta", 0.01)),
        lda_iterations=get_int("lda_iterations", 1000),
        lda_top_terms=get_int("lda_top_terms", 30),
        dedup_tau=get_int("dedup_tau", 10),
        calibrate_tau=get_bool("calibrate_tau", False),
        negation_window=get_int("negation_window", 3),
        entity_topk=get_int("entity_topk", 10),
    )
    cfg.digest = _config_digest(cfg)
    return cfg


def _config_digest(cfg: PipelineConfig) -> str:
    payload = {
        "event": {
            "name": cfg.window.name,
            "keywords": list(cfg.window.keywords),
            "start_day": cfg.window.start_day.isoformat(),
            "end_day": cfg.window.end_day.isoformat(),
        },
        "inputs": {k: os.path.basename(v) for k, v in sorted(cfg.inputs.items())},
        "params": {
            "seed": cfg.seed,
            "forest_trees": cfg.forest_trees,
            "forest_min_leaf": cfg.forest_min_leaf,
            "forest_max_depth": cfg.forest_max_depth,
            "forest_max_features": cfg.forest_max_features,
            "min_df": cfg.min_df,
            "min_token_len": cfg.min_token_len,
            "remove_mentions": cfg.remove_mentions,
            "lda_topics": cfg.lda_topics,
            "lda_alpha": cfg.lda_alpha,
            "lda_beta": cfg.lda_beta,
            "lda_iterations": cfg.lda_iterations,
            "lda_top_terms": cfg.lda_top_terms,
            "dedup_tau": cfg.dedup_tau,
            "calibrate_tau": cfg.calibrate_tau,
            "negation_window": cfg.negation_window,
            "entity_topk": cfg.entity_topk,
        },
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()

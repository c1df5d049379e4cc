"""Event report assembly and CSV/JSON/SVG emission.

A report is a pure function of the module outputs plus configuration, so
re-running on identical inputs writes identical bytes: no timestamps, fixed
key orders, repr-formatted floats.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import date
from typing import Optional, Sequence

from .learn.stats import CorrelationResult, TrendLine, ols_trend, pearson
from .series import DailySeries
from .svg import render_bars_with_trend, render_stacked_bars

# The two cross-series comparisons every report carries.
CORRELATION_PAIRS = (
    ("image_relevant_ratio", "image_damage_ratio"),
    ("image_unique_ratio", "image_damage_ratio"),
)


@dataclass
class CorrelationEntry:
    series_a: str
    series_b: str
    result: Optional[CorrelationResult] = None
    error: Optional[str] = None


@dataclass
class Report:
    event: str
    days: list[date]
    series: dict[str, DailySeries]
    trends: dict[str, TrendLine]
    correlations: list[CorrelationEntry]
    metadata: dict = field(default_factory=dict)


def _require(value, analysis: str):
    if value is None:
        raise ValueError(f"missing required analysis: {analysis}")
    return value


def build_report(
    event: str,
    days: Sequence[date],
    *,
    tweet_counts: Optional[DailySeries] = None,
    image_counts: Optional[DailySeries] = None,
    sentiment: Optional[dict[str, DailySeries]] = None,
    categories: Optional[dict[str, DailySeries]] = None,
    relevance: Optional[DailySeries] = None,
    image_relevant_ratio: Optional[DailySeries] = None,
    image_unique_ratio: Optional[DailySeries] = None,
    image_damage_ratio: Optional[DailySeries] = None,
    damage_breakdown: Optional[dict[str, DailySeries]] = None,
    seed: int = 0,
    config_digest: str = "",
) -> Report:
    """Assemble every daily series, trend lines, and the fixed correlations.

    Raises ``ValueError`` naming the first absent analysis.  Correlations
    that are undefined (constant inputs) are recorded with an error marker
    instead of failing the report.
    """
    tweet_counts = _require(tweet_counts, "tweet counts")
    image_counts = _require(image_counts, "image tweet counts")
    sentiment = _require(sentiment, "sentiment")
    categories = _require(categories, "categories")
    relevance = _require(relevance, "relevance rollup")
    image_relevant_ratio = _require(image_relevant_ratio, "image relevancy ratios")
    image_unique_ratio = _require(image_unique_ratio, "image uniqueness ratios")
    image_damage_ratio = _require(image_damage_ratio, "image damage ratios")
    damage_breakdown = _require(damage_breakdown, "damage breakdown")

    series: dict[str, DailySeries] = {}

    def add(s: DailySeries) -> None:
        if len(s) != len(days):
            raise ValueError(
                f"series {s.name!r} has {len(s)} values for {len(days)} days"
            )
        series[s.name] = s

    add(tweet_counts)
    add(image_counts)
    for s in sentiment.values():
        add(s)
    for s in categories.values():
        add(s)
    add(relevance)
    relevant_pct = DailySeries(
        name="relevant_percent",
        event=event,
        values=tuple(100.0 * v for v in relevance.values),
        unit="percent",
    )
    irrelevant_pct = DailySeries(
        name="irrelevant_percent",
        event=event,
        values=tuple(100.0 * (1.0 - v) for v in relevance.values),
        unit="percent",
    )
    add(relevant_pct)
    add(irrelevant_pct)
    add(image_relevant_ratio)
    add(image_unique_ratio)
    add(image_damage_ratio)
    for s in damage_breakdown.values():
        add(s)

    trends = {
        tweet_counts.name: ols_trend(tweet_counts.values),
        image_counts.name: ols_trend(image_counts.values),
        image_relevant_ratio.name: ols_trend(image_relevant_ratio.values),
        image_unique_ratio.name: ols_trend(image_unique_ratio.values),
        image_damage_ratio.name: ols_trend(image_damage_ratio.values),
    }

    correlations: list[CorrelationEntry] = []
    for name_a, name_b in CORRELATION_PAIRS:
        a, b = series[name_a], series[name_b]
        try:
            result = pearson(a.values, b.values)
            correlations.append(
                CorrelationEntry(series_a=name_a, series_b=name_b, result=result)
            )
        except ValueError as exc:
            correlations.append(
                CorrelationEntry(series_a=name_a, series_b=name_b, error=str(exc))
            )

    n_image_days = len(image_counts.values)
    metadata = {
        "seed": seed,
        "config_digest": config_digest,
        "correlation_basis": "daily_ratio_series",
        "image_tweets_daily_mean": (
            sum(image_counts.values) / n_image_days if n_image_days else 0.0
        ),
    }
    return Report(
        event=event,
        days=list(days),
        series=series,
        trends=trends,
        correlations=correlations,
        metadata=metadata,
    )


def emit_tabular(report: Report, out_root: str) -> list[str]:
    """One ``day,value`` CSV per series plus a JSON manifest; byte-stable."""
    event_dir = os.path.join(out_root, report.event)
    series_dir = os.path.join(event_dir, "series")
    os.makedirs(series_dir, exist_ok=True)
    written: list[str] = []
    for name in sorted(report.series):
        s = report.series[name]
        path = os.path.join(series_dir, f"{name}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("day,value\n")
            for d, v in zip(report.days, s.values):
                fh.write(f"{d.isoformat()},{v!r}\n")
        written.append(path)
    manifest = {
        "event": report.event,
        "window": {
            "start_day": report.days[0].isoformat(),
            "end_day": report.days[-1].isoformat(),
        },
        "series": {name: report.series[name].unit for name in sorted(report.series)},
        "trends": {
            name: {"slope": t.slope, "intercept": t.intercept}
            for name, t in sorted(report.trends.items())
        },
        "correlations": [
            {
                "series_a": c.series_a,
                "series_b": c.series_b,
                "r": c.result.r if c.result else None,
                "p": c.result.p if c.result else None,
                "n": c.result.n if c.result else None,
                "error": c.error,
            }
            for c in report.correlations
        ],
        "metadata": report.metadata,
    }
    manifest_path = os.path.join(event_dir, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")
    written.append(manifest_path)
    return written


def emit_svg_chart(
    series_list: Sequence[DailySeries],
    kind: str,
    title: str = "",
) -> str:
    """Render one chart document.

    ``stacked_bars`` takes any number of equal-length distribution series;
    ``bars_with_trend`` takes exactly one series and overlays its
    least-squares line.
    """
    if kind == "stacked_bars":
        return render_stacked_bars(series_list, title or "stacked distribution")
    if kind == "bars_with_trend":
        if len(series_list) != 1:
            raise ValueError("bars_with_trend renders exactly one series")
        s = series_list[0]
        return render_bars_with_trend(s, ols_trend(s.values), title or s.name)
    raise ValueError(f"unknown chart kind: {kind!r}")


def emit_charts(report: Report, out_root: str) -> list[str]:
    """Write the standard chart set under ``<out>/<event>/charts/``."""
    charts_dir = os.path.join(out_root, report.event, "charts")
    os.makedirs(charts_dir, exist_ok=True)
    s = report.series
    mean_images = report.metadata.get("image_tweets_daily_mean")
    documents: dict[str, str] = {
        "tweets_per_day.svg": render_bars_with_trend(
            s["tweets_total"],
            report.trends["tweets_total"],
            f"{report.event}: tweets per day",
        ),
        "image_tweets_per_day.svg": render_bars_with_trend(
            s["image_tweets"],
            report.trends["image_tweets"],
            f"{report.event}: image tweets per day",
            mean_value=mean_images,
        ),
        "sentiment.svg": render_stacked_bars(
            [s["sentiment_negative"], s["sentiment_neutral"], s["sentiment_positive"]],
            f"{report.event}: daily sentiment",
        ),
        "categories.svg": render_stacked_bars(
            [v for k, v in sorted(s.items()) if k.startswith("category_")],
            f"{report.event}: daily categories",
        ),
        "relevance.svg": render_stacked_bars(
            [s["relevant_percent"], s["irrelevant_percent"]],
            f"{report.event}: relevant vs irrelevant",
        ),
        "damage_breakdown.svg": render_stacked_bars(
            [s["damage_severe"], s["damage_mild"], s["damage_none"]],
            f"{report.event}: damage severity of retained images",
        ),
    }
    for name in ("image_relevant_ratio", "image_unique_ratio", "image_damage_ratio"):
        documents[f"{name}.svg"] = render_bars_with_trend(
            s[name], report.trends[name], f"{report.event}: {name}"
        )
    written: list[str] = []
    for filename in sorted(documents):
        path = os.path.join(charts_dir, filename)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(documents[filename])
            fh.write("\n")
        written.append(path)
    return written

"""Self-contained SVG bar charts with machine-readable value attributes.

No raster or plotting dependency: charts are plain XML, every bar carries
``data-series``/``data-day``/``data-value`` attributes and trend lines carry
``data-slope``/``data-intercept``, so tests and downstream tooling read the
numbers straight out of the document instead of measuring pixels.
"""

from __future__ import annotations

from typing import Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

from .learn.stats import TrendLine
from .series import DailySeries

PLOT_WIDTH = 640.0
PLOT_HEIGHT = 200.0
MARGIN_LEFT = 50.0
MARGIN_TOP = 30.0
MARGIN_BOTTOM = 40.0
MARGIN_RIGHT = 20.0

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)


def _num(value: float) -> str:
    return repr(float(value))


def _svg_open(kind: str, title: str, unit: str) -> list[str]:
    width = MARGIN_LEFT + PLOT_WIDTH + MARGIN_RIGHT
    height = MARGIN_TOP + PLOT_HEIGHT + MARGIN_BOTTOM
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" '
            f'height="{_num(height)}" viewBox="0 0 {_num(width)} {_num(height)}" '
            f'data-kind={quoteattr(kind)} data-unit={quoteattr(unit)} '
            f'data-plot-height="{_num(PLOT_HEIGHT)}">'
        ),
        f"<title>{escape(title)}</title>",
        (
            f'<rect x="{_num(MARGIN_LEFT)}" y="{_num(MARGIN_TOP)}" '
            f'width="{_num(PLOT_WIDTH)}" height="{_num(PLOT_HEIGHT)}" '
            'fill="none" stroke="#999" stroke-width="1"/>'
        ),
    ]


def _day_geometry(n_days: int) -> tuple[float, float]:
    slot = PLOT_WIDTH / n_days
    bar_width = slot * 0.8
    return slot, bar_width


def render_stacked_bars(series_list: Sequence[DailySeries], title: str) -> str:
    """Stacked per-day segments; full plot height equals the unit's total
    (100 for percent, 1 for fraction)."""
    if not series_list:
        raise ValueError("no series to render")
    lengths = {len(s) for s in series_list}
    if len(lengths) != 1:
        raise ValueError("all series must have equal length")
    units = {s.unit for s in series_list}
    if len(units) != 1:
        raise ValueError("all series must share a unit")
    unit = series_list[0].unit
    full_scale = 100.0 if unit == "percent" else 1.0
    n_days = lengths.pop()
    if n_days == 0:
        raise ValueError("series are empty")
    slot, bar_width = _day_geometry(n_days)
    parts = _svg_open("stacked_bars", title, unit)
    parts.append('<g class="bars">')
    for day in range(n_days):
        x = MARGIN_LEFT + day * slot + (slot - bar_width) / 2.0
        cumulative = 0.0
        for s_idx, series in enumerate(series_list):
            value = series.values[day]
            seg = value / full_scale * PLOT_HEIGHT
            if seg <= 0.0:
                continue
            y = MARGIN_TOP + PLOT_HEIGHT - cumulative - seg
            cumulative += seg
            color = PALETTE[s_idx % len(PALETTE)]
            parts.append(
                f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num(bar_width)}" '
                f'height="{_num(seg)}" fill="{color}" '
                f"data-series={quoteattr(series.name)} "
                f'data-day="{day}" data-value="{_num(value)}"/>'
            )
    parts.append("</g>")
    parts.extend(_legend(series_list))
    parts.append("</svg>")
    return "\n".join(parts)


def render_bars_with_trend(
    series: DailySeries,
    trend: TrendLine,
    title: str,
    mean_value: Optional[float] = None,
) -> str:
    """Bar chart with a least-squares line overlay (and optional mean line)."""
    n_days = len(series)
    if n_days == 0:
        raise ValueError("series is empty")
    top = max(series.values)
    if mean_value is not None:
        top = max(top, mean_value)
    top = max(top, trend.intercept, trend.value_at(n_days - 1), 1e-12)
    slot, bar_width = _day_geometry(n_days)

    def y_of(value: float) -> float:
        clipped = min(max(value, 0.0), top)
        return MARGIN_TOP + PLOT_HEIGHT - clipped / top * PLOT_HEIGHT

    parts = _svg_open("bars_with_trend", title, series.unit)
    parts.append('<g class="bars">')
    for day, value in enumerate(series.values):
        x = MARGIN_LEFT + day * slot + (slot - bar_width) / 2.0
        h = value / top * PLOT_HEIGHT
        parts.append(
            f'<rect x="{_num(x)}" y="{_num(MARGIN_TOP + PLOT_HEIGHT - h)}" '
            f'width="{_num(bar_width)}" height="{_num(h)}" '
            f'fill="{PALETTE[0]}" data-series={quoteattr(series.name)} '
            f'data-day="{day}" data-value="{_num(value)}"/>'
        )
    parts.append("</g>")
    x_first = MARGIN_LEFT + slot / 2.0
    x_last = MARGIN_LEFT + (n_days - 1) * slot + slot / 2.0
    parts.append(
        f'<line class="trend" x1="{_num(x_first)}" y1="{_num(y_of(trend.intercept))}" '
        f'x2="{_num(x_last)}" y2="{_num(y_of(trend.value_at(n_days - 1)))}" '
        f'stroke="#7b3294" stroke-width="2" '
        f'data-slope="{_num(trend.slope)}" data-intercept="{_num(trend.intercept)}"/>'
    )
    if mean_value is not None:
        y_mean = y_of(mean_value)
        parts.append(
            f'<line class="mean" x1="{_num(MARGIN_LEFT)}" y1="{_num(y_mean)}" '
            f'x2="{_num(MARGIN_LEFT + PLOT_WIDTH)}" y2="{_num(y_mean)}" '
            f'stroke="#333" stroke-dasharray="6,4" stroke-width="1" '
            f'data-mean="{_num(mean_value)}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def _legend(series_list: Sequence[DailySeries]) -> list[str]:
    parts = ['<g class="legend" font-size="10">']
    y = MARGIN_TOP + PLOT_HEIGHT + 14.0
    x = MARGIN_LEFT
    for idx, series in enumerate(series_list):
        color = PALETTE[idx % len(PALETTE)]
        parts.append(
            f'<rect x="{_num(x)}" y="{_num(y - 8)}" width="8" height="8" fill="{color}"/>'
        )
        label = escape(series.name)
        parts.append(f'<text x="{_num(x + 11)}" y="{_num(y)}">{label}</text>')
        x += 11 + 6.2 * len(series.name) + 12
        if x > MARGIN_LEFT + PLOT_WIDTH - 60 and idx + 1 < len(series_list):
            x = MARGIN_LEFT
            y += 13.0
    parts.append("</g>")
    return parts

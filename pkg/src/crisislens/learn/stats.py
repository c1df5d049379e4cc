"""Pearson correlation with t-test p-values, and least-squares trend lines.

The two-sided p-value for a sample correlation r over n points uses the
statistic t = r * sqrt((n-2) / (1-r^2)), Student-t distributed with n-2
degrees of freedom under the null.  The tail mass is evaluated through the
regularized incomplete beta function I_x(a, b), computed here with the
standard continued-fraction expansion (modified Lentz iteration), so the
package has no runtime dependency on a stats library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

_MAX_CF_ITERATIONS = 300
_CF_EPS = 1e-15
_TINY = 1e-300


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p: float
    n: int


@dataclass(frozen=True)
class TrendLine:
    slope: float
    intercept: float

    def value_at(self, t: float) -> float:
        return self.slope * t + self.intercept


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_CF_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a} b={b} x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # Use the expansion on whichever side converges fast.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: int) -> float:
    """P(|T| >= |t|) for T ~ Student-t with df degrees of freedom."""
    if df < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if math.isinf(t):
        return 0.0
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Sample Pearson r with a two-sided t-test p-value.

    Raises ``ValueError`` for n < 3 or for a constant input sequence, where
    the correlation is undefined.
    """
    if len(x) != len(y):
        raise ValueError("sequences must have equal length")
    n = len(x)
    if n < 3:
        raise ValueError("pearson requires at least 3 points")
    if min(x) == max(x) or min(y) == max(y):
        raise ValueError("correlation undefined for a constant sequence")
    mean_x = math.fsum(x) / n
    mean_y = math.fsum(y) / n
    sxx = math.fsum((xi - mean_x) ** 2 for xi in x)
    syy = math.fsum((yi - mean_y) ** 2 for yi in y)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("correlation undefined for a constant sequence")
    sxy = math.fsum((xi - mean_x) * (yi - mean_y) for xi, yi in zip(x, y))
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    df = n - 2
    denom = 1.0 - r * r
    if denom <= 0.0:
        p = 0.0
    else:
        t = r * math.sqrt(df / denom)
        p = student_t_two_sided_p(t, df)
    return CorrelationResult(r=r, p=p, n=n)


def ols_trend(values: Sequence[float]) -> TrendLine:
    """Least-squares line over day indices 0..n-1."""
    n = len(values)
    if n < 2:
        raise ValueError("trend needs at least 2 points")
    mean_t = (n - 1) / 2.0
    mean_y = math.fsum(values) / n
    stt = math.fsum((i - mean_t) ** 2 for i in range(n))
    sty = math.fsum((i - mean_t) * (v - mean_y) for i, v in enumerate(values))
    slope = sty / stt
    intercept = mean_y - slope * mean_t
    if not (math.isfinite(slope) and math.isfinite(intercept)):
        raise ValueError("trend is not finite")
    return TrendLine(slope=slope, intercept=intercept)

"""Summary statistics, speedup tables and Welch's t-test."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from scipy import stats as _sps


@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean: float
    median: float
    std: float
    ci95: float
    q1: float
    q3: float
    cap_hits: int

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1


def summarize(times) -> SummaryStats:
    """Statistics over finite times; ``inf`` (cap hits) are only counted."""
    finite = sorted(float(t) for t in times if t is not None and t != math.inf)
    caps = sum(1 for t in times if t == math.inf)
    n = len(finite)
    if n == 0:
        nan = math.nan
        return SummaryStats(0, nan, nan, nan, nan, nan, nan, caps)
    mean = math.fsum(finite) / n
    std = statistics.stdev(finite) if n > 1 else 0.0
    if n > 1:
        q1, _, q3 = statistics.quantiles(finite, n=4, method="inclusive")
    else:
        q1 = q3 = finite[0]
    return SummaryStats(n, mean, statistics.median(finite), std, 1.96 * std / math.sqrt(n), q1, q3, caps)


def speedup_table(means) -> list[tuple[int, float, float]]:
    """Rows ``(mu, speedup, efficiency)`` from a mapping ``mu -> mean time``.

    Values may also be :class:`SummaryStats`.
    """
    vals = {int(mu): (v.mean if isinstance(v, SummaryStats) else float(v)) for mu, v in means.items()}
    if 1 not in vals or not math.isfinite(vals[1]):
        raise ValueError("speedup needs a baseline mu=1 with at least one uncapped run")
    base = vals[1]
    rows = []
    for mu in sorted(vals):
        sp = base / vals[mu] if vals[mu] > 0 else math.inf
        rows.append((mu, sp, sp / mu))
    return rows


def welch_less(a, b) -> tuple[float, float, float]:
    """One-sided Welch test of ``mean(a) < mean(b)``: ``(t, df, p)``.

    The statistic and the Welch-Satterthwaite degrees of freedom are
    computed here; scipy only supplies the Student t cdf.
    """
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise ValueError("each sample needs at least two values")
    ma, mb = statistics.fmean(a), statistics.fmean(b)
    va, vb = statistics.variance(a), statistics.variance(b)
    qa, qb = va / na, vb / nb
    se2 = qa + qb
    if se2 == 0:
        return (-math.inf if ma < mb else math.inf), math.inf, (0.0 if ma < mb else 1.0)
    t = (ma - mb) / math.sqrt(se2)
    df = se2 * se2 / (qa * qa / (na - 1) + qb * qb / (nb - 1))
    return t, df, float(_sps.t.cdf(t, df))

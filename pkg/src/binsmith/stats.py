"""Statistical base rules producing raw (pre-legibility) binnings.

Width rules (Sturges, Freedman-Diaconis, Scott) plus the four classic
choropleth classifiers: equal interval, quantile, Jenks natural breaks and
mean/standard-deviation breaks.
"""

from __future__ import annotations

import math
import warnings
from decimal import Decimal

from .core import BinScheme, BinningWarning, Provenance, as_decimal
from .ingest import SeriesProfile, quantile

SCOTT_FACTOR = Decimal("3.49")


class DegenerateSpreadError(ValueError):
    """Spread statistic is zero, so a width rule cannot apply."""


def sturges_k(n: int) -> int:
    """Bin count ceil(log2(n)) + 1."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return math.ceil(math.log2(n)) + 1


def _cube_root(n: int) -> Decimal:
    return Decimal(n) ** (Decimal(1) / 3)


def fd_width(profile: SeriesProfile) -> Decimal:
    """Freedman-Diaconis width 2 * IQR * n^(-1/3)."""
    if profile.n < 2:
        raise ValueError(f"need n >= 2, got {profile.n}")
    if profile.iqr == 0:
        raise DegenerateSpreadError("IQR is zero; fall back to Scott's rule")
    return 2 * profile.iqr / _cube_root(profile.n)


def scott_width(profile: SeriesProfile) -> Decimal:
    """Scott's width 3.49 * sd * n^(-1/3)."""
    if profile.n < 2:
        raise ValueError(f"need n >= 2, got {profile.n}")
    if profile.sd == 0:
        raise DegenerateSpreadError("sd is zero; no width rule applies")
    return SCOTT_FACTOR * profile.sd / _cube_root(profile.n)


def equal_interval(profile: SeriesProfile, k: int) -> BinScheme:
    """k equal-width bins spanning [min, max]."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if profile.min == profile.max:
        raise DegenerateSpreadError("min equals max; no interval to divide")
    span = profile.max - profile.min
    edges = [profile.min + span * i / k for i in range(k + 1)]
    return BinScheme(edges=tuple(edges), provenance=Provenance.default("equal_interval"))


def quantile_breaks(values: list[Decimal], k: int) -> BinScheme:
    """Interior edges at R-7 quantiles i/k; tied quantiles are deduplicated.

    With heavy ties the scheme can come back with fewer than k bins; a
    BinningWarning flags the reduction.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    values = [as_decimal(v) for v in values]
    if len(values) < k:
        raise ValueError(f"need at least k={k} values, got {len(values)}")
    ordered = sorted(values)
    edges = [ordered[0]]
    for i in range(1, k):
        q = quantile(ordered, Decimal(i) / k)
        if q > edges[-1]:
            edges.append(q)
    if ordered[-1] > edges[-1]:
        edges.append(ordered[-1])
    else:
        # All interior quantiles collapsed onto the maximum; back out the last
        # duplicate so the scheme still has two distinct edges.
        if len(edges) < 2:
            raise DegenerateSpreadError("all values identical; no quantile bins")
    if len(edges) - 1 < k:
        warnings.warn(
            f"tied quantiles reduced {k} bins to {len(edges) - 1}", BinningWarning
        )
    return BinScheme(edges=tuple(edges), provenance=Provenance.default("quantile"))


def _class_sse(prefix: list[float], prefix_sq: list[float], lo: int, hi: int) -> float:
    """Within-class sum of squared deviations for sorted slice [lo, hi)."""
    m = hi - lo
    s = prefix[hi] - prefix[lo]
    sq = prefix_sq[hi] - prefix_sq[lo]
    return sq - s * s / m


def _jenks_partition(sorted_floats: list[float], k: int) -> tuple[list[int], float]:
    """Fisher exact dynamic program, O(k * n^2).

    Returns the class start indices (length k, first is 0) and the minimal
    total within-class sum of squared deviations.  Ties break toward the
    earliest split positions.
    """
    n = len(sorted_floats)
    prefix = [0.0] * (n + 1)
    prefix_sq = [0.0] * (n + 1)
    for i, x in enumerate(sorted_floats):
        prefix[i + 1] = prefix[i] + x
        prefix_sq[i + 1] = prefix_sq[i] + x * x

    # cost[j][i]: minimal SSE splitting the first i values into j classes.
    # start[j][i]: start index of the last class in that optimum.
    inf = math.inf
    cost = [[inf] * (n + 1) for _ in range(k + 1)]
    start = [[0] * (n + 1) for _ in range(k + 1)]
    cost[0][0] = 0.0
    for j in range(1, k + 1):
        for i in range(j, n + 1):
            best = inf
            best_s = j - 1
            # Last class covers [s, i); scanning s upward keeps the earliest
            # split on ties via strict improvement.
            for s in range(j - 1, i):
                if cost[j - 1][s] == inf:
                    continue
                c = cost[j - 1][s] + _class_sse(prefix, prefix_sq, s, i)
                if c < best:
                    best = c
                    best_s = s
            cost[j][i] = best
            start[j][i] = best_s

    starts = [0] * k
    i = n
    for j in range(k, 0, -1):
        s = start[j][i]
        starts[j - 1] = s
        i = s
    return starts, cost[k][n]


def jenks_breaks(values: list[Decimal], k: int) -> BinScheme:
    """Jenks natural breaks: k contiguous classes of the sorted values
    minimizing total within-class squared deviation from class means.

    Edges sit at the lower value of each class, so bin i is [first value of
    class i, first value of class i+1) and the last bin tops out at the data
    maximum.  If fewer than k distinct values exist, k is reduced with a
    BinningWarning.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if not values:
        raise ValueError("no values")
    ordered = sorted(as_decimal(v) for v in values)
    distinct = len(set(ordered))
    if distinct < 2:
        raise DegenerateSpreadError("need at least 2 distinct values")
    if distinct < k:
        warnings.warn(f"only {distinct} distinct values; reducing k={k}", BinningWarning)
        k = distinct
    starts, _ = _jenks_partition([float(v) for v in ordered], k)
    edges = [ordered[s] for s in starts] + [ordered[-1]]
    # Duplicate-heavy data can put consecutive class starts on equal values.
    deduped = [edges[0]]
    for e in edges[1:]:
        if e > deduped[-1]:
            deduped.append(e)
    return BinScheme(edges=tuple(deduped), provenance=Provenance.default("jenks"))


def jenks_objective(values: list[Decimal], k: int) -> float:
    """Minimal total within-class SSE for k classes (testing/benchmark hook)."""
    ordered = sorted(float(as_decimal(v)) for v in values)
    _, cost = _jenks_partition(ordered, k)
    return cost


def stddev_breaks(profile: SeriesProfile, half_widths: bool = False) -> BinScheme:
    """Edges at mean +- j*sd (or j*sd/2) clipped to the data extent.

    The extent itself always contributes the outermost edges so coverage
    holds even when min/max are off the sd lattice.
    """
    if profile.sd == 0:
        raise DegenerateSpreadError("sd is zero")
    step = profile.sd / 2 if half_widths else profile.sd
    interior = []
    j = math.floor(float((profile.min - profile.mean) / step)) + 1
    while True:
        edge = profile.mean + j * step
        if edge >= profile.max:
            break
        if edge > profile.min:
            interior.append(edge)
        j += 1
    edges = [profile.min] + interior + [profile.max]
    return BinScheme(edges=tuple(edges), provenance=Provenance.default("stddev"))

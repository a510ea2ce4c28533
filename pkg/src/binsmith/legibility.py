"""Legibility refinement: turn a raw statistical width into human-legible bins.

The pipeline rounds widths to nice numbers, snaps edges to the data grain,
anchors boundaries on multiples of the step (so zero never lands inside a
bin), caps the bin count per purpose, and condenses sparse tails into
open-ended bins.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, ROUND_CEILING, ROUND_FLOOR

from .core import (
    BinCounts,
    BinScheme,
    Grain,
    LabelFormat,
    Provenance,
    as_decimal,
    assign,
    decimal_to_number,
    label_bins,
)
from .ingest import SeriesProfile
from .stats import fd_width, scott_width, sturges_k

DEFAULT_MULTIPLIERS = (Decimal(1), Decimal(2), Decimal("2.5"), Decimal(5))
PURPOSES = ("histogram", "color_ramp")

# Stop escalating nice-candidate decades past any representable grain.
_MAX_DECADES = 40


@dataclass(frozen=True)
class LegibilityConfig:
    """Tunable knobs for the refinement passes.

    Bin caps come from common tooling defaults (20 for histograms, 12 for
    stepped color ramps).  Tail condensation merges runs of at least
    ``tail_min_run`` outermost bins that each hold at most ``tail_fraction``
    of the values.
    """

    max_bins_color: int = 12
    max_bins_histogram: int = 20
    nice_multipliers: tuple[Decimal, ...] = DEFAULT_MULTIPLIERS
    tail_fraction: Decimal = Decimal("0.01")
    tail_min_run: int = 2

    def __post_init__(self):
        object.__setattr__(self, "nice_multipliers", tuple(as_decimal(m) for m in self.nice_multipliers))
        object.__setattr__(self, "tail_fraction", as_decimal(self.tail_fraction))
        if self.max_bins_color < 1 or self.max_bins_histogram < 1:
            raise ValueError("bin caps must be at least 1")
        if not all(0 < m <= 10 for m in self.nice_multipliers):
            raise ValueError("nice multipliers must lie in (0, 10]")
        if not (0 <= self.tail_fraction < Decimal("0.5")):
            raise ValueError("tail_fraction must lie in [0, 0.5)")

    def max_bins(self, purpose: str) -> int:
        if purpose not in PURPOSES:
            raise ValueError(f"unknown purpose {purpose!r}")
        return self.max_bins_color if purpose == "color_ramp" else self.max_bins_histogram

    def to_dict(self) -> dict:
        return {
            "max_bins_color": self.max_bins_color,
            "max_bins_histogram": self.max_bins_histogram,
            "nice_multipliers": [decimal_to_number(m) for m in self.nice_multipliers],
            "tail_fraction": decimal_to_number(self.tail_fraction),
            "tail_min_run": self.tail_min_run,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LegibilityConfig":
        base = cls()
        return cls(
            max_bins_color=int(data.get("max_bins_color", base.max_bins_color)),
            max_bins_histogram=int(data.get("max_bins_histogram", base.max_bins_histogram)),
            nice_multipliers=tuple(as_decimal(m) for m in data.get("nice_multipliers", base.nice_multipliers)),
            tail_fraction=as_decimal(data.get("tail_fraction", base.tail_fraction)),
            tail_min_run=int(data.get("tail_min_run", base.tail_min_run)),
        )


def _nice_candidates(floor_from: Decimal, multipliers: tuple[Decimal, ...]):
    """Yield nice numbers m * 10^k in increasing order, starting one decade
    below ``floor_from``'s leading digit."""
    mults = sorted(multipliers)
    k = floor_from.adjusted() - 1
    for kk in range(k, k + _MAX_DECADES):
        for m in mults:
            yield m.scaleb(kk)


def nice_step(raw_width, grain: Grain | None = None,
              multipliers: tuple[Decimal, ...] = DEFAULT_MULTIPLIERS) -> Decimal:
    """Smallest nice number (m * 10^k) at or above ``raw_width`` that is an
    exact multiple of the grain.

    9 becomes 10, 0.9 becomes 1.0, 4 becomes 5 at integer grain.  Multipliers
    that cannot hit the grain (2.5 at grain 1) escalate to the next decade.
    Grains with no nice multiple at all fall back to the smallest grain
    multiple covering the width.
    """
    w = as_decimal(raw_width)
    if w <= 0:
        raise ValueError(f"width must be positive, got {w}")
    for s in _nice_candidates(w, multipliers):
        if s >= w and (grain is None or grain.is_multiple(s)):
            return s
    return max(grain.ceil(w), grain.step)


def _next_nice(step: Decimal, grain: Grain | None,
               multipliers: tuple[Decimal, ...]) -> Decimal:
    """Smallest valid nice step strictly greater than ``step``."""
    for s in _nice_candidates(step, multipliers):
        if s > step and (grain is None or grain.is_multiple(s)):
            return s
    # Doubling preserves grain multiplicity and keeps growth geometric.
    return step * 2


def _anchored_span(step: Decimal, profile: SeriesProfile) -> tuple[Decimal, Decimal]:
    first = (profile.min / step).to_integral_value(rounding=ROUND_FLOOR) * step
    last = (profile.max / step).to_integral_value(rounding=ROUND_CEILING) * step
    if last == first:
        last = first + step
    return first, last


def _anchored_bin_count(step: Decimal, profile: SeriesProfile) -> int:
    first, last = _anchored_span(step, profile)
    return int((last - first) / step)


def anchor_edges(step, profile: SeriesProfile) -> BinScheme:
    """Edges at consecutive multiples of the step covering [min, max].

    Multiples of the step always include 0, so 0 can never fall inside a bin
    when the data straddles it.  The last edge may equal the maximum; the
    closed last bin still captures it.
    """
    s = as_decimal(step)
    if s <= 0:
        raise ValueError(f"step must be positive, got {s}")
    first, last = _anchored_span(s, profile)
    n = int((last - first) / s)
    edges = tuple(first + i * s for i in range(n + 1))
    return BinScheme(edges=edges, provenance=Provenance.default("anchored"))


def cap_bins(step, profile: SeriesProfile, max_bins: int,
             grain: Grain | None = None,
             multipliers: tuple[Decimal, ...] = DEFAULT_MULTIPLIERS) -> Decimal:
    """Escalate the step along the nice ladder until the anchored scheme
    spans the extent in at most ``max_bins`` bins.

    Data straddling zero can never anchor into a single bin (the zero edge
    splits it), so escalation bottoms out at two bins in that case.
    """
    if max_bins < 1:
        raise ValueError(f"max_bins must be at least 1, got {max_bins}")
    floor_bins = 2 if profile.min < 0 < profile.max else 1
    s = as_decimal(step)
    while True:
        count = _anchored_bin_count(s, profile)
        if count <= max_bins or count <= floor_bins:
            return s
        s = _next_nice(s, grain, multipliers)


def round_to_grain(scheme: BinScheme, grain: Grain) -> BinScheme:
    """Snap every edge to the nearest grain multiple (half away from zero).

    Collided edges merge; if snapping shrank coverage of the original span,
    the outermost edge is pushed back out to the next grain multiple.
    """
    snapped = sorted({grain.quantize(e) for e in scheme.edges})
    lo, hi = scheme.edges[0], scheme.edges[-1]
    if snapped[0] > lo:
        widened = grain.floor(lo)
        if len(snapped) == 1:
            snapped.insert(0, widened)
        else:
            snapped[0] = widened
    if snapped[-1] < hi:
        widened = grain.ceil(hi)
        if len(snapped) == 1:
            snapped.append(widened)
        else:
            snapped[-1] = widened
    out = BinScheme(
        edges=tuple(snapped),
        open_low=scheme.open_low,
        open_high=scheme.open_high,
        provenance=scheme.provenance,
    )
    return label_bins(out, LabelFormat(grain))


def _sparse_run(flags: list[bool], from_high: bool) -> int:
    run = 0
    for f in reversed(flags) if from_high else flags:
        if not f:
            break
        run += 1
    return run


def condense_tails(scheme: BinScheme, counts: BinCounts, cfg: LegibilityConfig | None = None) -> BinScheme:
    """Merge sparse outermost bin runs into single open-ended bins.

    A run qualifies when it spans at least ``tail_min_run`` consecutive end
    bins, each holding at most ``tail_fraction`` of all values.  Interior
    bins are untouched, and a zero boundary is never merged away: positive
    and negative values keep their dividing edge.
    """
    cfg = cfg or LegibilityConfig()
    n = counts.total
    if n == 0:
        return scheme
    edges = list(scheme.edges)
    nbins = scheme.bin_count
    threshold = cfg.tail_fraction * n
    flags = [c <= threshold for c in counts.counts]
    r_high = _sparse_run(flags, from_high=True)
    r_low = _sparse_run(flags, from_high=False)
    # Leave at least one bin outside the merged tails.
    while r_low + r_high > nbins - 1:
        if r_low >= r_high:
            r_low -= 1
        else:
            r_high -= 1
    # Data straddles zero exactly when 0 is a strictly interior edge; runs
    # then stop at that edge so the merged bin starts or ends at 0.
    zero = Decimal(0)
    if zero in edges:
        idx0 = edges.index(zero)
        if 0 < idx0 < nbins:
            r_low = min(r_low, idx0)
            r_high = min(r_high, nbins - idx0)
    open_low, open_high = scheme.open_low, scheme.open_high
    merged = False
    if r_high >= cfg.tail_min_run:
        edges = edges[: nbins - r_high + 2]
        open_high = True
        merged = True
    if r_low >= cfg.tail_min_run:
        edges = [edges[0]] + edges[r_low:]
        open_low = True
        merged = True
    if not merged:
        return scheme
    return BinScheme(
        edges=tuple(edges),
        open_low=open_low,
        open_high=open_high,
        provenance=scheme.provenance,
    )


def default_bins(profile: SeriesProfile, values: list[Decimal],
                 purpose: str = "histogram",
                 cfg: LegibilityConfig | None = None) -> BinScheme:
    """Compute human-legible default bins for a column.

    Width comes from Freedman-Diaconis, falling back to Scott when the IQR
    degenerates, then to a Sturges count; the width is then floored at the
    grain, rounded to a nice step, escalated until the bin cap holds,
    anchored on step multiples, and sparse tails are condensed.
    """
    cfg = cfg or LegibilityConfig()
    max_bins = cfg.max_bins(purpose)
    grain = profile.grain
    if profile.n >= 2 and profile.iqr > 0:
        width, rule = fd_width(profile), "fd"
    elif profile.n >= 2 and profile.sd > 0:
        width, rule = scott_width(profile), "scott"
    else:
        rule = "sturges"
        k = sturges_k(profile.n)
        if profile.max > profile.min:
            width = (profile.max - profile.min) / k
        else:
            width = grain.step
    width = max(width, grain.step)
    step = nice_step(width, grain, cfg.nice_multipliers)
    step = cap_bins(step, profile, max_bins, grain, cfg.nice_multipliers)
    scheme = anchor_edges(step, profile).with_provenance(Provenance.default(rule))
    scheme = condense_tails(scheme, assign(values, scheme), cfg)
    return label_bins(scheme, LabelFormat(grain))

"""Core domain types: grains, bin schemes, bin counts, labelling.

All numeric boundary values are ``decimal.Decimal`` so that edges and grains
are scaled integers (m * 10^k) and multiplicity checks are exact.  Floating
point would make "every edge is a multiple of the grain" an untestable
invariant.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field, replace
from decimal import Decimal, ROUND_HALF_UP, localcontext
from typing import Iterable, Sequence

# En dash separates inclusive range labels ("20-29" style, rendered "20–29").
RANGE_SEP = "–"
GE_SIGN = "≥"

GRAIN_MANTISSA_MAX = 10**9
GRAIN_EXP_MIN = -9
GRAIN_EXP_MAX = 12


class InvalidSchemeError(ValueError):
    """A bin scheme violates its structural invariants."""


class BinningWarning(UserWarning):
    """A binning operation had to adjust its inputs (fewer bins, reduced k)."""


def as_decimal(value) -> Decimal:
    """Coerce ints, floats and strings to Decimal.

    Floats go through ``repr`` so the shortest round-trip literal is used
    (0.1 becomes Decimal("0.1"), not the 55-digit binary expansion).
    """
    if isinstance(value, Decimal):
        return value
    if isinstance(value, float):
        return Decimal(repr(value))
    return Decimal(value)


def _grain_parts(step: Decimal) -> tuple[int, int]:
    """Decompose a step into (mantissa, exponent) with minimal mantissa."""
    norm = step.normalize()
    sign, digits, exp = norm.as_tuple()
    mantissa = int("".join(str(d) for d in digits))
    return mantissa, exp


@dataclass(frozen=True)
class Grain:
    """Smallest meaningful increment of a data column.

    1 for integer data, 0.01 for cents, 1000 for round thousands.  The step
    must be exactly representable as m * 10^k with m in [1, 10^9] and k in
    [-9, 12].
    """

    step: Decimal

    def __post_init__(self):
        step = as_decimal(self.step)
        object.__setattr__(self, "step", step)
        if step <= 0:
            raise ValueError(f"grain step must be positive, got {step}")
        mantissa, exp = _grain_parts(step)
        if exp > GRAIN_EXP_MAX:
            # Rewrite with k pinned at the max exponent.
            mantissa *= 10 ** (exp - GRAIN_EXP_MAX)
            exp = GRAIN_EXP_MAX
        if not (1 <= mantissa <= GRAIN_MANTISSA_MAX) or exp < GRAIN_EXP_MIN:
            raise ValueError(f"grain step {step} outside m*10^k bounds")

    @property
    def decimals(self) -> int:
        """Display precision: fractional digits the step carries."""
        _, exp = _grain_parts(self.step)
        return max(0, -exp)

    def _ratio(self, value: Decimal) -> tuple[int, int]:
        """value / step as an exact integer fraction (numerator, denominator)."""
        vs, vd, ve = as_decimal(value).as_tuple()
        _, sd, se = self.step.as_tuple()
        a = int("".join(map(str, vd))) * (-1 if vs else 1)
        b = int("".join(map(str, sd)))
        shift = ve - se
        if shift >= 0:
            return a * 10**shift, b
        return a, b * 10**-shift

    def _times_step(self, q: int) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = 60
            return Decimal(q) * self.step

    def is_multiple(self, value: Decimal) -> bool:
        n, d = self._ratio(value)
        return n % d == 0

    def quantize(self, value: Decimal) -> Decimal:
        """Snap a value to the nearest multiple of the step, half away from zero."""
        n, d = self._ratio(value)
        sign = -1 if n < 0 else 1
        q = sign * ((2 * abs(n) + d) // (2 * d))
        return self._times_step(q)

    def floor(self, value: Decimal) -> Decimal:
        n, d = self._ratio(value)
        return self._times_step(n // d)

    def ceil(self, value: Decimal) -> Decimal:
        n, d = self._ratio(value)
        return self._times_step(-((-n) // d))


@dataclass(frozen=True)
class Provenance:
    kind: str  # "semantic" | "default" | "manual"
    ref: str = ""

    KINDS = ("semantic", "default", "manual")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown provenance kind {self.kind!r}")

    @classmethod
    def semantic(cls, concept_id: str) -> "Provenance":
        return cls("semantic", concept_id)

    @classmethod
    def default(cls, rule_id: str) -> "Provenance":
        return cls("default", rule_id)

    @classmethod
    def manual(cls) -> "Provenance":
        return cls("manual", "")


@dataclass(frozen=True)
class LabelFormat:
    """How bin labels are rendered.

    ``inclusive`` prints grain-quantized ranges with inclusive upper bounds
    ("20–29" for edges 20/30 at grain 1).  ``interval`` prints half-open
    ranges ("[0.5, 3.7)").  ``auto`` picks inclusive when every edge is a
    multiple of the grain, interval otherwise.
    """

    grain: Grain = field(default_factory=lambda: Grain(Decimal(1)))
    style: str = "auto"

    def __post_init__(self):
        if self.style not in ("auto", "inclusive", "interval"):
            raise ValueError(f"unknown label style {self.style!r}")


@dataclass(frozen=True)
class BinScheme:
    """Ordered bin edges with open-ended tail flags, labels and provenance.

    Bin i covers [edges[i], edges[i+1]).  If ``open_low`` the first bin also
    covers everything below edges[1]; if ``open_high`` the last bin also
    covers everything at or above edges[-2].  When ``open_high`` is false,
    values equal to the final edge still belong to the last bin so the data
    maximum is never lost.
    """

    edges: tuple[Decimal, ...]
    open_low: bool = False
    open_high: bool = False
    labels: tuple[str, ...] = ()
    provenance: Provenance = field(default_factory=Provenance.manual)

    def __post_init__(self):
        edges = tuple(as_decimal(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if len(edges) < 2:
            raise InvalidSchemeError(f"need at least 2 edges, got {len(edges)}")
        for lo, hi in zip(edges, edges[1:]):
            if not lo < hi:
                raise InvalidSchemeError(f"edges not strictly increasing: {lo} >= {hi}")
        labels = tuple(self.labels) if self.labels else _interval_labels(edges, self.open_low, self.open_high)
        object.__setattr__(self, "labels", labels)
        if len(labels) != self.bin_count:
            raise InvalidSchemeError(
                f"{len(labels)} labels for {self.bin_count} bins"
            )

    @property
    def bin_count(self) -> int:
        return len(self.edges) - 1

    def bin_of(self, value: Decimal) -> int | None:
        """Index of the bin holding ``value``, or None for below/above.

        None is only possible on a closed side; open tails absorb everything.
        """
        v = as_decimal(value)
        edges = self.edges
        if v < edges[0]:
            return 0 if self.open_low else None
        if v >= edges[-1]:
            if v == edges[-1] or self.open_high:
                return self.bin_count - 1
            return None
        return bisect_right(edges, v) - 1

    def with_provenance(self, provenance: Provenance) -> "BinScheme":
        return replace(self, provenance=provenance)

    def widths(self) -> tuple[Decimal, ...]:
        return tuple(hi - lo for lo, hi in zip(self.edges, self.edges[1:]))


@dataclass(frozen=True)
class BinCounts:
    """Per-bin value counts plus out-of-range tallies on closed sides."""

    counts: tuple[int, ...]
    below: int = 0
    above: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts) + self.below + self.above


def assign(values: Iterable[Decimal], scheme: BinScheme) -> BinCounts:
    """Count each value into exactly one of {a bin, below, above}.

    Half-open [lo, hi) semantics; the final edge belongs to the last bin on a
    closed top so the maximum is never dropped.  ``below``/``above`` count
    values outside a closed low/high side.
    """
    counts = [0] * scheme.bin_count
    below = above = 0
    for v in values:
        i = scheme.bin_of(v)
        if i is None:
            if as_decimal(v) < scheme.edges[0]:
                below += 1
            else:
                above += 1
        else:
            counts[i] += 1
    return BinCounts(counts=tuple(counts), below=below, above=above)


def _format_at(value: Decimal, decimals: int) -> str:
    """Fixed-point rendering at exactly ``decimals`` fractional digits."""
    quantum = Decimal(1).scaleb(-decimals)
    with localcontext() as ctx:
        ctx.prec = 60
        return format(value.quantize(quantum), "f")


def _format_loose(value: Decimal, decimals: int) -> str:
    """Fixed-point rendering at up to ``decimals`` digits, zeros trimmed."""
    quantum = Decimal(1).scaleb(-decimals)
    with localcontext() as ctx:
        ctx.prec = 60
        q = value.quantize(quantum, rounding=ROUND_HALF_UP)
    return format(q.normalize(), "f")


def _interval_labels(edges: Sequence[Decimal], open_low: bool, open_high: bool) -> tuple[str, ...]:
    """Plain half-open interval labels, used before grain-aware labelling."""
    labels = []
    n = len(edges) - 1
    fmt = lambda e: format(e, "f")
    for i in range(n):
        if i == 0 and open_low:
            labels.append(f"< {fmt(edges[1])}")
        elif i == n - 1 and open_high:
            labels.append(f"{GE_SIGN} {fmt(edges[-2])}")
        else:
            labels.append(f"[{fmt(edges[i])}, {fmt(edges[i + 1])})")
    return tuple(labels)


def label_bins(scheme: BinScheme, fmt: LabelFormat) -> BinScheme:
    """Regenerate display labels; never touches edges, idempotent.

    Inclusive style prints the upper bound as edge minus one grain step
    ("20–29" for edges 20/30 at grain 1), at the grain's decimal precision.
    Interval style keeps the half-open "[a, b)" form for edges that sit off
    the grain.  Open tails render as "< x" / "≥ x".
    """
    grain = fmt.grain
    style = fmt.style
    if style == "auto":
        style = "inclusive" if all(grain.is_multiple(e) for e in scheme.edges) else "interval"
    decimals = grain.decimals
    # Off-grain edges get two spare digits so they are not rounded away.
    loose = decimals + 2
    edges = scheme.edges
    n = scheme.bin_count
    labels = []
    for i in range(n):
        if i == 0 and scheme.open_low:
            bound = _format_at(edges[1], decimals) if style == "inclusive" else _format_loose(edges[1], loose)
            labels.append(f"< {bound}")
        elif i == n - 1 and scheme.open_high:
            bound = _format_at(edges[-2], decimals) if style == "inclusive" else _format_loose(edges[-2], loose)
            labels.append(f"{GE_SIGN} {bound}")
        elif style == "inclusive":
            lo = _format_at(edges[i], decimals)
            hi = _format_at(edges[i + 1] - grain.step, decimals)
            labels.append(f"{lo}{RANGE_SEP}{hi}")
        else:
            labels.append(f"[{_format_loose(edges[i], loose)}, {_format_loose(edges[i + 1], loose)})")
    return replace(scheme, labels=tuple(labels))


# --- JSON wire format -------------------------------------------------------
#
# {"edges":[...], "open_low":bool, "open_high":bool, "labels":[...],
#  "provenance":{"kind":"semantic"|"default"|"manual", "ref":str}}


def decimal_to_number(d: Decimal):
    """JSON-safe number: int when integral, shortest-repr float otherwise."""
    if d == d.to_integral_value():
        return int(d)
    return float(d)


def scheme_to_dict(scheme: BinScheme) -> dict:
    return {
        "edges": [decimal_to_number(e) for e in scheme.edges],
        "open_low": scheme.open_low,
        "open_high": scheme.open_high,
        "labels": list(scheme.labels),
        "provenance": {"kind": scheme.provenance.kind, "ref": scheme.provenance.ref},
    }


def scheme_from_dict(data: dict) -> BinScheme:
    prov = data.get("provenance", {"kind": "manual", "ref": ""})
    return BinScheme(
        edges=tuple(as_decimal(e) for e in data["edges"]),
        open_low=bool(data.get("open_low", False)),
        open_high=bool(data.get("open_high", False)),
        labels=tuple(data.get("labels", ())),
        provenance=Provenance(prov["kind"], prov.get("ref", "")),
    )


def canonical_json(obj) -> str:
    """Compact separators, preserved key order: the byte-stable wire form."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def scheme_to_json(scheme: BinScheme) -> str:
    return canonical_json(scheme_to_dict(scheme))


def scheme_from_json(text: str) -> BinScheme:
    return scheme_from_dict(json.loads(text, parse_float=Decimal))


def counts_to_dict(counts: BinCounts) -> dict:
    return {"counts": list(counts.counts), "below": counts.below, "above": counts.above}

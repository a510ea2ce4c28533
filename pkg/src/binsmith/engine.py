"""Orchestration shared by the CLI and the HTTP service.

Runs the semantic-first, default-fallback flow for one field and assembles
the response payload: chosen scheme, counts, the road not taken, profile.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from .core import (
    BinCounts,
    BinScheme,
    assign,
    counts_to_dict,
    decimal_to_number,
    scheme_to_dict,
)
from .ingest import SeriesProfile, profile
from .legibility import DEFAULT_MULTIPLIERS, LegibilityConfig, default_bins
from .matching import DEFAULT_MATCH_THRESHOLD, semantic_bins
from .pipeline import SemanticLookupTable


class NoSemanticMatchError(ValueError):
    """forced_mode=semantic was requested but no concept matched."""


@dataclass(frozen=True)
class BinResult:
    scheme: BinScheme
    counts: BinCounts
    alternatives: tuple[BinScheme, ...]
    profile: SeriesProfile


def compute_bins(field_name: str, values: list[Decimal | None],
                 table: SemanticLookupTable | None = None,
                 purpose: str = "histogram",
                 cfg: LegibilityConfig | None = None,
                 forced_mode: str | None = None,
                 match_threshold: float = DEFAULT_MATCH_THRESHOLD) -> BinResult:
    """Bin one column, preferring semantic bins and falling back to defaults.

    The alternative route always rides along in ``alternatives`` so callers
    can show the comparison.
    """
    if forced_mode not in (None, "semantic", "default"):
        raise ValueError(f"unknown forced_mode {forced_mode!r}")
    prof = profile(values)
    clean = [v for v in values if v is not None]
    semantic = semantic_bins(field_name, prof, table, match_threshold) if table else None
    dflt = default_bins(prof, clean, purpose, cfg)
    if forced_mode == "semantic":
        if semantic is None:
            raise NoSemanticMatchError(f"no semantic match for field {field_name!r}")
        chosen, alternatives = semantic, (dflt,)
    elif forced_mode == "default":
        chosen = dflt
        alternatives = (semantic,) if semantic is not None else ()
    elif semantic is not None:
        chosen, alternatives = semantic, (dflt,)
    else:
        chosen, alternatives = dflt, ()
    return BinResult(
        scheme=chosen,
        counts=assign(clean, chosen),
        alternatives=alternatives,
        profile=prof,
    )


def profile_to_dict(prof: SeriesProfile) -> dict:
    return {
        "n": prof.n,
        "missing": prof.missing,
        "min": decimal_to_number(prof.min),
        "max": decimal_to_number(prof.max),
        "mean": float(prof.mean),
        "sd": float(prof.sd),
        "iqr": float(prof.iqr),
        "grain": decimal_to_number(prof.grain.step),
    }


def result_to_dict(result: BinResult) -> dict:
    return {
        "scheme": scheme_to_dict(result.scheme),
        "counts": counts_to_dict(result.counts),
        "alternatives": [scheme_to_dict(s) for s in result.alternatives],
        "profile": profile_to_dict(result.profile),
    }


def is_nice_width(width: Decimal, multipliers=DEFAULT_MULTIPLIERS) -> bool:
    """Whether a width is m * 10^k for one of the nice multipliers."""
    if width <= 0:
        return False
    return any(_is_power_of_ten(width / m) for m in multipliers)


def _is_power_of_ten(value: Decimal) -> bool:
    norm = value.normalize()
    sign, digits, _ = norm.as_tuple()
    return sign == 0 and digits == (1,)


def check_invariants(scheme: BinScheme, prof: SeriesProfile,
                     multipliers=DEFAULT_MULTIPLIERS) -> dict[str, bool]:
    """Evaluate the legibility invariants on an arbitrary (user) scheme.

    The nice check only constrains uniform-width schemes: deliberately
    non-uniform breaks (age brackets, condensed tails) are exempt.
    """
    grain_ok = all(prof.grain.is_multiple(e) for e in scheme.edges)
    widths = set(scheme.widths())
    nice_ok = len(widths) != 1 or is_nice_width(next(iter(widths)), multipliers)
    if prof.min < 0 < prof.max:
        zero_ok = Decimal(0) in scheme.edges
    else:
        zero_ok = True
    return {"grain": grain_ok, "nice": nice_ok, "zero": zero_ok}

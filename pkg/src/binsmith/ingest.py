"""Tabular ingestion: CSV parsing, column profiling, grain inference."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation, ROUND_HALF_EVEN, localcontext

from .core import Grain, as_decimal

MISSING_MARKERS = {"", "na", "null", "nan"}
# Scaled-integer arithmetic stays exact up to 9 fractional digits.
FRACTION_CAP = 9
_CAP_QUANTUM = Decimal(1).scaleb(-FRACTION_CAP)

Cell = Decimal | str | None


class ParseError(ValueError):
    """CSV input is structurally unusable (ragged rows, bad encoding)."""


class EmptyColumnError(ValueError):
    """A column holds no non-missing values, so it cannot be profiled."""


@dataclass(frozen=True)
class Column:
    name: str
    values: tuple[Cell, ...]

    @property
    def numeric_values(self) -> tuple[Decimal, ...]:
        return tuple(v for v in self.values if isinstance(v, Decimal))

    @property
    def missing(self) -> int:
        return sum(1 for v in self.values if v is None)

    @property
    def is_numeric(self) -> bool:
        """Numeric when every non-missing cell parsed as a number (and one did)."""
        saw_number = False
        for v in self.values:
            if isinstance(v, str):
                return False
            if isinstance(v, Decimal):
                saw_number = True
        return saw_number


@dataclass(frozen=True)
class Table:
    columns: tuple[Column, ...]

    def __post_init__(self):
        lengths = {len(c.values) for c in self.columns}
        if len(lengths) > 1:
            raise ParseError(f"columns have unequal lengths: {sorted(lengths)}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)


def _parse_cell(text: str) -> Cell:
    stripped = text.strip()
    if stripped.lower() in MISSING_MARKERS:
        return None
    try:
        value = Decimal(stripped)
    except InvalidOperation:
        return text
    # "Infinity" parses as a Decimal but has no place in binning stats.
    return value if value.is_finite() else text


def _dedupe_names(names: list[str]) -> list[str]:
    seen: dict[str, int] = {}
    out = []
    for raw in names:
        name = raw.strip()
        if name in seen:
            seen[name] += 1
            out.append(f"{name}_{seen[name]}")
        else:
            seen[name] = 1
            out.append(name)
    return out


def parse_csv(stream: bytes, delimiter: str = ",", header: bool = True) -> Table:
    """Parse RFC 4180 CSV bytes into a column-oriented table.

    Numeric-looking cells become Decimals, empty/"NA"/"null" cells become
    missing, and the header row (when present) supplies column names.
    Ragged rows raise ParseError with the offending row index.
    """
    try:
        text = stream.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    rows = [row for row in reader]
    # A trailing newline yields no extra row with csv.reader; drop any
    # genuinely empty rows at the end only.
    while rows and rows[-1] == []:
        rows.pop()
    if not rows:
        raise ParseError("no rows in input")
    if header:
        names = _dedupe_names(rows[0])
        body = rows[1:]
    else:
        names = [f"col_{i + 1}" for i in range(len(rows[0]))]
        body = rows
    width = len(names)
    columns: list[list[Cell]] = [[] for _ in range(width)]
    for idx, row in enumerate(body):
        if len(row) != width:
            raise ParseError(f"row {idx + (2 if header else 1)} has {len(row)} cells, expected {width}")
        for j, cell in enumerate(row):
            columns[j].append(_parse_cell(cell))
    return Table(columns=tuple(Column(name=n, values=tuple(vals)) for n, vals in zip(names, columns)))


@dataclass(frozen=True)
class SeriesProfile:
    """Summary statistics and grain of one numeric column."""

    n: int
    min: Decimal
    max: Decimal
    mean: Decimal
    sd: Decimal
    iqr: Decimal
    grain: Grain
    missing: int = 0


def quantile(sorted_values: list[Decimal], p: Decimal) -> Decimal:
    """Linear-interpolation quantile (the R-7 convention) of sorted values."""
    n = len(sorted_values)
    if n == 1:
        return sorted_values[0]
    h = (n - 1) * p
    f = int(h)
    if f >= n - 1:
        return sorted_values[-1]
    frac = h - f
    return sorted_values[f] + frac * (sorted_values[f + 1] - sorted_values[f])


def profile(column: list[Decimal | None]) -> SeriesProfile:
    """Profile a numeric column: n, extent, mean, population sd, R-7 IQR, grain."""
    values = [as_decimal(v) for v in column if v is not None]
    missing = len(column) - len(values)
    if not values:
        raise EmptyColumnError("no non-missing values to profile")
    n = len(values)
    ordered = sorted(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    sd = var.sqrt()
    iqr = quantile(ordered, Decimal("0.75")) - quantile(ordered, Decimal("0.25"))
    return SeriesProfile(
        n=n,
        min=ordered[0],
        max=ordered[-1],
        mean=mean,
        sd=sd,
        iqr=iqr,
        grain=infer_grain(values),
        missing=missing,
    )


def _fraction_digits(value: Decimal) -> int:
    """Significant fractional digits: trailing zeros do not count."""
    exp = value.normalize().as_tuple().exponent
    return max(0, -exp)


def infer_grain(values: list[Decimal]) -> Grain:
    """Infer the data grain from observed values.

    Grain is 10^(-d) for the largest significant fractional digit count d.
    Integer data that is uniformly divisible by some 10^k (k >= 1, at least
    two distinct values) gets the coarser grain 10^k instead, so round
    millions keep million-sized steps.
    """
    if not values:
        raise ValueError("cannot infer grain of no values")
    with localcontext() as ctx:
        ctx.prec = 60
        capped = [as_decimal(v).quantize(_CAP_QUANTUM, rounding=ROUND_HALF_EVEN) for v in values]
    d = max(_fraction_digits(v) for v in capped)
    if d > 0:
        return Grain(Decimal(1).scaleb(-d))
    if len(set(capped)) < 2:
        return Grain(Decimal(1))
    k = 0
    while k < 12:
        step = Decimal(1).scaleb(k + 1)
        if all(v % step == 0 for v in capped):
            k += 1
        else:
            break
    return Grain(Decimal(1).scaleb(k)) if k >= 1 else Grain(Decimal(1))

"""CSV parsing, profiling and grain inference."""

import math
from decimal import Decimal

import pytest
from hypothesis import assume, given, strategies as st

from binsmith.ingest import (
    EmptyColumnError,
    ParseError,
    infer_grain,
    parse_csv,
    profile,
)


def D(x):
    return Decimal(str(x))


class TestParseCsv:
    def test_minimal(self):
        t = parse_csv(b"age\n5\n7\n")
        assert t.names == ("age",)
        assert t.column("age").values == (D(5), D(7))

    def test_empty_cell_is_missing(self):
        t = parse_csv(b"a,b\n1,\n2,3\n")
        assert t.column("b").missing == 1
        assert t.column("b").values == (None, D(3))

    def test_decimals_preserved(self):
        # Parse and re-serialize: two fractional digits survive.
        t = parse_csv(b"a\n1.50\n2.25\n")
        assert [str(v) for v in t.column("a").values] == ["1.50", "2.25"]

    def test_na_and_null_markers(self):
        t = parse_csv(b"a\nNA\nnull\nNULL\nNaN\n4\n")
        assert t.column("a").missing == 4

    def test_infinity_cell_stays_text(self):
        t = parse_csv(b"a\nInfinity\n4\n")
        assert t.column("a").values == ("Infinity", Decimal(4))
        assert not t.column("a").is_numeric

    def test_bom_stripped_from_header(self):
        t = parse_csv(b"\xef\xbb\xbfage\n5\n")
        assert t.names == ("age",)

    def test_ragged_row_reports_index(self):
        with pytest.raises(ParseError, match="row 3"):
            parse_csv(b"a,b\n1,2\n3\n")

    def test_non_utf8(self):
        with pytest.raises(ParseError, match="UTF-8"):
            parse_csv(b"a\n\xff\xfe\n")

    def test_quoted_fields(self):
        t = parse_csv(b'name,v\n"smith, j",3\n')
        assert t.column("name").values == ("smith, j",)

    def test_custom_delimiter(self):
        t = parse_csv(b"a;b\n1;2\n", delimiter=";")
        assert t.names == ("a", "b")

    def test_no_header(self):
        t = parse_csv(b"1,2\n3,4\n", header=False)
        assert t.names == ("col_1", "col_2")

    def test_duplicate_headers_deduped(self):
        t = parse_csv(b"a,a\n1,2\n")
        assert t.names == ("a", "a_2")

    def test_strings_kept(self):
        t = parse_csv(b"a\nhello\n")
        assert t.column("a").values == ("hello",)
        assert not t.column("a").is_numeric


class TestProfile:
    def test_basic_arithmetic(self):
        p = profile([D(1), D(2), D(3), D(4)])
        assert p.n == 4
        assert p.min == 1 and p.max == 4
        assert p.mean == D("2.5")

    def test_iqr_r7_convention(self):
        # R-7 on 1..100: Q1 = 25.75, Q3 = 75.25, IQR = 49.5.
        p = profile([D(i) for i in range(1, 101)])
        assert p.iqr == D("49.5")

    def test_constant_series(self):
        p = profile([D(5), D(5), D(5)])
        assert p.sd == 0 and p.iqr == 0

    def test_missing_counted(self):
        p = profile([D(1), None, D(3), None])
        assert p.n == 2 and p.missing == 2

    def test_all_missing_raises(self):
        with pytest.raises(EmptyColumnError):
            profile([None, None])

    @given(st.lists(st.integers(min_value=-10**6, max_value=10**6), min_size=1, max_size=80))
    def test_matches_brute_force(self, ints):
        """Statistics agree with a float recomputation to 1e-9 relative."""
        p = profile([D(i) for i in ints])
        n = len(ints)
        mean = sum(ints) / n
        sd = math.sqrt(sum((x - mean) ** 2 for x in ints) / n)
        assert p.n == n
        assert p.min == min(ints) and p.max == max(ints)
        assert float(p.mean) == pytest.approx(mean, rel=1e-9, abs=1e-9)
        assert float(p.sd) == pytest.approx(sd, rel=1e-9, abs=1e-9)

    def test_iqr_against_quantile_definition(self):
        # Hand-computed R-7 check: x = [1, 2, 4, 8], h25 = 0.75 -> 1.75,
        # h75 = 2.25 -> 5.0, IQR = 3.25.
        p = profile([D(1), D(2), D(4), D(8)])
        assert p.iqr == D("3.25")


class TestInferGrain:
    def test_integers(self):
        assert infer_grain([D(3), D(7), D(12)]).step == 1

    def test_fractional_digits(self):
        assert infer_grain([D("1.5"), D("2.25")]).step == D("0.01")

    def test_round_millions(self):
        g = infer_grain([D(2000000), D(5000000), D(13000000)])
        assert g.step == D(1000000)

    def test_trailing_zeros_not_significant(self):
        assert infer_grain([D("1.50"), D("2.50")]).step == D("0.1")

    def test_single_distinct_value_stays_fine(self):
        assert infer_grain([D(1000), D(1000)]).step == 1

    def test_mixed_scale(self):
        assert infer_grain([D(1000), D(1001)]).step == 1

    @given(st.lists(st.integers(min_value=-10**6, max_value=10**6), min_size=1, max_size=30))
    def test_grain_divides_every_value(self, ints):
        values = [D(i) for i in ints]
        g = infer_grain(values)
        assert all(v % g.step == 0 for v in values)

    @given(st.lists(
        st.decimals(min_value=-10**5, max_value=10**5, places=3, allow_nan=False, allow_infinity=False),
        min_size=2, max_size=20,
    ))
    def test_scaling_by_ten_scales_grain(self, values):
        # Constant integer columns pin their grain at 1 by definition, so the
        # scaling law only applies to columns with spread.
        assume(len(set(values)) >= 2)
        g1 = infer_grain(list(values))
        g10 = infer_grain([v * 10 for v in values])
        assert g10.step == g1.step * 10

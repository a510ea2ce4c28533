"""Statistical base rules against closed forms and brute-force oracles."""

import random
from decimal import Decimal

import pytest
from hypothesis import given, settings, strategies as st

from binsmith.core import BinningWarning, Grain
from binsmith.ingest import SeriesProfile, profile
from binsmith.stats import (
    DegenerateSpreadError,
    equal_interval,
    fd_width,
    jenks_breaks,
    jenks_objective,
    quantile_breaks,
    scott_width,
    stddev_breaks,
    sturges_k,
)


def D(x):
    return Decimal(str(x))


def make_profile(n=10, vmin=0, vmax=10, mean=5, sd=1, iqr=1, grain=1):
    return SeriesProfile(n=n, min=D(vmin), max=D(vmax), mean=D(mean),
                         sd=D(sd), iqr=D(iqr), grain=Grain(D(grain)))


# --- Brute-force oracle for Jenks -------------------------------------------
#
# Recursive exhaustive search over every contiguous partition, scanning the
# start of the last class in ascending order and keeping strict improvements,
# mirroring the documented earliest-break tie rule.  Class SSE uses the same
# sum-of-squares identity so float results are bit-comparable.


def _sse(values):
    m = len(values)
    s = sum(values)
    sq = sum(x * x for x in values)
    return sq - s * s / m


def jenks_oracle(sorted_values, k):
    """(class start indices, objective) by exhaustive search."""
    n = len(sorted_values)
    if k == 1:
        return [0], _sse(sorted_values)
    best = None
    best_starts = None
    for s in range(k - 1, n):
        prefix_starts, prefix_cost = jenks_oracle(sorted_values[:s], k - 1)
        cost = prefix_cost + _sse(sorted_values[s:])
        if best is None or cost < best:
            best = cost
            best_starts = prefix_starts + [s]
    return best_starts, best


class TestClosedForms:
    def test_sturges(self):
        assert sturges_k(100) == 8
        assert sturges_k(1) == 1
        assert sturges_k(1024) == 11

    def test_sturges_rejects_zero(self):
        with pytest.raises(ValueError):
            sturges_k(0)

    def test_fd(self):
        assert float(fd_width(make_profile(n=1000, iqr=10))) == pytest.approx(2.0, rel=1e-12)
        assert float(fd_width(make_profile(n=8, iqr=4))) == pytest.approx(4.0, rel=1e-12)

    def test_fd_degenerate(self):
        with pytest.raises(DegenerateSpreadError):
            fd_width(make_profile(n=10, iqr=0))

    def test_scott(self):
        assert float(scott_width(make_profile(n=1000, sd=1))) == pytest.approx(0.349, rel=1e-12)
        assert float(scott_width(make_profile(n=8, sd=2))) == pytest.approx(3.49, rel=1e-12)

    def test_scott_degenerate(self):
        with pytest.raises(DegenerateSpreadError):
            scott_width(make_profile(n=10, sd=0))

    @given(st.integers(min_value=1, max_value=10**9))
    def test_sturges_matches_recomputation(self, n):
        import math

        assert sturges_k(n) == math.ceil(math.log2(n)) + 1

    @given(
        iqr=st.decimals(min_value="0.001", max_value="1e9", places=3,
                        allow_nan=False, allow_infinity=False),
        n=st.integers(min_value=2, max_value=10**7),
    )
    def test_fd_matches_recomputation(self, iqr, n):
        width = float(fd_width(make_profile(n=n, iqr=iqr)))
        expected = 2 * float(iqr) * n ** (-1 / 3)
        assert width == pytest.approx(expected, rel=1e-12)

    @given(
        sd=st.decimals(min_value="0.001", max_value="1e9", places=3,
                       allow_nan=False, allow_infinity=False),
        n=st.integers(min_value=2, max_value=10**7),
    )
    def test_scott_matches_recomputation(self, sd, n):
        width = float(scott_width(make_profile(n=n, sd=sd)))
        expected = 3.49 * float(sd) * n ** (-1 / 3)
        assert width == pytest.approx(expected, rel=1e-12)


class TestEqualInterval:
    def test_quarters(self):
        s = equal_interval(make_profile(vmin=0, vmax=100), 4)
        assert s.edges == (D(0), D(25), D(50), D(75), D(100))

    def test_single_bin(self):
        s = equal_interval(make_profile(vmin=0, vmax=1), 1)
        assert s.edges == (D(0), D(1))

    def test_negative_extent(self):
        s = equal_interval(make_profile(vmin=-10, vmax=10), 2)
        assert s.edges == (D(-10), D(0), D(10))

    def test_degenerate(self):
        with pytest.raises(DegenerateSpreadError):
            equal_interval(make_profile(vmin=5, vmax=5), 3)

    def test_k_zero(self):
        with pytest.raises(ValueError):
            equal_interval(make_profile(), 0)

    @given(st.integers(min_value=1, max_value=12))
    def test_covers_extent(self, k):
        s = equal_interval(make_profile(vmin=-3, vmax=17), k)
        assert s.edges[0] <= -3 and s.edges[-1] >= 17
        assert s.bin_count == k


class TestQuantileBreaks:
    def test_median_split(self):
        # R-7 median of 1..10 is 5.5.
        s = quantile_breaks([D(i) for i in range(1, 11)], 2)
        assert s.edges == (D(1), D("5.5"), D(10))

    def test_single_class(self):
        s = quantile_breaks([D(i) for i in range(1, 11)], 1)
        assert s.edges == (D(1), D(10))

    def test_ties_reduce_bins_with_warning(self):
        with pytest.warns(BinningWarning):
            s = quantile_breaks([D(1), D(1), D(1), D(1), D(2)], 4)
        assert s.bin_count < 4

    def test_roughly_equal_counts(self):
        from binsmith.core import assign

        values = [D(i) for i in range(100)]
        s = quantile_breaks(values, 4)
        counts = assign(values, s)
        assert all(20 <= c <= 30 for c in counts.counts)


class TestJenks:
    def test_two_clusters(self):
        # Brute force over all 5 split points puts the gap between 3 and 10.
        s = jenks_breaks([D(x) for x in [1, 2, 3, 10, 11, 12]], 2)
        assert s.edges == (D(1), D(10), D(12))

    def test_single_class(self):
        s = jenks_breaks([D(x) for x in [4, 7, 9]], 1)
        assert s.edges == (D(4), D(9))

    def test_split_between_2_and_8(self):
        s = jenks_breaks([D(x) for x in [1, 2, 8, 9, 10, 11]], 2)
        assert s.edges == (D(1), D(8), D(11))

    def test_reduces_k_with_warning(self):
        with pytest.warns(BinningWarning):
            s = jenks_breaks([D(1), D(1), D(2)], 3)
        assert s.bin_count <= 2

    def test_oracle_equivalence_sampled(self):
        """DP objective and break positions equal exhaustive search."""
        from binsmith.stats import _jenks_partition

        rng = random.Random(1234)
        for _ in range(200):
            n = rng.randint(4, 12)
            k = rng.randint(2, 4)
            values = sorted(rng.randint(0, 15) for _ in range(n))
            if len(set(values)) < k:
                continue
            floats = [float(v) for v in values]
            dp_starts, dp_cost = _jenks_partition(floats, k)
            or_starts, or_cost = jenks_oracle(floats, k)
            assert dp_cost == or_cost
            assert dp_starts == or_starts

    def test_objective_monotone_in_k(self):
        rng = random.Random(99)
        values = [D(rng.randint(0, 50)) for _ in range(20)]
        objectives = [jenks_objective(values, k) for k in range(1, 6)]
        assert all(a >= b - 1e-12 for a, b in zip(objectives, objectives[1:]))


class TestStddevBreaks:
    def test_unit_sd(self):
        s = stddev_breaks(make_profile(vmin=-3, vmax=3, mean=0, sd=1))
        assert s.edges == tuple(D(x) for x in [-3, -2, -1, 0, 1, 2, 3])

    def test_shifted(self):
        s = stddev_breaks(make_profile(vmin=6, vmax=14, mean=10, sd=2))
        assert s.edges == tuple(D(x) for x in [6, 8, 10, 12, 14])

    def test_half_widths(self):
        s = stddev_breaks(make_profile(vmin=9, vmax=11, mean=10, sd=1), half_widths=True)
        assert s.edges == tuple(D(x) for x in [9, "9.5", 10, "10.5", 11])

    def test_degenerate(self):
        with pytest.raises(DegenerateSpreadError):
            stddev_breaks(make_profile(sd=0))

    def test_off_lattice_extent_still_covered(self):
        s = stddev_breaks(make_profile(vmin="-2.5", vmax="2.7", mean=0, sd=1))
        assert s.edges[0] == D("-2.5") and s.edges[-1] == D("2.7")
        assert D(0) in s.edges


class TestSchemesAreValid:
    @given(st.lists(st.integers(min_value=-100, max_value=100), min_size=4, max_size=30),
           st.integers(min_value=1, max_value=4))
    @settings(max_examples=60)
    def test_jenks_scheme_covers_data(self, ints, k):
        values = [D(i) for i in ints]
        if len(set(values)) < 2:
            return
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            s = jenks_breaks(values, k)
        assert s.edges[0] <= min(values)
        assert s.edges[-1] >= max(values)

    @given(st.lists(st.integers(min_value=-100, max_value=100), min_size=4, max_size=30),
           st.integers(min_value=1, max_value=4))
    @settings(max_examples=60)
    def test_quantile_scheme_covers_data(self, ints, k):
        values = [D(i) for i in ints]
        if len(set(values)) < 2:
            return
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            s = quantile_breaks(values, k)
        assert s.edges[0] <= min(values)
        assert s.edges[-1] >= max(values)

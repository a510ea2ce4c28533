"""Core types: assignment semantics, labelling, serialization."""

import json
from decimal import Decimal
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from binsmith.core import (
    BinScheme,
    Grain,
    InvalidSchemeError,
    LabelFormat,
    Provenance,
    assign,
    label_bins,
    scheme_from_json,
    scheme_to_json,
)


def D(x):
    return Decimal(str(x))


class TestGrain:
    def test_accepts_scaled_integers(self):
        for step in ("1", "0.01", "1000", "2.5", "0.000000001", "1E+12"):
            assert Grain(Decimal(step)).step == Decimal(step)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            Grain(Decimal(0))
        with pytest.raises(ValueError):
            Grain(Decimal(-1))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Grain(Decimal("1E-10"))
        with pytest.raises(ValueError):
            Grain(Decimal("1E+22"))

    def test_multiplicity_is_exact(self):
        g = Grain(Decimal("0.1"))
        assert g.is_multiple(Decimal("0.3"))
        assert not g.is_multiple(Decimal("0.35"))


class TestSchemeInvariants:
    def test_requires_two_edges(self):
        with pytest.raises(InvalidSchemeError):
            BinScheme(edges=(Decimal(1),))

    def test_requires_strictly_increasing(self):
        with pytest.raises(InvalidSchemeError):
            BinScheme(edges=(Decimal(1), Decimal(1)))
        with pytest.raises(InvalidSchemeError):
            BinScheme(edges=(Decimal(2), Decimal(1)))

    def test_label_count_must_match(self):
        with pytest.raises(InvalidSchemeError):
            BinScheme(edges=(Decimal(0), Decimal(1)), labels=("a", "b"))

    def test_auto_labels(self):
        s = BinScheme(edges=(Decimal(0), Decimal(1), Decimal(2)))
        assert len(s.labels) == 2


class TestAssign:
    def test_closed_tails_final_edge_in_last_bin(self):
        # Enumerated by hand: 0 -> bin 0; 5 -> bin 1; 10 == final edge -> bin 1.
        scheme = BinScheme(edges=(D(0), D(5), D(10)))
        counts = assign([D(0), D(5), D(10)], scheme)
        assert counts.counts == (1, 2)
        assert counts.below == 0 and counts.above == 0

    def test_empty_values(self):
        scheme = BinScheme(edges=(D(0), D(5), D(10)))
        counts = assign([], scheme)
        assert counts.counts == (0, 0)
        assert counts.total == 0

    def test_open_low_captures_below(self):
        scheme = BinScheme(edges=(D(0), D(5)), open_low=True)
        counts = assign([D(-7), D(3)], scheme)
        assert counts.counts == (2,)

    def test_below_and_above_on_closed_sides(self):
        scheme = BinScheme(edges=(D(0), D(10)))
        counts = assign([D(-1), D(5), D(11)], scheme)
        assert counts.counts == (1,)
        assert counts.below == 1
        assert counts.above == 1

    def test_open_high_captures_above(self):
        scheme = BinScheme(edges=(D(0), D(10)), open_high=True)
        counts = assign([D(11), D(100)], scheme)
        assert counts.counts == (2,)

    @given(
        values=st.lists(st.integers(min_value=-1000, max_value=1000), max_size=60),
        edge_set=st.sets(st.integers(min_value=-100, max_value=100), min_size=2, max_size=8),
        open_low=st.booleans(),
        open_high=st.booleans(),
    )
    def test_conservation(self, values, edge_set, open_low, open_high):
        scheme = BinScheme(edges=tuple(sorted(D(e) for e in edge_set)),
                           open_low=open_low, open_high=open_high)
        counts = assign([D(v) for v in values], scheme)
        assert counts.total == len(values)

    @given(
        values=st.lists(st.integers(min_value=-50, max_value=50), max_size=40),
        seed=st.integers(min_value=0, max_value=10),
    )
    def test_order_independence(self, values, seed):
        import random

        scheme = BinScheme(edges=(D(-20), D(0), D(20)))
        shuffled = list(values)
        random.Random(seed).shuffle(shuffled)
        a = assign([D(v) for v in values], scheme)
        b = assign([D(v) for v in shuffled], scheme)
        assert a == b


class TestLabels:
    def test_integer_interval_inclusive_upper(self):
        # Half-open integer interval prints inclusive upper = edge - grain.
        s = label_bins(BinScheme(edges=(D(20), D(30))), LabelFormat(Grain(D(1))))
        assert s.labels == ("20–29",)

    def test_open_high_label(self):
        s = label_bins(BinScheme(edges=(D(80), D(90), D(100)), open_high=True),
                       LabelFormat(Grain(D(1))))
        assert s.labels[-1] == "≥ 90"

    def test_open_low_label(self):
        s = label_bins(BinScheme(edges=(D(0), D(20), D(40)), open_low=True),
                       LabelFormat(Grain(D(1))))
        assert s.labels[0] == "< 20"

    def test_fractional_grain(self):
        # Same inclusive-upper rule at grain 0.1.
        s = label_bins(BinScheme(edges=(D("0.0"), D("0.5"))), LabelFormat(Grain(D("0.1"))))
        assert s.labels == ("0.0–0.4",)

    def test_interval_style_for_off_grain_edges(self):
        s = label_bins(BinScheme(edges=(D("0.5"), D("3.7"))), LabelFormat(Grain(D(1))))
        assert s.labels == ("[0.5, 3.7)",)

    def test_never_changes_edges_and_idempotent(self):
        fmt = LabelFormat(Grain(D(1)))
        s0 = BinScheme(edges=(D(0), D(10), D(20)))
        s1 = label_bins(s0, fmt)
        s2 = label_bins(s1, fmt)
        assert s1.edges == s0.edges
        assert s1 == s2


class TestSerialization:
    def test_wire_format_keys(self):
        s = label_bins(
            BinScheme(edges=(D(0), D(10)), provenance=Provenance.default("fd")),
            LabelFormat(Grain(D(1))),
        )
        data = json.loads(scheme_to_json(s))
        assert set(data) == {"edges", "open_low", "open_high", "labels", "provenance"}
        assert data["edges"] == [0, 10]
        assert data["provenance"] == {"kind": "default", "ref": "fd"}

    def test_round_trip(self):
        s = label_bins(
            BinScheme(edges=(D("0.5"), D("2.5"), D(10)), open_high=True,
                      provenance=Provenance.semantic("age")),
            LabelFormat(Grain(D("0.5"))),
        )
        back = scheme_from_json(scheme_to_json(s))
        assert back == s

    def test_integral_edges_serialize_as_ints(self):
        s = BinScheme(edges=(D(0), D("2.5"), D(5)))
        text = scheme_to_json(s)
        assert '"edges":[0,2.5,5]' in text


class TestFrontendContract:
    """The refinement UI exports schemes by re-serializing server JSON; a
    shared fixture locks both serializers to the same bytes."""

    FIXTURE = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures" / "scheme.json"

    @pytest.mark.skipif(not FIXTURE.exists(), reason="frontend not checked out")
    def test_canonical_bytes_match_shared_fixture(self):
        scheme = label_bins(
            BinScheme(
                edges=tuple(D(e) for e in [0, 18, 25, 35, 45, 55, 65]),
                open_high=True,
                provenance=Provenance.manual(),
            ),
            LabelFormat(Grain(D(1))),
        )
        assert scheme_to_json(scheme) == self.FIXTURE.read_text("utf-8").rstrip("\n")

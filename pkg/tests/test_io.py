from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from trophodge.graph import Divisor, EdgePoint
from trophodge.io import (
    divisor_from_json,
    divisor_to_json,
    dumps,
    format_rational,
    graph_from_json,
    graph_to_json,
    parse_rational,
)
from trophodge.linsys import CellComplex, CellDatum, enumerate_cells
from trophodge.moduli import enumerate_stable_graphs
from conftest import unit_metric


@given(st.fractions())
def test_rational_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_parse_rational_examples():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    assert parse_rational(7) == 7
    for bad in ("0.5", "1/0", "a/b", ""):
        with pytest.raises(ValueError):
            parse_rational(bad)


@pytest.mark.parametrize("G", enumerate_stable_graphs(2) + enumerate_stable_graphs(3))
def test_graph_round_trip(G):
    assert graph_from_json(graph_to_json(G)) == G


def test_divisor_round_trip():
    D = Divisor({0: 2, EdgePoint(1, Fraction(1, 3)): 1, EdgePoint(2, Fraction(5, 2)): -1})
    assert divisor_from_json(divisor_to_json(D)) == D


def test_complex_round_trip(theta, k4):
    for G in (theta, k4):
        C = enumerate_cells(unit_metric(G))
        back = CellComplex.from_json(C.to_json())
        assert back.cells == C.cells and back.covers == C.covers
        assert dumps(back.to_json()) == dumps(C.to_json())
        for c, _ in C.cells:
            assert CellDatum.from_json(c.to_json()) == c

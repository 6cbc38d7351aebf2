from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from oracles import simplex_feasible
from trophodge import polyhedra as ph
from trophodge.polyhedra import RationalPolyhedron, eq, ge, gt


def P(names, *cons):
    return RationalPolyhedron(names, cons)


def test_feasibility_examples():
    assert ph.is_feasible(P(["x"], gt({"x": 1}), gt({"x": -1}, 1)))
    assert not ph.is_feasible(P(["x"], gt({"x": 1}), gt({"x": -1})))
    assert ph.is_feasible(P(["x"], ge({"x": 1}), ge({"x": -1}), gt({"x": 1}, 1)))


def test_dimension_examples():
    assert ph.dimension(P(["x", "y"], eq({"x": 1, "y": 1}, -1), gt({"x": 1}), gt({"y": 1}))) == 1
    assert ph.dimension(P(["x"], gt({"x": 1}), gt({"x": -1}))) == -1
    assert ph.dimension(P(["x"], ge({"x": 1}), ge({"x": -1}))) == 0


def test_interior_point_examples():
    pt = ph.interior_point(P(["x"], gt({"x": 1}), gt({"x": -1}, 1)))
    assert pt == {"x": Fraction(1, 2)}
    Q = P(["x", "y"], eq({"x": 1, "y": 1}, -1), ge({"x": 1}), ge({"y": 1}))
    pt = ph.interior_point(Q)
    assert Q.contains(pt) and pt["x"] > 0 and pt["y"] > 0
    with pytest.raises(ValueError):
        ph.interior_point(P(["x"], gt({"x": 1}), gt({"x": -1})))


def test_projection_examples():
    proj = ph.project(P(["x", "y"], eq({"x": 1, "y": 1}, -1), gt({"y": 1})), ["x"])
    assert proj.normalized() == P(["x"], gt({"x": -1}, 1)).normalized()
    proj = ph.project(P(["x", "l"], gt({"x": 1}), gt({"l": 1, "x": -1})), ["l"])
    assert proj.normalized() == P(["l"], gt({"l": 1})).normalized()


@pytest.mark.parametrize("m,d", [(-1, 2), (0, 1), (-3, 2), (1, 3)])
def test_edge_elimination(m, d):
    # f(w) = f(v) + (m + d) l - d x with 0 < x < l, eliminate x
    cell = P(
        ["fv", "fw", "l", "x"],
        eq({"fw": 1, "fv": -1, "l": -(m + d), "x": d}),
        gt({"x": 1}),
        gt({"l": 1, "x": -1}),
    )
    proj = ph.project(cell, ["fv", "fw", "l"])
    expected = P(
        ["fv", "fw", "l"],
        gt({"l": d + m, "fv": 1, "fw": -1}),  # (-d-m) l < f(v) - f(w)
        gt({"fw": 1, "fv": -1, "l": -m}),  # m l < f(w) - f(v)
    )
    assert proj.normalized() == expected.normalized()


VARS = ["a", "b", "c", "d", "e", "f", "g", "h"]


@st.composite
def systems(draw, max_vars=8, max_cons=8):
    n = draw(st.integers(1, max_vars))
    names = VARS[:n]
    cons = []
    for _ in range(draw(st.integers(1, max_cons))):
        coeffs = {v: draw(st.integers(-3, 3)) for v in names}
        const = draw(st.integers(-4, 4))
        kind = draw(st.sampled_from([ph.EQ, ph.GE, ph.GT, ph.GT]))
        cons.append(ph._make(kind, coeffs, const))
    return RationalPolyhedron(names, cons)


@given(systems())
def test_feasibility_matches_simplex(Q):
    assert ph.is_feasible(Q) == simplex_feasible(Q)


@given(systems(max_vars=5))
def test_interior_point_satisfies_everything(Q):
    assume(ph.is_feasible(Q))
    pt = ph.interior_point(Q)
    assert Q.contains(pt)
    for c in Q.constraints:
        if c.kind == ph.GE and c not in ph.implicit_equalities(Q):
            assert c.value(pt) >= 0


@given(systems(max_vars=5), st.data())
def test_projection_preserves_feasibility(Q, data):
    keep = data.draw(st.lists(st.sampled_from(list(Q.variables)), unique=True))
    assert ph.is_feasible(ph.project(Q, keep)) == ph.is_feasible(Q)


@given(systems(max_vars=4, max_cons=5), st.data())
def test_projection_contains_image_of_points(Q, data):
    assume(ph.is_feasible(Q))
    keep = data.draw(st.lists(st.sampled_from(list(Q.variables)), unique=True, min_size=1))
    pt = ph.interior_point(Q)
    assert ph.project(Q, keep).contains({v: pt[v] for v in keep})


@given(systems(max_vars=5, max_cons=5), st.data())
def test_adding_an_independent_equation_drops_dimension(Q, data):
    assume(ph.is_feasible(Q))
    dim = ph.dimension(Q)
    assume(dim >= 1)
    pt = ph.interior_point(Q)
    coeffs = {v: data.draw(st.integers(-3, 3)) for v in Q.variables}
    # the new hyperplane passes through a relative interior point
    const = -sum(Fraction(c) * pt[v] for v, c in coeffs.items())
    R = Q.add(eq(coeffs, const))
    new = ph.dimension(R)
    independent = ph.equation_rank(RationalPolyhedron(Q.variables, list(ph.implicit_equalities(Q)) + list(Q.equations) + [eq(coeffs, const)])) > ph.equation_rank(RationalPolyhedron(Q.variables, list(ph.implicit_equalities(Q)) + list(Q.equations)))
    assert new == (dim - 1 if independent else dim)


def test_dump_round_trip():
    Q = P(["x", "y"], eq({"x": Fraction(1, 2), "y": -3}, 2), gt({"x": 1}), ge({"y": 1}, Fraction(-7, 3)))
    text = Q.dump()
    back = [ph.parse_constraint(line) for line in text.splitlines()]
    assert tuple(back) == Q.constraints
    assert "1/2 * x + -3/1 * y = -2/1" in text


def test_rejects_unknown_variables():
    with pytest.raises(ValueError):
        RationalPolyhedron(["x"], [gt({"y": 1})])
    with pytest.raises(ValueError):
        RationalPolyhedron(["x", "x"])

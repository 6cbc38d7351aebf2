import random
from fractions import Fraction

import pytest

from conftest import genus_two_models, unit_metric
from trophodge import polyhedra as ph
from trophodge.chambers import coarse_projection
from trophodge.graph import WeightedGraph, automorphisms, canonical_divisor, contract_edge
from trophodge.hodge import (
    act,
    at_zero_length,
    contracted_datum,
    contraction_lifts,
    enumerate_hodge_cells,
    hodge_dimension,
    hodge_f_vector,
    max_cell_dimension,
    rescale_invariance_check,
    rescale_witness,
)
from trophodge.linsys import MetricGraph, cell_polyhedron, enumerate_cells, sample_point
from trophodge.moduli import enumerate_stable_graphs

GENUS_TWO = genus_two_models()


def test_weight_two_point_has_one_cell():
    cells = enumerate_hodge_cells(WeightedGraph(((0, 2),), ()))
    assert len(cells) == 1 and cells[0].dim_H == 0 and cells[0].dim_Lambda == 1


def test_dumbbell_top_cell(dumbbell):
    cells = enumerate_hodge_cells(dumbbell)
    top = max(h.dim_H for h in cells)
    (h,) = [h for h in cells if h.dim_H == top]
    assert top == 5
    assert h.datum.composition(1) == (1, 1)
    assert h.datum.slope(0) == h.datum.slope(2) == 0
    assert ph.dimension(h.polyhedron) == 6


def test_theta_cells_have_dimension_at_most_four(theta):
    assert max(h.dim_H for h in enumerate_hodge_cells(theta)) == 4


@pytest.mark.parametrize("G", GENUS_TWO, ids=lambda G: f"{len(G.vertices)}v{len(G.edges)}e")
def test_cells_are_homogeneous_cones_of_the_right_dimension(G):
    for h in enumerate_hodge_cells(G):
        assert all(c.const == 0 for c in h.polyhedron.constraints)
        assert ph.dimension(h.polyhedron) - 1 == h.dim_H == hodge_dimension(G, h.datum)
        assert h.dim_H <= 5


def test_hodge_dimension_on_genus_three_sample():
    rng = random.Random(5)
    graphs = enumerate_stable_graphs(3)
    for G in rng.sample(graphs, 8):
        cells = enumerate_hodge_cells(G)
        for h in rng.sample(cells, min(6, len(cells))):
            assert ph.dimension(h.polyhedron) - 1 == h.dim_H <= 10


def test_f_vector_genus_two():
    assert hodge_f_vector(2) == [1, 5, 11, 16, 9, 1]
    assert hodge_f_vector(2, modulo_automorphisms=True) == [1, 4, 9, 11, 5, 1]


def test_f_vector_rejects_unsupported_genus():
    with pytest.raises(ValueError):
        hodge_f_vector(4)
    with pytest.raises(ValueError):
        max_cell_dimension(1)


def test_max_dimension_genus_two():
    dim, witness = max_cell_dimension(2)
    assert dim == 5 and witness.dim_Lambda == 6


@pytest.mark.parametrize("G", GENUS_TWO, ids=lambda G: f"{len(G.vertices)}v{len(G.edges)}e")
def test_automorphisms_permute_cells(G):
    cells = {h.datum: h.dim_H for h in enumerate_hodge_cells(G)}
    for phi in automorphisms(G):
        images = {act(phi, G, c) for c in cells}
        assert images == set(cells)
        for c, d in cells.items():
            assert cells[act(phi, G, c)] == d


def _contraction_pairs():
    for G in GENUS_TWO:
        for e in G.edge_ids:
            if not G.is_loop(e):
                yield G, e


@pytest.mark.parametrize("G,e", list(_contraction_pairs()), ids=lambda x: str(x) if isinstance(x, int) else f"{len(x.vertices)}v{len(x.edges)}e")
def test_contraction_compatibility(G, e):
    H = contract_edge(G, e)
    above = {h.datum: h for h in enumerate_hodge_cells(G)}
    below = {h.datum: h for h in enumerate_hodge_cells(H)}
    reached = set()
    for c, h in above.items():
        face = at_zero_length(G, e, c)
        down = contracted_datum(G, e, c)
        if down is None or not ph.is_feasible(face):
            continue
        assert down in below
        assert ph.dimension(face) - 1 == below[down].dim_H
        reached.add(down)
    assert reached == set(below)
    for c in below:
        lifts = [x for x in contraction_lifts(G, e, c) if x in above]
        assert lifts and all(contracted_datum(G, e, x) == c for x in lifts)
        assert any(ph.is_feasible(at_zero_length(G, e, x)) for x in lifts)


def test_fiber_over_a_k4_metric(k4):
    lengths = dict(zip(range(6), (3, 5, 7, 11, 13, 17)))
    point = {f"l_{e}": Fraction(v) for e, v in lengths.items()}
    projections = {}
    over = set()
    for h in enumerate_hodge_cells(k4):
        coarse = tuple((m, sum(comp)) for _, m, comp in h.datum.edge_data)
        if coarse not in projections:
            projections[coarse] = coarse_projection(k4, coarse).contains(point)
        if projections[coarse]:
            over.add(h.datum)
    assert over == {c for c, _ in enumerate_cells(MetricGraph(k4, lengths)).cells}


@pytest.mark.parametrize("edge,scale", [(1, 7), (1, Fraction(1, 3)), (0, Fraction(1, 3)), (2, 2)])
def test_rescale_witness_lands_in_the_scaled_cell(dumbbell, edge, scale):
    gamma = MetricGraph(dumbbell, {0: 2, 1: 3, 2: 5})
    scaled = gamma.with_length(edge, gamma.length(edge) * scale)
    K = canonical_divisor(dumbbell)
    rng = random.Random(edge)
    for c, _ in enumerate_cells(gamma).cells:
        for _ in range(3):
            pt = sample_point(gamma, K, c, rng)
            assert cell_polyhedron(scaled, K, c).contains(rescale_witness(gamma, edge, scale, c, pt))


def test_rescale_invariance_examples(dumbbell, k4):
    gamma = unit_metric(dumbbell)
    assert rescale_invariance_check(gamma, 1, 7)
    assert rescale_invariance_check(gamma, 0, Fraction(1, 3))
    k4m = unit_metric(k4)
    for e in k4.edge_ids:
        with pytest.raises(ValueError):
            rescale_invariance_check(k4m, e, 2)
    with pytest.raises(ValueError):
        rescale_invariance_check(gamma, 1, 0)

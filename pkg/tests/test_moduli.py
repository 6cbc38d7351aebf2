import pytest

from oracles import brute_force_stable_graphs, isomorphic, stable_graphs_by_splitting
from trophodge.graph import canonical_form, contract_edge, genus, is_stable
from trophodge.moduli import enumerate_stable_graphs, enumerate_trivalent, face_poset, moduli_f_vector


def test_genus_two_classes():
    graphs = enumerate_stable_graphs(2)
    assert len(graphs) == 7
    fv = moduli_f_vector(2)
    assert len(fv) == 4 and sum(fv) == 7 and fv[0] == 1


def test_genus_two_top_cells_are_theta_and_dumbbell(theta, dumbbell):
    top = [G for G in enumerate_stable_graphs(2) if len(G.edges) == 3]
    assert len(top) == 2
    assert {canonical_form(G) for G in top} == {canonical_form(theta), canonical_form(dumbbell)}
    assert len(enumerate_trivalent(2)) == 2


def test_rejects_low_genus():
    with pytest.raises(ValueError):
        enumerate_stable_graphs(1)


@pytest.mark.parametrize("g", [2, 3])
def test_matches_brute_force(g):
    mine = enumerate_stable_graphs(g)
    ref = brute_force_stable_graphs(g)
    assert len(mine) == len(ref)
    for G in ref:
        assert sum(isomorphic(G, H) for H in mine) == 1


def test_genus_four_matches_splitting_oracle():
    mine = enumerate_stable_graphs(4)
    ref = stable_graphs_by_splitting(4)
    assert len(ref) == len(mine) == 379
    assert sorted(len(G.edges) for G in ref) == sorted(len(G.edges) for G in mine)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_poset_structure(g):
    M = face_poset(g)
    forms = [canonical_form(G) for G in M.cells]
    assert len(set(forms)) == len(forms)
    index = {f: i for i, f in enumerate(forms)}
    covered = {i for i, _ in M.covers}
    for i, G in enumerate(M.cells):
        assert M.dimension(i) == len(G.edges) <= 3 * g - 3
        assert len(G.vertices) <= 2 * g - 2
        for e in G.edge_ids:
            H = contract_edge(G, e)
            assert is_stable(H) and genus(H) == g
            assert (index[canonical_form(H)], i) in set(M.covers)
        if len(G.edges) < 3 * g - 3:
            assert any(f == i for f, _ in M.covers)
    for f, c in M.covers:
        assert M.dimension(c) == M.dimension(f) + 1
    # unique minimum: the weight-g point lies below everything
    bottom = [i for i, G in enumerate(M.cells) if not G.edges]
    assert len(bottom) == 1
    assert all(M.is_face(bottom[0], j) for j in range(len(M.cells)))
    assert covered


def test_genus_two_poset_examples(theta, dumbbell):
    M = face_poset(2)
    forms = [canonical_form(G) for G in M.cells]
    t = forms.index(canonical_form(theta))
    d = forms.index(canonical_form(dumbbell))
    two_loops = forms.index(canonical_form(contract_edge(theta, 0)))
    assert (two_loops, t) in M.covers
    # the one-loop cell lies below both maximal cells; the cell of two weight-1
    # vertices joined by a bridge only below the dumbbell, since contractions
    # of the theta graph never create a bridge
    one_edge = {tuple(sorted(h for _, h in G.vertices)): i for i, G in enumerate(M.cells) if len(G.edges) == 1}
    loop, bridge = one_edge[(1,)], one_edge[(1, 1)]
    assert M.is_face(loop, t) and M.is_face(loop, d)
    assert M.is_face(bridge, d) and not M.is_face(bridge, t)


def test_genus_five_f_vector():
    fv = moduli_f_vector(5)
    assert fv == [1, 3, 11, 34, 100, 239, 492, 784, 1002, 926, 632, 260, 71]
    assert sum(fv) == 4555

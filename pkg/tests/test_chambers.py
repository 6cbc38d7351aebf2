import random

import pytest

from trophodge import polyhedra as ph
from trophodge.chambers import (
    Chamber,
    act_on_assignment,
    arrangement,
    assignment_cone,
    assignment_orbits,
    chamber_orbits,
    feasible_assignments,
    in_open_chamber,
    is_open_chamber_k4,
    k4_graph,
    wall_and_chamber,
)
from trophodge.io import dumps


def test_genus_two_graphs_have_one_chamber(theta, dumbbell):
    for G in (theta, dumbbell):
        chambers = wall_and_chamber(G)
        assert len(chambers) == 1
        assert chambers[0].contains({e: 1 for e in G.edge_ids})


def test_k4_has_51_chambers(k4_chambers):
    assert len(k4_chambers) == 51
    for ch in k4_chambers:
        assert ch.contains(ch.representative)
        assert ch.f_vector == (34, 60, 27)
        assert ch.polygons == {3: 12, 4: 15}
    assert len({ch.type for ch in k4_chambers}) == 4


def test_k4_chamber_orbits(k4_chambers):
    orbits = chamber_orbits(k4_graph(), k4_chambers)
    assert [len(o) for o in orbits] == [24, 12, 12, 3]
    for orbit in orbits:
        assert len({k4_chambers[i].type for i in orbit}) == 1


def test_chambers_match_unique_minimum_assignments(k4_chambers):
    feasible = feasible_assignments()
    assert len(feasible) == 51
    hit = {}
    for a in feasible:
        p = ph.interior_point(assignment_cone(a))
        lengths = {e: p[f"l_{e}"] for e in range(6)}
        (j,) = [j for j, ch in enumerate(k4_chambers) if ch.contains(lengths)]
        hit[a] = j
    assert len(set(hit.values())) == 51


def test_assignment_orbits():
    orbits = assignment_orbits(feasible_assignments())
    assert [len(o) for o in orbits] == [24, 12, 12, 3]
    a = orbits[0][0]
    assert act_on_assignment({1: 1, 2: 2, 3: 3, 4: 4}, a) == a


def test_open_chamber_criterion_examples():
    assert is_open_chamber_k4((3, 5, 7, 11, 13, 17))
    assert not is_open_chamber_k4((1, 1, 2, 3, 4, 5))
    assert not is_open_chamber_k4((1, 2, 3, 2, 4, 5))
    with pytest.raises(ValueError):
        is_open_chamber_k4((1, 2, 3))
    with pytest.raises(ValueError):
        is_open_chamber_k4((0, 2, 3, 4, 5, 6))


def test_order_chain_lies_in_a_chamber(k4_chambers):
    # M12 < M13 < M23 < M34 < M14, M24
    M = (1, 2, 5, 3, 6, 4)
    assert is_open_chamber_k4(M)
    assert in_open_chamber(k4_chambers, dict(enumerate(M)))


def test_walls_are_not_in_chambers(k4_chambers):
    assert not in_open_chamber(k4_chambers, dict(enumerate((1, 1, 2, 3, 4, 5))))
    assert not in_open_chamber(k4_chambers, {e: 1 for e in range(6)})
    for h in arrangement(k4_graph()).hyperplanes:
        assert any(h) and len([a for a in h if a]) >= 2


def test_chamber_json_round_trip(k4_chambers):
    G = k4_graph()
    for ch in k4_chambers[:5]:
        back = Chamber.from_json(G, ch.to_json())
        assert back.constraints == ch.constraints
        assert back.representative == ch.representative and back.type == ch.type
        assert dumps(back.to_json()) == dumps(ch.to_json())


def test_chamber_membership_is_constant_on_random_points(k4_chambers):
    rng = random.Random(2)
    for ch in rng.sample(k4_chambers, 4):
        p = ph.interior_point(ch.polyhedron(), rng)
        lengths = {e: p[f"l_{e}"] for e in range(6)}
        assert ch.contains(lengths) and is_open_chamber_k4([lengths[e] for e in range(6)])

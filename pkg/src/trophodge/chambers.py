"""Wall-and-chamber decomposition of the edge-length cone of a graph.

Every cell over ``G`` projects to a polyhedral cone in length space: the
metrics over which the cell is nonempty.  The facets of the full-dimensional
projections cut the positive orthant into regions; adjacent regions seen by
the same set of cells are glued into chambers, on which |K| has a fixed
cell structure.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from . import polyhedra
from .graph import WeightedGraph, automorphisms, canonical_divisor
from .hodge import default_orientation
from .linsys import (
    CellComplex,
    MetricGraph,
    coarse_data,
    enumerate_cells,
    fingerprint,
    fvar,
    iso_fingerprint,
    lvar,
    polygon_counts,
)
from .polyhedra import Constraint, RationalPolyhedron


def length_vars(G: WeightedGraph) -> list[str]:
    return [lvar(e) for e in G.edge_ids]


def coarse_projection(G: WeightedGraph, coarse, orientation=None) -> RationalPolyhedron:
    """Metrics admitting a coarse datum: eliminate ``f`` from
    ``m l < f(t) - f(s) < (m + d) l`` (or ``= m l`` when ``d = 0``)."""
    orientation = orientation or default_orientation(G)
    cons = [polyhedra.gt({lvar(e): 1}) for e in G.edge_ids]
    for e, (m, d) in zip(G.edge_ids, coarse):
        s, t = orientation[e]
        delta = {fvar(t): 1}
        delta[fvar(s)] = delta.get(fvar(s), 0) - 1
        if d == 0:
            cons.append(polyhedra.eq({**delta, lvar(e): -m}))
        else:
            cons.append(polyhedra.gt({**delta, lvar(e): -m}))
            cons.append(polyhedra.gt({k: -c for k, c in delta.items()} | {lvar(e): m + d}))
    names = [fvar(v) for v in G.vertex_ids] + length_vars(G)
    return polyhedra.project(RationalPolyhedron(names, cons), length_vars(G))


def _hyperplane(c: Constraint, names: Sequence[str]) -> tuple[int, ...]:
    """Primitive integer normal, sign fixed so the first nonzero entry is positive."""
    row, _ = polyhedra._to_int_row(c, names)
    g = 0
    for x in row:
        g = abs(x) if g == 0 else _gcd(g, abs(x))
    row = tuple(x // g for x in row)
    first = next(x for x in row if x)
    return row if first > 0 else tuple(-x for x in row)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _halfspace(normal: Sequence[int], sign: int, names: Sequence[str]) -> Constraint:
    return polyhedra.gt({v: sign * a for v, a in zip(names, normal) if a})


def facet_constraints(P: RationalPolyhedron) -> list[Constraint]:
    """Irredundant strict inequalities of a full-dimensional open cone."""
    kept = list(P.strict)
    i = 0
    while i < len(kept):
        c = kept[i]
        others = kept[:i] + kept[i + 1:]
        negated = polyhedra.ge({v: -a for v, a in c.coeffs}, -c.const)
        if polyhedra.is_feasible(RationalPolyhedron(P.variables, others + [negated])):
            i += 1
        else:
            kept = others
    return kept


@dataclass
class Chamber:
    graph: WeightedGraph
    constraints: list[Constraint]
    representative: dict[int, Fraction]
    type: int = -1
    fingerprint: str = ""
    iso: str = ""
    f_vector: tuple = ()
    polygons: dict | None = None

    def polyhedron(self) -> RationalPolyhedron:
        return RationalPolyhedron(length_vars(self.graph), self.constraints)

    def contains(self, lengths: Mapping[int, object]) -> bool:
        point = {lvar(e): Fraction(lengths[e]) for e in self.graph.edge_ids}
        return all(c.holds(point) for c in self.constraints)

    def to_json(self) -> dict:
        return {
            "constraints": [str(c) for c in self.constraints],
            "representative": {str(e): _q(x) for e, x in sorted(self.representative.items())},
            "type": self.type,
        }

    @classmethod
    def from_json(cls, G: WeightedGraph, obj) -> "Chamber":
        return cls(
            G,
            [polyhedra.parse_constraint(c) for c in obj["constraints"]],
            {int(e): Fraction(x) for e, x in obj["representative"].items()},
            int(obj["type"]),
        )


def _q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass
class Arrangement:
    graph: WeightedGraph
    full: list[tuple[tuple, RationalPolyhedron]]  # coarse datum, projection
    lower: list[tuple[tuple, RationalPolyhedron]]
    hyperplanes: list[tuple[int, ...]]


@lru_cache(maxsize=16)
def arrangement(G: WeightedGraph) -> Arrangement:
    names = length_vars(G)
    D = canonical_divisor(G)
    orientation = default_orientation(G)
    full, lower, planes = [], [], set()
    for coarse, _ in coarse_data(G, D, D.degree(), orientation):
        P = coarse_projection(G, coarse, orientation)
        if not polyhedra.is_feasible(P):
            continue
        if P.equations or polyhedra.implicit_equalities(P):
            lower.append((coarse, P))
            continue
        full.append((coarse, P))
        for c in facet_constraints(P):
            if len(c.coeffs) > 1:  # l_e > 0 is the boundary of the orthant
                planes.add(_hyperplane(c, names))
    return Arrangement(G, full, lower, sorted(planes))


def _regions(G: WeightedGraph, planes: list[tuple[int, ...]]) -> list[tuple[tuple[int, ...], dict]]:
    """Sign vectors and interior points of all open regions of the
    arrangement inside the positive orthant, by exact recursive splitting."""
    names = length_vars(G)
    base = [polyhedra.gt({v: 1}) for v in names]
    regions = [((), base, polyhedra.interior_point(RationalPolyhedron(names, base)))]
    for h in planes:
        nxt = []
        for signs, cons, point in regions:
            val = sum(a * point[v] for v, a in zip(names, h))
            for s in (1, -1):
                side = cons + [_halfspace(h, s, names)]
                if val * s > 0:
                    nxt.append((signs + (s,), side, point))
                    continue
                P = RationalPolyhedron(names, side)
                if polyhedra.is_feasible(P):
                    nxt.append((signs + (s,), side, polyhedra.interior_point(P)))
        regions = nxt
    return [(signs, point) for signs, _, point in regions]


def _signature(arr: Arrangement, point) -> frozenset:
    return frozenset(coarse for coarse, P in arr.full if P.contains(point))


def wall_and_chamber(G: WeightedGraph, seed: int = 0, verify: bool = True) -> list[Chamber]:
    """Open chambers of the length cone of ``G``, deterministically ordered.

    With ``verify``, two random interior points of each chamber are checked to
    give the same |K|, and the chamber is checked to be convex.
    """
    names = length_vars(G)
    arr = arrangement(G)
    planes = arr.hyperplanes
    regions = _regions(G, planes)
    sigs = [_signature(arr, p) for _, p in regions]
    parent = list(range(len(regions)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    index = {signs: i for i, (signs, _) in enumerate(regions)}
    for i, (signs, _) in enumerate(regions):
        for k in range(len(planes)):
            flipped = signs[:k] + (-signs[k],) + signs[k + 1:]
            j = index.get(flipped)
            if j is not None and sigs[i] == sigs[j]:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(regions)):
        groups.setdefault(find(i), []).append(i)

    rng = random.Random(seed)
    chambers = []
    for members in groups.values():
        common = []
        for k, h in enumerate(planes):
            s = {regions[i][0][k] for i in members}
            if len(s) == 1:
                common.append(_halfspace(h, s.pop(), names))
        cons = facet_constraints(RationalPolyhedron(names, [polyhedra.gt({v: 1}) for v in names] + common))
        if verify:
            inside = sum(1 for _, p in regions if all(c.holds(p) for c in common))
            if inside != len(members):
                raise AssertionError("glued regions do not form a convex chamber")
        rep = _generic_point(arr, RationalPolyhedron(names, cons), rng)
        chambers.append(Chamber(G, cons, {e: rep[lvar(e)] for e in G.edge_ids}))
    chambers.sort(key=lambda ch: sorted(str(c) for c in ch.constraints))
    _assign_types(G, chambers, arr, rng, verify)
    return chambers


def _generic_point(arr: Arrangement, P: RationalPolyhedron, rng) -> dict:
    """Interior point of ``P`` avoiding every lower-dimensional projection."""
    point = polyhedra.interior_point(P)
    while any(Q.contains(point) for _, Q in arr.lower):
        point = polyhedra.interior_point(P, rng)
    return point


def _assign_types(G, chambers, arr, rng, verify):
    types: dict[str, int] = {}
    for ch in chambers:
        C = enumerate_cells(MetricGraph(G, ch.representative))
        ch.fingerprint = fingerprint(C)
        ch.iso = iso_fingerprint(C)
        ch.f_vector = tuple(C.f_vector())
        ch.polygons = polygon_counts(C)
        ch.type = types.setdefault(ch.iso, len(types))
        if verify:
            for _ in range(2):
                p = _generic_point(arr, ch.polyhedron(), rng)
                other = enumerate_cells(MetricGraph(G, {e: p[lvar(e)] for e in G.edge_ids}))
                if fingerprint(other) != ch.fingerprint:
                    raise AssertionError("cell structure varies inside a chamber")


def chamber_orbits(G: WeightedGraph, chambers: Sequence[Chamber]) -> list[list[int]]:
    """Orbits of Aut(G) on chambers, acting by permuting edge lengths."""
    group = automorphisms(G)
    seen: set[int] = set()
    orbits = []
    for i, ch in enumerate(chambers):
        if i in seen:
            continue
        orbit = set()
        for phi in group:
            moved = {phi.edge_map[e]: x for e, x in ch.representative.items()}
            hits = [j for j, other in enumerate(chambers) if other.contains(moved)]
            if len(hits) != 1:
                raise AssertionError("automorphism image of a chamber is not a chamber")
            orbit.add(hits[0])
        seen |= orbit
        orbits.append(sorted(orbit))
    orbits.sort(key=lambda o: (-len(o), o))
    return orbits


def in_open_chamber(chambers: Sequence[Chamber], lengths: Mapping[int, object]) -> bool:
    return any(ch.contains(lengths) for ch in chambers)


# -- the complete graph on four vertices ------------------------------------------------

K4_EDGES = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


def k4_graph() -> WeightedGraph:
    return WeightedGraph(
        tuple((v, 0) for v in range(1, 5)),
        tuple((i, a, b) for i, (a, b) in enumerate(K4_EDGES)),
    )


def k4_triples() -> list[tuple[int, ...]]:
    """Edge indices at each vertex, i.e. the triples {M_1j}, {M_2j}, ..."""
    return [tuple(i for i, pair in enumerate(K4_EDGES) if v in pair) for v in range(1, 5)]


def is_open_chamber_k4(M: Sequence[object]) -> bool:
    """True iff the minimum over each vertex's three edge lengths is unique."""
    M = [Fraction(x) for x in M]
    if len(M) != 6 or any(x <= 0 for x in M):
        raise ValueError("expected six positive lengths")
    for triple in k4_triples():
        vals = [M[i] for i in triple]
        if vals.count(min(vals)) > 1:
            return False
    return True


def assignment_cone(assignment: Sequence[int]) -> RationalPolyhedron:
    """Metrics where ``assignment[v]`` is the strict minimum at vertex ``v``."""
    names = [lvar(e) for e in range(6)]
    cons = [polyhedra.gt({v: 1}) for v in names]
    for triple, winner in zip(k4_triples(), assignment):
        for other in triple:
            if other != winner:
                cons.append(polyhedra.gt({lvar(other): 1, lvar(winner): -1}))
    return RationalPolyhedron(names, cons)


def feasible_assignments() -> list[tuple[int, ...]]:
    return [a for a in itertools.product(*k4_triples()) if polyhedra.is_feasible(assignment_cone(a))]


def _edge_perm(sigma: Mapping[int, int]) -> dict[int, int]:
    lookup = {frozenset(p): i for i, p in enumerate(K4_EDGES)}
    return {i: lookup[frozenset((sigma[a], sigma[b]))] for i, (a, b) in enumerate(K4_EDGES)}


def act_on_assignment(sigma: Mapping[int, int], assignment: Sequence[int]) -> tuple[int, ...]:
    emap = _edge_perm(sigma)
    out = [None] * 4
    for v, e in zip(range(1, 5), assignment):
        out[sigma[v] - 1] = emap[e]
    return tuple(out)


def assignment_orbits(assignments) -> list[list[tuple[int, ...]]]:
    remaining = set(assignments)
    orbits = []
    for a in sorted(assignments):
        if a not in remaining:
            continue
        orbit = set()
        for perm in itertools.permutations(range(1, 5)):
            orbit.add(act_on_assignment(dict(zip(range(1, 5), perm)), a))
        orbits.append(sorted(orbit))
        remaining -= orbit
    orbits.sort(key=len, reverse=True)
    return orbits


@dataclass
class K4Report:
    chambers: int
    orbit_sizes: list[int]
    types: int
    f_vectors: list[tuple]
    polygons: list[dict]
    representatives: list[dict]
    complexes: list[CellComplex]

    def summary(self) -> dict:
        fv = sorted(set(self.f_vectors))
        return {
            "chambers": self.chambers,
            "orbit_sizes": self.orbit_sizes,
            "types": self.types,
            "f_vector": list(fv[0]) if len(fv) == 1 else [list(x) for x in fv],
        }


def k4_chamber_analysis() -> K4Report:
    """Chambers of K4 through the unique-minimum assignments, their S4
    orbits and the cell structure of |K| on one metric per orbit."""
    G = k4_graph()
    feasible = feasible_assignments()
    orbits = assignment_orbits(feasible)
    arr = arrangement(G)
    rng = random.Random(0)
    reps, complexes, isos = [], [], set()
    for orbit in orbits:
        p = _generic_point(arr, assignment_cone(orbit[0]), rng)
        lengths = {e: p[lvar(e)] for e in range(6)}
        C = enumerate_cells(MetricGraph(G, lengths))
        reps.append(lengths)
        complexes.append(C)
        isos.add(iso_fingerprint(C))
    return K4Report(
        chambers=len(feasible),
        orbit_sizes=[len(o) for o in orbits],
        types=len(isos),
        f_vectors=[tuple(C.f_vector()) for C in complexes],
        polygons=[polygon_counts(C) for C in complexes],
        representatives=reps,
        complexes=complexes,
    )

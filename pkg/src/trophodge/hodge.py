"""Cells of the Hodge bundle over the moduli of tropical curves.

Over a fixed graph ``G`` the edge lengths become variables ``l_e > 0``; a
cell is a pair (graph, cell datum) and its points are all
``(f, positions, lengths)`` solving the continuity equations.  Dimensions are
taken after dividing out the constant functions, so a cell over the top
moduli cone with constant ``f`` has dimension ``|E|``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from . import polyhedra
from .graph import (
    Divisor,
    WeightedGraph,
    automorphisms,
    bridge_sides,
    canonical_divisor,
)
from .linsys import (
    CellDatum,
    MetricGraph,
    cell_constraints,
    cell_variables,
    coarse_data,
    enumerate_cells,
    expand,
    fingerprint,
    fvar,
    lvar,
    xvar,
)
from .moduli import enumerate_stable_graphs
from .polyhedra import RationalPolyhedron

SUPPORTED_GENERA = (2, 3)


def default_orientation(G: WeightedGraph) -> dict[int, tuple[int, int]]:
    return {e: G.endpoints(e) for e in G.edge_ids}


@dataclass(frozen=True)
class HodgeCell:
    graph: WeightedGraph
    datum: CellDatum
    dim_H: int
    orientation: tuple = field(default=(), compare=False, repr=False)

    @cached_property
    def polyhedron(self) -> RationalPolyhedron:
        return hodge_polyhedron(self.graph, self.datum, dict(zip(self.graph.edge_ids, self.orientation)) or None)

    @property
    def dim_Lambda(self) -> int:
        return self.dim_H + 1


def hodge_polyhedron(G: WeightedGraph, c: CellDatum, orientation=None) -> RationalPolyhedron:
    orientation = orientation or default_orientation(G)
    cons = cell_constraints(G, c, orientation, lambda e: None)
    cons += [polyhedra.gt({lvar(e): 1}) for e in G.edge_ids]
    names = cell_variables(G, c) + [lvar(e) for e in G.edge_ids]
    return RationalPolyhedron(names, cons)


def _zero_rank(G: WeightedGraph, coarse) -> int:
    """Rank of the equations ``f(s) = f(t)`` coming from edges with m = d = 0."""
    parent = {v: v for v in G.vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rank = 0
    for e, (m, d) in zip(G.edge_ids, coarse):
        if m == 0 and d == 0:
            a, b = map(find, G.endpoints(e))
            if a != b:
                parent[a] = b
                rank += 1
    return rank


def hodge_dimension(G: WeightedGraph, c: CellDatum) -> int:
    """``dim_H`` of a feasible cell.

    All inequalities are strict, so the dimension is the number of variables
    minus the rank of the continuity equations, minus one for the constants.
    An equation with a length or position variable of its own is independent
    of the rest; the others are incidence rows of the zero-slope edges.
    """
    coarse = tuple((m, sum(comp)) for _, m, comp in c.edge_data)
    n_vars = len(G.vertices) + sum(len(comp) for _, _, comp in c.edge_data) + len(G.edges)
    private = sum(1 for m, d in coarse if m != 0 or d != 0)
    return n_vars - private - _zero_rank(G, coarse) - 1


@lru_cache(maxsize=None)
def enumerate_hodge_cells(G: WeightedGraph, slope_bound: int | None = None) -> tuple[HodgeCell, ...]:
    """All nonempty cells over ``G`` for ``D = K``, sorted by (dim, datum)."""
    D = canonical_divisor(G)
    orientation = default_orientation(G)
    bound = D.degree() if slope_bound is None else slope_bound
    okey = tuple(orientation[e] for e in G.edge_ids)
    cells = []
    for coarse, vm in coarse_data(G, D, bound, orientation):
        for datum in expand(G, coarse, vm):
            cells.append(HodgeCell(G, datum, hodge_dimension(G, datum), okey))
    cells.sort(key=lambda h: (h.dim_H, h.datum))
    return tuple(cells)


def act(phi, G: WeightedGraph, c: CellDatum) -> CellDatum:
    """Image of a datum (default orientation) under an automorphism.

    Traversing a reversed edge from its other end turns the outgoing slope
    ``m`` into ``-(m + d)`` and reverses the composition.
    """
    vm = tuple(sorted((phi.vertex_map[v], d) for v, d in c.vertex_mult))
    edges = []
    for e, m, comp in c.edge_data:
        if e in phi.reversed_edges:
            edges.append((phi.edge_map[e], -(m + sum(comp)), tuple(reversed(comp))))
        else:
            edges.append((phi.edge_map[e], m, comp))
    return CellDatum(vm, tuple(sorted(edges)))


def hodge_f_vector(g: int, modulo_automorphisms: bool = False) -> list[int]:
    """Number of cells of each dimension over all genus-``g`` graphs.

    By default cells are counted per isomorphism class of graphs with the
    data taken on a fixed model; with ``modulo_automorphisms`` each
    Aut(G)-orbit of data is counted once.
    """
    if g not in SUPPORTED_GENERA:
        raise ValueError(f"genus {g} not supported (choose from {SUPPORTED_GENERA})")
    counts: dict[int, int] = defaultdict(int)
    for G in enumerate_stable_graphs(g):
        cells = enumerate_hodge_cells(G)
        if modulo_automorphisms:
            for h in orbit_representatives(G, cells):
                counts[h.dim_H] += 1
        else:
            for h in cells:
                counts[h.dim_H] += 1
    top = max(counts)
    return [counts[i] for i in range(top + 1)]


def orbit_representatives(G: WeightedGraph, cells) -> list[HodgeCell]:
    group = automorphisms(G)
    seen: set = set()
    reps = []
    for h in cells:
        if h.datum in seen:
            continue
        reps.append(h)
        for phi in group:
            seen.add(act(phi, G, h.datum))
    return reps


def max_cell_dimension(g: int) -> tuple[int, HodgeCell]:
    """Largest ``dim_H`` over all genus-``g`` graphs and a cell attaining it."""
    if g not in SUPPORTED_GENERA:
        raise ValueError(f"genus {g} not supported (choose from {SUPPORTED_GENERA})")
    best = None
    for G in enumerate_stable_graphs(g):
        for h in enumerate_hodge_cells(G):
            if best is None or h.dim_H > best.dim_H:
                best = h
    return best.dim_H, best


def _check_contractible(G: WeightedGraph, e: int) -> tuple[int, int]:
    if G.is_loop(e):
        raise ValueError("only non-loop edges are handled")
    return G.endpoints(e)


def at_zero_length(G: WeightedGraph, e: int, c: CellDatum) -> RationalPolyhedron:
    """The cell's polyhedron with ``l(e) > 0`` replaced by ``l(e) = 0``."""
    P = hodge_polyhedron(G, c)
    cons = [k for k in P.constraints if k != polyhedra.gt({lvar(e): 1})]
    cons.append(polyhedra.eq({lvar(e): 1}))
    return RationalPolyhedron(P.variables, cons)


def contracted_datum(G: WeightedGraph, e: int, c: CellDatum) -> CellDatum | None:
    """Datum over ``contract_edge(G, e)`` seen on the face ``l(e) = 0``, or
    ``None`` when the edge carries chips (such cells do not reach it)."""
    a, b = _check_contractible(G, e)
    if c.chips_on(e):
        return None
    vm = dict(c.vertex_mult)
    vm[a] += vm.pop(b)
    return CellDatum(
        tuple(sorted(vm.items())),
        tuple(t for t in c.edge_data if t[0] != e),
    )


def contraction_lifts(G: WeightedGraph, e: int, c: CellDatum) -> list[CellDatum]:
    """Data over ``G`` (with ``e`` chip-free) contracting to ``c``, one for
    each way of splitting the merged vertex's chips between the endpoints."""
    a, b = _check_contractible(G, e)
    K = canonical_divisor(G)
    orient = default_orientation(G)
    vm = dict(c.vertex_mult)
    total = vm.pop(a)
    # chips forced at b by the edges other than e
    base_b = K[b]
    for f, m, comp in c.edge_data:
        s, t = orient[f]
        if s == b:
            base_b += m
        if t == b:
            base_b -= m + sum(comp)
    out = []
    for db in range(total + 1):
        # e adds m_e chips at its start and removes m_e at its end
        m_e = db - base_b if orient[e][0] == b else base_b - db
        v2 = dict(vm)
        v2[a], v2[b] = total - db, db
        edges = tuple(sorted(c.edge_data + ((e, m_e, ()),)))
        out.append(CellDatum(tuple(sorted(v2.items())), edges))
    return out


# -- bridges and loops ---------------------------------------------------------------


def rescale_witness(gamma: MetricGraph, e: int, c: Fraction, datum: CellDatum, point):
    """Map a point of a cell over ``gamma`` to the same cell over ``gamma``
    with ``l(e)`` multiplied by ``c``: positions on ``e`` scale by ``c`` and,
    for a bridge, ``f`` shifts by ``(c - 1) * (f(end) - f(start))`` on the
    side of the end vertex."""
    G = gamma.graph
    c = Fraction(c)
    out = dict(point)
    comp = datum.composition(e)
    for j in range(len(comp)):
        out[xvar(e, j)] = c * point[xvar(e, j)]
    if not G.is_loop(e):
        s, t = gamma.orientation[e]
        shift = (c - 1) * (point[fvar(t)] - point[fvar(s)])
        _, far = bridge_sides(G, e) if s in bridge_sides(G, e)[0] else bridge_sides(G, e)[::-1]
        for v in far:
            out[fvar(v)] = point[fvar(v)] + shift
    return out


def rescale_invariance_check(gamma: MetricGraph, e: int, c, D: Divisor | None = None) -> bool:
    """Whether |D| keeps the same cells and covers when ``l(e)`` is scaled
    by ``c`` (``e`` must be a bridge or a loop)."""
    G = gamma.graph
    if not (G.is_loop(e) or G.is_bridge(e)):
        raise ValueError(f"edge {e} is neither a bridge nor a loop")
    c = Fraction(c)
    if c <= 0:
        raise ValueError("scale factor must be positive")
    before = enumerate_cells(gamma, D)
    scaled = gamma.with_length(e, gamma.length(e) * c)
    after = enumerate_cells(scaled, D)
    return fingerprint(before) == fingerprint(after)

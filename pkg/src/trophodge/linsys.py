"""Polyhedral cell structure of linear systems |D| on a metric graph.

A cell is labeled by discrete data: chips sitting at vertices, and on each
oriented edge the outgoing slope ``m`` of the rational function at the start
together with the ordered multiplicities of the chips inside the edge.  Its
points are parametrized by the vertex values ``f(v)`` and the chip positions
``x_{e,j}``, subject to one continuity equation per edge

    f(end) = f(start) + (m + d_e) * l(e) - sum_j d_{e,j} * x_{e,j}

and the strict chain ``0 < x_{e,1} < ... < x_{e,r} < l(e)``.  Cells are
stored at multiplicity level (the quotient by permuting equal chips is built
in) and dimensions are taken modulo adding constants to ``f``.
"""
from __future__ import annotations

import hashlib
import itertools
import json
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import polyhedra
from .canon import canonical_labeling
from .graph import Divisor, EdgePoint, WeightedGraph, canonical_divisor
from .polyhedra import RationalPolyhedron


class MetricGraph:
    """A weighted graph with positive rational edge lengths and a fixed
    orientation ``e -> (start, end)`` identifying ``e`` with ``[0, l(e)]``."""

    def __init__(
        self,
        graph: WeightedGraph,
        lengths: Mapping[int, object],
        orientation: Mapping[int, tuple[int, int]] | None = None,
    ):
        self.graph = graph
        self.lengths = {e: Fraction(lengths[e]) for e in graph.edge_ids}
        if any(l <= 0 for l in self.lengths.values()):
            raise ValueError("edge lengths must be positive")
        if set(lengths) - set(graph.edge_ids):
            raise ValueError("lengths given for unknown edges")
        orientation = dict(orientation or {})
        self.orientation = {}
        for e in graph.edge_ids:
            u, v = graph.endpoints(e)
            s, t = orientation.get(e, (u, v))
            if {s, t} != {u, v}:
                raise ValueError(f"orientation of edge {e} does not match its endpoints")
            self.orientation[e] = (s, t)

    def length(self, e: int) -> Fraction:
        return self.lengths[e]

    def start(self, e: int) -> int:
        return self.orientation[e][0]

    def end(self, e: int) -> int:
        return self.orientation[e][1]

    def orientation_key(self) -> tuple:
        return tuple(self.orientation[e] for e in self.graph.edge_ids)

    def with_length(self, e: int, value) -> "MetricGraph":
        lengths = dict(self.lengths)
        lengths[e] = Fraction(value)
        return MetricGraph(self.graph, lengths, self.orientation)

    def __eq__(self, other):
        return (
            isinstance(other, MetricGraph)
            and self.graph == other.graph
            and self.lengths == other.lengths
            and self.orientation == other.orientation
        )

    def __hash__(self):
        return hash((self.graph, tuple(sorted(self.lengths.items())), self.orientation_key()))

    def __repr__(self):
        return f"MetricGraph({self.graph!r}, {self.lengths!r})"


@dataclass(frozen=True, order=True)
class CellDatum:
    """Discrete data of one relatively open cell.

    ``vertex_mult`` lists ``(v, d_v)`` for every vertex; ``edge_data`` lists
    ``(e, m_e, (d_{e,1}, ..., d_{e,r}))`` for every edge.
    """

    vertex_mult: tuple[tuple[int, int], ...]
    edge_data: tuple[tuple[int, int, tuple[int, ...]], ...]

    def chips_on(self, e: int) -> int:
        return sum(self.composition(e))

    def slope(self, e: int) -> int:
        return self._edges[e][0]

    def composition(self, e: int) -> tuple[int, ...]:
        return self._edges[e][1]

    def at_vertex(self, v: int) -> int:
        return dict(self.vertex_mult)[v]

    @property
    def _edges(self):
        return {e: (m, comp) for e, m, comp in self.edge_data}

    def degree(self) -> int:
        return sum(d for _, d in self.vertex_mult) + sum(sum(c) for _, _, c in self.edge_data)

    def to_json(self) -> dict:
        return {
            "vertices": [[v, d] for v, d in self.vertex_mult],
            "edges": [[e, m, list(c)] for e, m, c in self.edge_data],
        }

    @classmethod
    def from_json(cls, obj) -> "CellDatum":
        return cls(
            tuple((int(v), int(d)) for v, d in obj["vertices"]),
            tuple((int(e), int(m), tuple(int(x) for x in c)) for e, m, c in obj["edges"]),
        )


def make_datum(vertex_mult: Mapping[int, int], edge_data: Mapping[int, tuple[int, Sequence[int]]]) -> CellDatum:
    return CellDatum(
        tuple(sorted((int(v), int(d)) for v, d in vertex_mult.items())),
        tuple(sorted((int(e), int(m), tuple(c)) for e, (m, c) in edge_data.items())),
    )


def _orientation(G: WeightedGraph, orientation=None) -> dict[int, tuple[int, int]]:
    if orientation is None:
        return {e: G.endpoints(e) for e in G.edge_ids}
    return dict(orientation)


def vertex_balance(G: WeightedGraph, D: Divisor, slopes: Mapping[int, int], chips: Mapping[int, int], orientation=None) -> dict[int, int]:
    """Chips forced at each vertex: ``D(v) + sum_out m_e - sum_in (d_e + m_e)``."""
    orient = _orientation(G, orientation)
    out = {v: D[v] for v in G.vertex_ids}
    for e in G.edge_ids:
        s, t = orient[e]
        out[s] += slopes[e]
        out[t] -= chips[e] + slopes[e]
    return out


def balance_check(G: WeightedGraph, D: Divisor, c: CellDatum, orientation=None) -> bool:
    if any(x <= 0 for _, _, comp in c.edge_data for x in comp):
        return False
    if sorted(v for v, _ in c.vertex_mult) != sorted(G.vertex_ids):
        return False
    forced = vertex_balance(
        G, D, {e: m for e, m, _ in c.edge_data}, {e: sum(comp) for e, _, comp in c.edge_data}, orientation
    )
    return all(forced[v] == d for v, d in c.vertex_mult)


def fvar(v: int) -> str:
    return f"f_{v}"


def xvar(e: int, j: int) -> str:
    return f"x_{e}_{j}"


def lvar(e: int) -> str:
    return f"l_{e}"


def cell_constraints(G: WeightedGraph, c: CellDatum, orientation, length_of) -> list:
    """Continuity equations and chain inequalities; ``length_of(e)`` returns
    either a number or ``None`` (length kept as the variable ``l_e``)."""
    cons = []
    for e, m, comp in c.edge_data:
        s, t = orientation[e]
        L = length_of(e)
        d = sum(comp)
        coeffs: dict = defaultdict(Fraction)
        const = Fraction(0)
        coeffs[fvar(t)] += 1
        coeffs[fvar(s)] -= 1
        if L is None:
            coeffs[lvar(e)] -= m + d
        else:
            const -= (m + d) * L
        for j, dj in enumerate(comp):
            coeffs[xvar(e, j)] += dj
        cons.append(polyhedra.eq(coeffs, const))
        r = len(comp)
        if r:
            cons.append(polyhedra.gt({xvar(e, 0): 1}))
            for j in range(r - 1):
                cons.append(polyhedra.gt({xvar(e, j + 1): 1, xvar(e, j): -1}))
            if L is None:
                cons.append(polyhedra.gt({lvar(e): 1, xvar(e, r - 1): -1}))
            else:
                cons.append(polyhedra.gt({xvar(e, r - 1): -1}, L))
    return cons


def cell_variables(G: WeightedGraph, c: CellDatum) -> list[str]:
    names = [fvar(v) for v in G.vertex_ids]
    for e, _, comp in c.edge_data:
        names.extend(xvar(e, j) for j in range(len(comp)))
    return names


def cell_polyhedron(gamma: MetricGraph, D: Divisor, c: CellDatum) -> RationalPolyhedron:
    if not balance_check(gamma.graph, D, c, gamma.orientation):
        raise ValueError("cell datum fails the vertex balance equations")
    return RationalPolyhedron(
        cell_variables(gamma.graph, c),
        cell_constraints(gamma.graph, c, gamma.orientation, gamma.length),
    )


# -- enumeration of coarse data ----------------------------------------------------
#
# A coarse datum fixes (m_e, d_e) per edge.  Feasibility of a cell only depends
# on it: for fixed l the weighted position sum sum_j d_j x_j ranges over the
# open interval (0, d_e l), so the f-values must satisfy
#     m l < f(end) - f(start) < (m + d) l      (d > 0)
#     f(end) - f(start) = m l                  (d = 0)
# which is a difference-constraint system.


@lru_cache(maxsize=256)
def _coarse_cached(G: WeightedGraph, orient_key: tuple, D_key: tuple, bound: int):
    orientation = dict(zip(G.edge_ids, orient_key))
    D = dict(D_key)
    deg = sum(D.values())
    verts = G.vertex_ids
    # visit edges so that vertices are completed early
    order_v = _bfs_order(G)
    pos = {v: i for i, v in enumerate(order_v)}
    edges = sorted(G.edge_ids, key=lambda e: (max(pos[x] for x in orientation[e]), min(pos[x] for x in orientation[e]), e))
    last_edge = {}
    for i, e in enumerate(edges):
        for x in orientation[e]:
            last_edge[x] = i
    finishing = defaultdict(list)
    for v in verts:
        if v in last_edge:
            finishing[last_edge[v]].append(v)
    contrib = {v: D.get(v, 0) for v in verts}
    for v in verts:
        if v not in last_edge and contrib[v] < 0:
            return ()
    isolated_total = sum(contrib[v] for v in verts if v not in last_edge)
    results = []
    choice: dict[int, tuple[int, int]] = {}

    def rec(i: int, used: int) -> None:
        # ``used`` counts chips already committed to edges or finished vertices
        if i == len(edges):
            vm = tuple((v, contrib[v]) for v in sorted(verts))
            results.append((tuple(choice[e] for e in G.edge_ids), vm))
            return
        e = edges[i]
        s, t = orientation[e]
        for d in range(0, deg - used + 1):
            for m in range(-bound, bound + 1):
                if s == t and not (d == 0 and m == 0 or m < 0 < m + d):
                    continue
                contrib[s] += m
                contrib[t] -= d + m
                done = [contrib[v] for v in finishing[i]]
                if all(x >= 0 for x in done) and used + d + sum(done) <= deg:
                    choice[e] = (m, d)
                    if sign_feasible(G, orientation, [(f, choice[f]) for f in edges[: i + 1]]):
                        rec(i + 1, used + d + sum(done))
                contrib[s] -= m
                contrib[t] += d + m

    rec(0, isolated_total)
    return tuple(results)


def _bfs_order(G: WeightedGraph) -> list[int]:
    nbrs = defaultdict(set)
    for _, a, b in G.edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    start = G.vertex_ids[0]
    order, seen = [start], {start}
    i = 0
    while i < len(order):
        for w in sorted(nbrs[order[i]]):
            if w not in seen:
                seen.add(w)
                order.append(w)
        i += 1
    return order


def coarse_data(G: WeightedGraph, D: Divisor, slope_bound: int, orientation=None):
    """All balanced ``((m_e, d_e) per edge, vertex multiplicities)`` with
    ``|m_e| <= slope_bound`` that are realizable for some edge lengths."""
    orient = _orientation(G, orientation)
    return _coarse_cached(
        G,
        tuple(orient[e] for e in G.edge_ids),
        tuple(sorted((v, D[v]) for v in G.vertex_ids)),
        slope_bound,
    )


def sign_feasible(G: WeightedGraph, orientation, coarse) -> bool:
    """Whether some positive lengths admit the (possibly partial) coarse
    datum, given as ``(edge, (m, d))`` pairs.

    With lengths free, each edge only constrains the sign of
    ``f(end) - f(start)``; feasibility is acyclicity of the strict part
    after identifying the endpoints of the zero-difference edges.
    """
    parent = {v: v for v in G.vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    strict = []
    for e, (m, d) in coarse:
        s, t = orientation[e]
        if d == 0:
            if m == 0:
                parent[find(s)] = find(t)
            elif m > 0:
                strict.append((s, t))
            else:
                strict.append((t, s))
        else:
            if m >= 0:
                strict.append((s, t))
            elif m + d <= 0:
                strict.append((t, s))
    succ = defaultdict(set)
    for a, b in strict:
        a, b = find(a), find(b)
        if a == b:
            return False
        succ[a].add(b)
    state: dict = {}

    def has_cycle(u) -> bool:
        state[u] = 1
        for w in succ[u]:
            st = state.get(w, 0)
            if st == 1 or (st == 0 and has_cycle(w)):
                return True
        state[u] = 2
        return False

    return not any(state.get(u, 0) == 0 and has_cycle(u) for u in list(succ))


def metric_feasible(gamma: MetricGraph, coarse) -> bool:
    """Bellman-Ford on the difference constraints with strictness tracked as
    a lexicographic second component (``w - eps`` is ``(w, -1)``)."""
    G = gamma.graph
    arcs = []
    for e, (m, d) in zip(G.edge_ids, coarse):
        s, t = gamma.orientation[e]
        L = gamma.length(e)
        if d == 0:
            arcs.append((s, t, m * L, 0))
            arcs.append((t, s, -m * L, 0))
        else:
            arcs.append((s, t, (m + d) * L, -1))
            arcs.append((t, s, -m * L, -1))
    dist = {v: (Fraction(0), 0) for v in G.vertex_ids}
    for _ in range(len(dist)):
        changed = False
        for a, b, w, s in arcs:
            da = dist[a]
            cand = (da[0] + w, da[1] + s)
            if cand < dist[b]:
                dist[b] = cand
                changed = True
        if not changed:
            return True
    return False


def compositions(n: int) -> list[tuple[int, ...]]:
    if n == 0:
        return [()]
    out = []
    for cut in itertools.product((False, True), repeat=n - 1):
        parts, run = [], 1
        for c in cut:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        out.append(tuple(parts))
    return sorted(out)


def expand(G: WeightedGraph, coarse, vertex_mult) -> Iterable[CellDatum]:
    per_edge = [compositions(d) for _, d in coarse]
    for combo in itertools.product(*per_edge):
        yield CellDatum(
            vertex_mult,
            tuple((e, m, comp) for e, (m, _), comp in zip(G.edge_ids, coarse, combo)),
        )


# -- complexes ------------------------------------------------------------------


@dataclass
class CellComplex:
    cells: list[tuple[CellDatum, int]]
    covers: list[tuple[int, int]]

    def f_vector(self) -> list[int]:
        if not self.cells:
            return []
        top = max(d for _, d in self.cells)
        counts = [0] * (top + 1)
        for _, d in self.cells:
            counts[d] += 1
        return counts

    def index(self) -> dict[CellDatum, int]:
        return {c: i for i, (c, _) in enumerate(self.cells)}

    def facets_of(self, i: int) -> list[int]:
        return [f for f, c in self.covers if c == i]

    @property
    def fingerprint(self) -> str:
        return fingerprint(self)

    def to_json(self) -> dict:
        return {
            "cells": [{"datum": c.to_json(), "dim": d} for c, d in self.cells],
            "covers": [[i, j] for i, j in self.covers],
            "f_vector": self.f_vector(),
        }

    @classmethod
    def from_json(cls, obj) -> "CellComplex":
        return cls(
            [(CellDatum.from_json(c["datum"]), int(c["dim"])) for c in obj["cells"]],
            [(int(i), int(j)) for i, j in obj["covers"]],
        )


def _edge_degenerations(m: int, comp: tuple[int, ...]):
    """All ways to make a proper subset of the chain inequalities tight.

    Yields ``(to_start, to_end, new_slope, new_comp)``.
    """
    r = len(comp)
    for tight in itertools.product((False, True), repeat=r + 1):
        if all(tight):
            continue
        # items 0..r+1: start, x_1..x_r, end; tight[j] joins item j and j+1
        groups, cur = [], [0]
        for j in range(r + 1):
            if tight[j]:
                cur.append(j + 1)
            else:
                groups.append(cur)
                cur = [j + 1]
        groups.append(cur)
        to_start = sum(comp[i - 1] for i in groups[0] if 1 <= i <= r)
        to_end = sum(comp[i - 1] for i in groups[-1] if 1 <= i <= r)
        middle = tuple(sum(comp[i - 1] for i in g) for g in groups[1:-1])
        yield to_start, to_end, m + to_start, middle


def degenerations(c: CellDatum, orientation) -> set[CellDatum]:
    """Data reachable from ``c`` by merging adjacent chips or sliding the
    first/last chips of an edge onto its endpoints (``c`` itself included)."""
    per_edge = [list(_edge_degenerations(m, comp)) for _, m, comp in c.edge_data]
    out = set()
    base = dict(c.vertex_mult)
    for combo in itertools.product(*per_edge):
        vm = dict(base)
        edges = []
        for (e, _, _), (to_s, to_t, m2, comp2) in zip(c.edge_data, combo):
            s, t = orientation[e]
            vm[s] += to_s
            vm[t] += to_t
            edges.append((e, m2, comp2))
        out.add(CellDatum(tuple(sorted(vm.items())), tuple(edges)))
    return out


def _cell_dimension(P: RationalPolyhedron) -> int:
    return polyhedra.dimension(P) - 1


def cell_dimension(G: WeightedGraph, c: CellDatum) -> int:
    """Dimension in |D| of a nonempty cell, without elimination.

    Every inequality is strict, so only the equations cut the dimension.  An
    edge carrying chips has position variables of its own and contributes one
    independent equation; chip-free edges tie ``f`` along connected pieces.
    """
    parent = {v: v for v in G.vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pieces = len(parent)
    positions = loaded = 0
    ends = {e: G.endpoints(e) for e in G.edge_ids}
    for e, _, comp in c.edge_data:
        if comp:
            positions += len(comp)
            loaded += 1
        else:
            a, b = map(find, ends[e])
            if a != b:
                parent[a] = b
                pieces -= 1
    return positions - loaded + pieces - 1


def enumerate_cells(gamma: MetricGraph, D: Divisor | None = None, slope_bound: int | None = None) -> CellComplex:
    """The complex |D| (default ``D = K``) with its covering relations."""
    if D is None:
        D = canonical_divisor(gamma.graph)
    if not D.is_vertex_supported():
        gamma, D = split_at_support(gamma, D)
    if D.degree() < 0:
        raise ValueError("divisor has negative degree")
    G = gamma.graph
    bound = D.degree() if slope_bound is None else slope_bound
    cells = []
    for coarse, vm in coarse_data(G, D, bound, gamma.orientation):
        if not metric_feasible(gamma, coarse):
            continue
        for datum in expand(G, coarse, vm):
            cells.append((datum, cell_dimension(G, datum)))
    cells.sort(key=lambda cd: (cd[1], cd[0]))
    index = {c: i for i, (c, _) in enumerate(cells)}
    covers = []
    for j, (c, d) in enumerate(cells):
        for face in degenerations(c, gamma.orientation):
            i = index.get(face)
            if i is not None and cells[i][1] == d - 1:
                covers.append((i, j))
    covers.sort()
    return CellComplex(cells, covers)


def enumerate_cells_exhaustive(gamma: MetricGraph, D: Divisor, slope_bound: int | None = None) -> list[tuple[CellDatum, int]]:
    """Reference enumeration: every balanced datum is tested by exact
    Fourier-Motzkin on its full cell polyhedron (no coarse shortcuts)."""
    G = gamma.graph
    bound = D.degree() if slope_bound is None else slope_bound
    deg = D.degree()
    edges = G.edge_ids
    out = []
    for chips in itertools.product(range(deg + 1), repeat=len(edges)):
        if sum(chips) > deg:
            continue
        for slopes in itertools.product(range(-bound, bound + 1), repeat=len(edges)):
            vm = vertex_balance(G, D, dict(zip(edges, slopes)), dict(zip(edges, chips)), gamma.orientation)
            if any(x < 0 for x in vm.values()):
                continue
            coarse = tuple(zip(slopes, chips))
            for datum in expand(G, coarse, tuple(sorted(vm.items()))):
                P = cell_polyhedron(gamma, D, datum)
                if polyhedra.is_feasible(P):
                    out.append((datum, _cell_dimension(P)))
    return sorted(out, key=lambda cd: (cd[1], cd[0]))


def face_relation(gamma: MetricGraph, D: Divisor, c1: CellDatum, c2: CellDatum) -> bool:
    """Whether the cell of ``c1`` lies in the closure of the cell of ``c2``."""
    if c1 not in degenerations(c2, gamma.orientation):
        return False
    return polyhedra.is_feasible(cell_polyhedron(gamma, D, c1))


def fingerprint(C: CellComplex) -> str:
    payload = json.dumps(
        {"cells": [[c.to_json(), d] for c, d in C.cells], "covers": C.covers},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def iso_fingerprint(C: CellComplex) -> str:
    """Invariant of the dimension-labeled face poset up to isomorphism."""
    cert, _ = canonical_labeling(len(C.cells), [d for _, d in C.cells], [(i, j, 1) for i, j in C.covers])
    return hashlib.sha256(repr(cert).encode()).hexdigest()


def polygon_counts(C: CellComplex) -> dict[int, int]:
    """Number of 2-cells by number of facets."""
    count: dict[int, int] = defaultdict(int)
    n_facets: dict[int, int] = defaultdict(int)
    for f, c in C.covers:
        n_facets[c] += 1
    for i, (_, d) in enumerate(C.cells):
        if d == 2:
            count[n_facets[i]] += 1
    return dict(sorted(count.items()))


# -- points of cells ------------------------------------------------------------------


def sample_point(gamma: MetricGraph, D: Divisor, c: CellDatum, rng=None) -> dict[str, Fraction]:
    return polyhedra.interior_point(cell_polyhedron(gamma, D, c), rng)


def divisor_at(c: CellDatum, point: Mapping[str, Fraction]) -> Divisor:
    entries: dict = {v: d for v, d in c.vertex_mult if d}
    for e, _, comp in c.edge_data:
        for j, dj in enumerate(comp):
            entries[EdgePoint(e, Fraction(point[xvar(e, j)]))] = dj
    return Divisor(entries)


class PLFunction:
    """Continuous piecewise linear function given by its vertex values and
    its values at interior breakpoints of each edge."""

    def __init__(self, gamma: MetricGraph, vertex_values: Mapping[int, Fraction], breakpoints: Mapping[int, list]):
        self.gamma = gamma
        self.vertex_values = dict(vertex_values)
        self.breakpoints = {e: sorted(breakpoints.get(e, [])) for e in gamma.graph.edge_ids}

    def edge_profile(self, e: int) -> list[tuple[Fraction, Fraction]]:
        s, t = self.gamma.orientation[e]
        pts = [(Fraction(0), self.vertex_values[s])] + list(self.breakpoints[e])
        pts.append((self.gamma.length(e), self.vertex_values[t]))
        return pts

    def slopes(self, e: int) -> list[Fraction]:
        prof = self.edge_profile(e)
        return [(b[1] - a[1]) / (b[0] - a[0]) for a, b in zip(prof, prof[1:])]

    def divisor(self) -> Divisor:
        """``(f)``: at each point the sum of outgoing slopes."""
        entries: dict = defaultdict(int)
        for e in self.gamma.graph.edge_ids:
            sl = self.slopes(e)
            if any(x.denominator != 1 for x in sl):
                raise ValueError(f"non-integral slope on edge {e}")
            s, t = self.gamma.orientation[e]
            entries[s] += int(sl[0])
            entries[t] -= int(sl[-1])
            for (x, _), a, b in zip(self.breakpoints[e], sl, sl[1:]):
                entries[EdgePoint(e, x)] += int(b - a)
        return Divisor(entries)


def function_at(gamma: MetricGraph, c: CellDatum, point: Mapping[str, Fraction]) -> PLFunction:
    """Integrate the slopes of the datum from each edge start."""
    values = {v: Fraction(point[fvar(v)]) for v in gamma.graph.vertex_ids}
    bps = {}
    for e, m, comp in c.edge_data:
        s, _ = gamma.orientation[e]
        val, x0, slope, pts = values[s], Fraction(0), m, []
        for j, dj in enumerate(comp):
            x = Fraction(point[xvar(e, j)])
            val += slope * (x - x0)
            pts.append((x, val))
            x0, slope = x, slope + dj
        bps[e] = pts
    return PLFunction(gamma, values, bps)


def reconstruct_datum(gamma: MetricGraph, divisor: Divisor, vertex_values: Mapping[int, Fraction]) -> CellDatum:
    """Recover the cell datum of an effective divisor in |D| from the
    divisor and the vertex values of a function realizing it."""
    vm = {v: divisor[v] for v in gamma.graph.vertex_ids}
    on_edge: dict = defaultdict(list)
    for site, k in divisor:
        if isinstance(site, EdgePoint):
            on_edge[site.edge].append((site.pos, k))
    edges = {}
    for e in gamma.graph.edge_ids:
        pts = sorted(on_edge[e])
        s, t = gamma.orientation[e]
        d = sum(k for _, k in pts)
        weighted = sum((k * x for x, k in pts), Fraction(0))
        m = (vertex_values[t] - vertex_values[s] + weighted) / gamma.length(e) - d
        if m.denominator != 1:
            raise ValueError(f"non-integral slope on edge {e}")
        edges[e] = (int(m), tuple(k for _, k in pts))
    return make_datum(vm, edges)


def split_at_support(gamma: MetricGraph, D: Divisor) -> tuple[MetricGraph, Divisor]:
    """Insert weight-0 vertices at the edge-interior support points of D."""
    G = gamma.graph
    cuts: dict = defaultdict(set)
    for site, _ in D:
        if isinstance(site, EdgePoint):
            if not 0 < site.pos < gamma.length(site.edge):
                raise ValueError(f"position {site.pos} is not inside edge {site.edge}")
            cuts[site.edge].add(site.pos)
    next_v = max(G.vertex_ids) + 1
    next_e = max(G.edge_ids) + 1
    vertices = list(G.vertices)
    edges, lengths, orient = [], {}, {}
    entries = {s: k for s, k in D if not isinstance(s, EdgePoint)}
    for e in G.edge_ids:
        s, t = gamma.orientation[e]
        pts = sorted(cuts.get(e, ()))
        if not pts:
            edges.append((e, s, t))
            lengths[e] = gamma.length(e)
            orient[e] = (s, t)
            continue
        prev_v, prev_x = s, Fraction(0)
        for i, x in enumerate(pts):
            v = next_v
            next_v += 1
            vertices.append((v, 0))
            entries[v] = D[EdgePoint(e, x)]
            eid = e if i == 0 else next_e
            if i:
                next_e += 1
            edges.append((eid, prev_v, v))
            lengths[eid] = x - prev_x
            orient[eid] = (prev_v, v)
            prev_v, prev_x = v, x
        edges.append((next_e, prev_v, t))
        lengths[next_e] = gamma.length(e) - prev_x
        orient[next_e] = (prev_v, t)
        next_e += 1
    H = WeightedGraph(tuple(vertices), tuple(edges))
    return MetricGraph(H, lengths, orient), Divisor(entries)


def lattice_points(gamma: MetricGraph, D: Divisor, c: CellDatum, N: int) -> list[Divisor]:
    """Divisors of the cell whose chips sit on the ``(1/N)``-lattice."""
    G = gamma.graph
    per_edge = []
    for e, m, comp in c.edge_data:
        L = gamma.length(e)
        grid = [Fraction(k, N) for k in range(1, int(L * N)) if Fraction(k, N) < L]
        per_edge.append([tuple(p) for p in itertools.combinations(grid, len(comp))])
    out = []
    for combo in itertools.product(*per_edge):
        point: dict = {}
        for (e, _, comp), xs in zip(c.edge_data, combo):
            for j, x in enumerate(xs):
                point[xvar(e, j)] = x
        if _potential_exists(gamma, c, point):
            out.append(divisor_at(c, point))
    return out


def _potential_exists(gamma: MetricGraph, c: CellDatum, point) -> bool:
    """With chip positions fixed, the continuity equations prescribe every
    difference f(end) - f(start); check they are consistent."""
    value: dict = {}
    adj = defaultdict(list)
    for e, m, comp in c.edge_data:
        s, t = gamma.orientation[e]
        d = sum(comp)
        delta = (m + d) * gamma.length(e) - sum(dj * point[xvar(e, j)] for j, dj in enumerate(comp))
        adj[s].append((t, delta))
        adj[t].append((s, -delta))
    for root in gamma.graph.vertex_ids:
        if root in value:
            continue
        value[root] = Fraction(0)
        stack = [root]
        while stack:
            u = stack.pop()
            for w, delta in adj[u]:
                want = value[u] + delta
                if w not in value:
                    value[w] = want
                    stack.append(w)
                elif value[w] != want:
                    return False
    return True

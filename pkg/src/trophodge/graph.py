"""Vertex-weighted multigraphs, divisors supported on them, and the basic
operations on minimal models of tropical curves."""
from __future__ import annotations

import hashlib
import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterator, Mapping, NamedTuple, Union

from .canon import _refine, canonical_labeling


class EdgePoint(NamedTuple):
    """A point in the interior of an edge, ``pos`` measured from its start."""

    edge: int
    pos: Fraction


Site = Union[int, EdgePoint]


def site_key(site: Site) -> tuple:
    if isinstance(site, EdgePoint):
        return (1, site.edge, site.pos)
    return (0, site, Fraction(0))


@dataclass(frozen=True)
class WeightedGraph:
    """A connected multigraph with nonnegative integer vertex weights.

    ``vertices`` holds ``(id, weight)`` pairs and ``edges`` holds
    ``(id, u, v)`` triples; ``u == v`` is a loop.  The stored endpoint order
    is the default orientation of the edge.
    """

    vertices: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        verts = tuple((int(v), int(h)) for v, h in self.vertices)
        edges = tuple((int(e), int(u), int(v)) for e, u, v in self.edges)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        ids = [v for v, _ in verts]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate vertex id")
        if any(h < 0 for _, h in verts):
            raise ValueError("vertex weights must be nonnegative")
        eids = [e for e, _, _ in edges]
        if len(set(eids)) != len(eids):
            raise ValueError("duplicate edge id")
        known = set(ids)
        for e, u, v in edges:
            if u not in known or v not in known:
                raise ValueError(f"edge {e} references an unknown vertex")
        if not verts:
            raise ValueError("graph has no vertices")
        if len(_components(ids, [(u, v) for _, u, v in edges])) != 1:
            raise ValueError("graph is not connected")

    # -- basic accessors -------------------------------------------------

    @property
    def vertex_ids(self) -> list[int]:
        return [v for v, _ in self.vertices]

    @property
    def edge_ids(self) -> list[int]:
        return [e for e, _, _ in self.edges]

    def weight(self, v: int) -> int:
        return self._weight_map[v]

    def endpoints(self, e: int) -> tuple[int, int]:
        return self._ends[e]

    def is_loop(self, e: int) -> bool:
        u, v = self._ends[e]
        return u == v

    def valence(self, v: int) -> int:
        """Number of half-edges at ``v``; a loop counts twice."""
        return sum((u == v) + (w == v) for _, u, w in self.edges)

    def incident_edges(self, v: int) -> list[int]:
        return [e for e, a, b in self.edges if v in (a, b)]

    def is_bridge(self, e: int) -> bool:
        if self.is_loop(e):
            return False
        rest = [(u, v) for f, u, v in self.edges if f != e]
        return len(_components(self.vertex_ids, rest)) > 1

    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @cached_property
    def _weight_map(self) -> dict[int, int]:
        return dict(self.vertices)

    @property
    def _weights(self) -> dict[int, int]:
        return dict(self._weight_map)

    @cached_property
    def _ends(self) -> dict[int, tuple[int, int]]:
        return {e: (u, v) for e, u, v in self.edges}


def _components(vertices, pairs) -> list[set]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        parent[find(u)] = find(v)
    comps: dict = defaultdict(set)
    for v in vertices:
        comps[find(v)].add(v)
    return list(comps.values())


def bridge_sides(G: WeightedGraph, e: int) -> tuple[set[int], set[int]]:
    """Vertex sets of the two components of ``G - e``: (start side, end side)."""
    u, v = G.endpoints(e)
    rest = [(a, b) for f, a, b in G.edges if f != e]
    comps = _components(G.vertex_ids, rest)
    if len(comps) != 2:
        raise ValueError(f"edge {e} is not a bridge")
    first = next(c for c in comps if u in c)
    second = next(c for c in comps if v in c)
    return first, second


# -- operations ------------------------------------------------------------


def genus(G: WeightedGraph) -> int:
    return G.betti() + sum(h for _, h in G.vertices)


def is_stable(G: WeightedGraph) -> bool:
    return all(2 * h - 2 + G.valence(v) > 0 for v, h in G.vertices)


def contract_edge(G: WeightedGraph, e: int) -> WeightedGraph:
    """Weighted contraction ``G -> G/e``; genus is preserved."""
    u, v = G.endpoints(e)
    weights = G._weights
    if u == v:
        weights[u] += 1
        return WeightedGraph(
            tuple(weights.items()),
            tuple(t for t in G.edges if t[0] != e),
        )
    weights[u] += weights.pop(v)
    edges = []
    for f, a, b in G.edges:
        if f == e:
            continue
        edges.append((f, u if a == v else a, u if b == v else b))
    return WeightedGraph(tuple(weights.items()), tuple(edges))


def canonical_divisor(G: WeightedGraph) -> "Divisor":
    return Divisor({v: 2 * h + G.valence(v) - 2 for v, h in G.vertices})


# -- isomorphism -------------------------------------------------------------


def _as_colored_digraph(G: WeightedGraph):
    ids = G.vertex_ids
    index = {v: i for i, v in enumerate(ids)}
    loops = Counter()
    mult = Counter()
    for _, a, b in G.edges:
        if a == b:
            loops[a] += 1
        else:
            mult[frozenset((a, b))] += 1
    colors = [(G.weight(v), loops[v]) for v in ids]
    arcs = []
    for pair, k in mult.items():
        a, b = tuple(pair)
        arcs.append((index[a], index[b], k))
        arcs.append((index[b], index[a], k))
    return ids, colors, arcs


def _canonical(G: WeightedGraph):
    ids, colors, arcs = _as_colored_digraph(G)
    cert, order = canonical_labeling(len(ids), colors, arcs)
    return cert, [ids[i] for i in order]


def canonical_form(G: WeightedGraph) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic."""
    cert, _ = _canonical(G)
    return repr(cert).encode()


def canonical_representative(G: WeightedGraph) -> WeightedGraph:
    """The isomorphic copy of ``G`` with vertices ``0..n-1`` in canonical
    order and edges ``0..m-1`` sorted by endpoints (oriented low to high)."""
    _, order = _canonical(G)
    pos = {v: k for k, v in enumerate(order)}
    pairs = sorted(tuple(sorted((pos[a], pos[b]))) for _, a, b in G.edges)
    return WeightedGraph(
        tuple((k, G.weight(v)) for k, v in enumerate(order)),
        tuple((i, a, b) for i, (a, b) in enumerate(pairs)),
    )


def canonical_form_exhaustive(G: WeightedGraph) -> bytes:
    """Slow reference: minimum serialization over all vertex orderings."""
    ids = G.vertex_ids
    best = None
    for order in itertools.permutations(ids):
        pos = {v: k for k, v in enumerate(order)}
        ser = (
            tuple(G.weight(v) for v in order),
            tuple(sorted(tuple(sorted((pos[a], pos[b]))) for _, a, b in G.edges)),
        )
        if best is None or ser < best:
            best = ser
    return repr(best).encode()


class Automorphism(NamedTuple):
    """Vertex map, edge map and the set of edges whose orientation is
    reversed by the map (for loops this is the optional flip)."""

    vertex_map: Mapping[int, int]
    edge_map: Mapping[int, int]
    reversed_edges: frozenset


def _vertex_automorphisms(G: WeightedGraph) -> Iterator[dict[int, int]]:
    ids, colors, arcs = _as_colored_digraph(G)
    n = len(ids)
    adj = [dict() for _ in range(n)]
    for a, b, k in arcs:
        adj[a][b] = k
    # refined colors restrict candidate images
    by_color: dict = defaultdict(list)
    for v in range(n):
        by_color[colors[v]].append(v)
    out_adj = [[(b, k) for b, k in adj[a].items()] for a in range(n)]
    cells = [by_color[c] for c in sorted(by_color)]
    cells = _refine(cells, out_adj, out_adj)
    cell_of = {v: i for i, cell in enumerate(cells) for v in cell}
    image = [-1] * n
    used = [False] * n

    def extend(i: int):
        if i == n:
            yield {ids[a]: ids[image[a]] for a in range(n)}
            return
        for c in cells[cell_of[i]]:
            if used[c]:
                continue
            ok = True
            for j in range(i):
                if adj[i].get(j, 0) != adj[c].get(image[j], 0):
                    ok = False
                    break
            if ok:
                image[i] = c
                used[c] = True
                yield from extend(i + 1)
                used[c] = False
        image[i] = -1

    yield from extend(0)


def automorphisms(G: WeightedGraph) -> list[Automorphism]:
    """All weight- and incidence-preserving (vertex, edge) permutation pairs,
    with every loop optionally flipped."""
    result = []
    classes: dict = defaultdict(list)
    for e, a, b in G.edges:
        classes[frozenset((a, b))].append(e)
    for vmap in _vertex_automorphisms(G):
        per_class = []
        for key, members in sorted(classes.items(), key=lambda kv: sorted(kv[0])):
            target = classes[frozenset(vmap[x] for x in key)]
            options = []
            for perm in itertools.permutations(target):
                mapping = dict(zip(members, perm))
                if len(key) == 1:
                    for flips in itertools.product((False, True), repeat=len(members)):
                        rev = frozenset(m for m, f in zip(members, flips) if f)
                        options.append((mapping, rev))
                else:
                    rev = frozenset(
                        m for m in members if vmap[G.endpoints(m)[0]] != G.endpoints(mapping[m])[0]
                    )
                    options.append((mapping, rev))
            per_class.append(options)
        for combo in itertools.product(*per_class):
            emap: dict[int, int] = {}
            rev: set = set()
            for mapping, r in combo:
                emap.update(mapping)
                rev |= r
            result.append(Automorphism(dict(vmap), emap, frozenset(rev)))
    return result


def automorphism_count(G: WeightedGraph) -> int:
    """``len(automorphisms(G))`` without materializing the list."""
    classes = Counter()
    for _, a, b in G.edges:
        classes[frozenset((a, b))] += 1
    per_vmap = 1
    for key, k in classes.items():
        per_vmap *= math.factorial(k) * (2 ** k if len(key) == 1 else 1)
    return per_vmap * sum(1 for _ in _vertex_automorphisms(G))


# -- divisors ------------------------------------------------------------------


class Divisor:
    """A finite integer combination of sites (vertices or edge-interior points)."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[Site, int] | None = None):
        clean = {}
        for site, c in (entries or {}).items():
            if isinstance(site, tuple) and not isinstance(site, EdgePoint):
                site = EdgePoint(int(site[0]), Fraction(site[1]))
            if isinstance(site, EdgePoint):
                site = EdgePoint(site.edge, Fraction(site.pos))
            if c:
                clean[site] = clean.get(site, 0) + int(c)
        self._entries = {s: c for s, c in sorted(clean.items(), key=lambda kv: site_key(kv[0])) if c}

    @property
    def entries(self) -> dict[Site, int]:
        return dict(self._entries)

    def __getitem__(self, site: Site) -> int:
        if isinstance(site, EdgePoint):
            site = EdgePoint(site.edge, Fraction(site.pos))
        return self._entries.get(site, 0)

    def __iter__(self):
        return iter(self._entries.items())

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self._entries == other._entries

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def __repr__(self) -> str:
        return f"Divisor({self._entries!r})"

    def degree(self) -> int:
        return sum(self._entries.values())

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self._entries.values())

    def is_vertex_supported(self) -> bool:
        return not any(isinstance(s, EdgePoint) for s in self._entries)

    def __add__(self, other: "Divisor") -> "Divisor":
        merged = dict(self._entries)
        for s, c in other._entries.items():
            merged[s] = merged.get(s, 0) + c
        return Divisor(merged)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + Divisor({s: -c for s, c in other._entries.items()})

    def validate_on(self, G: WeightedGraph, lengths: Mapping[int, Fraction] | None = None) -> None:
        known = set(G.vertex_ids)
        for site in self._entries:
            if isinstance(site, EdgePoint):
                if site.edge not in set(G.edge_ids):
                    raise ValueError(f"divisor references unknown edge {site.edge}")
                if site.pos <= 0 or (lengths is not None and site.pos >= lengths[site.edge]):
                    raise ValueError(f"position {site.pos} is not inside edge {site.edge}")
            elif site not in known:
                raise ValueError(f"divisor references unknown vertex {site}")


def graph_digest(G: WeightedGraph) -> str:
    return hashlib.sha256(canonical_form(G)).hexdigest()[:16]

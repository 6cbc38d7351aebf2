"""Cells of the moduli space of stable tropical curves of genus g.

Maximal cells are the trivalent weight-zero graphs with 3g-3 edges; every
other cell is reached from one of them by weighted contractions, so the full
list is the downward closure of the trivalent ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .graph import (
    WeightedGraph,
    canonical_form,
    canonical_representative,
    contract_edge,
    genus,
    is_stable,
)


@dataclass(frozen=True)
class ModuliComplex:
    genus: int
    cells: tuple[WeightedGraph, ...]
    covers: tuple[tuple[int, int], ...]  # (face index, cell index)

    def dimension(self, i: int) -> int:
        return len(self.cells[i].edges)

    def is_face(self, i: int, j: int) -> bool:
        """Whether cell ``i`` lies in the closure of cell ``j``."""
        if i == j:
            return True
        below = _below(self.covers, len(self.cells))
        stack, seen = [j], {j}
        while stack:
            k = stack.pop()
            for f in below[k]:
                if f == i:
                    return True
                if f not in seen:
                    seen.add(f)
                    stack.append(f)
        return False


def _below(covers, n):
    below = [[] for _ in range(n)]
    for f, c in covers:
        below[c].append(f)
    return below


def enumerate_trivalent(g: int) -> list[WeightedGraph]:
    """Connected 3-regular weight-0 multigraphs of genus ``g`` (loops count
    twice), one per isomorphism class."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    n = 2 * g - 2
    deficit = [3] * n
    edges: list[tuple[int, int]] = []
    found: dict[bytes, WeightedGraph] = {}

    def grow(touched: int, last_partner: int) -> None:
        i = next((v for v in range(n) if deficit[v] > 0), None)
        if i is None:
            G = WeightedGraph(
                tuple((v, 0) for v in range(n)),
                tuple((k, a, b) for k, (a, b) in enumerate(edges)),
            )
            found.setdefault(canonical_form(G), G)
            return
        if i >= touched:
            return  # remaining vertices would form a separate component
        lo = last_partner if edges and edges[-1][0] == i else i
        candidates = [j for j in range(max(lo, i), touched) if deficit[j] > 0]
        if touched < n and touched >= lo:
            candidates.append(touched)
        for j in candidates:
            if j == i:
                if deficit[i] < 2:
                    continue
                deficit[i] -= 2
            else:
                deficit[i] -= 1
                deficit[j] -= 1
            edges.append((i, j))
            grow(max(touched, j + 1), j)
            edges.pop()
            if j == i:
                deficit[i] += 2
            else:
                deficit[i] += 1
                deficit[j] += 1

    grow(1, 0)
    return [canonical_representative(G) for G in found.values()]


@lru_cache(maxsize=None)
def face_poset(g: int) -> ModuliComplex:
    """All cells of genus ``g`` with their single-contraction covering pairs."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    classes: dict[bytes, WeightedGraph] = {}
    frontier = []
    for G in enumerate_trivalent(g):
        classes[canonical_form(G)] = G
        frontier.append(G)
    raw_covers: set[tuple[bytes, bytes]] = set()
    while frontier:
        nxt = []
        for G in frontier:
            key = canonical_form(G)
            for e in G.edge_ids:
                H = contract_edge(G, e)
                hkey = canonical_form(H)
                raw_covers.add((hkey, key))
                if hkey not in classes:
                    H = canonical_representative(H)
                    classes[hkey] = H
                    nxt.append(H)
        frontier = nxt
    ordered = sorted(classes.items(), key=lambda kv: (len(kv[1].edges), kv[0]))
    index = {k: i for i, (k, _) in enumerate(ordered)}
    cells = tuple(G for _, G in ordered)
    for G in cells:
        assert genus(G) == g and is_stable(G)
        assert len(G.edges) <= 3 * g - 3 and len(G.vertices) <= 2 * g - 2
    covers = tuple(sorted((index[a], index[b]) for a, b in raw_covers))
    return ModuliComplex(g, cells, covers)


def enumerate_stable_graphs(g: int) -> list[WeightedGraph]:
    """One canonical representative per isomorphism class of connected
    stable weighted graphs of genus ``g``, ordered by (edge count, form)."""
    return list(face_poset(g).cells)


def moduli_f_vector(g: int) -> list[int]:
    counts = [0] * (3 * g - 2)
    for G in enumerate_stable_graphs(g):
        counts[len(G.edges)] += 1
    return counts

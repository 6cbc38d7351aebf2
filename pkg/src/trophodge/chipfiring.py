"""Chip-firing on lattice subdivisions, used as an independent check of
the cell enumeration.

Subdividing every edge of an integer-length metric graph into pieces of
length ``1/N`` gives a finite graph with equal edge lengths, on which linear
equivalence of vertex-supported divisors agrees with the metric notion.
Equivalence is decided by comparing q-reduced representatives computed with
Dhar's burning algorithm.
"""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from fractions import Fraction

from .graph import Divisor, EdgePoint
from .linsys import MetricGraph


class Subdivision:
    """Finite multigraph on the ``(1/N)``-lattice points of a metric graph."""

    def __init__(self, gamma: MetricGraph, N: int):
        if N < 1:
            raise ValueError("N must be positive")
        for e, L in gamma.lengths.items():
            if L.denominator != 1:
                raise ValueError(f"edge {e} has non-integer length {L}")
        self.sites: list = list(gamma.graph.vertex_ids)
        index = {v: i for i, v in enumerate(self.sites)}
        self.adj: list[Counter] = [Counter() for _ in self.sites]
        for e in gamma.graph.edge_ids:
            s, t = gamma.orientation[e]
            steps = int(gamma.length(e)) * N
            chain = [index[s]]
            for k in range(1, steps):
                index[EdgePoint(e, Fraction(k, N))] = len(self.sites)
                self.sites.append(EdgePoint(e, Fraction(k, N)))
                self.adj.append(Counter())
                chain.append(index[self.sites[-1]])
            chain.append(index[t])
            for a, b in zip(chain, chain[1:]):
                if a != b:  # loops never move chips
                    self.adj[a][b] += 1
                    self.adj[b][a] += 1
        self.index = index

    def to_vector(self, D: Divisor) -> list[int]:
        vec = [0] * len(self.sites)
        for site, k in D:
            if site not in self.index:
                raise ValueError(f"{site} is not a lattice point")
            vec[self.index[site]] += k
        return vec

    def to_divisor(self, vec) -> Divisor:
        return Divisor({self.sites[i]: k for i, k in enumerate(vec) if k})

    def reduce(self, vec, q: int = 0) -> tuple[int, ...]:
        """q-reduced divisor equivalent to an effective ``vec``."""
        vec = list(vec)
        if any(x < 0 for i, x in enumerate(vec) if i != q):
            raise ValueError("expected a divisor effective away from q")
        n = len(vec)
        while True:
            burnt = {q}
            changed = True
            while changed:
                changed = False
                for v in range(n):
                    if v in burnt:
                        continue
                    fire = sum(k for w, k in self.adj[v].items() if w in burnt)
                    if fire > vec[v]:
                        burnt.add(v)
                        changed = True
            if len(burnt) == n:
                return tuple(vec)
            for v in range(n):
                if v in burnt:
                    continue
                for w, k in self.adj[v].items():
                    if w in burnt:
                        vec[v] -= k
                        vec[w] += k


def lattice_oracle(gamma: MetricGraph, D: Divisor, N: int) -> set[Divisor]:
    """All effective divisors on the ``(1/N)``-lattice linearly equivalent to D."""
    if not D.is_vertex_supported():
        raise ValueError("divisor must be supported on vertices")
    sub = Subdivision(gamma, N)
    target = sub.reduce(sub.to_vector(D))
    n, d = len(sub.sites), D.degree()
    out = set()
    for combo in itertools.combinations_with_replacement(range(n), d):
        vec = [0] * n
        for i in combo:
            vec[i] += 1
        if sub.reduce(vec) == target:
            out.add(sub.to_divisor(vec))
    return out


def cell_membership(gamma: MetricGraph, D: Divisor, cells, N: int) -> dict[Divisor, list[int]]:
    """For each lattice divisor lying in an enumerated cell, the indices of
    the cells containing it."""
    from .linsys import lattice_points

    where: dict = defaultdict(list)
    for i, c in enumerate(cells):
        for div in lattice_points(gamma, D, c, N):
            where[div].append(i)
    return dict(where)

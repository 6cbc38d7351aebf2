"""Canonical labeling of small vertex-colored, arc-labeled digraphs.

Individualization/refinement search: colors are refined to an equitable
partition, the first smallest non-singleton cell is split on each of its
members in turn, and the lexicographically least certificate over all
leaves wins.  Instances here have at most a few hundred vertices.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Hashable, Iterable, Sequence


def _refine(cells: list[list[int]], out_adj, in_adj) -> list[list[int]]:
    while True:
        cell_of = {}
        for idx, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = idx
        new_cells: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple, list[int]] = defaultdict(list)
            for v in cell:
                sig = (
                    tuple(sorted((cell_of[w], lab) for w, lab in out_adj[v])),
                    tuple(sorted((cell_of[w], lab) for w, lab in in_adj[v])),
                )
                groups[sig].append(v)
            for sig in sorted(groups):
                new_cells.append(groups[sig])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def canonical_labeling(
    n: int,
    colors: Sequence[Hashable],
    arcs: Iterable[tuple[int, int, Hashable]],
) -> tuple[tuple, list[int]]:
    """Return ``(certificate, order)`` for a colored digraph on ``0..n-1``.

    ``order[k]`` is the original vertex placed at canonical position ``k``.
    Two inputs have equal certificates iff they are isomorphic (colors and
    arc labels preserved).  Colors and labels must be mutually comparable.
    """
    arcs = list(arcs)
    out_adj: list[list] = [[] for _ in range(n)]
    in_adj: list[list] = [[] for _ in range(n)]
    for a, b, lab in arcs:
        out_adj[a].append((b, lab))
        in_adj[b].append((a, lab))

    by_color: dict = defaultdict(list)
    for v in range(n):
        by_color[colors[v]].append(v)
    start = [by_color[c] for c in sorted(by_color)]
    color_seq = tuple(sorted(colors))

    best: list = [None, None]

    def certificate(order: list[int]) -> tuple:
        pos = {v: k for k, v in enumerate(order)}
        return tuple(sorted((pos[a], pos[b], lab) for a, b, lab in arcs))

    def search(cells: list[list[int]]) -> None:
        cells = _refine(cells, out_adj, in_adj)
        target = None
        for idx, cell in enumerate(cells):
            if len(cell) > 1 and (target is None or len(cell) < len(cells[target])):
                target = idx
        if target is None:
            order = [cell[0] for cell in cells]
            cert = certificate(order)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, order
            return
        cell = cells[target]
        for v in sorted(cell):
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    if n == 0:
        return (color_seq, ()), []
    search(start)
    return (color_seq, best[0]), best[1]

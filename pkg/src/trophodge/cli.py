"""Command-line front end.

Exit status: 0 on success, 1 when the request is well formed but cannot be
carried out, 2 when an argument cannot be parsed.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial

from . import chambers as chamb
from . import hodge, linsys, moduli
from .chipfiring import cell_membership, lattice_oracle
from .graph import WeightedGraph, canonical_divisor
from .io import divisor_from_json, dumps, graph_from_json, graph_to_json, parse_rational


def _graph(vertices, edges) -> WeightedGraph:
    return WeightedGraph(tuple(vertices), tuple((i, a, b) for i, (a, b) in enumerate(edges)))


BUILTIN_GRAPHS = {
    "theta": _graph([(0, 0), (1, 0)], [(0, 1), (0, 1), (0, 1)]),
    "dumbbell": _graph([(0, 0), (1, 0)], [(0, 0), (0, 1), (1, 1)]),
    "bouquet2": _graph([(0, 0)], [(0, 0), (0, 0)]),
    "loop1": _graph([(0, 1)], [(0, 0)]),
    "bridge11": _graph([(0, 1), (1, 1)], [(0, 1)]),
    "loop_bridge": _graph([(0, 0), (1, 1)], [(0, 0), (0, 1)]),
    "point2": _graph([(0, 2)], []),
    "k4": _graph([(1, 0), (2, 0), (3, 0), (4, 0)], chamb.K4_EDGES),
}
GENUS_TWO_MODELS = ("point2", "loop1", "bridge11", "bouquet2", "loop_bridge", "theta", "dumbbell")


class UsageError(Exception):
    """Malformed argument; reported with exit status 2."""


def builtin_graph(name: str) -> WeightedGraph:
    """A named model, or ``gG:i`` for the i-th stable graph of genus G."""
    if name in BUILTIN_GRAPHS:
        return BUILTIN_GRAPHS[name]
    if name.startswith("g") and ":" in name:
        g, _, i = name[1:].partition(":")
        try:
            graphs = moduli.enumerate_stable_graphs(int(g))
            return graphs[int(i)]
        except (ValueError, IndexError):
            pass
    raise UsageError(f"--graph: unknown graph {name!r} (builtins: {', '.join(sorted(BUILTIN_GRAPHS))}, or gG:i)")


def load_graph(source: str) -> WeightedGraph:
    if os.path.exists(source):
        try:
            with open(source) as fh:
                return graph_from_json(json.load(fh))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"--graph: cannot read {source}: {exc}") from None
    return builtin_graph(source)


def _primes():
    n = 2
    while True:
        if all(n % p for p in range(2, int(n ** 0.5) + 1)):
            yield n
        n += 1


def generic_lengths(G: WeightedGraph) -> dict[int, Fraction]:
    """First window of consecutive primes 2, 3, 5, ... (assigned to the edges
    in id order) that avoids every wall and every exceptional locus of the
    length cone of G."""
    arr = chamb.arrangement(G)
    names = chamb.length_vars(G)
    primes = list(itertools.islice(_primes(), 500))
    for start in range(len(primes) - len(G.edges) + 1):
        lengths = dict(zip(G.edge_ids, map(Fraction, primes[start:start + len(G.edges)])))
        point = {linsys.lvar(e): x for e, x in lengths.items()}
        if any(sum(a * point[v] for v, a in zip(names, h)) == 0 for h in arr.hyperplanes):
            continue
        if any(Q.contains(point) for _, Q in arr.lower):
            continue
        if G == BUILTIN_GRAPHS["k4"] and not chamb.is_open_chamber_k4([lengths[e] for e in range(6)]):
            continue
        return lengths
    raise RuntimeError("no generic prime metric found")


def parse_lengths(text: str, G: WeightedGraph) -> dict[int, Fraction]:
    if text == "unit":
        return {e: Fraction(1) for e in G.edge_ids}
    if text == "generic":
        return generic_lengths(G)
    lengths = {}
    try:
        for item in text.split(","):
            key, _, val = item.partition("=")
            lengths[int(key)] = parse_rational(val)
    except ValueError as exc:
        raise UsageError(f"--lengths: {exc}") from None
    missing = set(G.edge_ids) - set(lengths)
    if missing or set(lengths) - set(G.edge_ids):
        raise UsageError(f"--lengths: expected exactly the edges {G.edge_ids}")
    if any(x <= 0 for x in lengths.values()):
        raise UsageError("--lengths: lengths must be positive")
    return lengths


def _jobs(args) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get("TROPHODGE_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"TROPHODGE_JOBS: not an integer: {env!r}") from None
    return os.cpu_count() or 1


def _emit(args, payload) -> None:
    text = dumps(payload) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_dot(path: str, n_nodes: int, labels, covers) -> None:
    lines = ["digraph poset {", "  rankdir=BT;"]
    for i in range(n_nodes):
        lines.append(f'  n{i} [label="{labels[i]}"];')
    for a, b in covers:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _genus(args, allowed=None) -> int:
    g = args.genus
    if g < 2 or (allowed is not None and g not in allowed):
        raise UsageError(f"--genus: {g} is outside the supported range {allowed or '>= 2'}")
    return g


# -- commands ------------------------------------------------------------------------


def cmd_graphs(args) -> int:
    g = _genus(args)
    M = moduli.face_poset(g)
    _emit(args, {
        "graphs": [dict(graph_to_json(G), dim=len(G.edges)) for G in M.cells],
        "covers": [{"face": a, "cell": b} for a, b in M.covers],
    })
    if args.dot:
        _write_dot(args.dot, len(M.cells), [f"{i}: {len(G.edges)}e" for i, G in enumerate(M.cells)], M.covers)
    return 0


def cmd_moduli_fvector(args) -> int:
    g = _genus(args)
    fv = moduli.moduli_f_vector(g)
    _emit(args, {"genus": g, "f_vector": fv, "total": sum(fv)})
    return 0


def cmd_linsys(args) -> int:
    G = load_graph(args.graph)
    lengths = parse_lengths(args.lengths, G)
    if args.divisor == "canonical":
        D = canonical_divisor(G)
    else:
        try:
            with open(args.divisor) as fh:
                D = divisor_from_json(json.load(fh))
        except (OSError, KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"--divisor: cannot read {args.divisor}: {exc}") from None
    gamma = linsys.MetricGraph(G, lengths)
    C = linsys.enumerate_cells(gamma, D, args.slope_bound)
    _emit(args, C.to_json())
    if args.dot:
        _write_dot(args.dot, len(C.cells), [f"{i}: dim {d}" for i, (_, d) in enumerate(C.cells)], C.covers)
    return 0


def _hodge_counts(G: WeightedGraph, modulo: bool) -> dict[int, int]:
    cells = hodge.enumerate_hodge_cells(G)
    if modulo:
        cells = hodge.orbit_representatives(G, cells)
    counts: dict[int, int] = {}
    for h in cells:
        counts[h.dim_H] = counts.get(h.dim_H, 0) + 1
    return counts


def _per_graph(fn, graphs, jobs):
    if jobs <= 1 or len(graphs) < 2:
        return [fn(G) for G in graphs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, graphs))


def cmd_hodge_fvector(args) -> int:
    g = _genus(args, hodge.SUPPORTED_GENERA)
    graphs = moduli.enumerate_stable_graphs(g)
    per = _per_graph(partial(_hodge_counts, modulo=args.modulo_automorphisms), graphs, _jobs(args))
    total: dict[int, int] = {}
    for counts in per:
        for d, k in counts.items():
            total[d] = total.get(d, 0) + k
    fv = [total.get(i, 0) for i in range(max(total) + 1)]
    _emit(args, {"genus": g, "modulo_automorphisms": args.modulo_automorphisms, "f_vector": fv})
    return 0


def _max_dim(G: WeightedGraph):
    cells = hodge.enumerate_hodge_cells(G)
    top = max(cells, key=lambda h: h.dim_H)
    return top.dim_H, top.datum


def cmd_hodge_maxdim(args) -> int:
    g = _genus(args, hodge.SUPPORTED_GENERA)
    graphs = moduli.enumerate_stable_graphs(g)
    per = _per_graph(_max_dim, graphs, _jobs(args))
    best = max(range(len(graphs)), key=lambda i: (per[i][0], -i))
    dim, datum = per[best]
    _emit(args, {
        "genus": g,
        "dim_H": dim,
        "dim_Lambda": dim + 1,
        "witness": {"graph": graph_to_json(graphs[best]), "datum": datum.to_json()},
    })
    return 0


def cmd_chambers(args) -> int:
    G = load_graph(args.graph)
    chambers = chamb.wall_and_chamber(G)
    orbits = chamb.chamber_orbits(G, chambers)
    _emit(args, {
        "chambers": [ch.to_json() for ch in chambers],
        "orbit_sizes": [len(o) for o in orbits],
        "types": len({ch.type for ch in chambers}),
    })
    return 0


def cmd_k4_report(args) -> int:
    report = chamb.k4_chamber_analysis()
    _emit(args, report.summary())
    return 0


def cmd_oracle_check(args) -> int:
    G = load_graph(args.graph)
    lengths = parse_lengths(args.lengths, G)
    if any(x.denominator != 1 for x in lengths.values()):
        raise UsageError("--lengths: the lattice check needs integer lengths")
    gamma = linsys.MetricGraph(G, lengths)
    D = canonical_divisor(G)
    C = linsys.enumerate_cells(gamma, D)
    results, ok = [], True
    for N in args.N:
        oracle = lattice_oracle(gamma, D, N)
        where = cell_membership(gamma, D, [c for c, _ in C.cells], N)
        agree = set(where) == oracle and all(len(v) == 1 for v in where.values())
        ok &= agree
        results.append({"N": N, "oracle": len(oracle), "cells": len(where), "agree": agree})
    _emit(args, {"checks": results, "ok": ok})
    return 0 if ok else 1


def _positive_int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from None
    if any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("values must be positive")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trophodge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $TROPHODGE_JOBS or all cores)")
        return p

    p = add("graphs", cmd_graphs, "stable graphs of a genus and their contraction poset")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--dot", help="write the poset in DOT format")

    p = add("moduli-fvector", cmd_moduli_fvector, "cell counts of the moduli space by dimension")
    p.add_argument("--genus", type=int, required=True)

    p = add("linsys", cmd_linsys, "cell complex of a linear system on a metric graph")
    p.add_argument("--graph", required=True, help="builtin name, gG:i, or a graph JSON file")
    p.add_argument("--lengths", default="unit", help='"unit", "generic" or "id=p/q,..."')
    p.add_argument("--divisor", default="canonical", help='"canonical" or a divisor JSON file')
    p.add_argument("--slope-bound", type=int, default=None)
    p.add_argument("--dot", help="write the face poset in DOT format")

    p = add("hodge-fvector", cmd_hodge_fvector, "Hodge bundle cell counts by dimension")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--modulo-automorphisms", action="store_true", help="count Aut(G)-orbits of cells")

    p = add("hodge-maxdim", cmd_hodge_maxdim, "largest Hodge cell dimension and a witness")
    p.add_argument("--genus", type=int, required=True)

    p = add("chambers", cmd_chambers, "wall-and-chamber decomposition of a length cone")
    p.add_argument("--graph", required=True)

    add("k4-report", cmd_k4_report, "chambers, orbits and cell types for K4")

    p = add("oracle-check", cmd_oracle_check, "compare cells with chip-firing on lattice subdivisions")
    p.add_argument("--graph", required=True)
    p.add_argument("--lengths", default="unit")
    p.add_argument("--N", type=_positive_int_list, default=[1, 2, 3])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""JSON encodings of graphs, divisors, complexes and chambers.

Rationals are written as ``"p/q"`` strings in lowest terms with ``q > 0``.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .graph import Divisor, EdgePoint, WeightedGraph


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Fraction:
    """Accept ``"p/q"`` or an integer literal; reject decimals and zero denominators."""
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def graph_to_json(G: WeightedGraph) -> dict:
    return {
        "vertices": [{"id": v, "weight": h} for v, h in G.vertices],
        "edges": [{"id": e, "u": u, "v": v} for e, u, v in G.edges],
    }


def graph_from_json(obj) -> WeightedGraph:
    return WeightedGraph(
        tuple((int(x["id"]), int(x["weight"])) for x in obj["vertices"]),
        tuple((int(x["id"]), int(x["u"]), int(x["v"])) for x in obj["edges"]),
    )


def divisor_to_json(D: Divisor) -> dict:
    entries = []
    for site, k in D:
        if isinstance(site, EdgePoint):
            entries.append({"site": {"edge": site.edge, "pos": format_rational(site.pos)}, "coeff": k})
        else:
            entries.append({"site": {"vertex": site}, "coeff": k})
    return {"entries": entries}


def divisor_from_json(obj) -> Divisor:
    entries: dict = {}
    for item in obj["entries"]:
        site = item["site"]
        if "vertex" in site:
            key = int(site["vertex"])
        else:
            key = EdgePoint(int(site["edge"]), parse_rational(site["pos"]))
        entries[key] = entries.get(key, 0) + int(item["coeff"])
    return Divisor(entries)


def dumps(obj) -> str:
    """Compact deterministic serialization used for every emitted artifact."""
    return json.dumps(obj, separators=(",", ":"))

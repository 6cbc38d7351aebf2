"""Exact rational polyhedra with equations, weak and strict inequalities.

A constraint ``sum(c_i * x_i) + c0  (=, >=, >)  0`` is stored with rational
coefficients.  Internally every row is scaled to primitive integers, which
keeps Fourier-Motzkin elimination in machine-friendly Python ints.
A combined inequality is strict iff one of its parents is strict.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

EQ, GE, GT = "=", ">=", ">"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[str, Fraction], ...]
    const: Fraction
    kind: str

    def value(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((c * Fraction(point[v]) for v, c in self.coeffs), Fraction(self.const))

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        val = self.value(point)
        if self.kind == EQ:
            return val == 0
        return val > 0 if self.kind == GT else val >= 0

    def __str__(self) -> str:
        terms = " + ".join(f"{_fmt(c)} * {v}" for v, c in self.coeffs) or "0"
        return f"{terms} {self.kind} {_fmt(-self.const)}"


def parse_constraint(text: str) -> Constraint:
    """Inverse of ``str(Constraint)``."""
    for kind in (GE, EQ, GT):
        lhs, sep, rhs = text.partition(f" {kind} ")
        if sep:
            break
    else:
        raise ValueError(f"no relation in {text!r}")
    coeffs = {}
    if lhs.strip() != "0":
        for term in lhs.split(" + "):
            c, _, var = term.partition(" * ")
            coeffs[var.strip()] = Fraction(c.strip())
    return _make(kind, coeffs, -Fraction(rhs.strip()))


def _fmt(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _make(kind: str, coeffs: Mapping[str, object], const=0) -> Constraint:
    items = tuple(sorted((v, Fraction(c)) for v, c in coeffs.items() if Fraction(c) != 0))
    return Constraint(items, Fraction(const), kind)


def eq(coeffs: Mapping[str, object], const=0) -> Constraint:
    """``sum(coeffs) + const = 0``"""
    return _make(EQ, coeffs, const)


def ge(coeffs: Mapping[str, object], const=0) -> Constraint:
    """``sum(coeffs) + const >= 0``"""
    return _make(GE, coeffs, const)


def gt(coeffs: Mapping[str, object], const=0) -> Constraint:
    """``sum(coeffs) + const > 0``"""
    return _make(GT, coeffs, const)


class RationalPolyhedron:
    """Solution set of finitely many rational affine constraints."""

    def __init__(self, variables: Sequence[str], constraints: Iterable[Constraint] = ()):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be unique")
        self.constraints = tuple(constraints)
        known = set(self.variables)
        for c in self.constraints:
            for v, _ in c.coeffs:
                if v not in known:
                    raise ValueError(f"constraint uses unknown variable {v!r}")

    @property
    def equations(self) -> list[Constraint]:
        return [c for c in self.constraints if c.kind == EQ]

    @property
    def weak(self) -> list[Constraint]:
        return [c for c in self.constraints if c.kind == GE]

    @property
    def strict(self) -> list[Constraint]:
        return [c for c in self.constraints if c.kind == GT]

    def add(self, *constraints: Constraint) -> "RationalPolyhedron":
        return RationalPolyhedron(self.variables, self.constraints + constraints)

    def contains(self, point: Mapping[str, object]) -> bool:
        return all(c.holds(point) for c in self.constraints)

    def is_homogeneous(self) -> bool:
        return all(c.const == 0 for c in self.constraints)

    def dump(self) -> str:
        return "\n".join(str(c) for c in self.constraints)

    def normalized(self) -> frozenset:
        """Constraint set up to positive scaling, for structural comparison."""
        out = set()
        for c in self.constraints:
            row, const = _to_int_row(c, self.variables)
            if c.kind == EQ:
                row, const = _sign_normalize(row, const)
            out.add((tuple(zip(self.variables, row)), const, c.kind))
        return frozenset(out)

    def __repr__(self) -> str:
        return f"RationalPolyhedron({self.variables!r}, {len(self.constraints)} constraints)"


# -- integer row machinery -------------------------------------------------------


def _primitive(row, const) -> tuple[tuple[int, ...], Fraction]:
    """Scale so the integer coefficients are coprime; the constant may stay
    fractional, which lets parallel rows share one dictionary key."""
    g = 0
    for a in row:
        g = math.gcd(g, a)
    if g > 1:
        return tuple(a // g for a in row), Fraction(const) / g
    return tuple(row), Fraction(const)


def _to_int_row(c: Constraint, variables: Sequence[str]) -> tuple[tuple[int, ...], int]:
    lookup = dict(c.coeffs)
    vals = [lookup.get(v, Fraction(0)) for v in variables] + [c.const]
    lcm = 1
    for q in vals:
        lcm = lcm * q.denominator // math.gcd(lcm, q.denominator)
    ints = [int(q * lcm) for q in vals]
    return _primitive(ints[:-1], ints[-1])


def _sign_normalize(row, const):
    for a in row:
        if a:
            if a < 0:
                return tuple(-x for x in row), -const
            break
    return row, const


def _combine(p, q, k):
    """Positive combination of rows ``p`` (coef > 0 at k) and ``q`` (< 0)."""
    a, b = p[0][k], -q[0][k]
    row = [b * x + a * y for x, y in zip(p[0], q[0])]
    return _primitive(row, b * p[1] + a * q[1]) + (p[2] or q[2],)


class Infeasible(Exception):
    pass


def _add_row(bucket: dict, row, const, strict):
    """Insert an inequality, keeping only the tightest one per direction."""
    if not any(row):
        if const < 0 or (const == 0 and strict):
            raise Infeasible
        return
    old = bucket.get(row)
    if old is None or const < old[0] or (const == old[0] and strict and not old[1]):
        bucket[row] = (const, strict)


class _System:
    """Integer-row system over ``n`` variables used by all public routines."""

    def __init__(self, P: RationalPolyhedron):
        self.variables = P.variables
        self.n = len(P.variables)
        self.eqs = [_to_int_row(c, P.variables) for c in P.equations]
        self.ineqs: dict = {}
        for c in P.constraints:
            if c.kind != EQ:
                row, const = _to_int_row(c, P.variables)
                _add_row(self.ineqs, row, const, c.kind == GT)

    def substitute_equations(self, prefer: Sequence[int] | None = None, allowed=None):
        """Gaussian elimination.  Returns pivots ``[(var, row, const)]`` and
        leftover equations (those with no allowed pivot)."""
        pivots = []
        pending = list(self.eqs)
        leftover = []
        order = list(prefer) if prefer is not None else list(range(self.n))
        while pending:
            row, const = pending.pop(0)
            if not any(row):
                if const != 0:
                    raise Infeasible
                continue
            k = next((i for i in order if row[i] and (allowed is None or i in allowed)), None)
            if k is None:
                leftover.append((row, const))
                continue
            pivots.append((k, row, const))
            a = row[k]
            sa = 1 if a > 0 else -1

            def sub(r, c):
                b = r[k]
                if not b:
                    return r, c
                new = [abs(a) * x - sa * b * y for x, y in zip(r, row)]
                return _primitive(new, abs(a) * c - sa * b * const)

            pending = [sub(r, c) for r, c in pending]
            leftover = [sub(r, c) for r, c in leftover]
            bucket: dict = {}
            for r, (c, s) in self.ineqs.items():
                nr, nc = sub(r, c)
                _add_row(bucket, nr, nc, s)
            self.ineqs = bucket
        for r, c in leftover:
            if not any(r) and c != 0:
                raise Infeasible
        self.eqs = [(r, c) for r, c in leftover if any(r)]
        return pivots

    def eliminate(self, k: int) -> list:
        """Fourier-Motzkin step on variable ``k``; returns the rows that
        involved ``k`` before elimination."""
        pos, neg, rest = [], [], {}
        for r, (c, s) in self.ineqs.items():
            if r[k] > 0:
                pos.append((r, c, s))
            elif r[k] < 0:
                neg.append((r, c, s))
            else:
                rest[r] = (c, s)
        for p in pos:
            for q in neg:
                row, const, strict = _combine(p, q, k)
                _add_row(rest, row, const, strict)
        self.ineqs = rest
        return pos + neg

    def pick(self, candidates) -> int:
        best, score = None, None
        for k in candidates:
            p = sum(1 for r in self.ineqs if r[k] > 0)
            m = sum(1 for r in self.ineqs if r[k] < 0)
            s = p * m - p - m
            if score is None or s < score:
                best, score = k, s
        return best


def _solve(P: RationalPolyhedron):
    """Full elimination; returns (pivots, tower) or raises Infeasible."""
    sys_ = _System(P)
    pivots = sys_.substitute_equations()
    remaining = set(range(sys_.n)) - {k for k, _, _ in pivots}
    tower = []
    while remaining:
        k = sys_.pick(sorted(remaining))
        remaining.discard(k)
        tower.append((k, sys_.eliminate(k)))
    return pivots, tower


def is_feasible(P: RationalPolyhedron) -> bool:
    try:
        _solve(P)
    except Infeasible:
        return False
    return True


def _rank(rows: list[tuple[int, ...]]) -> int:
    mat = [[Fraction(x) for x in r] for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(mat[0]) if mat else 0
    while rank < len(mat) and col < ncols:
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for i in range(rank + 1, len(mat)):
            if mat[i][col]:
                f = mat[i][col] / mat[rank][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


def equation_rank(P: RationalPolyhedron) -> int:
    return _rank([_to_int_row(c, P.variables)[0] for c in P.equations])


def implicit_equalities(P: RationalPolyhedron) -> list[Constraint]:
    """Weak inequalities that hold with equality on all of a feasible ``P``."""
    others = [c for c in P.constraints]
    found = []
    for i, c in enumerate(P.constraints):
        if c.kind != GE:
            continue
        probe = RationalPolyhedron(P.variables, others[:i] + others[i + 1:] + [Constraint(c.coeffs, c.const, GT)])
        if not is_feasible(probe):
            found.append(c)
    return found


def dimension(P: RationalPolyhedron) -> int:
    """Dimension of the affine hull, or ``-1`` for the empty set."""
    if not is_feasible(P):
        return -1
    eqs = P.equations + [Constraint(c.coeffs, c.const, EQ) for c in implicit_equalities(P)]
    return len(P.variables) - _rank([_to_int_row(c, P.variables)[0] for c in eqs])


def relative_interior(P: RationalPolyhedron) -> RationalPolyhedron:
    """Implicit equalities made explicit and every other inequality strict."""
    implicit = set(implicit_equalities(P))
    out = []
    for c in P.constraints:
        if c in implicit:
            out.append(Constraint(c.coeffs, c.const, EQ))
        elif c.kind == GE:
            out.append(Constraint(c.coeffs, c.const, GT))
        else:
            out.append(c)
    return RationalPolyhedron(P.variables, out)


def interior_point(P: RationalPolyhedron, rng=None) -> dict[str, Fraction]:
    """A rational point of the relative interior of ``P``, built by
    back-substitution through the elimination tower.

    Each coordinate is the midpoint of its admissible interval; with a
    ``random.Random`` instance a random rational interior fraction is used
    instead, which gives random relative-interior samples.
    """
    Q = relative_interior(P)
    try:
        pivots, tower = _solve(Q)
    except Infeasible:
        raise ValueError("polyhedron is empty") from None
    values: dict[int, Fraction] = {}
    pivot_vars = {k for k, _, _ in pivots}
    for k, rows in reversed(tower):
        lo = hi = None
        for row, const, strict in rows:
            rest = Fraction(const) + sum(
                (a * values.get(i, 0) for i, a in enumerate(row) if i != k and a), Fraction(0)
            )
            bound = -rest / row[k]
            if row[k] > 0:
                if lo is None or bound > lo:
                    lo = bound
            else:
                if hi is None or bound < hi:
                    hi = bound
        t = Fraction(1, 2) if rng is None else Fraction(rng.randint(1, 99), 100)
        step = 1 if rng is None else rng.randint(1, 9)
        if lo is not None and hi is not None:
            values[k] = lo if lo == hi else lo + t * (hi - lo)
        elif lo is not None:
            values[k] = lo + step
        elif hi is not None:
            values[k] = hi - step
        else:
            values[k] = Fraction(0)
    n = len(P.variables)
    for k in range(n):
        if k not in pivot_vars and k not in values:
            values[k] = Fraction(0)
    for k, row, const in reversed(pivots):
        rest = Fraction(const) + sum((a * values[i] for i, a in enumerate(row) if i != k and a), Fraction(0))
        values[k] = -rest / row[k]
    point = {P.variables[k]: values[k] for k in range(n)}
    assert P.contains(point)
    return point


def project(P: RationalPolyhedron, keep: Sequence[str]) -> RationalPolyhedron:
    """Image of ``P`` under the coordinate projection onto ``keep``."""
    keep = [v for v in P.variables if v in set(keep)]
    idx = {v: i for i, v in enumerate(P.variables)}
    drop = [i for i, v in enumerate(P.variables) if v not in set(keep)]
    try:
        sys_ = _System(P)
        pivots = sys_.substitute_equations(prefer=drop + [idx[v] for v in keep], allowed=set(drop))
        remaining = set(drop) - {k for k, _, _ in pivots}
        while remaining:
            k = sys_.pick(sorted(remaining))
            remaining.discard(k)
            sys_.eliminate(k)
    except Infeasible:
        return RationalPolyhedron(keep, [gt({}, -1)])
    cols = [idx[v] for v in keep]
    out = []
    for row, const in sys_.eqs:
        out.append(eq({keep[j]: row[c] for j, c in enumerate(cols)}, const))
    for row, (const, strict) in sorted(sys_.ineqs.items()):
        kind = GT if strict else GE
        out.append(_make(kind, {keep[j]: row[c] for j, c in enumerate(cols)}, const))
    return RationalPolyhedron(keep, out)

"""Bounded exhaustive search over integer polynomial constraint systems.

A scenario declares integer variables with finite ranges and a list of
constraints: polynomial (in)equalities with exact rational coefficients,
divisibility atoms, and comparisons involving exact fractions.  The
solver enumerates assignments depth-first in declaration order, pruning
with interval arithmetic and affine bound propagation, and returns every
satisfying tuple.  All arithmetic is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

INF = float("inf")

Monomial = tuple[tuple[str, int], ...]


class BudgetExceededError(RuntimeError):
    pass


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps: dict[str, int] = {}
    for v, e in a + b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


class Poly:
    """Multivariate polynomial with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction]):
        self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}

    @classmethod
    def const(cls, value) -> "Poly":
        return cls({(): Fraction(value)})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): Fraction(1)})

    def __add__(self, other: "Poly") -> "Poly":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return Poly(terms)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return Poly(terms)

    def pow_int(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative exponent")
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def substitute(self, var: str, value: int) -> "Poly":
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            coeff = c
            rest = []
            for v, e in m:
                if v == var:
                    coeff *= Fraction(value) ** e
                else:
                    rest.append((v, e))
            key = tuple(rest)
            terms[key] = terms.get(key, Fraction(0)) + coeff
        return Poly(terms)

    def constant_value(self) -> Optional[Fraction]:
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        return None

    def interval(self, boxes: Mapping[str, tuple[int, int]]) -> tuple[Fraction, Fraction]:
        lo = hi = Fraction(0)
        for m, c in self.terms.items():
            mlo = mhi = Fraction(1)
            for v, e in m:
                vlo, vhi = boxes[v]
                cands = [Fraction(vlo) ** e, Fraction(vhi) ** e]
                plo, phi = min(cands), max(cands)
                if e % 2 == 0 and vlo < 0 < vhi:
                    plo = Fraction(0)
                corners = [mlo * plo, mlo * phi, mhi * plo, mhi * phi]
                mlo, mhi = min(corners), max(corners)
            tlo, thi = (c * mlo, c * mhi) if c > 0 else (c * mhi, c * mlo)
            lo += tlo
            hi += thi
        return lo, hi

    def affine_in(self, var: str) -> Optional[tuple["Poly", "Poly"]]:
        """Split as A*var + B when the degree in ``var`` is at most 1."""
        a_terms: dict[Monomial, Fraction] = {}
        b_terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            deg = next((e for v, e in m if v == var), 0)
            if deg == 0:
                b_terms[m] = c
            elif deg == 1:
                rest = tuple((v, e) for v, e in m if v != var)
                a_terms[rest] = a_terms.get(rest, Fraction(0)) + c
            else:
                return None
        return Poly(a_terms), Poly(b_terms)


# -- generic expression nodes (needed once division by a variable appears) ----


def _node_eval(node, assignment: Mapping[str, int]) -> Fraction:
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "var":
        return Fraction(assignment[node[1]])
    if kind == "add":
        return sum((_node_eval(x, assignment) for x in node[1]), Fraction(0))
    if kind == "mul":
        out = Fraction(1)
        for x in node[1]:
            out *= _node_eval(x, assignment)
        return out
    if kind == "neg":
        return -_node_eval(node[1], assignment)
    if kind == "pow":
        return _node_eval(node[1], assignment) ** node[2]
    if kind == "div":
        return _node_eval(node[1], assignment) / _node_eval(node[2], assignment)
    raise ValueError(f"bad node {node!r}")


def _imul(a, b):
    if a == 0 or b == 0:
        return Fraction(0)
    if a in (INF, -INF) or b in (INF, -INF):
        pos = (a > 0) == (b > 0)
        return INF if pos else -INF
    return a * b


def _node_interval(node, assignment, boxes) -> tuple:
    kind = node[0]
    if kind == "num":
        return node[1], node[1]
    if kind == "var":
        name = node[1]
        if name in assignment:
            v = Fraction(assignment[name])
            return v, v
        lo, hi = boxes[name]
        return Fraction(lo), Fraction(hi)
    if kind == "add":
        lo = hi = Fraction(0)
        for x in node[1]:
            xlo, xhi = _node_interval(x, assignment, boxes)
            lo = -INF if (lo == -INF or xlo == -INF) else lo + xlo
            hi = INF if (hi == INF or xhi == INF) else hi + xhi
        return lo, hi
    if kind == "neg":
        lo, hi = _node_interval(node[1], assignment, boxes)
        return -hi, -lo
    if kind == "mul":
        lo, hi = Fraction(1), Fraction(1)
        for x in node[1]:
            xlo, xhi = _node_interval(x, assignment, boxes)
            corners = [_imul(lo, xlo), _imul(lo, xhi), _imul(hi, xlo), _imul(hi, xhi)]
            lo, hi = min(corners), max(corners)
        return lo, hi
    if kind == "pow":
        lo, hi = _node_interval(node[1], assignment, boxes)
        k = node[2]
        if lo in (INF, -INF) or hi in (INF, -INF):
            return -INF, INF
        cands = [lo**k, hi**k]
        plo, phi = min(cands), max(cands)
        if k % 2 == 0 and lo < 0 < hi:
            plo = Fraction(0)
        return plo, phi
    if kind == "div":
        nlo, nhi = _node_interval(node[1], assignment, boxes)
        dlo, dhi = _node_interval(node[2], assignment, boxes)
        if dlo <= 0 <= dhi or dlo in (INF, -INF) or dhi in (INF, -INF):
            return -INF, INF
        if nlo in (INF, -INF) or nhi in (INF, -INF):
            return -INF, INF
        corners = [nlo / dlo, nlo / dhi, nhi / dlo, nhi / dhi]
        return min(corners), max(corners)
    raise ValueError(f"bad node {node!r}")


# -- parsing -------------------------------------------------------------------


class _HasDivision(Exception):
    pass


def _parse_poly(expr, declared: set[str]) -> Poly:
    if isinstance(expr, bool):
        raise ValueError("booleans are not expressions")
    if isinstance(expr, (int, float, str)) and not isinstance(expr, str):
        if isinstance(expr, float) and not float(expr).is_integer():
            raise ValueError(f"non-integer literal {expr}")
        return Poly.const(int(expr))
    if isinstance(expr, str):
        if expr not in declared:
            raise ValueError(f"undeclared variable {expr!r}")
        return Poly.var(expr)
    op, *args = expr
    if op == "+":
        out = Poly.const(0)
        for a in args:
            out = out + _parse_poly(a, declared)
        return out
    if op == "-":
        if len(args) == 1:
            return -_parse_poly(args[0], declared)
        out = _parse_poly(args[0], declared)
        for a in args[1:]:
            out = out - _parse_poly(a, declared)
        return out
    if op == "*":
        out = Poly.const(1)
        for a in args:
            out = out * _parse_poly(a, declared)
        return out
    if op == "^":
        base = _parse_poly(args[0], declared)
        return base.pow_int(int(args[1]))
    if op == "/":
        den = _parse_poly(args[1], declared)
        dval = den.constant_value()
        if dval is None:
            raise _HasDivision()
        num = _parse_poly(args[0], declared)
        return num * Poly.const(Fraction(1, 1) / dval)
    raise ValueError(f"unknown operator {op!r}")


def _parse_node(expr, declared: set[str]):
    if isinstance(expr, bool):
        raise ValueError("booleans are not expressions")
    if isinstance(expr, (int, float)):
        return ("num", Fraction(int(expr)))
    if isinstance(expr, str):
        if expr not in declared:
            raise ValueError(f"undeclared variable {expr!r}")
        return ("var", expr)
    op, *args = expr
    if op == "+":
        return ("add", tuple(_parse_node(a, declared) for a in args))
    if op == "-":
        if len(args) == 1:
            return ("neg", _parse_node(args[0], declared))
        rest = ("add", tuple(("neg", _parse_node(a, declared)) for a in args[1:]))
        return ("add", (_parse_node(args[0], declared), rest))
    if op == "*":
        return ("mul", tuple(_parse_node(a, declared) for a in args))
    if op == "^":
        return ("pow", _parse_node(args[0], declared), int(args[1]))
    if op == "/":
        return ("div", _parse_node(args[0], declared), _parse_node(args[1], declared))
    raise ValueError(f"unknown operator {op!r}")


_REL_NORMAL = {"=": "==", "==": "==", "<=": "<=", "<": "<", ">=": "<=", ">": "<", "!=": "!="}


@dataclass(frozen=True)
class _PolyConstraint:
    op: str  # "==", "<=", "<", "!=" applied to poly OP 0
    poly: Poly


@dataclass(frozen=True)
class _NodeConstraint:
    op: str
    node: tuple


@dataclass(frozen=True)
class _DividesConstraint:
    divisor: Poly
    dividend: Poly


def _parse_constraint(raw, declared: set[str]):
    op, *args = raw
    if op == "divides":
        return _DividesConstraint(
            _parse_poly(args[0], declared), _parse_poly(args[1], declared)
        )
    if op not in _REL_NORMAL:
        raise ValueError(f"unknown relation {op!r}")
    lhs, rhs = args
    if op in (">=", ">"):
        lhs, rhs = rhs, lhs
    rel = _REL_NORMAL[op]
    try:
        poly = _parse_poly(lhs, declared) - _parse_poly(rhs, declared)
        return _PolyConstraint(rel, poly)
    except _HasDivision:
        node = ("add", (_parse_node(lhs, declared), ("neg", _parse_node(rhs, declared))))
        return _NodeConstraint(rel, node)


# -- scenarios -----------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    name: str
    note: str
    variables: tuple[tuple[str, int, int], ...]
    constraints: tuple
    expected_kind: str  # "empty" | "exact" | "contains"
    expected: tuple[tuple[int, ...], ...]

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Scenario":
        variables = tuple((str(n), int(lo), int(hi)) for n, lo, hi in data["variables"])
        names = {n for n, _, _ in variables}
        if len(names) != len(variables):
            raise ValueError("duplicate variable names")
        for n, lo, hi in variables:
            if lo > hi:
                raise ValueError(f"empty range for {n}")
        constraints = tuple(_parse_constraint(c, names) for c in data["constraints"])
        exp = data.get("expected", {"kind": "empty"})
        kind = exp["kind"]
        if kind not in ("empty", "exact", "contains"):
            raise ValueError(f"unknown expectation {kind!r}")
        tuples = tuple(tuple(int(x) for x in t) for t in exp.get("tuples", ()))
        return cls(
            name=str(data["name"]),
            note=str(data.get("note", "")),
            variables=variables,
            constraints=constraints,
            expected_kind=kind,
            expected=tuples,
        )


@dataclass(frozen=True)
class SolutionSet:
    variables: tuple[str, ...]
    tuples: tuple[tuple[int, ...], ...]
    nodes_visited: int


def _ceil_div(a: Fraction) -> int:
    return -((-a.numerator) // a.denominator)


def _floor_div(a: Fraction) -> int:
    return a.numerator // a.denominator


def solve(
    scenario: Scenario,
    *,
    budget: int = 10**9,
    bounds_scale: int = 1,
) -> SolutionSet:
    """Every satisfying integer tuple within bounds, in lexicographic order
    of the declared variables.  ``bounds_scale`` widens every declared
    range symmetrically by (scale-1) spans; exceeding ``budget`` visited
    assignments raises :class:`BudgetExceededError` naming the widest
    variable range."""
    names = [n for n, _, _ in scenario.variables]
    ranges = {}
    for n, lo, hi in scenario.variables:
        span = hi - lo + 1
        ranges[n] = (lo - (bounds_scale - 1) * span, hi + (bounds_scale - 1) * span)
    widest = max(names, key=lambda n: ranges[n][1] - ranges[n][0])

    # fold single-variable affine constraints into the ranges up front, so
    # interval pruning sees the semantic bounds rather than the search caps
    for c in scenario.constraints:
        if not isinstance(c, _PolyConstraint) or c.op == "!=":
            continue
        vs = c.poly.variables()
        if len(vs) != 1:
            continue
        (v,) = vs
        split = c.poly.affine_in(v)
        if split is None:
            continue
        a = split[0].constant_value()
        b = split[1].constant_value()
        if a is None or b is None or a == 0:
            continue
        lo, hi = ranges[v]
        bound = (-b) / a
        if c.op == "==":
            if bound.denominator == 1 and lo <= bound <= hi:
                lo = hi = int(bound)
            else:
                lo, hi = 0, -1
        elif a > 0:
            cap = _floor_div(bound)
            if c.op == "<" and bound == cap:
                cap -= 1
            hi = min(hi, cap)
        else:
            base = _ceil_div(bound)
            if c.op == "<" and bound == base:
                base += 1
            lo = max(lo, base)
        ranges[v] = (lo, hi)
    if any(lo > hi for lo, hi in ranges.values()):
        return SolutionSet(tuple(names), (), 0)

    solutions: list[tuple[int, ...]] = []
    visited = 0

    poly_cs = [c for c in scenario.constraints if isinstance(c, _PolyConstraint)]
    node_cs = [c for c in scenario.constraints if isinstance(c, _NodeConstraint)]
    div_cs = [c for c in scenario.constraints if isinstance(c, _DividesConstraint)]

    def check_exact(assignment: dict[str, int]) -> bool:
        for c in poly_cs:
            val = Fraction(0)
            for m, coeff in c.poly.terms.items():
                term = coeff
                for v, e in m:
                    term *= Fraction(assignment[v]) ** e
                val += term
            if not _relation_holds(c.op, val):
                return False
        for c in node_cs:
            try:
                value = _node_eval(c.node, assignment)
            except ZeroDivisionError:
                return False
            if not _relation_holds(c.op, value):
                return False
        for c in div_cs:
            d = _poly_eval(c.divisor, assignment)
            x = _poly_eval(c.dividend, assignment)
            if d.denominator != 1 or x.denominator != 1:
                return False
            if d == 0:
                if x != 0:
                    return False
            elif int(x) % int(d) != 0:
                return False
        return True

    def _poly_eval(p: Poly, assignment) -> Fraction:
        val = Fraction(0)
        for m, coeff in p.terms.items():
            term = coeff
            for v, e in m:
                term *= Fraction(assignment[v]) ** e
            val += term
        return val

    def _relation_holds(op: str, val: Fraction) -> bool:
        if op == "==":
            return val == 0
        if op == "<=":
            return val <= 0
        if op == "<":
            return val < 0
        return val != 0

    def feasible(assignment: dict[str, int], remaining: list[str]) -> bool:
        boxes = {n: ranges[n] for n in remaining}
        for c in poly_cs:
            p = c.poly
            for v, x in assignment.items():
                if v in p.variables():
                    p = p.substitute(v, x)
            if not p.variables():
                val = p.constant_value()
                if not _relation_holds(c.op, val):
                    return False
                continue
            lo, hi = p.interval(boxes)
            if c.op == "==" and (lo > 0 or hi < 0):
                return False
            if c.op == "<=" and lo > 0:
                return False
            if c.op == "<" and lo >= 0:
                return False
        for c in node_cs:
            lo, hi = _node_interval(c.node, assignment, boxes)
            if c.op == "==" and (lo > 0 or hi < 0):
                return False
            if c.op == "<=" and lo > 0:
                return False
            if c.op == "<" and lo >= 0:
                return False
        return True

    def tighten(var: str, assignment: dict[str, int], remaining: list[str]) -> tuple[int, int]:
        lo, hi = ranges[var]
        boxes = {n: ranges[n] for n in remaining if n != var}
        for c in poly_cs:
            p = c.poly
            for v, x in assignment.items():
                if v in p.variables():
                    p = p.substitute(v, x)
            if var not in p.variables():
                continue
            split = p.affine_in(var)
            if split is None:
                continue
            a_poly, b_poly = split
            a = a_poly.constant_value()
            if a is None or a == 0:
                continue
            blo, bhi = b_poly.interval(boxes) if b_poly.variables() else (
                b_poly.constant_value(), b_poly.constant_value())
            if c.op == "==":
                cands = [(-bhi) / a, (-blo) / a]
                lo = max(lo, _ceil_div(min(cands)))
                hi = min(hi, _floor_div(max(cands)))
            elif c.op in ("<=", "<"):
                # a*x + B  <= 0 must be satisfiable for some B in [blo, bhi]
                strict = c.op == "<"
                if a > 0:
                    bound = (-blo) / a
                    cap = _floor_div(bound)
                    if strict and bound == cap:
                        cap -= 1
                    hi = min(hi, cap)
                else:
                    bound = (-blo) / a
                    base = _ceil_div(bound)
                    if strict and bound == base:
                        base += 1
                    lo = max(lo, base)
        return lo, hi

    def dfs(i: int, assignment: dict[str, int]) -> None:
        nonlocal visited
        if i == len(names):
            if check_exact(assignment):
                solutions.append(tuple(assignment[n] for n in names))
            return
        var = names[i]
        remaining = names[i:]
        lo, hi = tighten(var, assignment, remaining)
        rest = names[i + 1:]
        for x in range(lo, hi + 1):
            visited += 1
            if visited > budget:
                raise BudgetExceededError(
                    f"search budget {budget} exceeded in scenario "
                    f"{scenario.name!r}; widest bound is {widest!r} with range "
                    f"{ranges[widest]}"
                )
            assignment[var] = x
            if feasible(assignment, rest):
                dfs(i + 1, assignment)
            del assignment[var]

    dfs(0, {})
    solutions.sort()
    return SolutionSet(tuple(names), tuple(solutions), visited)


def hirzebruch_genus_defect(a: int, b: int, n: int) -> int:
    """2 + (an+b)(2a-2) + a(n-2-an); zero exactly when (a-1)(an+2b-2) = 0.

    Vanishing expresses rationality of a curve of type (an+b, a) on the
    ruled surface with a (-n)-section; its self-intersection is a(an+2b).
    """
    value = 2 + (a * n + b) * (2 * a - 2) + a * (n - 2 - a * n)
    assert (value == 0) == ((a - 1) * (a * n + 2 * b - 2) == 0)
    return value


def hirzebruch_class_self_intersection(a: int, b: int, n: int) -> int:
    return a * (a * n + 2 * b)

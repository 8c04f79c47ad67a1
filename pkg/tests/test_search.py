import itertools
import random
from fractions import Fraction

import pytest

from snctools.search import (
    BudgetExceededError,
    Scenario,
    hirzebruch_class_self_intersection,
    hirzebruch_genus_defect,
    solve,
)


def scenario(variables, constraints, expected=None):
    return Scenario.from_json_dict(
        {
            "name": "test",
            "variables": variables,
            "constraints": constraints,
            "expected": expected or {"kind": "empty"},
        }
    )


def brute_force(variables, constraints):
    """Independent reference: plain product enumeration of the raw trees."""

    def ev(expr, env):
        if isinstance(expr, (int, float)):
            return Fraction(int(expr))
        if isinstance(expr, str):
            return Fraction(env[expr])
        op, *args = expr
        vals = [ev(a, env) for a in args]
        if op == "+":
            return sum(vals, Fraction(0))
        if op == "-":
            return -vals[0] if len(vals) == 1 else vals[0] - sum(vals[1:], Fraction(0))
        if op == "*":
            out = Fraction(1)
            for v in vals:
                out *= v
            return out
        if op == "^":
            return ev(args[0], env) ** int(args[1])
        if op == "/":
            return vals[0] / vals[1]
        raise ValueError(op)

    def ok(c, env):
        op = c[0]
        if op == "divides":
            d, x = ev(c[1], env), ev(c[2], env)
            if d.denominator != 1 or x.denominator != 1:
                return False
            return x == 0 if d == 0 else int(x) % int(d) == 0
        try:
            l, r = ev(c[1], env), ev(c[2], env)
        except ZeroDivisionError:
            return False
        return {
            "=": l == r, "==": l == r, "<=": l <= r, "<": l < r,
            ">=": l >= r, ">": l > r, "!=": l != r,
        }[op]

    names = [v[0] for v in variables]
    out = []
    for point in itertools.product(*(range(lo, hi + 1) for _, lo, hi in variables)):
        env = dict(zip(names, point))
        if all(ok(c, env) for c in constraints):
            out.append(point)
    return sorted(out)


def test_system_without_integer_solutions():
    sc = scenario(
        [["s", 0, 100], ["b", 0, 100]],
        [
            ["=", ["+", ["*", 4, "s"], ["*", 3, "b"]], 28],
            ["=", ["+", ["*", 16, "s"], ["*", 9, "b"]], 108],
        ],
    )
    assert solve(sc).tuples == ()


def test_two_parameter_window_system():
    sc = scenario(
        [["gamma", 0, 20], ["s", 0, 100], ["b", 0, 100], ["p", 0, 10]],
        [
            [">=", "gamma", 5], ["<=", "gamma", 6],
            [">=", "p", 1], ["<=", "p", 2],
            ["=", ["+", "gamma", 16], ["+", ["*", 3, "s"], ["*", 2, "b"]]],
            ["=", ["+", "gamma", 60], ["+", ["*", 9, "s"], ["*", 4, "b"], ["*", 2, "p"]]],
        ],
    )
    assert solve(sc).tuples == ((5, 7, 0, 1), (6, 6, 2, 2))


def test_underdetermined_system_contains_more():
    sc = scenario(
        [["gamma", 0, 20], ["s", 0, 100], ["b", 0, 100]],
        [
            [">=", "gamma", 1], ["<=", "gamma", 6],
            [">=", "b", 0],
            ["=", ["+", "gamma", 10], ["+", ["*", 2, "s"], "b"]],
            ["=", ["+", "gamma", 24], ["+", ["*", 4, "s"], "b"]],
        ],
    )
    assert solve(sc).tuples == ((4, 7, 0), (5, 7, 1), (6, 7, 2))


def test_quadratic_window_empty():
    sc = scenario(
        [["c", 1, 100]],
        [["<", ["+", 6, ["^", "c", 2]], ["*", 5, "c"]]],
    )
    assert solve(sc).tuples == ()


def test_divisibility_atoms():
    sc = scenario(
        [["n", -20, 0]],
        [["divides", ["+", "n", 2], -6], ["<=", "n", -8]],
    )
    assert solve(sc).tuples == ((-8,),)
    zero = scenario([["n", -3, 3]], [["divides", "n", 0]])
    assert solve(zero).tuples == tuple((k,) for k in range(-3, 4))
    by_zero = scenario([["n", -3, 3]], [["divides", 0, "n"]])
    assert solve(by_zero).tuples == ((0,),)


def test_rational_comparisons():
    sc = scenario(
        [["d1", 2, 12], ["d2", 2, 12]],
        [[">=", ["+", ["/", 1, "d1"], ["/", 1, "d2"], ["/", 1, 6]], 1]],
    )
    assert solve(sc).tuples == ((2, 2), (2, 3), (3, 2))


def test_solver_against_brute_force_random_systems():
    rng = random.Random(73)
    names = ["x", "y", "z"]
    for _ in range(60):
        variables = [[n, rng.randint(-4, 0), rng.randint(1, 6)] for n in names]
        constraints = []
        for _ in range(rng.randint(1, 3)):
            op = rng.choice(["=", "<=", "<", ">=", ">", "!="])
            lhs = ["+"] + [
                ["*", rng.randint(-3, 3), rng.choice(names)]
                for _ in range(rng.randint(1, 3))
            ]
            if rng.random() < 0.4:
                lhs.append(["*", rng.randint(-2, 2), ["^", rng.choice(names), 2]])
            constraints.append([op, lhs, rng.randint(-6, 6)])
        if rng.random() < 0.3:
            constraints.append(["divides", rng.randint(1, 4), rng.choice(names)])
        sc = scenario(variables, constraints)
        assert solve(sc).tuples == tuple(brute_force(variables, constraints))


def test_budget_exceeded_names_widest_bound():
    sc = scenario(
        [["x", 0, 1000], ["y", 0, 1000]],
        [[">=", ["+", ["^", "x", 2], ["^", "y", 2]], 0]],
    )
    with pytest.raises(BudgetExceededError) as err:
        solve(sc, budget=100)
    assert "x" in str(err.value) or "y" in str(err.value)


def test_bounds_scale_widens_ranges():
    sc = scenario(
        [["x", 0, 3]],
        [[">=", ["^", "x", 2], 17]],
    )
    assert solve(sc).tuples == ()
    widened = solve(sc, bounds_scale=2)  # range [0,3] widens to [-4,7]
    assert widened.tuples == tuple((k,) for k in (5, 6, 7))


def test_deterministic_order():
    sc = scenario(
        [["x", -2, 2], ["y", -2, 2]],
        [["=", ["+", "x", "y"], 0]],
    )
    first = solve(sc)
    second = solve(sc)
    assert first.tuples == second.tuples == tuple(sorted(first.tuples))


def test_undeclared_variable_rejected():
    with pytest.raises(ValueError):
        scenario([["x", 0, 1]], [["=", "q", 0]])


def test_hirzebruch_genus_defect_examples():
    assert hirzebruch_genus_defect(1, 5, -3) == 0
    assert hirzebruch_genus_defect(2, 0, 1) == 0
    assert hirzebruch_class_self_intersection(2, 0, 1) == 4
    assert hirzebruch_genus_defect(2, 1, 1) == 2


def test_hirzebruch_genus_defect_factored_form():
    for a in range(-8, 9):
        for b in range(-8, 9):
            for n in range(-8, 9):
                zero = hirzebruch_genus_defect(a, b, n) == 0
                assert zero == ((a - 1) * (a * n + 2 * b - 2) == 0)

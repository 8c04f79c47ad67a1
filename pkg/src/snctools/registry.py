"""The shipped scenario registry and its runner."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .search import BudgetExceededError, Scenario, SolutionSet, solve


def load_registry() -> tuple[Scenario, ...]:
    text = resources.files("snctools").joinpath("data/scenarios.json").read_text()
    data = json.loads(text)
    scenarios = tuple(Scenario.from_json_dict(s) for s in data["scenarios"])
    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        raise ValueError("duplicate scenario names in registry")
    return scenarios


@dataclass(frozen=True)
class EntryResult:
    name: str
    ok: bool
    expected_kind: str
    found: tuple[tuple[int, ...], ...]
    seconds: float
    detail: str


@dataclass(frozen=True)
class RegistryReport:
    results: tuple[EntryResult, ...]
    all_ok: bool
    seconds: float


def compare_expected(scenario: Scenario, found: SolutionSet) -> tuple[bool, str]:
    got = found.tuples
    if scenario.expected_kind == "empty":
        ok = got == ()
        return ok, "no solutions" if ok else f"unexpected solutions {list(got)}"
    if scenario.expected_kind == "exact":
        want = tuple(sorted(scenario.expected))
        ok = got == want
        return ok, (
            f"exactly {list(want)}" if ok else f"found {list(got)}, wanted {list(want)}"
        )
    missing = [t for t in scenario.expected if t not in got]
    ok = not missing
    return ok, (
        f"contains {list(scenario.expected)} among {len(got)} solutions"
        if ok
        else f"missing {missing}"
    )


def run_registry(
    name_filter: Optional[str] = None,
    *,
    budget: int = 10**9,
    bounds_scale: int = 1,
) -> RegistryReport:
    scenarios = load_registry()
    if name_filter is not None:
        scenarios = tuple(s for s in scenarios if name_filter in s.name)
    results = []
    start = time.perf_counter()
    for sc in scenarios:
        t0 = time.perf_counter()
        try:
            found = solve(sc, budget=budget, bounds_scale=bounds_scale)
            ok, detail = compare_expected(sc, found)
            tuples = found.tuples
        except BudgetExceededError as exc:
            ok, detail, tuples = False, str(exc), ()
        results.append(
            EntryResult(sc.name, ok, sc.expected_kind, tuples, time.perf_counter() - t0, detail)
        )
    total = time.perf_counter() - start
    return RegistryReport(tuple(results), all(r.ok for r in results), total)

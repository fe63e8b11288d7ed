"""Acceptance battery: nine end-to-end checks, each with its own oracle.

Every criterion returns a ``CriterionResult``; ``run_all`` runs them in
order (or on a process pool) and ``format_result`` renders one line each.
"""

from __future__ import annotations

import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .bundles import BundleSpec, a_strings, enumerate_bundles, fiber_geometry, seed_spec
from .flags import all_diagrams, flag_data, koszul_vector_bruteforce, painted_diagram
from .kesolve import (
    Infeasible,
    completeness,
    energy_defect,
    flat_divisibility,
    ode_data,
    quadrature_profile,
    rk_verify,
    solve_algebraic,
)
from .kesolve.ode import ODEData
from .kesolve.profile import KEProfile, ProfileWarning, RKReport, kaehler_profile_function, kaehler_window, verdiani_check
from .oracles import cpn_profile, flat_lattice_search, koszul_pairings_bruteforce
from .rootsys import inner, killing_fit_residual, killing_scale_candidate, killing_scale_oracle

CPN_RANGE = (2, 3, 4, 5)
BATTERY_LAMBDAS = (-2, -1, 0, 1)
BATTERY_MAX_CHAR = 3
# one spec per diagram and lambda: the first enumerated spec that is
# algebraically feasible and stays in the chamber up to the domain end
BATTERY_POOL = (
    ("A", 1, ()), ("A", 2, ()), ("A", 3, ()), ("A", 1, (1,)), ("A", 2, (1,)), ("A", 3, (2,)),
    ("B", 2, (1,)), ("C", 2, (2,)), ("B", 3, (1,)), ("C", 3, (1, 2)), ("D", 4, (1,)), ("A", 4, (2, 4)),
)
VERDIANI_D = (0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0)
VERDIANI_KAPPA = (0.01, 0.05, 0.1, 0.35, 1.0, 2.0, 5.0, 20.0)
T_MAX = 50.0
SAMPLES = 401


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    extra: dict = field(default_factory=dict)


def format_result(r: CriterionResult) -> str:
    tag = "PASS" if r.passed else "FAIL"
    return f"[{tag}] criterion {r.number}: {r.name} ({r.seconds:.2f}s) {r.detail}"


# --- battery shared by criteria 5, 6 and 7 -------------------------------------------


@dataclass
class BatteryCase:
    lam: int
    label: str
    spec: BundleSpec
    data: ODEData
    profile: KEProfile
    rk: RKReport


def _first_admissible(d, lam: int) -> Optional[tuple]:
    for spec in enumerate_bundles(d, BATTERY_MAX_CHAR):
        try:
            problem = solve_algebraic(fiber_geometry(spec), lam)
        except Infeasible:
            continue
        if completeness(problem).in_chamber:
            return spec, problem
    return None


@lru_cache(maxsize=None)
def battery(lams: tuple[int, ...] = BATTERY_LAMBDAS) -> tuple[BatteryCase, ...]:
    cases = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ProfileWarning)
        for lam in lams:
            for fam, rank, black in BATTERY_POOL:
                d = painted_diagram(fam, rank, black)
                hit = _first_admissible(d, lam)
                if hit is None:
                    continue
                spec, problem = hit
                data = ode_data(problem)
                profile = quadrature_profile(data, samples=SAMPLES, t_max=T_MAX)
                cases.append(BatteryCase(lam, d.label(), spec, data, profile, rk_verify(data, profile)))
    return tuple(cases)


# --- criteria ------------------------------------------------------------------------


def criterion_1() -> CriterionResult:
    worst, slow, bad = 0.0, 0.0, []
    for n in CPN_RANGE:
        t0 = time.perf_counter()
        g = fiber_geometry(seed_spec(n))
        problem = solve_algebraic(g, n + 1)
        data = ode_data(problem)
        profile = quadrature_profile(data, samples=SAMPLES)
        mask = profile.t <= 0.9 * math.pi / math.sqrt(2)
        err = float(np.max(np.abs(profile.f[mask] - cpn_profile(n, profile.t[mask]))))
        dt = time.perf_counter() - t0
        worst, slow = max(worst, err), max(slow, dt)
        exact = (
            g.kappa_sq == Fraction(n - 1, 2 * n * n)
            and all(x == 0 for x in problem.Z0)
            and problem.m == n
            and math.isclose(problem.c, math.sqrt(n - 1) / math.sqrt(2), rel_tol=1e-14)
        )
        if not (exact and err < 1e-6 and dt < 5.0):
            bad.append(n)
    return CriterionResult(
        1, "CP^n reproduction", not bad,
        f"n={list(CPN_RANGE)} sup|f-closed form|={worst:.1e} slowest={slow:.2f}s failures={bad}", 0.0,
    )


def criterion_2() -> CriterionResult:
    bad = []
    for n in CPN_RANGE:
        problem = solve_algebraic(fiber_geometry(seed_spec(n)), n + 1)
        pairs = problem.root_pairs
        zero = [p for p in pairs if p.a == 0]
        bs = {p.b for p in pairs}
        # A(f) = sum b / (a + f b) at a few rational f, exactly
        ok_A = all(
            sum((p.b / (p.a + f * p.b) for p in pairs), Fraction(0))
            == Fraction(n - 1) / f
            for f in (Fraction(1, 7), Fraction(2, 3), Fraction(5))
        )
        if not (len(zero) == n - 1 == len(pairs) and len(bs) == 1 and ok_A):
            bad.append(n)
    return CriterionResult(2, "A(f) = (n-1)/f on the seed", not bad, f"failures={bad}", 0.0)


def criterion_3() -> CriterionResult:
    diagrams = all_diagrams(4)
    bad = []
    for d in diagrams:
        fd = flag_data(d)
        if not (fd.koszul_vector == koszul_vector_bruteforce(fd) == koszul_pairings_bruteforce(d)):
            bad.append(d.label())
    half = []
    for n in range(2, 7):
        d = painted_diagram("A", n - 1, [1])
        R = d.root_system
        if inner(R, d.base[0], flag_data(d).koszul) != Fraction(1, 2):
            half.append(n)
    return CriterionResult(
        3, "Koszul exactness", not bad and not half,
        f"{len(diagrams)} diagrams, mismatches={bad}, beta(Z^Kos)!=1/2 for n={half}", 0.0,
    )


def criterion_4() -> CriterionResult:
    worst = 0.0
    for fam in "ABCD":
        for rank in range(2, 6):
            s = killing_scale_oracle(fam, rank)
            rel = abs(s - float(killing_scale_candidate(fam, rank))) / float(killing_scale_candidate(fam, rank))
            worst = max(worst, rel, killing_fit_residual(fam, rank))
    return CriterionResult(4, "Killing scale certification", worst < 1e-9, f"max deviation={worst:.1e}", 0.0)


def criterion_5() -> CriterionResult:
    cases = battery()
    per = {lam: sum(1 for c in cases if c.lam == lam) for lam in BATTERY_LAMBDAS}
    agree = max(c.rk.max_f_diff for c in cases)
    resid = max(c.rk.max_residual for c in cases)
    ok = all(v >= 5 for v in per.values()) and agree < 1e-8 and resid < 1e-8
    return CriterionResult(
        5, "quadrature vs Runge-Kutta", ok,
        f"cases per lambda={per} sup|f_quad-f_rk|={agree:.1e} residual={resid:.1e}", 0.0,
    )


def criterion_6() -> CriterionResult:
    worst = 0.0
    count = 0
    for c in battery():
        worst = max(worst, energy_defect(c.data, c.profile), c.rk.max_energy_rk)
        count += 1
    for n in CPN_RANGE:
        data = ode_data(solve_algebraic(fiber_geometry(seed_spec(n)), n + 1))
        worst = max(worst, energy_defect(data, quadrature_profile(data, samples=SAMPLES)))
        count += 1
    return CriterionResult(6, "energy identity", worst < 1e-10, f"{count} profiles, max defect={worst:.1e}", 0.0)


def _dichotomy_ok(c: BatteryCase) -> bool:
    p = c.profile
    if c.lam <= 0:
        i25 = int(np.searchsorted(p.t, 25.0))
        return (
            math.isinf(p.domain_end)
            and p.complete
            and p.t[-1] == T_MAX
            and bool(np.all(np.diff(p.f) > 0))
            and p.f[-1] > p.f[i25]
        )
    scale = max(1.0, float(np.max(np.abs(p.fdot))))
    return math.isfinite(p.domain_end) and not p.complete and abs(p.fdot[-1]) <= 1e-8 * scale


def criterion_7() -> CriterionResult:
    cases = battery()
    bad = [f"{c.label} lambda={c.lam}" for c in cases if not _dichotomy_ok(c)]
    return CriterionResult(7, "completeness dichotomy", not bad, f"{len(cases)} profiles, failures={bad}", 0.0)


def flat_cases() -> list[BundleSpec]:
    """Every (base, string, end) of rank <= 4, plus one m = 1 spec per base with black nodes."""
    out = []
    for d in all_diagrams(4):
        for path in a_strings(d):
            for end in ("left",) if len(path) == 1 else ("left", "right"):
                out.append(BundleSpec(d, path, end, (0,) * len(d.black)))
        if d.black:
            out.append(BundleSpec(d, (), None, (1,) + (0,) * (len(d.black) - 1)))
    return out


def criterion_8() -> CriterionResult:
    cases = flat_cases()
    bad = []
    positive = 0
    for spec in cases:
        v = flat_divisibility(spec.base, spec)
        hits = flat_lattice_search(spec.base, spec.string, spec.end, bound=20)
        ok = v.satisfiable == bool(hits)
        if v.satisfiable:
            positive += 1
            ok = ok and v.witness in hits
            try:
                w = BundleSpec(spec.base, spec.string, spec.end, v.witness)
                solve_algebraic(fiber_geometry(w), 0)
            except Infeasible:
                ok = False
        if not ok:
            bad.append(spec.base.label() + str(spec.to_json()))
    return CriterionResult(
        8, "flat divisibility", not bad,
        f"{len(cases)} cases, {positive} satisfiable, disagreements={bad}", 0.0,
    )


def criterion_9() -> CriterionResult:
    worst = 0.0
    for d in VERDIANI_D:
        for k in VERDIANI_KAPPA:
            r = verdiani_check(kaehler_profile_function(d, k), k, kaehler_window(d, k))
            worst = max(worst, *r.errors())
    n = len(VERDIANI_D) * len(VERDIANI_KAPPA)
    return CriterionResult(9, "Verdiani conditions", worst <= 1e-10, f"{n} (d, kappa) pairs, max error={worst:.1e}", 0.0)


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}
# wall-clock budgets in seconds; criterion 1 checks its own per-n budget
BUDGETS = {4: 30.0, 5: 60.0, 8: 60.0}


def run_criterion(number: int) -> CriterionResult:
    t0 = time.perf_counter()
    r = CRITERIA[number]()
    r.seconds = time.perf_counter() - t0
    budget = BUDGETS.get(number)
    if budget is not None and r.seconds >= budget:
        r.passed = False
        r.detail += f" over budget ({budget:.0f}s)"
    return r


def run_all(numbers: Sequence[int] = tuple(CRITERIA), workers: int = 1) -> list[CriterionResult]:
    if workers <= 1:
        return [run_criterion(n) for n in numbers]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_criterion, numbers))

"""Command-line front end.

    flagke analyze DIAGRAM
    flagke bundles DIAGRAM --max-char N
    flagke solve DIAGRAM --bundle SPEC --lambda L [--z0 JSON]
    flagke profile DIAGRAM --bundle SPEC --lambda L [--samples N --t-max T --f-max F]
    flagke verify-cpn --n N
    flagke suite [--only 1,5,8] [--workers K]

DIAGRAM and SPEC are inline JSON or paths to JSON files, with 1-based node
numbers.  Exit codes: 0 pass, 2 infeasible, 3 numerical check failed,
4 parse error.  Artifacts go to --output, else $FLAGKE_OUTPUT_DIR, else stdout
(profile CSVs default to the current directory).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from .bundles import BundleError, BundleSpec, bundle_report, enumerate_bundles, fiber_geometry, seed_spec
from .flags import DiagramError, DomainError, PaintedDiagram, analyze_report
from .kesolve import (
    Infeasible,
    KEProblem,
    NumericalFailure,
    completeness,
    energy_defect,
    ode_data,
    quadrature_profile,
    rk_verify,
    solve_algebraic,
)
from .kesolve.ode import ChamberViolation
from .kesolve.profile import ProfileWarning
from .oracles import cpn_profile

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_NUMERICAL = 3
EXIT_PARSE = 4
OUTPUT_ENV = "FLAGKE_OUTPUT_DIR"
CHECK_TOL = 1e-8
ENERGY_TOL = 1e-10


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


# --- serialization -------------------------------------------------------------------


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return _jsonable(x.item())
    return x


def dumps(obj: dict, timestamp: bool = True) -> str:
    out = dict(obj)
    if timestamp:
        out["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return json.dumps(_jsonable(out), sort_keys=True, indent=2) + "\n"


def load_json_arg(text: str) -> Any:
    """Inline JSON, or the contents of a JSON file."""
    try:
        p = Path(text)
        if not text.lstrip().startswith(("{", "[")) and p.is_file():
            text = p.read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read JSON from {text!r}: {exc}") from exc


def parse_diagram(text: str) -> PaintedDiagram:
    try:
        return PaintedDiagram.from_json(load_json_arg(text))
    except DiagramError as exc:
        raise ParseError(str(exc)) from exc


def parse_bundle(base: PaintedDiagram, text: str) -> BundleSpec:
    data = load_json_arg(text)
    try:
        return BundleSpec.from_json(base, data)
    except BundleError as exc:
        raise ParseError(str(exc)) from exc


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def parse_z0(text: Optional[str]) -> Optional[list[Fraction]]:
    if text is None:
        return None
    data = load_json_arg(text)
    if not isinstance(data, list):
        raise ParseError("--z0 must be a JSON list")
    return [parse_fraction(str(x)) for x in data]


def csv_text(profile) -> str:
    lines = ["t,f,fdot,fddot,residual"]
    for row in profile.csv_rows():
        lines.append(",".join("%.17g" % x for x in row))
    return "\n".join(lines) + "\n"


def read_profile_csv(path: Path) -> list[dict[str, float]]:
    with open(path, newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]


# --- reports ---------------------------------------------------------------------------


def problem_report(problem: KEProblem) -> dict:
    g = problem.geometry
    verdict = completeness(problem)
    return {
        "feasible": True,
        "lambda": problem.lam,
        "Z0": list(problem.Z0),
        "z0_source": problem.z0_source,
        "P": list(g.P_h),
        "kappa_sq": g.kappa_sq,
        "c": {"times_m": problem.m, "sqrt_kappa_sq": g.kappa_sq},
        "c_float": problem.c,
        "m": problem.m,
        "diagram": g.spec.base.to_json(),
        "bundle": g.spec.to_json(),
        "K_diagram": g.K_diagram.to_json(),
        "complete": verdict.complete,
        "ray_certificate": verdict.ray_certificate,
        "in_chamber": verdict.in_chamber,
        "f_domain_end": verdict.f_domain_end,
        "domain_end": None,
    }


def infeasible_report(spec: BundleSpec, lam: Fraction, exc: Exception) -> dict:
    return {
        "feasible": False,
        "lambda": lam,
        "reason": getattr(exc, "reason", "chamber"),
        "message": str(exc),
        "diagram": spec.base.to_json(),
        "bundle": spec.to_json(),
    }


class _Output:
    def __init__(self, path: Optional[str]):
        base = path or os.environ.get(OUTPUT_ENV)
        self.dir = Path(base) if base else None

    def emit(self, name: str, text: str) -> Optional[Path]:
        if self.dir is None:
            sys.stdout.write(text)
            return None
        self.dir.mkdir(parents=True, exist_ok=True)
        p = self.dir / name
        p.write_text(text)
        return p


# --- verbs ---------------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    d = parse_diagram(args.diagram)
    _Output(args.output).emit("analyze.json", dumps(analyze_report(d)))
    return EXIT_OK


def cmd_bundles(args) -> int:
    d = parse_diagram(args.diagram)
    specs = enumerate_bundles(d, args.max_char)
    report = {"diagram": d.to_json(), "max_char": args.max_char, "count": len(specs),
              "bundles": [bundle_report(s) for s in specs]}
    _Output(args.output).emit("bundles.json", dumps(report))
    return EXIT_OK


def _problem(args) -> tuple[BundleSpec, Fraction, Any]:
    d = parse_diagram(args.diagram)
    spec = parse_bundle(d, args.bundle)
    lam = parse_fraction(args.lam)
    z0 = parse_z0(args.z0)
    try:
        g = fiber_geometry(spec)
    except BundleError as exc:
        raise ParseError(str(exc)) from exc
    try:
        return spec, lam, solve_algebraic(g, lam, z0)
    except (Infeasible, DomainError) as exc:
        return spec, lam, exc


def cmd_solve(args) -> int:
    spec, lam, problem = _problem(args)
    out = _Output(args.output)
    if isinstance(problem, Exception):
        out.emit("report.json", dumps(infeasible_report(spec, lam, problem)))
        return EXIT_INFEASIBLE
    try:
        data = ode_data(problem)
    except ChamberViolation as exc:
        out.emit("report.json", dumps(infeasible_report(spec, lam, exc)))
        return EXIT_INFEASIBLE
    report = problem_report(problem)
    report["exit_f"] = None if data.exit_u_exact() is None else problem.kappa * data.exit_u()
    if problem.lam <= 0:
        report["domain_end"] = math.inf
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ProfileWarning)
            try:
                report["domain_end"] = quadrature_profile(data, samples=2, t_max=math.inf).domain_end
            except NumericalFailure as exc:
                report["numerical_failure"] = str(exc)
                out.emit("report.json", dumps(report))
                return EXIT_NUMERICAL
    out.emit("report.json", dumps(report))
    return EXIT_OK


def cmd_profile(args) -> int:
    spec, lam, problem = _problem(args)
    out_dir = Path(args.output or os.environ.get(OUTPUT_ENV) or ".")
    out = _Output(str(out_dir))
    if isinstance(problem, Exception):
        out.emit("report.json", dumps(infeasible_report(spec, lam, problem)))
        return EXIT_INFEASIBLE
    try:
        data = ode_data(problem)
    except ChamberViolation as exc:
        out.emit("report.json", dumps(infeasible_report(spec, lam, exc)))
        return EXIT_INFEASIBLE
    report = problem_report(problem)
    code = EXIT_OK
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ProfileWarning)
        try:
            profile = quadrature_profile(data, samples=args.samples, t_max=args.t_max, f_max=args.f_max)
        except NumericalFailure as exc:
            report.update(numerical_failure=str(exc))
            out.emit("report.json", dumps(report))
            return EXIT_NUMERICAL
    report["warnings"] = [str(w.message) for w in caught]
    report["domain_end"] = profile.domain_end
    report["f_end"] = profile.f_end
    report["samples"] = len(profile.t)
    report["residual_max"] = profile.residual_max
    report["energy_defect"] = energy_defect(data, profile)
    if not args.no_rk:
        try:
            rk = rk_verify(data, profile)
            report["rk"] = {"max_f_diff": rk.max_f_diff, "max_fdot_diff": rk.max_fdot_diff,
                            "max_energy": rk.max_energy_rk, "t0": rk.t0, "method": rk.method}
            if rk.max_f_diff >= CHECK_TOL:
                code = EXIT_NUMERICAL
        except NumericalFailure as exc:
            report["rk"] = {"failure": str(exc)}
            code = EXIT_NUMERICAL
    if report["residual_max"] >= CHECK_TOL or report["energy_defect"] >= ENERGY_TOL:
        code = EXIT_NUMERICAL
    report["checks_passed"] = code == EXIT_OK
    out.emit("profile.csv", csv_text(profile))
    out.emit("report.json", dumps(report))
    return code


def verify_cpn(n: int, samples: int = 401) -> dict:
    g = fiber_geometry(seed_spec(n))
    problem = solve_algebraic(g, n + 1)
    data = ode_data(problem)
    profile = quadrature_profile(data, samples=samples)
    mask = profile.t <= 0.9 * math.pi / math.sqrt(2)
    err = float(max(abs(profile.f[mask] - cpn_profile(n, profile.t[mask]))))
    rk = rk_verify(data, profile)
    checks = {
        "kappa_sq": g.kappa_sq == Fraction(n - 1, 2 * n * n),
        "Z0_zero": all(x == 0 for x in problem.Z0),
        "c": math.isclose(problem.c, math.sqrt(n - 1) / math.sqrt(2), rel_tol=1e-14),
        "profile": err < 1e-6,
        "rk": rk.max_f_diff < CHECK_TOL and rk.max_residual < CHECK_TOL,
    }
    return {
        "n": n, "kappa_sq": g.kappa_sq, "lambda": problem.lam, "c_float": problem.c,
        "max_profile_error": err, "rk_max_f_diff": rk.max_f_diff, "residual_max": rk.max_residual,
        "domain_end": profile.domain_end, "checks": checks, "passed": all(checks.values()),
    }


def cmd_verify_cpn(args) -> int:
    if args.n < 2:
        raise ParseError("--n must be at least 2")
    r = verify_cpn(args.n, args.samples)
    print(
        f"{'PASS' if r['passed'] else 'FAIL'} CP^{args.n - 1} (n={args.n}): kappa^2={r['kappa_sq']} "
        f"lambda={r['lambda']} c={r['c_float']:.15g} max profile error={r['max_profile_error']:.2e}"
    )
    if args.output or os.environ.get(OUTPUT_ENV):
        _Output(args.output).emit(f"verify-cpn-{args.n}.json", dumps(r))
    return EXIT_OK if r["passed"] else EXIT_NUMERICAL


def cmd_suite(args) -> int:
    from .acceptance import CRITERIA, format_result, run_all

    numbers = tuple(CRITERIA)
    if args.only:
        try:
            numbers = tuple(int(x) for x in args.only.split(","))
        except ValueError as exc:
            raise ParseError(f"bad --only list {args.only!r}") from exc
        if any(n not in CRITERIA for n in numbers):
            raise ParseError(f"criteria are numbered {min(CRITERIA)}..{max(CRITERIA)}")
    results = run_all(numbers, workers=args.workers)
    for r in results:
        print(format_result(r))
    if args.output or os.environ.get(OUTPUT_ENV):
        report = {"results": [{"number": r.number, "name": r.name, "passed": r.passed,
                               "detail": r.detail, "seconds": r.seconds} for r in results]}
        _Output(args.output).emit("suite.json", dumps(report))
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


# --- argument parsing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="flagke", description="Kähler-Einstein metrics on standard cohomogeneity-one manifolds")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("-o", "--output", help=f"output directory (default ${OUTPUT_ENV})")

    a = sub.add_parser("analyze", help="flag manifold data of a painted diagram")
    a.add_argument("diagram")
    common(a)
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("bundles", help="enumerate admissible bundles")
    b.add_argument("diagram")
    b.add_argument("--max-char", type=int, default=1)
    common(b)
    b.set_defaults(func=cmd_bundles)

    for name, func, hlp in (("solve", cmd_solve, "algebraic Einstein condition"),
                            ("profile", cmd_profile, "Einstein profile CSV and report")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("diagram")
        s.add_argument("--bundle", required=True)
        s.add_argument("--lambda", dest="lam", required=True)
        s.add_argument("--z0", help="face point for lambda = 0 (JSON list of h-coordinates)")
        common(s)
        s.set_defaults(func=func)
        if name == "profile":
            s.add_argument("--samples", type=int, default=401)
            s.add_argument("--t-max", type=float, default=50.0)
            s.add_argument("--f-max", type=float, default=None)
            s.add_argument("--no-rk", action="store_true", help="skip the Runge-Kutta cross-check")

    v = sub.add_parser("verify-cpn", help="SU(n) seed against its closed form")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--samples", type=int, default=401)
    common(v)
    v.set_defaults(func=cmd_verify_cpn)

    u = sub.add_parser("suite", help="run the acceptance battery")
    u.add_argument("--only", help="comma-separated criterion numbers")
    u.add_argument("--workers", type=int, default=1)
    common(u)
    u.set_defaults(func=cmd_suite)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"flagke: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

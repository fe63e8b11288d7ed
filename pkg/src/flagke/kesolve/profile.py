"""Metric profiles: closed-form quadrature, Runge-Kutta cross-check, diagnostics.

The first integral u'^2 = u S(u) / R(u) turns the Einstein ODE into the
quadrature t(u) = int_0^u sqrt(R / (v S)) dv.  Two substitutions make the
integrand analytic on the whole interval:

* v = w^2 removes the 1/sqrt(v) endpoint at the singular orbit, giving
  dt/dw = 2 sqrt(R(w^2) / S(w^2));
* for lambda > 0 the profile stops at the first root u* of S, where u' = 0;
  there v = u* sin^2(theta) with S = (u* - v) T gives dt/dtheta = 2 sqrt(R / T).

The integral is computed panel by panel with Gauss-Legendre rules (16 and
24 nodes, the difference serving as error estimate) and inverted by Newton
iteration to sample on a uniform t grid.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .. import poly
from .algebraic import KEProblem
from .ode import ODEData

_GL16 = np.polynomial.legendre.leggauss(16)
_GL24 = np.polynomial.legendre.leggauss(24)

PANEL_RATIO = 0.25
PANEL_RTOL = 1e-13
MIN_PANEL_FRACTION = 1e-10
MAX_PANELS = 20000


class NumericalFailure(RuntimeError):
    pass


class ProfileWarning(UserWarning):
    pass


@dataclass
class KEProfile:
    t: np.ndarray
    f: np.ndarray
    fdot: np.ndarray
    fddot: np.ndarray
    residual: np.ndarray
    kappa: float
    c: float
    lam: float
    domain_end: float  # t where the profile stops (inf when unbounded)
    f_end: float  # f at domain_end (inf when unbounded)
    complete: bool
    notes: list[str] = field(default_factory=list)

    @property
    def residual_max(self) -> float:
        return float(np.max(self.residual)) if len(self.residual) else 0.0

    def csv_rows(self):
        for row in zip(self.t, self.f, self.fdot, self.fddot, self.residual):
            yield tuple(float(x) for x in row)


def _gauss(g: Callable, lo: np.ndarray, hi: np.ndarray, rule) -> np.ndarray:
    x, w = rule
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    pts = mid[:, None] + half[:, None] * x[None, :]
    return half * (g(pts) @ w)


def _roots_of(c: np.ndarray) -> np.ndarray:
    c = np.trim_zeros(np.asarray(c, dtype=float), "b")
    return np.roots(c[::-1]) if len(c) > 1 else np.array([], dtype=complex)


def _deflate_exact(p: poly.Poly, r: Fraction) -> tuple[int, poly.Poly]:
    """Multiplicity k of the root r and p / (r - x)^k, exactly."""
    k = 0
    while p and poly.evaluate(p, r) == 0:
        # synthetic division by (x - r), then flip the sign
        hi = list(reversed(p))
        q = [hi[0]]
        for c in hi[1:-1]:
            q.append(c + r * q[-1])
        p = poly.scale(tuple(reversed(q)), -1)
        k += 1
    return k, p


def _positive_real_roots(p: poly.Poly, below: float) -> list[float]:
    return sorted(
        float(x.real)
        for x in poly.complex_roots(p)
        if abs(x.imag) <= 1e-9 * max(1.0, abs(x)) and 0 < x.real < below
    )


def turning_point(data: ODEData, below: float = math.inf) -> float:
    """First root of S in (0, below), where u' returns to zero; inf if there is none.

    S is first stripped of any exact root at the chamber exit, where a
    double root may sit.  Roots inside the chamber are simple (Q increases
    up to m / lambda and decreases afterwards), so Newton polishing is safe.
    """
    S = data.S
    ue = data.exit_u_exact()
    if ue is not None:
        _, S = _deflate_exact(S, ue)
    roots = _positive_real_roots(S, below)
    if not roots:
        return math.inf
    c = poly.to_float(data.S)
    dc = poly.to_float(poly.derivative(data.S))
    r = roots[0]
    for _ in range(3):
        r -= float(np.polyval(c[::-1], r) / np.polyval(dc[::-1], r))
    return r if r < below else math.inf


class _Quadrature:
    """t as a function of the integration variable x.

    Two charts: "w" with u = w^2 (open, or capped at f_max) and "end" with
    u = u_e sin^2 x on [0, pi/2], used when the profile stops at u_e.  If
    R = (u_e - u)^k Rt and S = (u_e - u)^j St, then
    dt/dx = 2 u_e^((k - j + 1)/2) cos(x)^(k - j + 1) sqrt(Rt / St).
    The turning point is k = 0, j = 1; a chamber wall has k >= 1.
    """

    def __init__(self, data: ODEData, t_max: float, f_max: Optional[float]):
        self.data = data
        self.R = poly.to_float(data.R)
        self.S = poly.to_float(data.S)
        self.dR = poly.to_float(poly.derivative(data.R))
        self.dS = poly.to_float(poly.derivative(data.S))
        self.ab = data.nonzero_pairs
        self.notes: list[str] = []
        self.t_max = t_max
        lam = float(data.lam)
        u_exit = data.exit_u()
        u_cap = math.inf if f_max is None else f_max / data.kappa
        u_turn = turning_point(data, below=u_exit) if lam > 0 else math.inf
        u_end = min(u_turn, u_exit, u_cap)
        self.u_end = u_end
        self.turning = False
        if u_end == u_cap and u_cap < math.inf:
            self.mode = "w"
            self.x_end = math.sqrt(u_cap)
            self.notes.append(f"domain truncated at f_max = {f_max!r}")
        elif u_end == u_turn and u_turn < math.inf:
            self.mode = "end"
            self.x_end = math.pi / 2
            self.k, self.j = 0, 1
            self.Rt, self.St = self.R, poly.float_deflate(self.S, u_turn)
            self.turning = True
        elif u_end == u_exit and u_exit < math.inf:
            self.mode = "end"
            self.x_end = math.pi / 2
            ue = data.exit_u_exact()
            self.k, Rt = _deflate_exact(data.R, ue)
            self.j, St = _deflate_exact(data.S, ue)
            self.Rt, self.St = poly.to_float(Rt), poly.to_float(St)
            if self.j > self.k + 1:
                raise NumericalFailure("path approaches the chamber wall only asymptotically")
            self.turning = self.j > self.k
            self.notes.append(f"chamber exit at f = {data.kappa * u_exit!r}: a root pairing reaches zero")
        else:
            self.mode = "w"
            self.x_end = math.inf
        self._build_panels()

    @property
    def udot_vanishes_at_end(self) -> bool:
        return self.mode == "end" and self.j > self.k

    @property
    def udot_finite_at_end(self) -> bool:
        return self.mode == "w" or self.j >= self.k

    # --- maps from x to u, dt/dx and u' --------------------------------------

    def u_of(self, x):
        if self.mode == "w":
            return x * x
        return self.u_end * np.sin(x) ** 2

    @staticmethod
    def _ev(c, u):
        return np.polyval(c[::-1], u) if len(c) else 0.0 * u

    def g(self, x):
        """dt/dx."""
        u = self.u_of(x)
        if self.mode == "w":
            return 2.0 * np.sqrt(self._ev(self.R, u) / self._ev(self.S, u))
        e = self.k - self.j + 1
        return 2.0 * self.u_end ** (e / 2) * np.cos(x) ** e * np.sqrt(
            self._ev(self.Rt, u) / self._ev(self.St, u)
        )

    def udot(self, x):
        """u' = sqrt(u S / R), written without cancelling factors."""
        u = self.u_of(x)
        if self.mode == "w":
            return x * np.sqrt(self._ev(self.S, u) / self._ev(self.R, u))
        ue, e = self.u_end, self.j - self.k
        with np.errstate(divide="ignore"):
            return (
                math.sqrt(ue) * np.sin(x) * np.sqrt(self._ev(self.St, u) / self._ev(self.Rt, u))
                * (math.sqrt(ue) * np.cos(x)) ** e
            )

    # --- panels ----------------------------------------------------------------

    def _singularities(self) -> np.ndarray:
        if self.mode == "w":
            roots = np.concatenate([poly.complex_roots(self.data.R), poly.complex_roots(self.data.S)])
            s = np.sqrt(roots.astype(complex))
            return np.concatenate([s, -s])
        roots = np.concatenate([_roots_of(self.Rt), _roots_of(self.St)])
        z = np.arcsin(np.sqrt(roots.astype(complex) / self.u_end))
        return np.concatenate([z, -z, np.pi - z, z - np.pi])

    def _build_panels(self) -> None:
        sing = self._singularities()
        edges = [0.0]
        x = 0.0
        bounded = math.isfinite(self.x_end)
        h_floor = 1e-13 * (self.x_end if bounded else 1.0)
        while True:
            dist = np.min(np.abs(sing - x)) if len(sing) else math.inf
            h = PANEL_RATIO * dist
            if not math.isfinite(h):
                h = max(0.5, x) if not bounded else self.x_end
            if self.mode != "w":
                h = min(h, math.pi / 16)
            h = max(h, h_floor)
            if bounded:
                remaining = self.x_end - x
                if h >= remaining * (1 - 1e-3):
                    edges.append(self.x_end)
                    break
            x += h
            edges.append(x)
            if not bounded and len(edges) % 64 == 0:
                e = np.array(edges)
                if float(np.sum(_gauss(self.g, e[:-1], e[1:], _GL24))) >= self.t_max:
                    break
            if len(edges) > MAX_PANELS:
                raise NumericalFailure("panel budget exhausted")
        lo, hi = np.array(edges[:-1]), np.array(edges[1:])
        for _ in range(40):
            i24 = _gauss(self.g, lo, hi, _GL24)
            i16 = _gauss(self.g, lo, hi, _GL16)
            # panels carrying a negligible share of t are judged against the total
            share = np.sum(np.abs(i24)) * (hi - lo) / (hi[-1] - lo[0])
            bad = np.abs(i24 - i16) > PANEL_RTOL * np.maximum(np.abs(i24), share)
            # below this width the two rules only differ by rounding noise
            bad &= (hi - lo) > MIN_PANEL_FRACTION * (hi[-1] - lo[0])
            if not bad.any():
                break
            mid = 0.5 * (lo + hi)
            lo = np.sort(np.concatenate([lo, mid[bad]]))
            hi = np.sort(np.concatenate([hi, mid[bad]]))
            if len(lo) > MAX_PANELS:
                raise NumericalFailure("adaptive refinement did not converge")
        else:
            raise NumericalFailure("adaptive refinement did not converge")
        self.edges = np.concatenate([lo, hi[-1:]])
        self.t_edges = np.concatenate([[0.0], np.cumsum(i24)])
        self.t_total = float(self.t_edges[-1])

    # --- inversion -----------------------------------------------------------------

    def x_of_t(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        k = np.clip(np.searchsorted(self.t_edges, t, side="right") - 1, 0, len(self.edges) - 2)
        x0, x1 = self.edges[k], self.edges[k + 1]
        t0, t1 = self.t_edges[k], self.t_edges[k + 1]
        x = x0 + (x1 - x0) * np.clip((t - t0) / np.where(t1 > t0, t1 - t0, 1.0), 0.0, 1.0)
        lo, hi = x0.copy(), x1.copy()
        for _ in range(60):
            F = t0 + _gauss(self.g, x0, x, _GL24) - t
            lo = np.where(F < 0, x, lo)
            hi = np.where(F > 0, x, hi)
            gx = self.g(x)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = np.where(gx > 0, F / gx, 0.0)
            xn = x - step
            outside = (xn <= lo) | (xn >= hi) | ~np.isfinite(xn)
            xn = np.where(outside, 0.5 * (lo + hi), xn)
            done = np.abs(F) <= 4e-16 * np.maximum(1.0, np.abs(t))
            x = np.where(done, x, xn)
            if done.all():
                break
        else:
            raise NumericalFailure("profile inversion did not converge")
        return x


def _second_derivatives(q: _Quadrature, u: np.ndarray, ud: np.ndarray):
    """u'' from the ODE and, independently, from differentiating u'^2 = u S / R."""
    d = q.data
    Rv = np.polyval(q.R[::-1], u)
    Sv = np.polyval(q.S[::-1], u)
    dR = np.polyval(q.dR[::-1], u) if len(q.dR) else 0.0 * u
    dS = np.polyval(q.dS[::-1], u) if len(q.dS) else 0.0 * u
    acc = np.zeros_like(u)
    for a, b in q.ab:
        acc = acc + b / (a + u * b)
    lam = float(d.lam)
    from_ode = d.m - lam * u - 0.5 * (acc * ud * ud + d.z * Sv / Rv)
    from_identity = 0.5 * ((Sv + u * dS) / Rv - u * Sv * dR / (Rv * Rv))
    return from_ode, from_identity


def quadrature_profile(
    data: ODEData,
    samples: int = 401,
    t_max: float = 50.0,
    f_max: Optional[float] = None,
) -> KEProfile:
    """Sample the Einstein profile f on a uniform t grid from the closed-form quadrature."""
    if samples < 2:
        raise ValueError("need at least two samples")
    q = _Quadrature(data, t_max, f_max)
    lam = float(data.lam)
    kappa = data.kappa
    bounded = math.isfinite(q.x_end)
    reaches_end = bounded and q.t_total <= t_max
    if not reaches_end:
        t = np.linspace(0.0, t_max, samples)
        x = q.x_of_t(t)
    elif not q.udot_finite_at_end:
        # u' blows up at the wall itself, so the last sample stays short of it
        t = np.linspace(0.0, q.t_total, samples + 1)[:-1]
        x = q.x_of_t(t)
    else:
        t = np.linspace(0.0, q.t_total, samples)
        x = np.concatenate([q.x_of_t(t[:-1]), [q.x_end]])
    u = q.u_of(x)
    ud = q.udot(x)
    if reaches_end and q.mode == "end":
        u[-1] = q.u_end
        if q.udot_vanishes_at_end:
            ud[-1] = 0.0
    udd, udd_alt = _second_derivatives(q, u, ud)
    f, fd, fdd = kappa * u, kappa * ud, kappa * udd
    scale = np.maximum.reduce([np.ones_like(f), np.full_like(f, data.c), np.abs(lam * f), np.abs(fdd)])
    residual = kappa * np.abs(udd - udd_alt) / scale
    notes = list(q.notes)
    if q.udot_vanishes_at_end:
        notes.append("turning point: f' = 0 at the domain end")
    if bounded:
        domain_end, f_end = q.t_total, kappa * q.u_end
    else:
        domain_end, f_end = math.inf, math.inf
    for n in q.notes:
        warnings.warn(n, ProfileWarning, stacklevel=2)
    return KEProfile(
        t=t, f=f, fdot=fd, fddot=fdd, residual=residual, kappa=kappa, c=data.c, lam=lam,
        domain_end=domain_end, f_end=f_end,
        complete=lam <= 0 and not bounded, notes=notes,
    )


# --- Runge-Kutta cross-check -----------------------------------------------------


@dataclass
class RKReport:
    t: np.ndarray
    f_rk: np.ndarray
    fdot_rk: np.ndarray
    max_f_diff: float  # sup |f_quad - f_rk| / max(1, |f|)
    max_fdot_diff: float
    max_residual: float  # ODE residual of the quadrature profile
    max_energy_rk: float  # first-integral defect along the RK solution
    t0: float
    method: str
    nfev: int


def rk_seed_time(data: ODEData) -> float:
    ratios = [a / b for a, b in data.pairs if a != 0 and b > 0]
    r = float(min(ratios)) if ratios else 1.0
    scale = min(1.0, math.sqrt(r), 1.0 / math.sqrt(abs(float(data.lam)) + 1.0))
    return 1e-3 * scale


def rk_verify(
    data: ODEData,
    profile: KEProfile,
    rtol: float = 1e-12,
    method: str = "RK45",
) -> RKReport:
    """Integrate the ODE from a Taylor seed and compare with the quadrature profile.

    Works in u = f / kappa on (u, u'); the default integrator is the
    Dormand-Prince 5(4) pair.
    """
    ab = data.nonzero_pairs
    z, m, lam = data.z, data.m, float(data.lam)
    c4 = data.taylor_c4()
    t0 = rk_seed_time(data)
    y0 = [t0 * t0 / 2 + c4 * t0**4, t0 + 4 * c4 * t0**3]

    def rhs(_t, y):
        u, v = y
        A = z / u + sum(b / (a + u * b) for a, b in ab)
        return [v, m - lam * u - 0.5 * A * v * v]

    kappa = data.kappa
    t = profile.t
    late = t > t0
    t_end = float(t[-1])
    sol = solve_ivp(
        rhs, (t0, t_end), y0, method=method, t_eval=t[late], rtol=rtol, atol=1e-14, dense_output=False
    )
    if not sol.success:
        raise NumericalFailure(f"RK integration failed: {sol.message}")
    u = np.empty_like(t)
    v = np.empty_like(t)
    early = ~late
    u[early] = t[early] ** 2 / 2 + c4 * t[early] ** 4
    v[early] = t[early] + 4 * c4 * t[early] ** 3
    u[late], v[late] = sol.y[0], sol.y[1]
    f_rk, fd_rk = kappa * u, kappa * v
    denom = np.maximum(1.0, np.abs(profile.f))
    fdiff = float(np.max(np.abs(profile.f - f_rk) / denom))
    fddiff = float(np.max(np.abs(profile.fdot - fd_rk) / np.maximum(1.0, np.abs(profile.fdot))))
    Pu = poly.evaluate(data.Pu, u)
    Qu = poly.evaluate(data.Qu, u)
    energy = float(np.max(np.abs(v * v * Pu - Qu) / np.maximum(1.0, np.abs(Qu))))
    return RKReport(
        t=t, f_rk=f_rk, fdot_rk=fd_rk, max_f_diff=fdiff, max_fdot_diff=fddiff,
        max_residual=profile.residual_max, max_energy_rk=energy, t0=t0, method=method,
        nfev=int(sol.nfev),
    )


def energy_defect(data: ODEData, profile: KEProfile) -> float:
    """sup |f'^2 P(f) - Q(f)| / max(1, |Q(f)|) along the profile."""
    P = data.P_f(profile.f)
    Q = data.Q_f(profile.f)
    return float(np.max(np.abs(profile.fdot**2 * P - Q) / np.maximum(1.0, np.abs(Q))))


# --- completeness ------------------------------------------------------------------


@dataclass(frozen=True)
class CompletenessVerdict:
    complete: bool
    ray_certificate: bool  # every K-black root is positive on P
    in_chamber: bool  # the path Z_0 + f Z^0 stays off the walls up to the domain end
    f_star: Optional[float]  # c / lambda, where c - lambda f changes sign (lambda > 0)
    f_domain_end: Optional[float]  # f at the end of the metric's domain (lambda > 0)
    chamber_exit_f: Optional[float]


def completeness(problem: KEProblem, data: Optional[ODEData] = None) -> CompletenessVerdict:
    """complete iff lambda <= 0, with the exact ray certificate beta_j(P) > 0."""
    from .ode import ode_data

    data = data or ode_data(problem)
    cert = all(x > 0 for x in problem.geometry.P_h)
    lam = problem.lam
    exit_u = data.exit_u()
    exit_f = data.kappa * exit_u if math.isfinite(exit_u) else None
    if lam <= 0:
        return CompletenessVerdict(True, cert, exit_f is None, None, None, exit_f)
    u_turn = turning_point(data, below=exit_u)
    in_chamber = math.isfinite(u_turn)
    end = data.kappa * min(u_turn, exit_u)
    return CompletenessVerdict(False, cert, in_chamber, problem.c / float(lam), end, exit_f)


# --- non-Einstein example ----------------------------------------------------------


def kaehler_profile(d: float, kappa: float, samples: int = 401, t_max: Optional[float] = None) -> KEProfile:
    """f = d (1 - exp(-kappa t^2 / (2 d))): smooth, increasing to d, f''(0) = kappa."""
    if not (d > 0 and kappa > 0):
        raise ValueError("d and kappa must be positive")
    if t_max is None:
        t_max = 6.0 * math.sqrt(d / kappa)
    t = np.linspace(0.0, t_max, samples)
    e = np.exp(-kappa * t * t / (2 * d))
    f = kaehler_profile_function(d, kappa)(t)
    fd = kappa * t * e
    fdd = kappa * e * (1 - kappa * t * t / d)
    return KEProfile(
        t=t, f=f, fdot=fd, fddot=fdd, residual=np.zeros_like(t), kappa=kappa, c=math.nan,
        lam=math.nan, domain_end=math.inf, f_end=d, complete=False, notes=["non-Einstein example"],
    )


def kaehler_profile_function(d: float, kappa: float) -> Callable[[np.ndarray], np.ndarray]:
    # expm1 avoids the cancellation in 1 - exp(-x) for small x
    return lambda t: -d * np.expm1(-kappa * np.asarray(t, dtype=float) ** 2 / (2 * d))


@dataclass(frozen=True)
class VerdianiReport:
    f0: float
    fdot0: float
    fddot0: float
    kappa: float

    def errors(self) -> tuple[float, float, float]:
        return abs(self.f0), abs(self.fdot0), abs(self.fddot0 - self.kappa)

    def passes(self, tol: float = 1e-10) -> bool:
        return max(self.errors()) <= tol


def verdiani_check(
    func: Callable[[np.ndarray], np.ndarray],
    kappa: float,
    window: float,
    degree: int = 10,
) -> VerdianiReport:
    """Boundary values f(0), f'(0), f''(0) by least-squares polynomial fit on (0, window].

    Only values at t > 0 are used and no parity is assumed.  The fit is done
    in the scaled variable s = t / window on Chebyshev-spaced points.
    """
    k = np.arange(3 * degree)
    s = 0.5 * (1 - np.cos(np.pi * (k + 0.5) / len(k)))
    y = func(s * window)
    V = np.vander(s, degree + 1, increasing=True)
    a, *_ = np.linalg.lstsq(V, y, rcond=None)
    return VerdianiReport(float(a[0]), float(a[1] / window), float(2 * a[2] / window**2), kappa)


def kaehler_window(d: float, kappa: float) -> float:
    """Fit window on the profile's own length scale sqrt(2 d / kappa)."""
    return 0.1 * math.sqrt(2 * d / kappa)


def fd_second_derivative_at_zero(profile: KEProfile) -> float:
    """f''(0) from the first interior samples: f(h) ~ f''(0) h^2 / 2 corrected by f(2h)."""
    t, f = profile.t, profile.f
    h1, h2 = t[1], t[2]
    # f = A t^2 + B t^4 through the two points
    M = np.array([[h1**2, h1**4], [h2**2, h2**4]])
    A, _ = np.linalg.solve(M, [f[1] - f[0], f[2] - f[0]])
    return float(2 * A)


# --- observables ---------------------------------------------------------------------


@dataclass
class RootTrack:
    root: list[str]
    a: Fraction
    b: Fraction
    eigen: np.ndarray  # 2 alpha(Z_t) / <alpha, alpha>
    btrack: np.ndarray  # alpha(Z_0) + f alpha(Z^0)
    positive: bool
    monotone: bool
    first_violation: Optional[float]


def profile_observables(problem: KEProblem, profile: KEProfile) -> list[RootTrack]:
    fK = problem.flagK
    R = fK.root_system
    kappa = problem.kappa
    interior = profile.t > 0
    out = []
    for p in problem.root_pairs:
        norm = float(R.norm_sq(p.root))
        bt = float(p.a) + profile.f * (float(p.b) / kappa)
        eig = 2 * bt / norm
        pos_mask = bt[interior] > 0
        positive = bool(pos_mask.all())
        viol = None if positive else float(profile.t[interior][~pos_mask][0])
        if p.b != 0:
            diffs = np.diff(bt)
            monotone = bool(np.all(diffs > 0)) if p.b > 0 else bool(np.all(diffs < 0))
        else:
            monotone = bool(np.all(bt == bt[0]))
        out.append(RootTrack(p.root.to_strings(), p.a, p.b, eig, bt, positive, monotone, viol))
    return out


def chamber_along_profile(problem: KEProblem, profile: KEProfile, tol: float = 1e-12) -> bool:
    """Z_0 + f(t) Z^0 in the K chamber at every sample t > 0.

    Pairings are evaluated in floating point and accepted when above -tol
    relative to the size of Z_0 and f Z^0.
    """
    Z0 = np.array([float(x) for x in problem.Z0])
    Zdir = np.array([float(x) for x in problem.geometry.P_h]) / problem.kappa
    f = profile.f[profile.t > 0]
    vals = Z0[None, :] + f[:, None] * Zdir[None, :]
    scale = np.maximum(1.0, np.abs(Z0)[None, :] + np.abs(f[:, None] * Zdir[None, :]))
    return bool(np.all(vals > -tol * scale))

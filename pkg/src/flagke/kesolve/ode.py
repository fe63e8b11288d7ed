"""Coefficient data of the Einstein ODE.

Along Z_t = Z_0 + f(t) Z^0 write f = kappa u, so Z_t = Z_0 + u P with
rational pairings a = alpha(Z_0), b = alpha(P).  In u the equation becomes

    u'' + 1/2 A(u) u'^2 + lambda u = m,   A(u) = sum_alpha b / (a + u b),

with u(0) = u'(0) = 0, u''(0) = 1, and the first integral
u'^2 Pu(u) = Qu(u), Pu(u) = prod (a + u b), Qu(y) = 2 int_0^y (m - lambda w) Pu(w) dw.
Exactly z = m - 1 pairs have a = 0, so Pu = u^z R and Qu = u^(z+1) S with
R(0) > 0 and S(0) = 2 R(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .. import poly
from .algebraic import KEProblem


class ChamberViolation(ValueError):
    pass


@dataclass(frozen=True)
class ODEData:
    m: int
    lam: Fraction
    kappa_sq: Fraction
    pairs: tuple[tuple[Fraction, Fraction], ...]
    z: int
    Pu: poly.Poly
    Qu: poly.Poly
    R: poly.Poly
    S: poly.Poly

    @property
    def kappa(self) -> float:
        return math.sqrt(self.kappa_sq)

    @property
    def c(self) -> float:
        return self.kappa * self.m

    @property
    def nonzero_pairs(self) -> np.ndarray:
        return np.array([(float(a), float(b)) for a, b in self.pairs if a != 0]).reshape(-1, 2)

    def zero_pairs(self) -> list[tuple[Fraction, Fraction]]:
        return [(a, b) for a, b in self.pairs if a == 0]

    def A_u(self, u):
        """A in the u variable (pole z/u at the origin)."""
        u = np.asarray(u, dtype=float)
        out = self.z / u
        for a, b in self.nonzero_pairs:
            out = out + b / (a + u * b)
        return out

    def A_f(self, f):
        """A(f) = sum alpha(Z^0) / (alpha(Z_0) + f alpha(Z^0))."""
        return self.A_u(np.asarray(f, dtype=float) / self.kappa) / self.kappa

    def P_f(self, f):
        return poly.evaluate(self.Pu, np.asarray(f, dtype=float) / self.kappa)

    def Q_f(self, f):
        return float(self.kappa_sq) * poly.evaluate(self.Qu, np.asarray(f, dtype=float) / self.kappa)

    def taylor_c4(self) -> float:
        """u = t^2/2 + c4 t^4 + O(t^6) from matching the t^2 terms of the ODE."""
        B1 = sum((b / a for a, b in self.pairs if a != 0), Fraction(0))
        return float(-(B1 + self.lam) / (12 * (self.m + 1)))

    def exit_u_exact(self) -> Optional[Fraction]:
        """First positive u where some factor a + u b vanishes (None if none)."""
        cands = [-a / b for a, b in self.pairs if b < 0 and a > 0]
        return min(cands) if cands else None

    def exit_u(self) -> float:
        r = self.exit_u_exact()
        return math.inf if r is None else float(r)


def ode_data(problem: KEProblem) -> ODEData:
    pairs = tuple((p.a, p.b) for p in problem.root_pairs)
    for a, b in pairs:
        if a < 0 or (a == 0 and b <= 0):
            raise ChamberViolation(f"root pair (a={a}, b={b}) leaves the chamber at u = 0+")
    z = sum(1 for a, _ in pairs if a == 0)
    m = problem.m
    if z != m - 1:
        raise ChamberViolation(f"{z} roots vanish on Z_0, expected m - 1 = {m - 1}")
    lam = problem.lam
    Pu = poly.product(poly.poly([a, b]) for a, b in pairs)
    Qu = poly.scale(poly.antiderivative(poly.mul(poly.poly([m, -lam]), Pu)), 2)
    R = poly.shift_down(Pu, z)
    S = poly.shift_down(Qu, z + 1)
    return ODEData(m, lam, problem.kappa_sq, pairs, z, Pu, Qu, R, S)

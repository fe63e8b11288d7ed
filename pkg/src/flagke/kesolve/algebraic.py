"""Exact algebraic side of the Kähler-Einstein problem.

The Einstein condition on the regular part reduces to the linear identity
Z^Kos = lambda Z_0 + c Z^0 in t_K with c = kappa m.  Since kappa Z^0 = P,
this reads Z^Kos - m P = lambda Z_0 and everything stays rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..bundles import BundleSpec, FiberGeometry, painted_diagram_for
from ..flags import FlagData, PaintedDiagram, flag_data
from ..rootsys import Covector, cartan_matrix


class Infeasible(Exception):
    """The algebraic Einstein condition has no admissible solution.

    ``reason`` is one of "flat" (lambda = 0 and Z^Kos != m P), "face"
    (beta(Z_0) != 0), "chamber" (a base black root is not positive on Z_0)
    or "domain" (a supplied Z_0 is malformed).
    """

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class RootPair:
    root: Covector
    a: Fraction  # alpha(Z_0)
    b: Fraction  # alpha(P) = kappa alpha(Z^0)


@dataclass(frozen=True)
class KEProblem:
    geometry: FiberGeometry
    lam: Fraction
    Z0: tuple[Fraction, ...]  # h-coordinates in t_K
    z0_source: str
    root_pairs: tuple[RootPair, ...]

    @property
    def flagK(self) -> FlagData:
        return self.geometry.flagK

    @property
    def m(self) -> int:
        return self.geometry.m

    @property
    def kappa_sq(self) -> Fraction:
        return self.geometry.kappa_sq

    @property
    def kappa(self) -> float:
        return self.geometry.kappa

    @property
    def c(self) -> float:
        return self.geometry.kappa * self.m

    def lambda_times_Z0(self) -> tuple[Fraction, ...]:
        return tuple(self.lam * x for x in self.Z0)


def einstein_defect(geometry: FiberGeometry) -> tuple[Fraction, ...]:
    """Z^Kos_K - m P in h-coordinates of t_K; equals lambda Z_0 for any solution."""
    fK = geometry.flagK
    return tuple(k - geometry.m * p for k, p in zip(fK.koszul_vector, geometry.P_h))


def _position(fK: FlagData, node: int) -> int:
    return fK.black.index(node)


def check_face_point(geometry: FiberGeometry, Z0: Sequence[Fraction]) -> None:
    """Raise Infeasible unless beta(Z_0) = 0 and every base black root is positive."""
    fK = geometry.flagK
    if geometry.beta is not None:
        v = Z0[_position(fK, geometry.beta)]
        if v != 0:
            raise Infeasible("face", f"beta(Z_0) = {v} is not zero")
    for node in geometry.spec.base.black_nodes:
        v = Z0[_position(fK, node)]
        if v <= 0:
            raise Infeasible(
                "chamber", f"black node {node + 1} pairs to {v} <= 0 with Z_0"
            )


def root_pairs(geometry: FiberGeometry, Z0: Sequence[Fraction]) -> tuple[RootPair, ...]:
    fK = geometry.flagK
    return tuple(
        RootPair(alpha, fK.pair(alpha, Z0), fK.pair(alpha, geometry.P_h)) for alpha in fK.R_m_pos
    )


def default_flat_face_point(geometry: FiberGeometry) -> tuple[Fraction, ...]:
    """Koszul vector of the base flag G/H viewed in t_K.

    It pairs to zero with beta and positively with every base black root,
    so it is a strict face point (zero when the base has no black nodes).
    """
    base_sigma = flag_data(geometry.spec.base).koszul
    return geometry.flagK.to_h(base_sigma)


def solve_algebraic(
    geometry: FiberGeometry,
    lam,
    z0: Optional[Sequence] = None,
) -> KEProblem:
    lam = Fraction(lam)
    fK = geometry.flagK
    defect = einstein_defect(geometry)
    if lam != 0:
        Z0 = tuple(d / lam for d in defect)
        source = "solved"
    else:
        if any(defect):
            raise Infeasible(
                "flat", "lambda = 0 needs Z^Kos = m P, defect " + str([str(d) for d in defect])
            )
        if z0 is None:
            Z0, source = default_flat_face_point(geometry), "base-koszul"
        else:
            if len(z0) != fK.dim_t:
                raise Infeasible("domain", f"Z_0 needs {fK.dim_t} coordinates, got {len(z0)}")
            Z0, source = tuple(Fraction(x) for x in z0), "user"
    check_face_point(geometry, Z0)
    return KEProblem(geometry, lam, Z0, source, root_pairs(geometry, Z0))


def koszul_restriction_sums(base: PaintedDiagram) -> tuple[int, ...]:
    """k_j = sum over R_m^+(H) of the beta_j coefficient; sigma_H = sum_j k_j bar(beta_j)."""
    fd = flag_data(base)
    return tuple(
        sum(fd.restriction(a)[j] for a in fd.R_m_pos) for j in range(fd.dim_t)
    )


@dataclass(frozen=True)
class FlatVerdict:
    satisfiable: bool
    witness: Optional[tuple[int, ...]]
    koszul_sums: tuple[int, ...]
    koszul_coeffs: tuple[Fraction, ...]  # coefficients of sigma_K on the base black weights
    beta_coeff: Optional[Fraction]  # coefficient of sigma_K on beta's weight
    attached: bool  # the string touches a black node
    literal_rule: bool  # divisibility of (n_1 [+1], n_2, ...) by m


def _adjacent_black(base: PaintedDiagram, string: Sequence[int]) -> list[int]:
    cm = cartan_matrix(base.root_system, base.base)
    return [j for j in base.black_nodes if any(cm[i][j] != 0 for i in string)]


def flat_divisibility(base: PaintedDiagram, spec: BundleSpec) -> FlatVerdict:
    """Decide whether some character makes the lambda = 0 condition hold.

    The condition Z^Kos_K = m P(Lambda) is equivalent to sigma_H = +-m Lambda
    (sign + for the left end), i.e. every k_j divisible by m with
    Lambda = +-k/m.  For m = 1 it always holds.  The literal coefficient
    rule on the Koszul form of G/K is reported alongside for comparison.
    """
    k = koszul_restriction_sums(base)
    m = spec.m
    sign = -1 if spec.end == "right" else 1
    ok = all(x % m == 0 for x in k)
    witness = tuple(sign * x // m for x in k) if ok else None
    if spec.string:
        fK = flag_data(painted_diagram_for(base, spec.string, spec.end))
        coeffs = tuple(fK.koszul_coeffs[_position(fK, j)] for j in base.black_nodes)
        beta_coeff = fK.koszul_coeffs[_position(fK, spec.painted_node)]
    else:
        fK = flag_data(base)
        coeffs, beta_coeff = fK.koszul_coeffs, None
    adj = _adjacent_black(base, spec.string) if spec.string else []
    attached = bool(adj)
    shifted = list(coeffs)
    if attached:
        shifted[base.black_nodes.index(adj[0])] += 1
    literal = all(Fraction(x) % m == 0 for x in shifted)
    return FlatVerdict(ok, witness, k, coeffs, beta_coeff, attached, literal)

"""Painted Dynkin diagrams and the combinatorics of the associated flag manifold.

A vector Z in the center t = iZ(k) is written in the basis h_1..h_k dual to
the black simple roots (beta_j(h_i) = delta_ij, alpha(h_i) = 0 on white
nodes), so its coordinates are simply x_j = beta_j(Z).  The Killing dual of
Z is the covector sum_j x_j eta_j, where eta_j is the Killing dual of h_j.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence, Union

from . import linalg
from .rootsys import (
    Covector,
    RootSystem,
    RootSystemError,
    build_root_system,
    cartan_matrix,
    fundamental_weights,
    inner,
    simple_base,
    simple_coefficients,
)


class DiagramError(ValueError):
    pass


class DomainError(ValueError):
    """A vector that was expected in t has a nonzero white-root pairing."""


TVector = Union[Covector, Sequence]


@lru_cache(maxsize=None)
def _check_base(R: RootSystem, base: tuple[Covector, ...]) -> None:
    if len(base) != R.rank:
        raise DiagramError(f"base has {len(base)} roots, rank is {R.rank}")
    if any(b not in set(R.roots) for b in base):
        raise DiagramError("base elements must be roots")
    if cartan_matrix(R, base) != cartan_matrix(R, simple_base(R)):
        raise DiagramError("base does not reproduce the family's Cartan matrix")


@dataclass(frozen=True)
class PaintedDiagram:
    """Simple base of a classical root system with a set of black nodes.

    ``black`` holds 0-based node indices in Bourbaki order; JSON uses 1-based.
    """

    root_system: RootSystem
    black: frozenset[int]
    base: tuple[Covector, ...] = field(default=None, repr=False)

    def __post_init__(self):
        R = self.root_system
        base = simple_base(R) if self.base is None else tuple(self.base)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "black", frozenset(int(i) for i in self.black))
        _check_base(R, base)
        if any(i < 0 or i >= R.rank for i in self.black):
            raise DiagramError(f"black nodes out of range 1..{R.rank}")

    @property
    def family(self) -> str:
        return self.root_system.family

    @property
    def rank(self) -> int:
        return self.root_system.rank

    @property
    def black_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.black))

    @property
    def white_nodes(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.rank) if i not in self.black)

    def with_black(self, black: Iterable[int]) -> "PaintedDiagram":
        return PaintedDiagram(self.root_system, frozenset(black), self.base)

    def label(self) -> str:
        marks = "".join("*" if i in self.black else "o" for i in range(self.rank))
        return f"{self.family}{self.rank}[{marks}]"

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "black": [i + 1 for i in self.black_nodes],
        }

    @classmethod
    def from_json(cls, data: Union[str, Mapping]) -> "PaintedDiagram":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            family, rank, black = data["family"], data["rank"], data.get("black", [])
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"malformed diagram JSON: {data!r}") from exc
        if not isinstance(rank, int) or isinstance(rank, bool):
            raise DiagramError(f"rank must be an integer, got {rank!r}")
        if any(not isinstance(i, int) or isinstance(i, bool) for i in black):
            raise DiagramError("black node indices must be integers")
        if len(set(black)) != len(black):
            raise DiagramError("duplicate black node index")
        try:
            R = build_root_system(family, rank)
        except RootSystemError as exc:
            raise DiagramError(str(exc)) from exc
        return cls(R, frozenset(i - 1 for i in black))


def painted_diagram(family: str, rank: int, black: Iterable[int] = ()) -> PaintedDiagram:
    """Convenience constructor; ``black`` uses 1-based node numbers."""
    return PaintedDiagram(build_root_system(family, rank), frozenset(i - 1 for i in black))


def all_diagrams(max_rank: int, families: str = "ABCD") -> list[PaintedDiagram]:
    """Every classical painted diagram with rank <= max_rank (all black subsets)."""
    out = []
    for fam in families:
        for r in range(1, max_rank + 1):
            if fam == "D" and r < 4:
                continue
            R = build_root_system(fam, r)
            for mask in range(2**r):
                out.append(PaintedDiagram(R, frozenset(i for i in range(r) if mask >> i & 1)))
    return out


@dataclass(frozen=True)
class FlagData:
    diagram: PaintedDiagram
    # simple-root coefficients of every root, keyed by the root
    coefficients: Mapping[Covector, tuple[int, ...]] = field(repr=False)
    R_k: tuple[Covector, ...] = field(repr=False)
    R_m: tuple[Covector, ...] = field(repr=False)
    R_m_pos: tuple[Covector, ...] = field(repr=False)
    h_basis: tuple[Covector, ...]
    t_roots: Mapping[tuple[int, ...], tuple[Covector, ...]] = field(repr=False)
    koszul: Covector
    koszul_vector: tuple[Fraction, ...]
    koszul_coeffs: tuple[Fraction, ...]
    fund_weights: tuple[Covector, ...] = field(repr=False)

    @property
    def root_system(self) -> RootSystem:
        return self.diagram.root_system

    @property
    def black(self) -> tuple[int, ...]:
        return self.diagram.black_nodes

    @property
    def dim_t(self) -> int:
        return len(self.black)

    def black_root(self, j: int) -> Covector:
        """Simple root of the j-th black node (j indexes ``black``)."""
        return self.diagram.base[self.black[j]]

    def restriction(self, alpha: Covector) -> tuple[int, ...]:
        """kappa(alpha) in the coordinates alpha(h_j)."""
        c = self.coefficients[alpha]
        return tuple(c[i] for i in self.black)

    def pair(self, alpha: Covector, Z: TVector) -> Fraction:
        """alpha(Z) for a root alpha and Z in t."""
        x = self.to_h(Z)
        return sum((Fraction(k) * xj for k, xj in zip(self.restriction(alpha), x)), Fraction(0))

    def to_h(self, Z: TVector) -> tuple[Fraction, ...]:
        """h-basis coordinates of Z (given as coordinates or as a Killing dual)."""
        if isinstance(Z, Covector):
            R = self.root_system
            for i in self.diagram.white_nodes:
                if inner(R, self.diagram.base[i], Z) != 0:
                    raise DomainError(f"vector not in t: white node {i + 1} pairs nonzero")
            return tuple(inner(R, self.diagram.base[i], Z) for i in self.black)
        x = tuple(Fraction(v) for v in Z)
        if len(x) != self.dim_t:
            raise DomainError(f"expected {self.dim_t} h-coordinates, got {len(x)}")
        return x

    def to_covector(self, Z: TVector) -> Covector:
        """Killing dual B(Z, .) of a vector in t."""
        if isinstance(Z, Covector):
            self.to_h(Z)
            return Z.normalized()
        out = self.root_system.zero()
        for xj, eta in zip(self.to_h(Z), self.h_basis):
            out = out + xj * eta
        return out.normalized()

    @cached_property
    def positive_roots(self) -> tuple[Covector, ...]:
        return tuple(a for a, c in self.coefficients.items() if all(x >= 0 for x in c))


def _solve_h_basis(diagram: PaintedDiagram) -> tuple[Covector, ...]:
    """Killing duals eta_j of h_j: <b_k, eta_j> = delta_kj, <a_i, eta_j> = 0."""
    R = diagram.root_system
    base = diagram.base
    black = diagram.black_nodes
    gram = [[inner(R, a, b) for b in base] for a in base]
    out = []
    for j in black:
        rhs = [Fraction(int(i == j)) for i in range(len(base))]
        coeffs = linalg.solve(gram, rhs)
        eta = R.zero()
        for c, b in zip(coeffs, base):
            eta = eta + c * b
        out.append(eta.normalized())
    return tuple(out)


def _koszul_vector_by_solve(
    R: RootSystem, sigma: Covector, h_basis: Sequence[Covector]
) -> tuple[Fraction, ...]:
    """Solve sigma = sum_j x_j eta_j in ambient coordinates."""
    if not h_basis:
        if not sigma.is_zero():
            raise DomainError("nonzero Koszul form with empty center")
        return ()
    cols = [eta.projected() for eta in h_basis]
    rows = [[c[i] for c in cols] for i in range(R.ambient_dim)]
    return tuple(linalg.solve(rows, sigma.projected()))


@lru_cache(maxsize=None)
def flag_data(d: PaintedDiagram) -> FlagData:
    R = d.root_system
    coefficients = {}
    for a in R.roots:
        c = simple_coefficients(R, d.base, a)
        if any(x.denominator != 1 for x in c):
            raise DiagramError("base does not express roots integrally")
        coefficients[a] = tuple(int(x) for x in c)
    black = d.black_nodes
    R_k = tuple(a for a in R.roots if all(coefficients[a][i] == 0 for i in black))
    R_m = tuple(a for a in R.roots if a not in set(R_k))
    R_m_pos = tuple(a for a in R_m if all(x >= 0 for x in coefficients[a]))
    sigma = R.zero()
    for a in R_m_pos:
        sigma = sigma + a
    sigma = sigma.normalized()
    h_basis = _solve_h_basis(d)
    classes: dict[tuple[int, ...], list[Covector]] = {}
    for a in R_m:
        classes.setdefault(tuple(coefficients[a][i] for i in black), []).append(a)
    t_roots = {xi: tuple(v) for xi, v in sorted(classes.items(), reverse=True)}
    fws = tuple(fundamental_weights(R, d.base, black))
    kcoeffs = tuple(2 * inner(R, sigma, d.base[i]) / inner(R, d.base[i], d.base[i]) for i in black)
    return FlagData(
        diagram=d,
        coefficients=coefficients,
        R_k=R_k,
        R_m=R_m,
        R_m_pos=R_m_pos,
        h_basis=h_basis,
        t_roots=t_roots,
        koszul=sigma,
        koszul_vector=_koszul_vector_by_solve(R, sigma, h_basis),
        koszul_coeffs=kcoeffs,
        fund_weights=fws,
    )


def koszul_vector_bruteforce(fd: FlagData) -> tuple[Fraction, ...]:
    """beta_j(Z^Kos) = sum over R_m^+ of <beta_j, alpha>, without any solve."""
    R = fd.root_system
    return tuple(
        sum((inner(R, fd.black_root(j), a) for a in fd.R_m_pos), Fraction(0))
        for j in range(fd.dim_t)
    )


def chamber_contains(d: PaintedDiagram, Z: TVector, closed: bool = False) -> bool:
    """Strict T-Weyl chamber membership beta_j(Z) > 0 (>= 0 when ``closed``)."""
    x = flag_data(d).to_h(Z)
    if closed:
        return all(v >= 0 for v in x)
    return all(v > 0 for v in x)


def omega_coefficients(d: PaintedDiagram, Z: TVector) -> dict[Covector, Fraction]:
    """alpha -> 2 alpha(Z) / <alpha, alpha> over R_m^+."""
    fd = flag_data(d)
    x = fd.to_h(Z)
    R = d.root_system
    return {a: 2 * fd.pair(a, x) / inner(R, a, a) for a in fd.R_m_pos}


def is_kaehler(d: PaintedDiagram, Z: TVector) -> bool:
    return all(v > 0 for v in omega_coefficients(d, Z).values())


def fundamental_weight_coordinates(d: PaintedDiagram, Z: TVector) -> tuple[Fraction, ...]:
    """Coordinates of B(Z, .) with respect to the black fundamental weights."""
    fd = flag_data(d)
    x = fd.to_h(Z)
    R = d.root_system
    return tuple(2 * xj / inner(R, fd.black_root(j), fd.black_root(j)) for j, xj in enumerate(x))


def integrality_check(d: PaintedDiagram, Z: TVector) -> bool:
    return all(c.denominator == 1 for c in fundamental_weight_coordinates(d, Z))


def vector_from_weight_coordinates(d: PaintedDiagram, coeffs: Sequence) -> tuple[Fraction, ...]:
    """h-coordinates of the Z whose B(Z, .) equals sum_j c_j pi_j."""
    fd = flag_data(d)
    R = d.root_system
    return tuple(
        Fraction(c) * inner(R, fd.black_root(j), fd.black_root(j)) / 2 for j, c in enumerate(coeffs)
    )


def analyze_report(d: PaintedDiagram) -> dict:
    """JSON-ready summary of the flag manifold of ``d``."""
    fd = flag_data(d)
    R = d.root_system
    return {
        "diagram": d.to_json(),
        "label": d.label(),
        "n_roots": len(R.roots),
        "n_R_k": len(fd.R_k),
        "n_R_m_pos": len(fd.R_m_pos),
        "complex_dimension": len(fd.R_m_pos),
        "t_root_count": len(fd.t_roots),
        "positive_t_roots": [list(xi) for xi in fd.t_roots if all(v >= 0 for v in xi)],
        "koszul_form": fd.koszul.to_strings(),
        "koszul_vector_h": [str(x) for x in fd.koszul_vector],
        "beta_pairings": {
            str(i + 1): str(inner(R, d.base[i], fd.koszul)) for i in d.black_nodes
        },
        "koszul_coeffs": [str(x) for x in fd.koszul_coeffs],
        "chamber_basis": [eta.to_strings() for eta in fd.h_basis],
        "fundamental_weights": [w.to_strings() for w in fd.fund_weights],
    }

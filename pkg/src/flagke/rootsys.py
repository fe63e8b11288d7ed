"""Classical root systems in epsilon coordinates with the Killing-normalized
inner product.

Roots and weights are covectors on the Cartan subalgebra written in the
standard epsilon basis.  The dual of the Killing form restricted to the root
span is a rational multiple ``s`` of the euclidean dot product; for type A
covectors are first projected to the traceless hyperplane.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import linalg

FAMILIES = ("A", "B", "C", "D")


class RootSystemError(ValueError):
    """Invalid family/rank combination or malformed input."""


def _fractions(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True, eq=False)
class Covector:
    """Rational linear form in epsilon coordinates.

    With ``modulo_trace`` set (type A) two covectors that differ by a
    multiple of the all-ones vector are the same functional.
    """

    coords: tuple[Fraction, ...]
    modulo_trace: bool = False

    def __post_init__(self):
        coords = _fractions(self.coords)
        object.__setattr__(self, "coords", coords)
        if self.modulo_trace and coords:
            mean = sum(coords, Fraction(0)) / len(coords)
            proj = tuple(x - mean for x in coords) if mean else coords
        else:
            proj = coords
        object.__setattr__(self, "_proj", proj)
        object.__setattr__(self, "_hash", hash(proj))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def projected(self) -> tuple[Fraction, ...]:
        return self._proj

    def _check(self, other: "Covector") -> None:
        if self.dim != other.dim:
            raise RootSystemError(f"dimension mismatch {self.dim} != {other.dim}")

    def dot(self, other: "Covector") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self.projected(), other.projected())), Fraction(0))

    def __add__(self, other: "Covector") -> "Covector":
        self._check(other)
        return Covector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.modulo_trace)

    def __sub__(self, other: "Covector") -> "Covector":
        self._check(other)
        return Covector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.modulo_trace)

    def __neg__(self) -> "Covector":
        return Covector(tuple(-a for a in self.coords), self.modulo_trace)

    def __mul__(self, k) -> "Covector":
        k = Fraction(k)
        return Covector(tuple(k * a for a in self.coords), self.modulo_trace)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "Covector":
        return self * (1 / Fraction(k))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Covector):
            return NotImplemented
        return self.dim == other.dim and self.projected() == other.projected()

    def __hash__(self) -> int:
        return self._hash

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.projected())

    def normalized(self) -> "Covector":
        """Same functional with the traceless representative stored."""
        return Covector(self.projected(), self.modulo_trace)

    def __repr__(self) -> str:
        body = ", ".join(str(x) for x in self.projected())
        return f"Covector({body})"

    def to_strings(self) -> list[str]:
        return [str(x) for x in self.projected()]


def zero_covector(dim: int, modulo_trace: bool = False) -> Covector:
    return Covector((0,) * dim, modulo_trace)


def killing_scale_candidate(family: str, rank: int) -> Fraction:
    """Scale s with <x, y> = s * (x . y) for the dual Killing form."""
    if family == "A":
        return Fraction(1, 2 * (rank + 1))
    if family == "B":
        return Fraction(1, 2 * (2 * rank - 1))
    if family == "C":
        return Fraction(1, 4 * (rank + 1))
    if family == "D":
        return Fraction(1, 4 * (rank - 1))
    raise RootSystemError(f"unknown family {family!r}")


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Built only through ``build_root_system``; identified by family and rank."""

    family: str
    rank: int
    ambient_dim: int
    roots: tuple[Covector, ...] = field(repr=False)
    killing_scale_candidate: Fraction

    @property
    def modulo_trace(self) -> bool:
        return self.family == "A"

    def covector(self, coords: Sequence) -> Covector:
        if len(coords) != self.ambient_dim:
            raise RootSystemError(
                f"expected {self.ambient_dim} coordinates, got {len(coords)}"
            )
        return Covector(tuple(coords), self.modulo_trace)

    def zero(self) -> Covector:
        return zero_covector(self.ambient_dim, self.modulo_trace)

    def unit(self, i: int) -> Covector:
        c = [0] * self.ambient_dim
        c[i] = 1
        return self.covector(c)

    def inner(self, x: Covector, y: Covector) -> Fraction:
        return inner(self, x, y)

    def norm_sq(self, x: Covector) -> Fraction:
        return inner(self, x, x)

    def __len__(self) -> int:
        return len(self.roots)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootSystem):
            return NotImplemented
        return (self.family, self.rank) == (other.family, other.rank)

    def __hash__(self) -> int:
        return hash((self.family, self.rank))


def _validate(family: str, rank: int) -> None:
    if family not in FAMILIES:
        raise RootSystemError(f"family must be one of {FAMILIES}, got {family!r}")
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise RootSystemError(f"rank must be a positive integer, got {rank!r}")
    if family == "D" and rank < 4:
        # D2 = A1 x A1 and D3 = A3; use the A-family isomorphs instead
        raise RootSystemError(f"D{rank} is not accepted; use the type A isomorph")


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int) -> RootSystem:
    _validate(family, rank)
    n = rank + 1 if family == "A" else rank
    vecs: set[tuple[int, ...]] = set()

    def e(*pairs):
        v = [0] * n
        for i, s in pairs:
            v[i] += s
        return tuple(v)

    if family == "A":
        for i, j in itertools.permutations(range(n), 2):
            vecs.add(e((i, 1), (j, -1)))
    else:
        for i, j in itertools.combinations(range(n), 2):
            for si, sj in itertools.product((1, -1), repeat=2):
                vecs.add(e((i, si), (j, sj)))
        for i in range(n):
            for s in (1, -1):
                if family == "B":
                    vecs.add(e((i, s)))
                elif family == "C":
                    vecs.add(e((i, 2 * s)))
    roots = tuple(Covector(v, family == "A") for v in sorted(vecs, reverse=True))
    return RootSystem(family, rank, n, roots, killing_scale_candidate(family, rank))


def inner(R: RootSystem, x: Covector, y: Covector) -> Fraction:
    """Killing-dual inner product <x, y> = s * (x . y)."""
    if x.dim != R.ambient_dim or y.dim != R.ambient_dim:
        raise RootSystemError(
            f"covectors must have {R.ambient_dim} coordinates for {R.family}{R.rank}"
        )
    if R.modulo_trace and not (x.modulo_trace and y.modulo_trace):
        x = Covector(x.coords, True)
        y = Covector(y.coords, True)
    return R.killing_scale_candidate * sum(
        (a * b for a, b in zip(x.projected(), y.projected()) if a and b), Fraction(0)
    )


def simple_base(R: RootSystem) -> tuple[Covector, ...]:
    """Bourbaki-ordered simple roots."""
    n = R.ambient_dim
    base = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        base.append(v)
    if R.family == "B":
        v = [0] * n
        v[-1] = 1
        base.append(v)
    elif R.family == "C":
        v = [0] * n
        v[-1] = 2
        base.append(v)
    elif R.family == "D":
        v = [0] * n
        v[-2], v[-1] = 1, 1
        base.append(v)
    return tuple(R.covector(b) for b in base)


def cartan_matrix(R: RootSystem, base: Sequence[Covector]) -> list[list[Fraction]]:
    """Entries 2<a_i, a_j>/<a_j, a_j>."""
    norms = [inner(R, b, b) for b in base]
    return [[2 * inner(R, a, b) / nb for b, nb in zip(base, norms)] for a in base]


def simple_coefficients(
    R: RootSystem, base: Sequence[Covector], x: Covector
) -> tuple[Fraction, ...]:
    """Coordinates of x in the basis ``base`` (x must lie in its span)."""
    cols = [b.projected() for b in base]
    rows = [[c[i] for c in cols] for i in range(R.ambient_dim)]
    return tuple(linalg.solve(rows, x.projected()))


def fundamental_weights(
    R: RootSystem, base: Sequence[Covector], black: Iterable[int]
) -> list[Covector]:
    """Fundamental weights of the black simple roots.

    pi_i satisfies 2<pi_i, b_j>/|b_j|^2 = delta_ij on black nodes and
    <pi_i, a_j> = 0 on white nodes; pi_i is taken in the span of the base.
    """
    black = sorted(set(black))
    if not black:
        return []
    if any(i < 0 or i >= len(base) for i in black):
        raise RootSystemError(f"black indices out of range: {black}")
    norms = [inner(R, b, b) for b in base]
    gram = [[inner(R, a, b) for b in base] for a in base]
    rows = []
    for j in range(len(base)):
        w = 2 / norms[j] if j in black else Fraction(1)
        rows.append([w * gram[k][j] for k in range(len(base))])
    out = []
    for i in black:
        rhs = [Fraction(int(j == i)) for j in range(len(base))]
        try:
            coeffs = linalg.solve(rows, rhs)
        except ArithmeticError as exc:  # pragma: no cover - valid bases are regular
            raise RuntimeError("singular fundamental-weight system") from exc
        pi = R.zero()
        for c, b in zip(coeffs, base):
            pi = pi + c * b
        out.append(pi.normalized())
    return out


def gram_determinant(R: RootSystem, base: Sequence[Covector]) -> Fraction:
    return linalg.determinant([[inner(R, a, b) for b in base] for a in base])


# --- Killing form oracle -----------------------------------------------------


def _bilinear_form(family: str, rank: int) -> tuple[int, np.ndarray | None]:
    if family == "A":
        return rank + 1, None
    size = {"B": 2 * rank + 1, "C": 2 * rank, "D": 2 * rank}[family]
    if family == "C":
        j = np.zeros((size, size))
        j[:rank, rank:] = np.fliplr(np.eye(rank))
        j[rank:, :rank] = -np.fliplr(np.eye(rank))
    else:
        j = np.fliplr(np.eye(size))
    return size, j


def _matrix_algebra_basis(family: str, rank: int) -> np.ndarray:
    """Basis of the complex matrix Lie algebra, shape (dim, N, N)."""
    size, j = _bilinear_form(family, rank)
    mats = []
    for a, b in itertools.product(range(size), repeat=2):
        e = np.zeros((size, size))
        e[a, b] = 1.0
        if j is None:
            x = e - (np.trace(e) / size) * np.eye(size)
        else:
            # projector onto {X : X^T J + J X = 0}
            x = 0.5 * (e - np.linalg.solve(j, e.T @ j))
        mats.append(x.ravel())
    u, sv, vh = np.linalg.svd(np.array(mats), full_matrices=False)
    dim = int(np.sum(sv > 1e-10 * sv[0]))
    return vh[:dim].reshape(dim, size, size)


def _cartan_element(family: str, rank: int, x: Sequence[float]) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if family == "A":
        return np.diag(x - x.mean())
    if family == "B":
        return np.diag(np.concatenate([x, [0.0], -x[::-1]]))
    return np.diag(np.concatenate([x, -x[::-1]]))


def _killing_forms(family: str, rank: int, elems: Sequence[np.ndarray]) -> np.ndarray:
    basis = _matrix_algebra_basis(family, rank)
    dim = basis.shape[0]
    flat = basis.reshape(dim, -1)
    pinv = np.linalg.pinv(flat)

    def ad(x):
        brackets = np.array([(x @ b - b @ x).ravel() for b in basis])
        return (brackets @ pinv).T

    ads = [ad(x) for x in elems]
    return np.array([[np.trace(p @ q) for q in ads] for p in ads])


def _killing_gram(family: str, rank: int) -> tuple[np.ndarray, np.ndarray]:
    if family not in FAMILIES:
        raise RootSystemError(f"unknown family {family!r}")
    if rank < 1 or rank > 8:
        raise RootSystemError("killing_scale_oracle supports ranks 1..8")
    n = rank + 1 if family == "A" else rank
    if family == "A":
        vecs = [np.eye(n)[i] - np.eye(n)[i + 1] for i in range(n - 1)]
    else:
        vecs = [np.eye(n)[i] for i in range(n)]
    elems = [_cartan_element(family, rank, v) for v in vecs]
    euclid = np.array([[np.dot(a, b) for b in vecs] for a in vecs])
    return _killing_forms(family, rank, elems), euclid


def killing_scale_oracle(family: str, rank: int) -> float:
    """Fit s from tr(ad h ad h') on the Cartan subalgebra of the matrix algebra.

    Independent of the root tables: the adjoint representation is built from
    commutators in an explicit matrix realization (sl_n, so_{2n+1}, sp_{2n},
    so_{2n}).  Accepts D2 and D3 so that the scale table can be certified on
    every rank.
    """
    kill, euclid = _killing_gram(family, rank)
    # B(h, h') = (1/s) * euclid(h, h')
    return float(np.sum(euclid * euclid) / np.sum(kill * euclid))


def killing_fit_residual(family: str, rank: int) -> float:
    """Max deviation of the Killing Gram matrix from a scalar times euclid."""
    kill, euclid = _killing_gram(family, rank)
    c = np.sum(kill * euclid) / np.sum(euclid * euclid)
    return float(np.max(np.abs(kill - c * euclid)))

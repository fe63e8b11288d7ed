"""Dense univariate polynomials with exact rational coefficients.

A polynomial is a tuple of Fractions, lowest degree first.  Trailing zeros
are stripped so that equal polynomials compare equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Poly = tuple[Fraction, ...]


def poly(coeffs: Iterable) -> Poly:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p: Poly) -> int:
    return len(p) - 1 if p else -1


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def scale(p: Poly, k) -> Poly:
    k = Fraction(k)
    return poly(k * c for c in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly(out)


def product(factors: Iterable[Poly]) -> Poly:
    out: Poly = (Fraction(1),)
    for f in factors:
        out = mul(out, f)
    return out


def derivative(p: Poly) -> Poly:
    return poly(i * c for i, c in enumerate(p) if i)


def antiderivative(p: Poly) -> Poly:
    """The antiderivative vanishing at 0."""
    return poly([Fraction(0)] + [c / (i + 1) for i, c in enumerate(p)])


def evaluate(p: Poly, x):
    """Horner evaluation; exact for Fractions, vectorized for numpy arrays."""
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + (c if isinstance(x, Fraction) else float(c))
    return acc


def low_order(p: Poly) -> int:
    """Multiplicity of the root x = 0 (number of leading zero coefficients)."""
    for i, c in enumerate(p):
        if c:
            return i
    raise ValueError("zero polynomial")


def shift_down(p: Poly, k: int) -> Poly:
    """p / x^k, which must be exact."""
    if any(p[:k]):
        raise ValueError(f"polynomial not divisible by x^{k}")
    return tuple(p[k:])


def to_float(p: Poly) -> np.ndarray:
    return np.array([float(c) for c in p], dtype=float)


def float_deflate(p: Sequence[float], r: float) -> np.ndarray:
    """Coefficients of p(x) / (r - x) for a float root r of p, lowest degree first."""
    # p(x) = (r - x) q(x): synthetic division by (x - r) then negate
    hi = list(reversed([float(c) for c in p]))
    q = [hi[0]]
    for c in hi[1:-1]:
        q.append(c + r * q[-1])
    return -np.array(list(reversed(q)), dtype=float)


def real_roots(p: Poly) -> np.ndarray:
    """Real roots of p as floats (numpy companion matrix)."""
    c = to_float(p)
    if len(c) <= 1:
        return np.array([])
    r = np.roots(c[::-1])
    return np.sort(r[np.abs(r.imag) <= 1e-9 * np.maximum(1.0, np.abs(r.real))].real)


def complex_roots(p: Poly) -> np.ndarray:
    c = to_float(p)
    if len(c) <= 1:
        return np.array([], dtype=complex)
    return np.roots(c[::-1])

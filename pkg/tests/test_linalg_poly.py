from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagke import linalg, poly

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def test_solve_known_system():
    x = linalg.solve([[2, 1], [1, 3]], [3, 5])
    assert x == [Fraction(4, 5), Fraction(7, 5)]


def test_singular_and_inconsistent():
    with pytest.raises(ArithmeticError):
        linalg.solve([[1, 2], [2, 4]], [1, 3])


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3))
def test_solve_roundtrip(a, x):
    if linalg.determinant(a) == 0:
        return
    b = [sum(r * v for r, v in zip(row, x)) for row in a]
    assert linalg.solve(a, b) == x


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_numpy(a):
    ref = np.linalg.det(np.array(a, dtype=float))
    assert abs(float(linalg.determinant(a)) - ref) <= 1e-9 * max(1.0, abs(ref))


@given(st.lists(small, min_size=1, max_size=5), st.lists(small, min_size=1, max_size=5), small)
def test_poly_ring_identities(p, q, x):
    p, q = poly.poly(p), poly.poly(q)
    assert poly.evaluate(poly.mul(p, q), x) == poly.evaluate(p, x) * poly.evaluate(q, x)
    assert poly.evaluate(poly.add(p, q), x) == poly.evaluate(p, x) + poly.evaluate(q, x)
    assert poly.derivative(poly.antiderivative(p)) == p
    assert poly.evaluate(poly.antiderivative(p), 0) == 0


def test_shift_down_and_low_order():
    p = poly.poly([0, 0, 3, 1])
    assert poly.low_order(p) == 2
    assert poly.shift_down(p, 2) == poly.poly([3, 1])


def test_float_deflate_divides_out_root():
    # (2 - x)(1 + x) = 2 + x - x^2
    q = poly.float_deflate([2.0, 1.0, -1.0], 2.0)
    assert np.allclose(q, [1.0, 1.0])

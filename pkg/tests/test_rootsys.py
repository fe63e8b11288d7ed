from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagke.oracles import reflection_closure
from flagke.rootsys import (
    RootSystemError,
    build_root_system,
    cartan_matrix,
    fundamental_weights,
    gram_determinant,
    inner,
    killing_fit_residual,
    killing_scale_candidate,
    killing_scale_oracle,
    simple_base,
    simple_coefficients,
)

CASES = [("A", r) for r in range(1, 6)] + [("B", r) for r in range(2, 6)] + [
    ("C", r) for r in range(2, 6)
] + [("D", r) for r in range(4, 7)]


def expected_count(family, rank):
    n = rank + 1 if family == "A" else rank
    return {"A": n * (n - 1), "B": 2 * n * n, "C": 2 * n * n, "D": 2 * n * (n - 1)}[family]


@pytest.mark.parametrize("family,rank", CASES)
def test_root_counts_and_negation(family, rank):
    R = build_root_system(family, rank)
    assert len(R.roots) == expected_count(family, rank)
    roots = set(R.roots)
    assert all(-a in roots for a in roots)


@pytest.mark.parametrize("family,rank", [("A", 2), ("B", 3), ("C", 3), ("D", 4)])
def test_reflection_closure_reproduces_roots(family, rank):
    R = build_root_system(family, rank)
    assert reflection_closure(R, simple_base(R)) == {a.normalized() for a in R.roots}


def test_d4_has_24_roots():
    assert len(build_root_system("D", 4).roots) == 24


@pytest.mark.parametrize("family,rank", CASES)
def test_roots_are_integral_in_simple_base(family, rank):
    R = build_root_system(family, rank)
    base = simple_base(R)
    for a in R.roots:
        c = simple_coefficients(R, base, a)
        assert all(x.denominator == 1 for x in c)
        assert all(x >= 0 for x in c) or all(x <= 0 for x in c)


@pytest.mark.parametrize("family,rank", [("A", 2), ("B", 2), ("C", 3)])
def test_sum_closure_against_bruteforce(family, rank):
    R = build_root_system(family, rank)
    roots = set(a.normalized() for a in R.roots)
    closed = reflection_closure(R, simple_base(R))
    for a in roots:
        for b in roots:
            s = (a + b).normalized()
            assert (s in roots) == (s in closed)


def test_type_a_norm_is_one_over_n():
    for n in range(2, 7):
        R = build_root_system("A", n - 1)
        assert all(inner(R, a, a) == Fraction(1, n) for a in R.roots)


def test_b2_length_ratio():
    R = build_root_system("B", 2)
    long_, short = R.covector([1, -1]), R.covector([0, 1])
    assert inner(R, long_, long_) == 2 * inner(R, short, short)


def test_zero_pairs_to_zero():
    R = build_root_system("C", 3)
    assert all(inner(R, R.zero(), a) == 0 for a in R.roots)


@pytest.mark.parametrize("family,rank", [("D", 2), ("D", 3), ("E", 6), ("A", 0), ("C", 0)])
def test_rejected_families(family, rank):
    with pytest.raises(RootSystemError):
        build_root_system(family, rank)


@pytest.mark.parametrize("family,rank", CASES)
def test_cartan_matrix_shape(family, rank):
    R = build_root_system(family, rank)
    cm = cartan_matrix(R, simple_base(R))
    assert all(cm[i][i] == 2 for i in range(rank))
    for i in range(rank):
        for j in range(rank):
            if i != j:
                assert cm[i][j] in (0, -1, -2, -3)
                assert (cm[i][j] == 0) == (cm[j][i] == 0)
    assert gram_determinant(R, simple_base(R)) > 0


def test_fundamental_weights_all_black_a2():
    R = build_root_system("A", 2)
    base = simple_base(R)
    pis = fundamental_weights(R, base, [0, 1])
    for i, pi in enumerate(pis):
        for j, b in enumerate(base):
            assert 2 * inner(R, pi, b) / inner(R, b, b) == int(i == j)


def test_fundamental_weight_cpn():
    for n in range(2, 7):
        R = build_root_system("A", n - 1)
        (pi,) = fundamental_weights(R, simple_base(R), [0])
        target = R.covector([1] + [0] * (n - 1)).normalized()
        ratio = {p / q for p, q in zip(pi.projected(), target.projected()) if q}
        assert len(ratio) == 1 and next(iter(ratio)) > 0


def test_fundamental_weights_empty():
    R = build_root_system("B", 3)
    assert fundamental_weights(R, simple_base(R), []) == []


@given(st.sampled_from(CASES), st.data())
def test_inner_positive_definite_on_root_span(case, data):
    R = build_root_system(*case)
    base = simple_base(R)
    coeffs = data.draw(st.lists(st.integers(-4, 4), min_size=len(base), max_size=len(base)))
    x = R.zero()
    for c, b in zip(coeffs, base):
        x = x + c * b
    v = inner(R, x, x)
    assert v >= 0 and (v == 0) == (not any(coeffs))


@given(st.sampled_from(CASES), st.data())
def test_inner_symmetric_bilinear(case, data):
    R = build_root_system(*case)
    a, b, c = (data.draw(st.sampled_from(R.roots)) for _ in range(3))
    k = data.draw(st.integers(-3, 3))
    assert inner(R, a, b) == inner(R, b, a)
    assert inner(R, a + k * b, c) == inner(R, a, c) + k * inner(R, b, c)


@given(st.sampled_from(CASES), st.data())
def test_weyl_reflections_preserve_roots(case, data):
    R = build_root_system(*case)
    roots = {a.normalized() for a in R.roots}
    a = data.draw(st.sampled_from(R.roots))
    x = data.draw(st.sampled_from(R.roots))
    y = (x - (2 * inner(R, x, a) / inner(R, a, a)) * a).normalized()
    assert y in roots


@pytest.mark.parametrize("family", "ABCD")
@pytest.mark.parametrize("rank", [2, 3, 4, 5])
def test_killing_scale_oracle(family, rank):
    s = killing_scale_oracle(family, rank)
    assert abs(s - float(killing_scale_candidate(family, rank))) < 1e-9
    assert killing_fit_residual(family, rank) < 1e-9


def test_killing_scale_named_values():
    assert abs(killing_scale_oracle("A", 2) - 1 / 6) < 1e-9
    assert killing_scale_candidate("C", 3) == Fraction(1, 16)

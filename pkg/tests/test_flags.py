from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagke.flags import (
    DiagramError,
    DomainError,
    PaintedDiagram,
    all_diagrams,
    analyze_report,
    chamber_contains,
    flag_data,
    fundamental_weight_coordinates,
    integrality_check,
    is_kaehler,
    koszul_vector_bruteforce,
    omega_coefficients,
    painted_diagram,
    vector_from_weight_coordinates,
)
from flagke.oracles import koszul_pairings_bruteforce
from flagke.rootsys import inner

DIAGRAMS = all_diagrams(4)
WITH_BLACK = [d for d in DIAGRAMS if d.black]


def test_diagram_count():
    # every black subset of A1..A4, B1..B4, C1..C4, D4
    assert len(DIAGRAMS) == (2 + 4 + 8 + 16) + 2 * (2 + 4 + 8 + 16) + 16


@pytest.mark.parametrize("d", DIAGRAMS, ids=lambda d: d.label())
def test_partition_and_koszul(d):
    fd = flag_data(d)
    R = d.root_system
    assert set(fd.R_k) | set(fd.R_m) == set(R.roots)
    assert not set(fd.R_k) & set(fd.R_m)
    assert len(fd.R_m_pos) * 2 == len(fd.R_m)
    assert fd.koszul_vector == koszul_vector_bruteforce(fd) == koszul_pairings_bruteforce(d)
    assert all(x > 0 for x in fd.koszul_vector)
    # sigma = sum_j n_j pi_j exactly
    total = R.zero()
    for n, pi in zip(fd.koszul_coeffs, fd.fund_weights):
        total = total + n * pi
    assert total.normalized() == fd.koszul


@pytest.mark.parametrize("d", WITH_BLACK, ids=lambda d: d.label())
def test_h_basis_duality(d):
    fd = flag_data(d)
    R = d.root_system
    for j, eta in enumerate(fd.h_basis):
        for i, b in enumerate(d.base):
            want = int(i == fd.black[j]) if i in fd.black else 0
            assert inner(R, b, eta) == want


@pytest.mark.parametrize("d", WITH_BLACK, ids=lambda d: d.label())
def test_t_roots_partition_r_m(d):
    fd = flag_data(d)
    members = [a for v in fd.t_roots.values() for a in v]
    assert sorted(map(repr, members)) == sorted(map(repr, fd.R_m))
    for xi, roots in fd.t_roots.items():
        assert all(fd.restriction(a) == xi for a in roots)
        assert tuple(-x for x in xi) in fd.t_roots


@pytest.mark.parametrize("n", range(2, 8))
def test_cpn_flag(n):
    d = painted_diagram("A", n - 1, [1])
    fd = flag_data(d)
    R = d.root_system
    assert len(fd.R_m_pos) == n - 1
    assert {tuple(a.projected()) for a in fd.R_m_pos} == {
        tuple(R.covector([1] + [0] * (j - 1) + [-1] + [0] * (n - j - 1)).projected()) for j in range(1, n)
    }
    assert inner(R, d.base[0], fd.koszul) == Fraction(1, 2)
    assert set(omega_coefficients(d, fd.koszul_vector).values()) == {n}


def test_full_flag_a2():
    d = painted_diagram("A", 2, [1, 2])
    fd = flag_data(d)
    assert fd.koszul_coeffs == (2, 2)
    assert integrality_check(d, fd.koszul_vector)


def test_integrality():
    d = painted_diagram("A", 2, [1, 2])
    Z = vector_from_weight_coordinates(d, [1, 3])
    assert fundamental_weight_coordinates(d, Z) == (1, 3)
    assert integrality_check(d, Z)
    assert not integrality_check(d, tuple(x / 2 for x in Z))


@pytest.mark.parametrize("d", WITH_BLACK[:40], ids=lambda d: d.label())
def test_chamber(d):
    fd = flag_data(d)
    K = fd.koszul_vector
    assert chamber_contains(d, K)
    assert is_kaehler(d, K)
    assert not chamber_contains(d, tuple(0 for _ in K))
    assert chamber_contains(d, tuple(0 for _ in K), closed=True)
    assert not chamber_contains(d, tuple(-x for x in K))
    assert set(omega_coefficients(d, tuple(0 for _ in K)).values()) == {0}
    wall = (Fraction(0),) + K[1:]
    assert not is_kaehler(d, wall)
    assert 0 in omega_coefficients(d, wall).values()


@given(st.sampled_from(WITH_BLACK), st.data())
def test_chamber_is_convex_cone(d, data):
    fd = flag_data(d)
    n = fd.dim_t
    pos = st.fractions(min_value=Fraction(1, 20), max_value=5, max_denominator=20)
    x = data.draw(st.lists(pos, min_size=n, max_size=n))
    y = data.draw(st.lists(pos, min_size=n, max_size=n))
    s = data.draw(st.fractions(min_value=0, max_value=1, max_denominator=9))
    z = [s * a + (1 - s) * b for a, b in zip(x, y)]
    assert is_kaehler(d, x) and is_kaehler(d, y) and is_kaehler(d, z)


@given(st.sampled_from(WITH_BLACK), st.data())
def test_h_coordinates_roundtrip(d, data):
    fd = flag_data(d)
    x = tuple(data.draw(st.lists(st.fractions(-5, 5, max_denominator=9), min_size=fd.dim_t, max_size=fd.dim_t)))
    assert fd.to_h(fd.to_covector(x)) == x


def test_json_roundtrip_and_label():
    d = painted_diagram("B", 3, [1, 3])
    assert d.label() == "B3[*o*]"
    assert PaintedDiagram.from_json(d.to_json()) == d
    assert PaintedDiagram.from_json('{"family": "C", "rank": 2, "black": [2]}') == painted_diagram("C", 2, [2])


@pytest.mark.parametrize(
    "bad",
    [
        {"family": "A"},
        {"family": "A", "rank": "2"},
        {"family": "A", "rank": 2, "black": [1, 1]},
        {"family": "A", "rank": 2, "black": [3]},
        {"family": "D", "rank": 3},
        [1, 2],
    ],
)
def test_malformed_diagrams(bad):
    with pytest.raises(DiagramError):
        PaintedDiagram.from_json(bad)


def test_domain_errors():
    d = painted_diagram("A", 3, [2])
    fd = flag_data(d)
    with pytest.raises(DomainError):
        fd.to_h((1, 2))
    with pytest.raises(DomainError):
        fd.to_h(d.base[0])  # pairs nonzero with a white node


def test_analyze_report_cp3():
    r = analyze_report(painted_diagram("A", 3, [1]))
    assert r["beta_pairings"] == {"1": "1/2"}
    assert r["complex_dimension"] == 3
    assert r["t_root_count"] == 2

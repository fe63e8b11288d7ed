from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagke.bundles import (
    BundleError,
    BundleSpec,
    _orthogonal_projection,
    _string_weight,
    a_strings,
    build_K_diagram,
    character_covector,
    enumerate_bundles,
    fiber_geometry,
    fiber_vector,
    seed_spec,
)
from flagke.flags import all_diagrams, flag_data, painted_diagram
from flagke.rootsys import inner

DIAGRAMS = all_diagrams(4)
SPECS = [s for d in DIAGRAMS for s in enumerate_bundles(d, 1)]
STRING_SPECS = [s for s in SPECS if s.string]


@pytest.mark.parametrize("n", range(2, 8))
def test_seed_values(n):
    g = fiber_geometry(seed_spec(n))
    R = g.K_diagram.root_system
    assert g.K_diagram == painted_diagram("A", n - 1, [1])
    assert g.kappa_sq == Fraction(n - 1, 2 * n * n)
    assert g.beta_P() == Fraction(1, 2 * n)
    # beta(Z^0) = beta(P) / kappa = 1 / sqrt(2 (n - 1))
    assert abs(float(g.beta_P()) / g.kappa - (2 * (n - 1)) ** -0.5) < 1e-15
    # n P = Z^Kos on CP^{n-1}
    assert tuple(n * x for x in g.P_h) == flag_data(g.K_diagram).koszul_vector
    assert inner(R, g.P, g.P) == g.kappa_sq


def test_a3_all_white_two_specs():
    d = painted_diagram("A", 3, [])
    specs = enumerate_bundles(d, 2)
    assert len(specs) == 2
    assert {s.end for s in specs} == {"left", "right"}
    assert {build_K_diagram(s).black for s in specs} == {frozenset({0}), frozenset({2})}


@pytest.mark.parametrize("c", [1, 2, 3])
def test_a2_black_two_count(c):
    # string {1} with 2c+1 characters plus 2c nonzero line-bundle characters
    d = painted_diagram("A", 2, [2])
    specs = enumerate_bundles(d, c)
    assert len(specs) == 4 * c + 1
    assert sum(1 for s in specs if s.m == 1) == 2 * c


def test_k_diagram_examples():
    d = painted_diagram("A", 2, [2])
    s = BundleSpec(d, (0,), "left", (1,))
    assert build_K_diagram(s) == painted_diagram("A", 2, [1, 2])
    line = BundleSpec(d, (), None, (1,))
    assert build_K_diagram(line) == d


def test_no_white_a_component():
    d = painted_diagram("B", 2, [1, 2])
    assert a_strings(d) == []
    assert all(s.m == 1 for s in enumerate_bundles(d, 1))
    # B2 with the short root white: the component is B-type only through its bonds, a single node is A1
    assert a_strings(painted_diagram("B", 2, [1])) == [(1,)]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.base.label() + str(s.to_json()))
def test_fiber_invariants(spec):
    g = fiber_geometry(spec)
    K = g.K_diagram
    R = K.root_system
    for i in K.white_nodes:
        assert inner(R, K.base[i], g.P) == 0
    assert g.kappa_sq == inner(R, g.P, g.P) > 0
    if spec.string:
        assert g.beta_P() > 0


@pytest.mark.parametrize("spec", [s for s in STRING_SPECS if not any(s.char)], ids=lambda s: s.base.label() + str(s.to_json()))
def test_trivial_character_identity(spec):
    g = fiber_geometry(spec)
    m = spec.m
    assert g.kappa_sq == Fraction(m - 1, m) * g.beta_P()


@given(st.sampled_from([d for d in DIAGRAMS if d.black and a_strings(d)]), st.data())
def test_fiber_vector_affine_in_character(d, data):
    path = data.draw(st.sampled_from(a_strings(d)))
    end = data.draw(st.sampled_from(["left", "right"]))
    n = len(d.black)
    ints = st.lists(st.integers(-4, 4), min_size=n, max_size=n)
    p, q = data.draw(ints), data.draw(ints)
    K = build_K_diagram(BundleSpec(d, path, end, (0,) * n))

    def raw(ch):
        # projection of mu_0 + Lambda before the orientation sign is chosen
        mu = _string_weight(d, path, end) + character_covector(d, ch)
        return _orthogonal_projection(K, mu, K.white_nodes).normalized()

    s = tuple(a + b for a, b in zip(p, q))
    assert raw(s) == (raw(p) + raw(q) - raw((0,) * n)).normalized()
    assert character_covector(d, s) == character_covector(d, p) + character_covector(d, q)
    assert fiber_vector(d, path, end, p) in (raw(p), -raw(p))


def test_single_node_string_end_symmetry():
    d = painted_diagram("A", 2, [2])
    left = fiber_geometry(BundleSpec(d, (0,), "left", (1,)))
    right = fiber_geometry(BundleSpec(d, (0,), "right", (-1,)))
    assert left.P == right.P


def test_spec_validation():
    d = painted_diagram("A", 3, [2])
    with pytest.raises(BundleError):
        BundleSpec(d, (0,), None, (0,))
    with pytest.raises(BundleError):
        BundleSpec(d, (), None, (0,))
    with pytest.raises(BundleError):
        BundleSpec(d, (1,), "left", (0,))  # black node
    with pytest.raises(BundleError):
        BundleSpec(d, (0,), "left", (0, 0))
    full = painted_diagram("A", 3, [])
    with pytest.raises(BundleError):
        BundleSpec(full, (0, 1), "left", ())  # not the full component
    with pytest.raises(BundleError):
        BundleSpec(full, (0, 2, 1), "left", ())  # not in path order


def test_zero_fiber_vector_rejected():
    d = painted_diagram("A", 1, [1])
    with pytest.raises(BundleError):
        BundleSpec(d, (), None, (0,))


@pytest.mark.parametrize("spec", SPECS[:80], ids=lambda s: s.base.label() + str(s.to_json()))
def test_json_roundtrip(spec):
    assert BundleSpec.from_json(spec.base, spec.to_json()) == spec


def test_malformed_bundle_json():
    d = painted_diagram("A", 2, [2])
    with pytest.raises(BundleError):
        BundleSpec.from_json(d, {"string": [1], "end": "left", "char": ["x"]})
    with pytest.raises(BundleError):
        BundleSpec.from_json(d, {"string": [1], "end": "middle", "char": [0]})

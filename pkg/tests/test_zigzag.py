import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stringycoh.errors import InputError
from stringycoh.qlinalg import RationalMatrix, inverse, rank
from stringycoh.randomdata import random_exact_zigzag
from stringycoh.zigzag import (
    DualityWitness,
    ZigZagMorphism,
    ZigZagObject,
    _constructive_witness,
    check_zigzag_exact,
    compose,
    dualize,
    duality_mismatch,
    find_duality_witness,
    identity_morphism,
    make_theta0,
    verify_witness,
    zero_object,
)

from conftest import fixture_package

seeds = st.integers(0, 1_000_000)


def test_theta0_pinched_torus():
    z = make_theta0(fixture_package("pinched_torus"))
    # unreduced link ends: H^0 and H^1 of two circles
    assert z.dims == (2, 1, 1, 2)
    assert z.beta.is_zero()
    assert rank(z.alpha) == z.K_dim and rank(z.gamma) == z.C_dim


def test_theta0_quintic():
    z = make_theta0(fixture_package("quintic_node"))
    assert (z.K_dim, z.C_dim) == (1, 1)
    assert z.dims == (1, 1, 1, 1)


def test_theta0_sphere():
    z = make_theta0(fixture_package("sphere_smoothpoint"))
    assert z.K_dim == z.C_dim == 0


def test_theta0_matches_cone_dims_in_middle():
    p = fixture_package("quintic_node")
    z = make_theta0(p)
    assert (z.left_dim, z.right_dim) == (p.dims_cone_c[3], p.dims_cone_c[4])


def test_check_exact_examples():
    z = make_theta0(fixture_package("pinched_torus"))
    assert check_zigzag_exact(z)
    broken = ZigZagObject(z.left_dim, z.K_dim, z.C_dim, z.right_dim, z.alpha, z.beta, RationalMatrix.zeros(2, 1))
    assert not check_zigzag_exact(broken)
    assert check_zigzag_exact(zero_object())


def test_shape_validation():
    with pytest.raises(InputError):
        ZigZagObject(1, 1, 1, 1, RationalMatrix.zeros(2, 1), RationalMatrix.zeros(1, 1), RationalMatrix.zeros(1, 1))


def test_dualize_examples():
    z = make_theta0(fixture_package("pinched_torus"))
    assert dualize(z).dims == (2, 1, 1, 2)
    assert dualize(zero_object()).dims == (0, 0, 0, 0)
    asym = ZigZagObject(1, 1, 0, 0, RationalMatrix.identity(1), RationalMatrix.zeros(0, 1), RationalMatrix.zeros(0, 0))
    assert dualize(asym).dims == (0, 0, 1, 1)


def test_witness_quintic():
    z = make_theta0(fixture_package("quintic_node"))
    w = find_duality_witness(z)
    assert w is not None and verify_witness(z, w)
    assert w.lam.shape == (1, 1) and not w.lam.is_zero()
    assert not w.nu.is_zero()


def test_witness_zero_object():
    w = find_duality_witness(zero_object())
    assert w is not None and verify_witness(zero_object(), w)


def test_witness_requires_exact_input():
    z = ZigZagObject(1, 1, 1, 1, RationalMatrix.identity(1), RationalMatrix.identity(1), RationalMatrix.zeros(1, 1))
    with pytest.raises(InputError):
        find_duality_witness(z)


def test_no_witness_on_asymmetric_link():
    z = make_theta0(fixture_package("asymmetric_link"))
    assert duality_mismatch(z)
    assert find_duality_witness(z) is None


def test_verify_rejects_bad_witness():
    z = make_theta0(fixture_package("pinched_torus"))
    w = find_duality_witness(z)
    bad = DualityWitness(w.kappa, w.lam.scale(2), w.nu, w.xi)
    assert not verify_witness(z, bad)


def test_compose_examples():
    z = make_theta0(fixture_package("pinched_torus"))
    w = find_duality_witness(z)
    m = w.as_morphism(z)
    assert compose(identity_morphism(z), m) == m
    inv = ZigZagMorphism(dualize(z), z, *(inverse(v) for v in m.verticals))
    assert compose(m, inv).verticals == identity_morphism(z).verticals
    with pytest.raises(InputError):
        compose(m, m)


def test_morphism_must_commute():
    z = make_theta0(fixture_package("pinched_torus"))
    with pytest.raises(InputError):
        ZigZagMorphism(z, z, RationalMatrix.identity(2), RationalMatrix.identity(1).scale(2),
                       RationalMatrix.identity(1), RationalMatrix.identity(2))


@given(seeds)
def test_dualize_involution_and_exactness(seed):
    z = random_exact_zigzag(random.Random(seed))
    assert check_zigzag_exact(z)
    d = dualize(z)
    assert check_zigzag_exact(d)
    assert dualize(d) == z


@given(seeds)
def test_witness_exists_iff_dims_match(seed):
    z = random_exact_zigzag(random.Random(seed), max_dim=3)
    w = find_duality_witness(z)
    assert (w is not None) == (not duality_mismatch(z))
    if w is not None:
        assert verify_witness(z, w)


@given(seeds)
def test_adapted_basis_iso_verifies(seed):
    rng = random.Random(seed)
    z = random_exact_zigzag(rng, max_dim=4)
    if duality_mismatch(z):
        return
    w = DualityWitness(*_constructive_witness(z, dualize(z)))
    assert verify_witness(z, w)


@given(seeds)
def test_compose_associative(seed):
    rng = random.Random(seed)
    z = random_exact_zigzag(rng, max_dim=3)
    w = find_duality_witness(z)
    if w is None:
        return
    m = w.as_morphism(z)
    back = ZigZagMorphism(dualize(z), z, *(inverse(v) for v in m.verticals))
    left = compose(compose(m, back), m)
    right = compose(m, compose(back, m))
    assert left == right


def test_to_dict_round_trip():
    z = make_theta0(fixture_package("pinched_torus"))
    assert ZigZagObject.from_dict(z.to_dict()) == z

import copy
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stringycoh.errors import InputError, ValidationError
from stringycoh.qlinalg import rank
from stringycoh.randomdata import random_rank_document
from stringycoh.simplicial import closure, cohomology_dims, deleted_complex, les_exactness
from stringycoh.stratified import (
    assemble_package_ranks,
    assemble_package_simplicial,
    build_stratified,
    canonical_sequence_maps,
    package_to_rank_document,
    support_cosupport_check,
)
from stringycoh.stringy import compute_S0

from conftest import fixture_package, load_fixture_doc

TETRA_BOUNDARY = [("a", "b", "c"), ("a", "b", "d"), ("a", "c", "d"), ("b", "c", "d")]


def _space(name):
    doc = load_fixture_doc(name)
    return build_stratified(closure(doc["facets"], doc["vertices"]), doc["singular_vertex"], doc["half_dim"])


def _zero_doc(n=1):
    return {
        "format_version": "1",
        "n": n,
        "dims_Y": [0] * (2 * n + 1),
        "dims_Yo": [0] * (2 * n + 1),
        "dims_Yo_c": [0] * (2 * n + 1),
        "dims_L": [0] * (2 * n),
        "maps": {"ranks": [[0, 0, 0]] * (2 * n + 1)},
    }


def test_build_rejects_wrong_dimension():
    k = closure(TETRA_BOUNDARY)
    with pytest.raises(ValidationError):
        build_stratified(k, "a", 2)


def test_build_pinched_torus_link_is_two_circles():
    s = _space("pinched_torus")
    assert cohomology_dims(s.link) == (2, 2)
    assert s.link.n_simplices(0) == 6


def test_build_accepts_smooth_point():
    s = build_stratified(closure(TETRA_BOUNDARY), "a", 1)
    assert cohomology_dims(s.link) == (1, 1)


def test_build_rejects_bad_link():
    # a disk: the boundary vertex has an arc as link
    k = closure([("y", "a", "b"), ("y", "b", "c")])
    with pytest.raises(ValidationError) as err:
        build_stratified(k, "y", 1)
    assert err.value.offending


def test_build_rejects_second_singular_vertex():
    # two tetrahedron boundaries sharing vertex a
    other = [tuple(v + "2" if v != "a" else v for v in f) for f in TETRA_BOUNDARY]
    k = closure(TETRA_BOUNDARY + other)
    with pytest.raises(ValidationError) as err:
        build_stratified(k, "b", 1)
    assert ("a",) in err.value.offending
    # the shared vertex itself is a legal node
    s = build_stratified(k, "a", 1)
    assert cohomology_dims(s.link) == (2, 2)


def test_pinched_torus_package():
    p = fixture_package("pinched_torus")
    assert p.dims_Y == (1, 1, 1)
    assert p.dims_Yo == (1, 1, 0)
    assert p.dims_Yo_c == (0, 1, 1)
    assert p.dims_L == (2, 2)
    assert [rank(p.a[1]), rank(p.b[1]), rank(p.c[1]), rank(p.a[2])] == [1, 0, 1, 1]
    assert p.provenance == "simplicial"
    assert any("reduced" in note for note in p.notes)


def test_simplicial_identities():
    for name in ("pinched_torus", "sphere_smoothpoint", "torus_smoothpoint"):
        s = _space(name)
        p = assemble_package_simplicial(s)
        assert p.dims_Yo == cohomology_dims(deleted_complex(s.complex, s.singular_vertex))
        assert p.dims_Yo_c[1:] == p.dims_Y[1:]
        assert p.dims_Yo_c[0] == p.dims_Y[0] - 1
        for k in range(2, 2 * p.n + 1):
            assert p.dims_cone_c[k] == p.dims_L[k - 1]


def test_sphere_package_trivial_middle():
    p = fixture_package("sphere_smoothpoint")
    assert rank(p.a[1]) == rank(p.b[1]) == rank(p.c[1]) == 0


def test_quintic_accepted():
    p = fixture_package("quintic_node")
    assert p.provenance == "rank-mode"
    assert (rank(p.a[3]), rank(p.b[3]), rank(p.c[3])) == (1, 202, 1)
    assert not p.failing_joints()


def test_tampered_quintic_names_joint():
    doc = load_fixture_doc("quintic_node")
    doc["maps"]["ranks"][3][0] = 0
    with pytest.raises(InputError) as err:
        assemble_package_ranks(doc)
    assert "H^3_c(Y^o)" in str(err.value)


def test_all_zero_document():
    p = assemble_package_ranks(_zero_doc())
    assert compute_S0(p) == (0, 0, 0)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["dims_Y"].pop(),
        lambda d: d.pop("dims_L"),
        lambda d: d.update(format_version="2"),
        lambda d: d.update(n=0),
        lambda d: d["dims_Yo"].__setitem__(0, -1),
        lambda d: d["maps"]["ranks"].pop(),
        lambda d: d["maps"]["ranks"][3].__setitem__(1, 999),
        lambda d: d.update(maps={}),
    ],
)
def test_malformed_rank_documents(mutate):
    doc = copy.deepcopy(load_fixture_doc("quintic_node"))
    mutate(doc)
    with pytest.raises(InputError):
        assemble_package_ranks(doc)


def test_rank_mode_matches_simplicial_on_pinched_torus():
    p = fixture_package("pinched_torus")
    q = assemble_package_ranks(package_to_rank_document(p))
    assert compute_S0(p) == compute_S0(q)
    for k in range(3):
        assert rank(p.a[k]) == rank(q.a[k]) and rank(p.c[k]) == rank(q.c[k])


def test_explicit_matrix_mode():
    p = fixture_package("pinched_torus")
    doc = package_to_rank_document(p)
    doc["maps"] = {
        "matrices": {
            "a": [m.to_pairs() for m in p.a],
            "b": [m.to_pairs() for m in p.b],
            "c": [m.to_pairs() for m in p.c],
        }
    }
    q = assemble_package_ranks(doc)
    assert q.a == p.a and q.b == p.b and q.c == p.c


def test_canonical_maps_are_exact():
    dims = [2, 3, 3, 2]
    ranks = [2, 1, 2]
    maps = canonical_sequence_maps(dims, ranks)
    assert [rank(m) for m in maps] == ranks
    assert all(les_exactness(maps, dims))


def test_support_check_examples():
    pt = fixture_package("pinched_torus")
    rep = support_cosupport_check(pt, (1, 2, 1))
    assert rep.cosupport_ok[0] and rep.support_ok[2]
    q = fixture_package("quintic_node")
    rep = support_cosupport_check(q, (1, 0, 1, 204, 1, 0, 1))
    assert rep.ok and rep.notes
    z = assemble_package_ranks(_zero_doc())
    assert support_cosupport_check(z, (0, 0, 0)).ok
    assert not support_cosupport_check(pt, (2, 2, 1)).ok


@given(st.integers(0, 100_000))
def test_rank_sum_at_every_joint(seed):
    p = assemble_package_ranks(random_rank_document(random.Random(seed)))
    terms, maps = p.sequence()
    for i, (_, d) in enumerate(terms):
        incoming = rank(maps[i - 1]) if i else 0
        outgoing = rank(maps[i]) if i < len(maps) else 0
        assert incoming + outgoing == d

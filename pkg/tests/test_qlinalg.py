from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stringycoh.errors import InputError
from stringycoh.qlinalg import (
    RationalMatrix,
    corestriction,
    extend_to_basis,
    image_basis,
    inverse,
    is_exact_at,
    is_invertible,
    kernel_basis,
    rank,
    rref,
    solve,
    solve_matrix,
    transpose,
)

M = RationalMatrix.from_rows


@st.composite
def matrices(draw, max_dim=4, lo=-2, hi=2):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    entries = draw(st.lists(st.integers(lo, hi), min_size=r * c, max_size=r * c))
    return RationalMatrix(r, c, entries)


def test_rank_examples():
    assert rank(RationalMatrix.identity(3)) == 3
    assert rank(RationalMatrix.zeros(4, 2)) == 0
    assert rank(M([[1, 2], [2, 4]])) == 1
    assert rank(RationalMatrix.zeros(0, 5)) == 0
    assert rank(RationalMatrix.zeros(3, 0)) == 0


def test_rank_with_fractions():
    m = M([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]])
    assert rank(m) == 1


def test_kernel_examples():
    assert kernel_basis(RationalMatrix.identity(2)).dim == 0
    assert kernel_basis(RationalMatrix.zeros(2, 3)).dim == 3
    k = kernel_basis(M([[1, 1, 0]]))
    assert k.dim == 2
    for v in k.vectors():
        assert M([[1, 1, 0]]).apply(v) == [0]
    # independent check of the spanning set
    assert rank(k.basis) == 2


def test_image_examples():
    assert image_basis(RationalMatrix.identity(3)).dim == 3
    assert image_basis(RationalMatrix.zeros(2, 2)).dim == 0
    im = image_basis(M([[1, 0], [2, 0]]))
    assert im.dim == 1
    assert im.contains([1, 2]) and not im.contains([1, 0])


def test_solve_examples():
    assert solve(RationalMatrix.identity(2), [5, 7]) == [5, 7]
    assert solve(RationalMatrix.zeros(2, 2), [1, 0]) is None
    assert solve(M([[2, 0], [0, 3]]), [1, 1]) == [Fraction(1, 2), Fraction(1, 3)]
    with pytest.raises(InputError):
        solve(RationalMatrix.identity(2), [1, 2, 3])


def test_is_exact_at_examples():
    incl = M([[1], [0]])
    proj = M([[0, 1]])
    assert is_exact_at(incl, proj)
    one = RationalMatrix.identity(1)
    assert not is_exact_at(one, one)
    # im 0 = 0 = ker of an injective map
    assert is_exact_at(RationalMatrix.zeros(2, 1), RationalMatrix.identity(2))
    with pytest.raises(InputError):
        is_exact_at(RationalMatrix.zeros(2, 1), RationalMatrix.zeros(1, 3))


def test_transpose_examples():
    assert transpose(M([[1, 2], [3, 4]])) == M([[1, 3], [2, 4]])
    assert transpose(RationalMatrix.zeros(0, 3)).shape == (3, 0)


def test_floats_rejected():
    with pytest.raises(TypeError):
        M([[0.5]])


def test_matrix_is_immutable():
    m = RationalMatrix.identity(2)
    with pytest.raises(AttributeError):
        m.rows = 3


def test_pairs_round_trip():
    m = M([[Fraction(-3, 4), 2], [0, Fraction(5, 7)]])
    assert RationalMatrix.from_pairs(m.to_pairs()) == m
    with pytest.raises(InputError):
        RationalMatrix.from_pairs([[[1, 0]]])


def test_matmul_shape_mismatch():
    with pytest.raises(InputError):
        RationalMatrix.zeros(2, 3) @ RationalMatrix.zeros(2, 3)


def test_rref_pivots_first_nonzero():
    r, piv = rref(M([[0, 2, 4], [0, 1, 2], [1, 0, 0]]))
    assert piv == [0, 1]
    assert r == M([[1, 0, 0], [0, 1, 2]])


def test_inverse_and_singular():
    m = M([[2, 1], [1, 1]])
    assert inverse(m) @ m == RationalMatrix.identity(2)
    with pytest.raises(InputError):
        inverse(M([[1, 2], [2, 4]]))
    assert inverse(RationalMatrix.zeros(0, 0)).shape == (0, 0)


def test_extend_and_corestrict():
    sub = M([[1], [1], [0]])
    full = extend_to_basis(sub)
    assert full.shape == (3, 3) and is_invertible(full)
    assert full.column(0) == sub.column(0)
    im = image_basis(M([[1, 2], [2, 4], [0, 0]]))
    assert corestriction(M([[3], [6], [0]]), im) == M([[3]])
    with pytest.raises(InputError):
        corestriction(M([[0], [0], [1]]), im)


@given(matrices())
def test_rank_transpose_invariant(m):
    assert rank(m) == rank(m.T)


@given(matrices())
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert k.dim + rank(m) == m.cols
    for v in k.vectors():
        assert all(x == 0 for x in m.apply(v))


@given(matrices())
def test_image_spans_column_space(m):
    im = image_basis(m)
    assert im.dim == rank(m)
    for j in range(m.cols):
        assert im.contains(m.column(j))


@given(matrices())
def test_transpose_involution(m):
    assert m.T.T == m


@given(matrices(), st.data())
def test_solve_finds_preimages(m, data):
    x = data.draw(st.lists(st.integers(-3, 3), min_size=m.cols, max_size=m.cols))
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b


@given(matrices(max_dim=3), matrices(max_dim=3))
def test_solve_matrix_agrees_with_columns(m, b):
    if b.rows != m.rows:
        return
    x = solve_matrix(m, b)
    cols = [solve(m, b.column(j)) for j in range(b.cols)]
    if x is None:
        assert any(c is None for c in cols)
    else:
        assert m @ x == b

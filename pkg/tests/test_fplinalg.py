import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgrp.errors import DimensionMismatchError
from pgrp.fplinalg import FpMatrix, Subspace, nullspace, rref


def mat(p, rows):
    return FpMatrix(p, rows)


def test_rref_identity():
    m = FpMatrix.identity(3, 3)
    rr, rank = rref(m)
    assert rank == 3
    assert rr == m


def test_rref_zero():
    m = FpMatrix.zeros(3, 2, 2)
    rr, rank = rref(m)
    assert rank == 0
    assert rr.is_zero()


def test_rref_rank_one():
    # row2 - 2*row1 vanishes mod 3, so the reduced form keeps only [1, 2]
    rr, rank = rref(mat(3, [[1, 2], [2, 1]]))
    assert rank == 1
    assert rr.a[0].tolist() == [1, 2]
    assert not rr.a[1].any()


@st.composite
def fp_matrices(draw):
    p = draw(st.sampled_from([3, 5]))
    rows = draw(st.integers(1, 5))
    cols = draw(st.integers(1, 5))
    entries = draw(
        st.lists(
            st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
    return FpMatrix(p, entries)


@settings(max_examples=150)
@given(fp_matrices())
def test_rref_idempotent(m):
    once, rank1 = rref(m)
    twice, rank2 = rref(once)
    assert once == twice
    assert rank1 == rank2


@settings(max_examples=150)
@given(fp_matrices())
def test_nullspace_annihilates(m):
    ns = nullspace(m)
    assert ns.dim == m.cols - rref(m)[1]
    if ns.dim:
        product = (ns.basis @ m.a.T) % m.p
        assert not product.any()
    # any standard vector outside the nullspace must fail the defining relation
    for j in range(m.cols):
        e = np.zeros(m.cols, dtype=np.int64)
        e[j] = 1
        if not ns.contains_vector(e):
            assert ((e @ m.a.T) % m.p).any()


def test_nullspace_zero_map():
    ns = nullspace(FpMatrix.zeros(3, 2, 2))
    assert ns.dim == 2


def test_nullspace_identity():
    ns = nullspace(FpMatrix.identity(3, 2))
    assert ns.dim == 0


def test_nullspace_nilpotent_jordan():
    # J_2(1) - I is the single-superdiagonal nilpotent; kernel is <e1>
    n = mat(3, [[0, 1], [0, 0]])
    ns = nullspace(n)
    assert ns.dim == 1
    assert ns.contains_vector([1, 0])
    assert not ns.contains_vector([0, 1])


def test_sum_with_zero_is_identity():
    x = Subspace(3, 3, [[1, 0, 2]])
    assert x.sum(Subspace.zero(3, 3)) == x


def test_intersect_with_full_is_identity():
    x = Subspace(3, 3, [[1, 0, 2], [0, 1, 1]])
    assert x.intersect(Subspace.full(3, 3)) == x


def test_sum_and_intersect_of_axes():
    e1 = Subspace(3, 3, [[1, 0, 0]])
    e2 = Subspace(3, 3, [[0, 1, 0]])
    assert e1.sum(e2).dim == 2
    assert e1.intersect(e2).dim == 0


def test_ambient_mismatch_raises():
    with pytest.raises(DimensionMismatchError):
        Subspace(3, 3, [[1, 0, 0]]).sum(Subspace(3, 2, [[1, 0]]))
    with pytest.raises(DimensionMismatchError):
        Subspace(3, 2, [[1, 0]]).intersect(Subspace(5, 2, [[1, 0]]))


@st.composite
def subspace_pairs(draw):
    p = draw(st.sampled_from([3, 5]))
    n = draw(st.integers(1, 5))
    def rows():
        k = draw(st.integers(0, n))
        return [
            draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
            for _ in range(k)
        ]
    return Subspace(p, n, rows()), Subspace(p, n, rows())


@settings(max_examples=150)
@given(subspace_pairs())
def test_dimension_law(pair):
    a, b = pair
    s = a.sum(b)
    i = a.intersect(b)
    assert a.dim + b.dim == s.dim + i.dim
    assert s.contains(a) and s.contains(b)
    assert a.contains(i) and b.contains(i)


@settings(max_examples=60)
@given(subspace_pairs())
def test_intersection_membership(pair):
    a, b = pair
    i = a.intersect(b)
    for v in i.vectors():
        assert a.contains_vector(v) and b.contains_vector(v)

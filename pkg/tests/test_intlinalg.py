"""Exact linear algebra checked against FLINT and against its own identities."""

from fractions import Fraction

import flint
from hypothesis import given, settings
from hypothesis import strategies as st

from flattile import intlinalg as il


def matrices(max_rows=6, max_cols=6, bound=9):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def _det(a):
    return int(flint.fmpz_mat(a).det())


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_smith_form_matches_flint_and_transforms(a):
    d, u, v, vinv, uinv = il.smith_normal_form(a)
    assert il.matmul(il.matmul(u, a), v) == d
    assert il.matmul(v, vinv) == il.identity(len(v))
    assert il.matmul(u, uinv) == il.identity(len(u))
    assert abs(_det(u)) == 1 and abs(_det(v)) == 1
    assert d == flint.fmpz_mat(a).snf().tolist()
    diag = il.diagonal(d)
    assert all(b % a_ == 0 for a_, b in zip(diag, diag[1:]))


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_hermite_form_matches_flint(a):
    h = il.hermite_normal_form(a)
    ref = [row for row in flint.fmpz_mat(a).hnf().tolist() if any(row)]
    assert h == [[int(x) for x in row] for row in ref]


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_kernel_basis_is_saturated(a):
    n = len(a[0])
    basis, coords = il.kernel_basis(a, n)
    assert len(basis) == n - il.rank_q(a)
    for vec in basis:
        assert all(sum(r[i] * vec[i] for i in range(n)) == 0 for r in a)
    for j, vec in enumerate(basis):
        assert coords(vec) == [int(i == j) for i in range(len(basis))]
    if basis:
        # a basis of a saturated lattice has coprime maximal minors
        assert il.saturate(basis) == il.hermite_normal_form(basis)


def test_saturate_divides_out_content():
    assert il.saturate([[2, 4, 6]]) == [[1, 2, 3]]
    assert il.saturate([[2, 0], [0, 2]]) == [[1, 0], [0, 1]]


def test_rank_and_nullspace():
    a = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert il.rank_q(a) == 2
    ns = il.nullspace_q(a, 3)
    assert len(ns) == 1
    assert all(sum(Fraction(r[i]) * ns[0][i] for i in range(3)) == 0 for r in a)
    assert il.rank_q([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]) == 1


def test_det_and_inverse():
    a = [[2, 1], [7, 4]]
    assert il.det_q(a) == 1
    assert il.inverse_q(a) == [[4, -1], [-7, 2]]


def test_homology_of_a_circle():
    # two vertices, two edges forming a loop, no faces
    d1 = [[-1, 1], [1, -1]]
    rank, torsion, free, _ = il.relative_homology(d1, [[], []], 2)
    assert (rank, torsion) == (1, [])
    assert len(free) == 1


def test_homology_detects_torsion():
    # one vertex, one loop edge, one face glued along it twice: RP^2 style
    rank, torsion, _, reps = il.relative_homology([[0]], [[2]], 1)
    assert rank == 0 and torsion == [2] and reps == [[1]]


def test_kron():
    assert il.kron([[1, 2]], [[0, 1], [1, 0]]) == [[0, 1, 0, 2], [1, 0, 2, 0]]

from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qrv import exactla as la

ints = st.integers(min_value=-6, max_value=6)


def int_matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(ints, min_size=c, max_size=c), min_size=r, max_size=r)))


def square(n_max=4):
    return st.integers(1, n_max).flatmap(
        lambda n: st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n, max_size=n))


def test_fields():
    assert la.QQ(Fraction(2, 4)) == Fraction(1, 2)
    F = la.GF(7)
    assert F(-1) == 6 and F(Fraction(1, 2)) == 4
    assert F.inv(3) * 3 % 7 == 1
    with pytest.raises(ValueError):
        la.GF(9)
    with pytest.raises(ZeroDivisionError):
        F(Fraction(1, 7))
    assert la.field_from_name("Q") is la.QQ
    assert la.field_from_name("Fp:32003") == la.GF(32003)


def test_rank_examples():
    assert la.rank(la.zeros(la.QQ, 3, 2)) == 0
    assert la.rank(la.identity(la.QQ, 4)) == 4
    assert la.rank(la.matrix(la.QQ, [[0, 1], [0, 0]])) == 1


def test_kernel_examples():
    assert la.kernel_basis(la.identity(la.QQ, 3)) == []
    assert len(la.kernel_basis(la.zeros(la.QQ, 2, 2))) == 2
    (v,) = la.kernel_basis(la.matrix(la.QQ, [[1, 1]]))
    assert v[0] == -v[1] != 0


def test_solve_examples():
    A = la.identity(la.QQ, 3)
    assert la.solve(A, [1, 2, 3]) == (1, 2, 3)
    assert la.solve(la.zeros(la.QQ, 2, 2), [1, 0]) is None
    x = la.solve(la.matrix(la.QQ, [[1, 1], [0, 0]]), [2, 0])
    assert sum(x) == 2


def test_det_examples():
    assert la.det(la.identity(la.QQ, 3)) == 1
    assert la.det(la.matrix(la.QQ, [[1, 2], [3, 4]])) == -2
    assert la.det(la.matrix(la.QQ, [[1, 2], [2, 4]])) == 0
    with pytest.raises(ValueError):
        la.det(la.zeros(la.QQ, 2, 3))


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_rank_matches_sympy(rows):
    assert la.rank(la.matrix(la.QQ, rows)) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_rank_transpose(rows):
    m = la.matrix(la.QQ, rows)
    assert la.rank(m) == la.rank(la.transpose(m))


@settings(max_examples=40, deadline=None)
@given(int_matrices(4, 4), st.integers(0, 2**32 - 1))
def test_rank_invariant_under_invertible(rows, seed):
    m = la.matrix(la.QQ, rows)
    rng = np.random.default_rng(seed)
    n = m.nrows
    while True:
        g = la.matrix(la.QQ, rng.integers(-3, 4, size=(n, n)).tolist())
        if la.det(g) != 0:
            break
    assert la.rank(g @ m) == la.rank(m)


@settings(max_examples=60, deadline=None)
@given(int_matrices(), st.lists(ints, min_size=5, max_size=5))
def test_solve_consistent(rows, xs):
    A = la.matrix(la.QQ, rows)
    x = xs[:A.ncols]
    b = [sum(a * v for a, v in zip(row, x)) for row in rows]
    sol = la.solve(A, b)
    assert sol is not None
    assert [sum(a * v for a, v in zip(row, sol)) for row in A.rows] == b


@settings(max_examples=60, deadline=None)
@given(square(), square())
def test_det_multiplicative(a, b):
    n = min(len(a), len(b))
    A = la.matrix(la.QQ, [r[:n] for r in a[:n]])
    B = la.matrix(la.QQ, [r[:n] for r in b[:n]])
    assert la.det(A @ B) == la.det(A) * la.det(B)
    assert la.det(A) == sympy.Matrix(A.tolist()).det()


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_kernel_dimension(rows):
    m = la.matrix(la.QQ, rows)
    ker = la.kernel_basis(m)
    assert len(ker) == m.ncols - la.rank(m)
    for v in ker:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in m.rows)


@settings(max_examples=60, deadline=None)
@given(int_matrices(6, 6))
def test_modular_rational_agreement(rows):
    # three primes, majority vote; a disagreement at one prime is a bad reduction
    r_q = la.rank(la.matrix(la.QQ, rows))
    votes = [la.rank(la.matrix(la.GF(p), rows)) for p in (32003, 1000003, 2147483647)]
    assert max(set(votes), key=votes.count) == r_q


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 7, 32003]))
def test_batch_rank_matches_exact(seed, p):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, p, size=(20, 3, 4))
    A[:5, 2] = 0
    A[5:10, 1] = A[5:10, 0]
    got = la.batch_rank_mod(A, p)
    want = [la.rank(la.matrix(la.GF(p), a.tolist())) for a in A]
    assert got.tolist() == want


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 32003]))
def test_batch_inverse(seed, p):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, p, size=(30, 3, 3))
    inv, ok = la.batch_inverse_mod(A, p)
    for a, ai, good in zip(A, inv, ok):
        exact = la.det(la.matrix(la.GF(p), a.tolist())) != 0
        assert bool(good) == exact
        if good:
            assert ((a @ ai) % p == np.eye(3, dtype=np.int64)).all()
    assert (la.batch_det_nonzero_mod(A, p) == ok).all()


def test_inverse_and_rref():
    m = la.matrix(la.QQ, [[2, 1], [1, 1]])
    assert la.inverse(m) @ m == la.identity(la.QQ, 2)
    R, piv = la.rref(la.matrix(la.QQ, [[0, 2, 4], [0, 1, 2]]))
    assert piv == (1,) and R.rows[0] == (0, 1, 2)
    with pytest.raises(ZeroDivisionError):
        la.inverse(la.zeros(la.QQ, 2, 2))

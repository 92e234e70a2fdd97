import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multihol.errors import DimensionMismatch, Infeasible, InputError, ModulusMismatch, NotFullRank, SingularMatrix
from multihol.ff_linalg import (
    FpMatrix,
    enumerate_gl,
    gl_order,
    mat_inv,
    mat_mul,
    rank,
    reduce_to_I0,
    solve_affine,
)

PRIMES = st.sampled_from([3, 5, 7])


@st.composite
def matrices(draw, rows=None, cols=None, p=None):
    p = p or draw(PRIMES)
    r = rows if rows is not None else draw(st.integers(1, 5))
    c = cols if cols is not None else draw(st.integers(1, 5))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return FpMatrix(np.array(vals).reshape(r, c), p)


def M(rows, p=3):
    return FpMatrix(rows, p)


def test_entries_reduced_and_prime_checked():
    assert M([[4, -1]]).tolist() == [[1, 2]]
    with pytest.raises(InputError):
        FpMatrix([[1]], 4)
    with pytest.raises(InputError):
        FpMatrix([[1]], 2)


def test_mat_mul_examples():
    I2 = FpMatrix.identity(2, 3)
    assert mat_mul(I2, I2) == I2
    assert mat_mul(M([[1, 1], [0, 1]]), M([[1, 1], [0, 1]])) == M([[1, 2], [0, 1]])
    assert mat_mul(M([[2]]), M([[2]])) == M([[1]])


def test_mat_mul_errors():
    with pytest.raises(DimensionMismatch):
        mat_mul(M([[1, 2]]), M([[1, 2]]))
    with pytest.raises(ModulusMismatch):
        mat_mul(M([[1]]), FpMatrix([[1]], 5))


def test_mat_inv_examples():
    assert mat_inv(FpMatrix.identity(3, 5)) == FpMatrix.identity(3, 5)
    assert mat_inv(M([[2]])) == M([[2]])
    with pytest.raises(SingularMatrix):
        mat_inv(M([[1, 1], [1, 1]]))


def test_rank_examples():
    assert rank(FpMatrix.zeros(2, 1, 3)) == 0
    assert rank(FpMatrix.identity(4, 3)) == 4
    assert rank(FpMatrix([[1, 2], [2, 4]], 5)) == 1


def test_solve_affine_examples():
    sp = solve_affine(FpMatrix.identity(2, 3), FpMatrix.identity(2, 3))
    assert sp.particular == FpMatrix.identity(2, 3)
    assert sp.dimension == 0

    sp = solve_affine(M([[1, 0]]), M([[1]]))
    assert sp.particular == M([[1], [0]])
    assert sp.dimension == 1
    assert all(M([[1, 0]]) @ X == M([[1]]) for X in sp)
    assert len(list(sp)) == 3

    with pytest.raises(Infeasible):
        solve_affine(FpMatrix.zeros(1, 2, 3), M([[1]]))


def test_gl_order_examples():
    assert gl_order(0, 3) == 1
    assert gl_order(1, 3) == 2
    assert gl_order(2, 3) == 48
    assert gl_order(4, 3) == 24261120


@pytest.mark.parametrize("k,p", [(1, 3), (2, 3), (1, 5), (2, 5)])
def test_gl_order_matches_brute_count(k, p):
    assert len(enumerate_gl(k, p)) == gl_order(k, p)


def test_reduce_to_I0_examples():
    U, V = reduce_to_I0(M([[1, 0, 0], [0, 1, 0]]))
    assert U @ M([[1, 0, 0], [0, 1, 0]]) @ V == M([[1, 0, 0], [0, 1, 0]])
    D = M([[0, 1]])
    U, V = reduce_to_I0(D)
    assert U @ D @ V == M([[1, 0]])
    with pytest.raises(NotFullRank):
        reduce_to_I0(M([[1], [1]]))


@given(st.data())
def test_inverse_property(data):
    p = data.draw(PRIMES)
    k = data.draw(st.integers(1, 5))
    X = data.draw(matrices(k, k, p))
    if rank(X) < k:
        with pytest.raises(SingularMatrix):
            mat_inv(X)
    else:
        assert X @ mat_inv(X) == FpMatrix.identity(k, p)
        assert mat_inv(X) @ X == FpMatrix.identity(k, p)


@given(matrices())
def test_rank_transpose(X):
    assert rank(X) == rank(X.T)


@given(st.data())
def test_solve_affine_substitution(data):
    p = data.draw(PRIMES)
    r, k, s = (data.draw(st.integers(1, 4)) for _ in range(3))
    D = data.draw(matrices(r, k, p))
    X0 = data.draw(matrices(k, s, p))
    R = D @ X0
    sp = solve_affine(D, R)
    assert sp.contains(X0)
    assert D @ sp.particular == R
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=sp.dimension, max_size=sp.dimension))
    assert D @ sp.point(coeffs) == R
    assert sp.dimension == (k - rank(D)) * s


@given(st.data())
def test_reduce_to_I0_property(data):
    p = data.draw(PRIMES)
    n = data.draw(st.integers(1, 4))
    m = data.draw(st.integers(n, 6))
    D = data.draw(matrices(n, m, p))
    if rank(D) < n:
        with pytest.raises(NotFullRank):
            reduce_to_I0(D)
        return
    U, V = reduce_to_I0(D)
    target = np.zeros((n, m), dtype=np.int64)
    target[:, :n] = np.eye(n, dtype=np.int64)
    assert U @ D @ V == FpMatrix(target, p)
    assert U.is_invertible() and V.is_invertible()

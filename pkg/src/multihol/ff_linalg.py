"""Exact linear algebra over a prime field F_p, p odd.

Vectors are rows and matrices act on them from the right, so the matrix
of a composite map ``x -> (x f) g`` is ``F @ G``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    Infeasible,
    InputError,
    ModulusMismatch,
    NotFullRank,
    SingularMatrix,
)

__all__ = [
    "FpMatrix",
    "AffineSpace",
    "is_odd_prime",
    "mat_mul",
    "mat_inv",
    "rank",
    "rref",
    "nullspace",
    "solve_affine",
    "gl_order",
    "reduce_to_I0",
    "enumerate_matrices",
    "enumerate_gl",
    "random_matrix",
    "random_invertible",
]


def is_odd_prime(p) -> bool:
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool) or p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class FpMatrix:
    """Immutable matrix with entries in [0, p)."""

    __slots__ = ("p", "data")

    def __init__(self, data, p: int):
        if not is_odd_prime(p):
            raise InputError(f"modulus must be an odd prime, got {p!r}", "p")
        arr = np.array(data, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got shape {arr.shape}")
        arr = arr % p
        arr.flags.writeable = False
        self.p = int(p)
        self.data = arr

    # constructors

    @classmethod
    def identity(cls, k: int, p: int) -> "FpMatrix":
        return cls(np.eye(k, dtype=np.int64), p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FpMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def scalar(cls, k: int, s: int, p: int) -> "FpMatrix":
        return cls(s * np.eye(k, dtype=np.int64), p)

    # shape

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix(self.data.T, self.p)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # arithmetic

    def _check_mod(self, other: "FpMatrix"):
        if not isinstance(other, FpMatrix):
            raise TypeError(f"expected FpMatrix, got {type(other).__name__}")
        if other.p != self.p:
            raise ModulusMismatch(f"moduli differ: {self.p} vs {other.p}")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_mod(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return FpMatrix(self.data + other.data, self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_mod(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return FpMatrix(self.data - other.data, self.p)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(-self.data, self.p)

    def __mul__(self, s: int) -> "FpMatrix":
        if isinstance(s, FpMatrix):
            raise TypeError("use @ for matrix products")
        return FpMatrix(self.data * (int(s) % self.p), self.p)

    __rmul__ = __mul__

    def inv(self) -> "FpMatrix":
        return mat_inv(self)

    def rank(self) -> int:
        return rank(self)

    def is_invertible(self) -> bool:
        return self.is_square() and rank(self) == self.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __repr__(self):
        return f"FpMatrix({self.data.tolist()}, p={self.p})"


def mat_mul(X: FpMatrix, Y: FpMatrix) -> FpMatrix:
    X._check_mod(Y)
    if X.cols != Y.rows:
        raise DimensionMismatch(f"cannot multiply {X.shape} by {Y.shape}")
    # entries < p and p is small, so int64 accumulation cannot overflow
    return FpMatrix(X.data @ Y.data, X.p)


def rref(data: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an integer array mod p, with pivot columns."""
    A = np.array(data, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for col in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, col])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, col]), -1, p)) % p
        others = np.nonzero(A[:, col])[0]
        for i in others:
            if i != r:
                A[i] = (A[i] - A[i, col] * A[r]) % p
        pivots.append(col)
        r += 1
    return A, pivots


def rank(X: FpMatrix) -> int:
    if X.rows == 0 or X.cols == 0:
        return 0
    return len(rref(X.data, X.p)[1])


def mat_inv(X: FpMatrix) -> FpMatrix:
    if not X.is_square():
        raise DimensionMismatch(f"cannot invert non-square {X.shape}")
    k = X.rows
    aug = np.concatenate([X.data, np.eye(k, dtype=np.int64)], axis=1)
    R, pivots = rref(aug, X.p)
    if pivots[:k] != list(range(k)):
        raise SingularMatrix(f"matrix of rank {len([c for c in pivots if c < k])} < {k} is singular")
    return FpMatrix(R[:, k:], X.p)


def nullspace(X: FpMatrix) -> list[np.ndarray]:
    """Basis of the column kernel {z : X z = 0}, as 1-d arrays."""
    R, pivots = rref(X.data, X.p) if X.rows else (X.data, [])
    free = [c for c in range(X.cols) if c not in pivots]
    basis = []
    for f in free:
        z = np.zeros(X.cols, dtype=np.int64)
        z[f] = 1
        for i, pc in enumerate(pivots):
            z[pc] = (-R[i, f]) % X.p
        basis.append(z)
    return basis


@dataclass(frozen=True)
class AffineSpace:
    """The solution set ``particular + span(homogeneous)``."""

    particular: FpMatrix
    homogeneous: tuple[FpMatrix, ...]

    @property
    def dimension(self) -> int:
        return len(self.homogeneous)

    @property
    def size(self) -> int:
        return self.particular.p ** self.dimension

    def point(self, coeffs: Sequence[int]) -> FpMatrix:
        acc = self.particular.data.copy()
        for c, h in zip(coeffs, self.homogeneous):
            acc = acc + int(c) * h.data
        return FpMatrix(acc, self.particular.p)

    def __iter__(self) -> Iterator[FpMatrix]:
        p = self.particular.p
        for coeffs in itertools.product(range(p), repeat=self.dimension):
            yield self.point(coeffs)

    def contains(self, X: FpMatrix) -> bool:
        if X.shape != self.particular.shape:
            return False
        if not self.homogeneous:
            return X == self.particular
        diff = (X - self.particular).data.reshape(-1)
        H = np.stack([h.data.reshape(-1) for h in self.homogeneous], axis=1)
        p = self.particular.p
        return rank(FpMatrix(np.column_stack([H, diff]), p)) == rank(FpMatrix(H, p))


def solve_affine(D: FpMatrix, R: FpMatrix) -> AffineSpace:
    """All X with ``D @ X == R``; raises Infeasible if there are none."""
    D._check_mod(R)
    if D.rows != R.rows:
        raise DimensionMismatch(f"D has {D.rows} rows but R has {R.rows}")
    p = D.p
    k, s = D.cols, R.cols
    aug = np.concatenate([D.data, R.data], axis=1)
    E, pivots = rref(aug, p) if D.rows else (aug, [])
    if any(c >= k for c in pivots):
        raise Infeasible("D X = R has no solution")
    X0 = np.zeros((k, s), dtype=np.int64)
    for i, pc in enumerate(pivots):
        X0[pc] = E[i, k:]
    homog = []
    for z in nullspace(D):
        for col in range(s):
            Z = np.zeros((k, s), dtype=np.int64)
            Z[:, col] = z
            homog.append(FpMatrix(Z, p))
    return AffineSpace(FpMatrix(X0, p), tuple(homog))


def gl_order(k: int, p: int) -> int:
    if k < 0:
        raise ValueError("k must be non-negative")
    q = p ** k
    out = 1
    for i in range(k):
        out *= q - p ** i
    return out


def reduce_to_I0(D: FpMatrix) -> tuple[FpMatrix, FpMatrix]:
    """Invertible U, V with ``U @ D @ V == [I | 0]`` for D of full row rank."""
    n, m = D.shape
    p = D.p
    _, pivots = rref(D.data, p) if n else (None, [])
    if len(pivots) != n:
        raise NotFullRank(f"D has rank {len(pivots)} < {n} rows")
    order = pivots + [c for c in range(m) if c not in pivots]
    P = np.zeros((m, m), dtype=np.int64)
    for new, old in enumerate(order):
        P[old, new] = 1
    DP = D.data @ P % p
    U = mat_inv(FpMatrix(DP[:, :n], p))
    X = (U.data @ DP[:, n:]) % p
    shear = np.eye(m, dtype=np.int64)
    shear[:n, n:] = -X
    V = FpMatrix(P @ shear, p)
    return U, V


def enumerate_matrices(rows: int, cols: int, p: int) -> np.ndarray:
    """All p**(rows*cols) matrices as an array of shape (N, rows, cols), lexicographic."""
    k = rows * cols
    idx = np.arange(p ** k, dtype=np.int64)
    digits = np.empty((idx.size, k), dtype=np.int64)
    for pos in range(k - 1, -1, -1):
        digits[:, pos] = idx % p
        idx //= p
    return digits.reshape(-1, rows, cols)


def enumerate_gl(k: int, p: int) -> np.ndarray:
    """All invertible k x k matrices, lexicographic, shape (gl_order(k, p), k, k)."""
    from . import kernels

    mats = enumerate_matrices(k, k, p)
    return mats[kernels.batch_invertible(mats, p)] if k else mats


def random_matrix(rng: np.random.Generator, rows: int, cols: int, p: int) -> FpMatrix:
    return FpMatrix(rng.integers(0, p, size=(rows, cols)), p)


def random_invertible(rng: np.random.Generator, k: int, p: int) -> FpMatrix:
    while True:
        X = random_matrix(rng, k, k, p)
        if k == 0 or rank(X) == k:
            return X

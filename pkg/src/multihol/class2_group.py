"""Class-two p-groups given by power data.

The group with generators x_1..x_n, all commutators central, and
``x_i^p = prod_{j<k} [x_j, x_k]^{D[i, (j,k)]}`` has order p^(n + C(n,2)).
Every element has a unique normal form

    x_1^{a_1} ... x_n^{a_n} * prod_{j<k} [x_j, x_k]^{c_(j,k)}

with a in F_p^n and c in F_p^m, m = C(n,2).  Commutator pairs are always
indexed lexicographically: (1,2), (1,3), ..., (1,n), (2,3), ..., (n-1,n).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import BoundExceeded, SpecError, SpecMismatch
from .ff_linalg import FpMatrix, is_odd_prime, rank

__all__ = [
    "PAIR_ORDER",
    "GroupSpec",
    "GroupElement",
    "load_spec",
    "identity",
    "generator",
    "central",
    "multiply",
    "inverse",
    "power",
    "commutator",
    "wedge",
    "pth_power_map",
    "wedge_matrix",
    "omega1_in_derived",
    "enumerate_elements",
    "element_arrays",
    "index_of",
    "element_at",
    "mul_arrays",
    "inv_arrays",
    "ENUM_BOUND",
    "TABLE_BOUND",
    "GroupTables",
    "group_tables",
]

PAIR_ORDER = "lexicographic: (1,2),(1,3),...,(1,n),(2,3),...,(n-1,n)"
ENUM_BOUND = 2_000_000


@dataclass(frozen=True, eq=True)
class GroupSpec:
    p: int
    n: int
    D: FpMatrix

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise SpecError(f"must be an odd prime, got {self.p!r}", "p")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
            raise SpecError(f"must be an integer >= 2, got {self.n!r}", "n")
        if not isinstance(self.D, FpMatrix):
            object.__setattr__(self, "D", FpMatrix(self.D, self.p))
        if self.D.p != self.p:
            raise SpecError(f"modulus {self.D.p} differs from p={self.p}", "D")
        if self.D.shape != (self.n, self.m):
            raise SpecError(f"expected shape ({self.n}, {self.m}), got {self.D.shape}", "D")

    @classmethod
    def zero(cls, p: int, n: int) -> "GroupSpec":
        return cls(p, n, FpMatrix.zeros(n, n * (n - 1) // 2, p))

    @property
    def m(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def order(self) -> int:
        return self.p ** (self.n + self.m)

    @cached_property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """0-based (j, k), j < k, in canonical order."""
        return tuple(combinations(range(self.n), 2))

    @cached_property
    def pair_index(self) -> dict[tuple[int, int], int]:
        return {jk: q for q, jk in enumerate(self.pairs)}

    @cached_property
    def _pj(self) -> np.ndarray:
        return np.array([j for j, _ in self.pairs], dtype=np.int64)

    @cached_property
    def _pk(self) -> np.ndarray:
        return np.array([k for _, k in self.pairs], dtype=np.int64)

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "D": self.D.tolist()}

    @classmethod
    def from_json(cls, doc) -> "GroupSpec":
        if isinstance(doc, (str, bytes)):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise SpecError(f"invalid JSON ({exc})") from exc
        if not isinstance(doc, dict):
            raise SpecError("top level must be an object with keys p, n, D")
        for key in ("p", "n", "D"):
            if key not in doc:
                raise SpecError("missing", key)
        p, n, D = doc["p"], doc["n"], doc["D"]
        if not isinstance(p, int) or isinstance(p, bool) or not is_odd_prime(p):
            raise SpecError(f"must be an odd prime, got {p!r}", "p")
        if not isinstance(n, int) or isinstance(n, bool) or n < 2:
            raise SpecError(f"must be an integer >= 2, got {n!r}", "n")
        m = n * (n - 1) // 2
        if not isinstance(D, list) or len(D) != n:
            raise SpecError(f"must be a list of {n} rows", "D")
        for i, row in enumerate(D):
            if not isinstance(row, list) or len(row) != m:
                raise SpecError(f"must be a list of {m} integers", f"D[{i}]")
            for j, v in enumerate(row):
                if not isinstance(v, int) or isinstance(v, bool):
                    raise SpecError(f"must be an integer, got {v!r}", f"D[{i}][{j}]")
        return cls(p, n, FpMatrix(np.array(D, dtype=np.int64).reshape(n, m), p))

    def __repr__(self):
        return f"GroupSpec(p={self.p}, n={self.n}, D={self.D.tolist()})"


def load_spec(path) -> GroupSpec:
    with open(path) as fh:
        return GroupSpec.from_json(fh.read())


@dataclass(frozen=True, order=True)
class GroupElement:
    a: tuple[int, ...]
    c: tuple[int, ...]

    def __repr__(self):
        return f"({list(self.a)}, {list(self.c)})"


def _check(spec: GroupSpec, *elems: GroupElement):
    for e in elems:
        if len(e.a) != spec.n or len(e.c) != spec.m:
            raise SpecMismatch(f"element {e!r} does not have shape (n={spec.n}, m={spec.m})")


def identity(spec: GroupSpec) -> GroupElement:
    return GroupElement((0,) * spec.n, (0,) * spec.m)


def generator(spec: GroupSpec, i: int) -> GroupElement:
    """x_{i+1} (0-based i)."""
    a = [0] * spec.n
    a[i] = 1
    return GroupElement(tuple(a), (0,) * spec.m)


def central(spec: GroupSpec, c: Iterable[int]) -> GroupElement:
    c = tuple(int(v) % spec.p for v in c)
    if len(c) != spec.m:
        raise SpecMismatch(f"central part must have length {spec.m}")
    return GroupElement((0,) * spec.n, c)


def wedge(spec: GroupSpec, u, v) -> np.ndarray:
    """(u ^ v)_(j,k) = u_j v_k - u_k v_j; broadcasts over leading axes."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    J, K = spec._pj, spec._pk
    return (u[..., J] * v[..., K] - u[..., K] * v[..., J]) % spec.p


def multiply(spec: GroupSpec, e1: GroupElement, e2: GroupElement) -> GroupElement:
    _check(spec, e1, e2)
    p, D = spec.p, spec.D.data
    a1, a2 = e1.a, e2.a
    c = [x + y for x, y in zip(e1.c, e2.c)]
    # moving x_j^{a2_j} left past x_k^{a1_k} (j < k) costs [x_j, x_k]^{-a1_k a2_j}
    for q, (j, k) in enumerate(spec.pairs):
        c[q] -= a1[k] * a2[j]
    a = []
    for i in range(spec.n):
        s = a1[i] + a2[i]
        if s >= p:
            s -= p
            for q in range(spec.m):
                c[q] += int(D[i, q])
        a.append(s)
    return GroupElement(tuple(a), tuple(v % p for v in c))


def inverse(spec: GroupSpec, e: GroupElement) -> GroupElement:
    _check(spec, e)
    p, D = spec.p, spec.D.data
    ai = tuple((-x) % p for x in e.a)
    # solve e * e^{-1} = 1 for the central part
    c = [-x for x in e.c]
    for q, (j, k) in enumerate(spec.pairs):
        c[q] += e.a[k] * ai[j]
    for i in range(spec.n):
        if e.a[i]:
            for q in range(spec.m):
                c[q] -= int(D[i, q])
    return GroupElement(ai, tuple(v % p for v in c))


def power(spec: GroupSpec, e: GroupElement, d: int) -> GroupElement:
    _check(spec, e)
    d = int(d) % (spec.p * spec.p)  # exp(G) divides p^2
    result = identity(spec)
    base = e
    while d:
        if d & 1:
            result = multiply(spec, result, base)
        base = multiply(spec, base, base)
        d >>= 1
    return result


def commutator(spec: GroupSpec, e1: GroupElement, e2: GroupElement) -> GroupElement:
    """[x, y] = x^-1 y^-1 x y, central with c = a1 ^ a2."""
    _check(spec, e1, e2)
    return GroupElement((0,) * spec.n, tuple(int(v) for v in wedge(spec, e1.a, e2.a)))


def pth_power_map(spec: GroupSpec, abar) -> np.ndarray:
    abar = np.asarray(abar, dtype=np.int64)
    return (abar @ spec.D.data) % spec.p


def wedge_matrix(spec: GroupSpec, A: FpMatrix) -> FpMatrix:
    """Matrix of the map induced by A on the exterior square: row (j,k) is A_j ^ A_k."""
    if A.shape != (spec.n, spec.n):
        raise SpecMismatch(f"expected a {spec.n}x{spec.n} matrix, got {A.shape}")
    rows = A.data[spec._pj]
    cols = A.data[spec._pk]
    return FpMatrix(wedge(spec, rows, cols), spec.p)


def omega1_in_derived(spec: GroupSpec) -> bool:
    return rank(spec.D) == spec.n


# ---------------------------------------------------------------------------
# bulk arithmetic on arrays of normal forms; a has shape (N, n), c (N, m)


def mul_arrays(spec: GroupSpec, a1, c1, a2, c2) -> tuple[np.ndarray, np.ndarray]:
    p = spec.p
    s = a1 + a2
    carry = (s >= p).astype(np.int64)
    c = c1 + c2 - a1[..., spec._pk] * a2[..., spec._pj] + carry @ spec.D.data
    return s % p, c % p


def inv_arrays(spec: GroupSpec, a, c) -> tuple[np.ndarray, np.ndarray]:
    p = spec.p
    ai = (-a) % p
    ci = -c + a[..., spec._pk] * ai[..., spec._pj] - (a != 0).astype(np.int64) @ spec.D.data
    return ai, ci % p


def _digits(idx: np.ndarray, p: int, k: int) -> np.ndarray:
    out = np.empty(idx.shape + (k,), dtype=np.int64)
    idx = idx.copy()
    for pos in range(k - 1, -1, -1):
        out[..., pos] = idx % p
        idx //= p
    return out


def element_arrays(spec: GroupSpec, bound: int = ENUM_BOUND) -> tuple[np.ndarray, np.ndarray]:
    """Normal forms of all elements, in index order, as (a, c) arrays."""
    if spec.order > bound:
        raise BoundExceeded(f"|G| = {spec.order} exceeds enumeration bound {bound}")
    idx = np.arange(spec.order, dtype=np.int64)
    pm = spec.p ** spec.m
    return _digits(idx // pm, spec.p, spec.n), _digits(idx % pm, spec.p, spec.m)


def index_of(spec: GroupSpec, a, c) -> np.ndarray | int:
    """Lexicographic index of normal form(s) (a, c); index 0 is the identity."""
    a = np.asarray(a, dtype=np.int64)
    c = np.asarray(c, dtype=np.int64)
    p = spec.p
    wa = p ** np.arange(spec.n - 1, -1, -1, dtype=np.int64)
    wc = p ** np.arange(spec.m - 1, -1, -1, dtype=np.int64)
    out = (a @ wa) * p ** spec.m + c @ wc
    return int(out) if out.ndim == 0 else out


def element_at(spec: GroupSpec, idx: int) -> GroupElement:
    pm = spec.p ** spec.m
    a = _digits(np.array(idx // pm), spec.p, spec.n)
    c = _digits(np.array(idx % pm), spec.p, spec.m)
    return GroupElement(tuple(int(x) for x in a), tuple(int(x) for x in c))


def enumerate_elements(spec: GroupSpec, bound: int = ENUM_BOUND) -> list[GroupElement]:
    A, C = element_arrays(spec, bound)
    return [GroupElement(tuple(a), tuple(c)) for a, c in zip(A.tolist(), C.tolist())]


# ---------------------------------------------------------------------------
# dense tables for small groups

TABLE_BOUND = 2000


@dataclass(frozen=True, eq=False)
class GroupTables:
    """Index-based arithmetic for |G| <= TABLE_BOUND.

    Element index = a_index * p^m + c_index.  ``cadd[i, j]`` adds two central
    parts given by index.
    """

    spec: GroupSpec
    a_all: np.ndarray
    c_all: np.ndarray
    mult: np.ndarray
    inv: np.ndarray
    cadd: np.ndarray

    @property
    def N(self) -> int:
        return self.mult.shape[0]

    @property
    def pm(self) -> int:
        return self.spec.p ** self.spec.m

    @property
    def pa(self) -> int:
        return self.spec.p ** self.spec.n

    def element(self, idx: int) -> GroupElement:
        return GroupElement(tuple(int(v) for v in self.a_all[idx]), tuple(int(v) for v in self.c_all[idx]))

    def index(self, e: GroupElement) -> int:
        return index_of(self.spec, e.a, e.c)


_TABLE_CACHE: dict = {}


def group_tables(spec: GroupSpec, bound: int = TABLE_BOUND) -> GroupTables:
    if spec.order > bound:
        raise BoundExceeded(f"|G| = {spec.order} exceeds table bound {bound}")
    hit = _TABLE_CACHE.get(spec)
    if hit is not None:
        return hit
    from . import kernels

    a_all, c_all = element_arrays(spec)
    mult = kernels.mult_table(a_all, c_all, spec.D.data, spec._pj, spec._pk, spec.p)
    inv = np.argmax(mult == 0, axis=1).astype(np.int32)
    pm = spec.p ** spec.m
    cd = _digits(np.arange(pm, dtype=np.int64), spec.p, spec.m)
    wc = spec.p ** np.arange(spec.m - 1, -1, -1, dtype=np.int64)
    cadd = (((cd[:, None, :] + cd[None, :, :]) % spec.p) @ wc).astype(np.int64)
    for arr in (a_all, c_all, mult, inv, cadd):
        arr.flags.writeable = False
    tabs = GroupTables(spec, a_all, c_all, mult, inv, cadd)
    if len(_TABLE_CACHE) > 32:
        _TABLE_CACHE.clear()
    _TABLE_CACHE[spec] = tabs
    return tabs

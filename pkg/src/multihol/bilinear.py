"""Bilinear forms G/G' x G/G' -> G' and the circle groups they define.

G'-values are written additively as m-vectors, so the product of two forms
is ``+`` here and square roots are multiplication by 2^-1 = (p+1)/2.
A form with values ``Delta`` defines ``x o y = x y Delta(x, y)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .class2_group import (
    GroupElement,
    GroupSpec,
    TABLE_BOUND,
    _check,
    _digits,
    group_tables,
    identity,
    index_of,
    inverse,
    mul_arrays,
    multiply,
    wedge,
    wedge_matrix,
)
from .errors import NotAntiSymmetric, SpecMismatch, TauSingular
from .ff_linalg import FpMatrix, rank

__all__ = [
    "BilinearForm",
    "FormTable",
    "SigmaEndo",
    "GammaMap",
    "CircleClass",
    "evaluate",
    "evaluate_many",
    "zero_form",
    "power_form",
    "sigma_form",
    "antisym_to_sigma",
    "sym_antisym_split",
    "circle_mul",
    "circle_mul_arrays",
    "circle_inverse",
    "circle_power",
    "circle_commutator",
    "gamma_of",
    "brace_compatibility_check",
    "classify_antisym",
    "equivariance_check",
    "isoclinism_witness",
    "delta_index_table",
    "form_values",
    "form_from_literal",
    "half",
]

EXHAUSTIVE_TRIPLES = 729


def half(p: int) -> int:
    return (p + 1) // 2


class BilinearForm:
    """Delta given on basis pairs: ``tensor[i, j] = Delta(x_i G', x_j G')``."""

    __slots__ = ("spec", "tensor")

    def __init__(self, spec: GroupSpec, tensor):
        T = np.array(tensor, dtype=np.int64)
        if T.shape != (spec.n, spec.n, spec.m):
            raise SpecMismatch(f"tensor must have shape {(spec.n, spec.n, spec.m)}, got {T.shape}")
        T %= spec.p
        T.flags.writeable = False
        self.spec = spec
        self.tensor = T

    def value(self, u, v) -> np.ndarray:
        return evaluate(self, u, v)

    def __add__(self, other: "BilinearForm") -> "BilinearForm":
        if other.spec != self.spec:
            raise SpecMismatch("forms belong to different groups")
        return BilinearForm(self.spec, self.tensor + other.tensor)

    def __neg__(self) -> "BilinearForm":
        return BilinearForm(self.spec, -self.tensor)

    def __sub__(self, other: "BilinearForm") -> "BilinearForm":
        return self + (-other)

    def scale(self, k: int) -> "BilinearForm":
        return BilinearForm(self.spec, self.tensor * (int(k) % self.spec.p))

    def transpose(self) -> "BilinearForm":
        return BilinearForm(self.spec, self.tensor.transpose(1, 0, 2))

    def is_zero(self) -> bool:
        return not self.tensor.any()

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.tensor, self.tensor.transpose(1, 0, 2)))

    def is_antisymmetric(self) -> bool:
        return bool(np.array_equal(self.tensor, (-self.tensor.transpose(1, 0, 2)) % self.spec.p))

    def act(self, A: FpMatrix, beta: FpMatrix) -> "BilinearForm":
        """``Delta^(A, beta)(x, y) = Delta(x A^-1, y A^-1) beta``."""
        Ai = A.inv().data
        T = np.einsum("ik,jl,klq,qr->ijr", Ai, Ai, self.tensor, beta.data)
        return BilinearForm(self.spec, T)

    def __eq__(self, other):
        if not isinstance(other, BilinearForm):
            return NotImplemented
        return self.spec == other.spec and bool(np.array_equal(self.tensor, other.tensor))

    def __hash__(self):
        return hash((self.spec, self.tensor.tobytes()))

    def to_json(self) -> dict:
        return {"kind": "tensor", "T": self.tensor.tolist()}

    def __repr__(self):
        return f"BilinearForm({self.tensor.tolist()})"


class FormTable:
    """An arbitrary (not necessarily bilinear) map G/G' x G/G' -> G'.

    ``values[i, j]`` is the m-vector assigned to the pair of a-indices (i, j).
    Used as a negative control for the checks that detect non-bilinearity.
    """

    __slots__ = ("spec", "values")

    def __init__(self, spec: GroupSpec, values):
        V = np.array(values, dtype=np.int64) % spec.p
        pa = spec.p ** spec.n
        if V.shape != (pa, pa, spec.m):
            raise SpecMismatch(f"values must have shape {(pa, pa, spec.m)}, got {V.shape}")
        V.flags.writeable = False
        self.spec = spec
        self.values = V

    def value(self, u, v) -> np.ndarray:
        p, n = self.spec.p, self.spec.n
        w = p ** np.arange(n - 1, -1, -1)
        return self.values[int(np.dot(np.asarray(u) % p, w)), int(np.dot(np.asarray(v) % p, w))]


def evaluate(form, u, v) -> np.ndarray:
    if isinstance(form, FormTable):
        return form.value(u, v)
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return np.einsum("i,j,ijq->q", u, v, form.tensor) % form.spec.p


def evaluate_many(form, a1, a2) -> np.ndarray:
    """Row-wise Delta(a1[r], a2[r]) for arrays of shape (N, n)."""
    spec = form.spec
    if isinstance(form, FormTable):
        w = spec.p ** np.arange(spec.n - 1, -1, -1, dtype=np.int64)
        return form.values[(a1 % spec.p) @ w, (a2 % spec.p) @ w]
    return np.einsum("ri,rj,ijq->rq", a1, a2, form.tensor) % spec.p


def form_values(form) -> np.ndarray:
    """Values on all pairs of a-vectors, shape (p^n, p^n, m)."""
    if isinstance(form, FormTable):
        return form.values
    spec = form.spec
    avecs = _digits(np.arange(spec.p ** spec.n, dtype=np.int64), spec.p, spec.n)
    return np.einsum("xi,yj,ijq->xyq", avecs, avecs, form.tensor) % spec.p


def delta_index_table(form) -> np.ndarray:
    """Values on all pairs of a-indices, encoded as central indices."""
    spec = form.spec
    wc = spec.p ** np.arange(spec.m - 1, -1, -1, dtype=np.int64)
    return form_values(form) @ wc


def zero_form(spec: GroupSpec) -> BilinearForm:
    return BilinearForm(spec, np.zeros((spec.n, spec.n, spec.m), dtype=np.int64))


def _basis_wedges(spec: GroupSpec) -> np.ndarray:
    eye = np.eye(spec.n, dtype=np.int64)
    return wedge(spec, eye[:, None, :], eye[None, :, :])


def power_form(spec: GroupSpec, c: int) -> BilinearForm:
    """Delta(x, y) = [x, y]^c."""
    return BilinearForm(spec, (int(c) % spec.p) * _basis_wedges(spec))


@dataclass(frozen=True, eq=False)
class SigmaEndo:
    """An endomorphism S of G' together with tau = 1 + 2S."""

    spec: GroupSpec
    S: FpMatrix
    tau: FpMatrix = field(default=None)

    def __post_init__(self):
        m, p = self.spec.m, self.spec.p
        if self.S.shape != (m, m) or self.S.p != p:
            raise SpecMismatch(f"S must be {m}x{m} over F_{p}")
        tau = FpMatrix.identity(m, p) + 2 * self.S
        if self.tau is None:
            object.__setattr__(self, "tau", tau)
        elif self.tau != tau:
            raise SpecMismatch("tau must equal I + 2S")

    @classmethod
    def from_tau(cls, spec: GroupSpec, tau: FpMatrix) -> "SigmaEndo":
        S = (tau - FpMatrix.identity(spec.m, spec.p)) * half(spec.p)
        return cls(spec, S)


def sigma_form(se: SigmaEndo) -> BilinearForm:
    """Delta(x, y) = [x, y]^sigma."""
    return BilinearForm(se.spec, _basis_wedges(se.spec) @ se.S.data)


def antisym_to_sigma(form: BilinearForm) -> SigmaEndo:
    if not form.is_antisymmetric():
        raise NotAntiSymmetric("form is not anti-symmetric")
    spec = form.spec
    S = np.stack([form.tensor[j, k] for j, k in spec.pairs]) if spec.m else np.zeros((0, 0))
    return SigmaEndo(spec, FpMatrix(S.reshape(spec.m, spec.m), spec.p))


def sym_antisym_split(form: BilinearForm) -> tuple[BilinearForm, BilinearForm]:
    h = half(form.spec.p)
    T, Tt = form.tensor, form.tensor.transpose(1, 0, 2)
    return BilinearForm(form.spec, (T + Tt) * h), BilinearForm(form.spec, (T - Tt) * h)


# ---------------------------------------------------------------------------
# the circle operation


def _add_c(spec: GroupSpec, e: GroupElement, delta) -> GroupElement:
    return GroupElement(e.a, tuple((x + int(d)) % spec.p for x, d in zip(e.c, delta)))


def circle_mul(form, e1: GroupElement, e2: GroupElement) -> GroupElement:
    spec = form.spec
    return _add_c(spec, multiply(spec, e1, e2), evaluate(form, e1.a, e2.a))


def circle_mul_arrays(form, a1, c1, a2, c2) -> tuple[np.ndarray, np.ndarray]:
    spec = form.spec
    a, c = mul_arrays(spec, a1, c1, a2, c2)
    return a, (c + evaluate_many(form, a1, a2)) % spec.p


def circle_inverse(form, e: GroupElement) -> GroupElement:
    """x^(-1) Delta(x, x); the inverse for the circle operation when Delta is bilinear."""
    spec = form.spec
    return _add_c(spec, inverse(spec, e), evaluate(form, e.a, e.a))


def circle_power(form, e: GroupElement, k: int) -> GroupElement:
    spec = form.spec
    if k < 0:
        e, k = circle_inverse(form, e), -k
    out = identity(spec)
    for _ in range(k):
        out = circle_mul(form, out, e)
    return out


def circle_commutator(form, e1: GroupElement, e2: GroupElement) -> GroupElement:
    """Closed form [x, y] Delta(x, y) Delta(y, x)^-1."""
    spec = form.spec
    _check(spec, e1, e2)
    c = wedge(spec, e1.a, e2.a) + evaluate(form, e1.a, e2.a) - evaluate(form, e2.a, e1.a)
    return GroupElement((0,) * spec.n, tuple(int(v) for v in c % spec.p))


# ---------------------------------------------------------------------------
# gamma functions and checks


@dataclass
class GammaMap:
    """x -> x Delta(x, y) for a fixed y, with a validity report."""

    form: object
    y: GroupElement
    is_bijective: bool
    is_automorphism: bool
    fixes_quotient: bool
    fixes_center: bool
    exhaustive: bool

    def __call__(self, x: GroupElement) -> GroupElement:
        return _add_c(self.form.spec, x, evaluate(self.form, x.a, self.y.a))

    @property
    def valid(self) -> bool:
        return self.is_bijective and self.is_automorphism and self.fixes_quotient and self.fixes_center


def gamma_of(form, y: GroupElement, samples: int = 2000, seed: int = 0) -> GammaMap:
    spec = form.spec
    if spec.order <= TABLE_BOUND:
        tabs = group_tables(spec)
        dvals = form_values(form)
        ya = int(np.dot(y.a, spec.p ** np.arange(spec.n - 1, -1, -1)))
        xa_idx = np.arange(tabs.N) // tabs.pm
        shift = dvals[xa_idx, ya]
        images = index_of(spec, tabs.a_all, (tabs.c_all + shift) % spec.p)
        bij = np.unique(images).size == tabs.N
        zero = np.zeros((tabs.pa, tabs.pa), dtype=np.int64)
        fails, _, _ = kernels.count_hom_failures(images.astype(np.int64), tabs.mult, zero, tabs.cadd, tabs.pm)
        fixes_q = True  # a-parts are untouched by construction
        central_idx = np.arange(tabs.pm)
        fixes_z = bool(np.array_equal(images[central_idx], central_idx))
        return GammaMap(form, y, bool(bij), fails == 0, fixes_q, fixes_z, True)
    rng = np.random.default_rng(seed)
    g = GammaMap(form, y, True, True, True, True, False)
    ok = True
    for _ in range(samples):
        x1 = _random_element(spec, rng)
        x2 = _random_element(spec, rng)
        if g(multiply(spec, x1, x2)) != multiply(spec, g(x1), g(x2)):
            ok = False
            break
    z = GroupElement((0,) * spec.n, tuple(int(v) for v in rng.integers(0, spec.p, spec.m)))
    g.is_automorphism = ok
    g.fixes_center = g(z) == z
    return g


def _random_element(spec: GroupSpec, rng) -> GroupElement:
    return GroupElement(
        tuple(int(v) for v in rng.integers(0, spec.p, spec.n)),
        tuple(int(v) for v in rng.integers(0, spec.p, spec.m)),
    )


def brace_compatibility_check(form, sample: int | None = None, seed: int = 0) -> bool:
    """(xy) o z == (x o z) z^-1 (y o z), exhaustively when |G| <= 729."""
    spec = form.spec
    if sample is None and spec.order <= EXHAUSTIVE_TRIPLES:
        tabs = group_tables(spec)
        circ = kernels.circle_table(tabs.mult, delta_index_table(form), tabs.cadd, tabs.pm)
        return kernels.count_brace_failures(tabs.mult, circ, tabs.inv) == 0
    rng = np.random.default_rng(seed)
    for _ in range(sample or 10_000):
        x, y, z = (_random_element(spec, rng) for _ in range(3))
        lhs = circle_mul(form, multiply(spec, x, y), z)
        rhs = multiply(spec, multiply(spec, circle_mul(form, x, z), inverse(spec, z)), circle_mul(form, y, z))
        if lhs != rhs:
            return False
    return True


@dataclass(frozen=True)
class CircleClass:
    abelian: bool
    derived_full: bool
    center_equal: bool


def classify_antisym(form: BilinearForm) -> CircleClass:
    """Predict commutativity, (G,o)' = G' and Z(G,o) = Z(G) from the form alone."""
    if not form.is_antisymmetric():
        raise NotAntiSymmetric("form is not anti-symmetric")
    spec = form.spec
    p, n, m = spec.p, spec.n, spec.m
    abelian = form == power_form(spec, (-half(p)) % p)
    B = (half(p) * _basis_wedges(spec) + form.tensor) % p
    span = np.array([B[i, j] for i, j in spec.pairs]).reshape(-1, m)
    derived_full = rank(FpMatrix(span, p)) == m
    radical = B.reshape(n, n * m)
    center_equal = rank(FpMatrix(radical, p)) == n
    return CircleClass(bool(abelian), bool(derived_full), bool(center_equal))


def _aut_matrix(spec: GroupSpec, beta) -> FpMatrix:
    if isinstance(beta, FpMatrix):
        return beta
    images = list(beta)
    if len(images) != spec.n:
        raise SpecMismatch(f"an automorphism needs {spec.n} generator images")
    return FpMatrix([list(g.a) for g in images], spec.p)


def equivariance_check(form: BilinearForm, auts: Sequence) -> bool:
    """Delta(x^b, y^b) == Delta(x, y)^b on basis pairs for every b in ``auts``.

    Each automorphism is given by its generator images (or directly by its
    matrix on G/G'); its action on G' is the induced exterior-square map.
    """
    spec = form.spec
    for beta in auts:
        B = _aut_matrix(spec, beta)
        Bh = wedge_matrix(spec, B).data
        lhs = np.einsum("ik,jl,klq->ijq", B.data, B.data, form.tensor) % spec.p
        rhs = (form.tensor @ Bh) % spec.p
        if not np.array_equal(lhs, rhs):
            return False
    return True


def isoclinism_witness(se: SigmaEndo) -> dict:
    """Check [x, y]_o == [x, y]^tau on generator pairs (phi = id, psi = tau)."""
    spec = se.spec
    if rank(se.tau) != spec.m:
        raise TauSingular("1 + 2 sigma is not invertible")
    form = sigma_form(se)
    gens = np.eye(spec.n, dtype=np.int64)
    failures = []
    for i in range(spec.n):
        for j in range(spec.n):
            xi = GroupElement(tuple(gens[i]), (0,) * spec.m)
            xj = GroupElement(tuple(gens[j]), (0,) * spec.m)
            lhs = np.array(circle_commutator(form, xi, xj).c, dtype=np.int64)
            rhs = (wedge(spec, gens[i], gens[j]) @ se.tau.data) % spec.p
            if not np.array_equal(lhs, rhs):
                failures.append((i, j))
    return {"passed": not failures, "phi": "identity", "psi": se.tau.tolist(), "failures": failures}


def form_from_literal(spec: GroupSpec, doc: dict) -> BilinearForm:
    """Parse {"kind": "power"|"sigma"|"tensor", ...}."""
    from .errors import InputError

    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputError("form literal must be an object with a 'kind' key", "kind")
    kind = doc["kind"]
    try:
        if kind == "power":
            return power_form(spec, int(doc["c"]))
        if kind == "sigma":
            return sigma_form(SigmaEndo(spec, FpMatrix(doc["S"], spec.p)))
        if kind == "tensor":
            return BilinearForm(spec, doc["T"])
    except KeyError as exc:
        raise InputError("missing", exc.args[0]) from exc
    except (SpecMismatch, ValueError, TypeError) as exc:
        raise InputError(str(exc), "S" if kind == "sigma" else "T") from exc
    raise InputError(f"unknown kind {kind!r}", "kind")

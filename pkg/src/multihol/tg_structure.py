"""Isomorphisms G -> (G, o), the restriction map and the group they form.

An isomorphism theta : G -> (G, o) induces a pair of matrices on G/G' and
on G'; for the anti-symmetric form with tau = 1 + 2 sigma it exists exactly
when A^-1 D wedge(A) = D tau^-1.  When D has full rank the solutions are
parametrized by triples (Q, A, M) after a change of bases D -> [I | 0].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from . import kernels
from .bilinear import (
    BilinearForm,
    SigmaEndo,
    antisym_to_sigma,
    circle_inverse,
    circle_mul,
    circle_mul_arrays,
    circle_power,
    delta_index_table,
    half,
    sigma_form,
    sym_antisym_split,
    zero_form,
)
from .class2_group import (
    GroupElement,
    GroupSpec,
    TABLE_BOUND,
    _digits,
    generator,
    group_tables,
    index_of,
    mul_arrays,
    wedge_matrix,
)
from .errors import (
    CriterionFails,
    HalfExcluded,
    Infeasible,
    NotFullRank,
    NotSymmetric,
    SingularInput,
    SingularT,
    SpecMismatch,
    VerificationFailed,
)
from .ff_linalg import (
    FpMatrix,
    enumerate_gl,
    gl_order,
    random_invertible,
    random_matrix,
    rank,
    reduce_to_I0,
    solve_affine,
)

__all__ = [
    "CriterionSolution",
    "TSolutions",
    "ResElement",
    "TGElement",
    "TGOrder",
    "IsoWitness",
    "StabilizerResult",
    "criterion_holds",
    "solve_T_for_A",
    "criterion_pairs_bruteforce",
    "reduced_frame",
    "res_identity",
    "res_semidirect_mul",
    "res_inverse",
    "res_block",
    "res_element_to_pair",
    "res_element_to_solution",
    "random_res_element",
    "res_group_order",
    "sym_part_order",
    "tg_order",
    "verify_witness",
    "sym_isomorphism",
    "theta_d",
    "build_isomorphism",
    "compose_witnesses",
    "isomorphism_for_form",
    "circle_presentation_matrix",
    "presentation_failures",
    "tg_identity",
    "compose_tg",
    "tg_inverse",
    "tg_from_witness",
    "induced_aut_stabilizer",
    "find_criterion_A",
]

DEFAULT_PAIRS = 10_000


def _square(spec: GroupSpec, X: FpMatrix, k: int, name: str):
    if X.shape != (k, k) or X.p != spec.p:
        raise SpecMismatch(f"{name} must be {k}x{k} over F_{spec.p}, got {X.shape}")


# ---------------------------------------------------------------------------
# the criterion


def criterion_holds(spec: GroupSpec, A: FpMatrix, T: FpMatrix) -> bool:
    _square(spec, A, spec.n, "A")
    _square(spec, T, spec.m, "T")
    if not A.is_invertible():
        raise SingularInput("A is singular")
    if not T.is_invertible():
        raise SingularInput("T is singular")
    # A^-1 D Ah == D T^-1  <=>  D Ah T == A D
    return spec.D @ wedge_matrix(spec, A) @ T == A @ spec.D


@dataclass(frozen=True, eq=False)
class CriterionSolution:
    """A matrix A on G/G' and tau = T on G' satisfying the criterion."""

    spec: GroupSpec
    A: FpMatrix
    T: FpMatrix

    def __post_init__(self):
        if not criterion_holds(self.spec, self.A, self.T):
            raise CriterionFails("A^-1 D wedge(A) != D T^-1")

    @property
    def sigma(self) -> SigmaEndo:
        return SigmaEndo.from_tau(self.spec, self.T)

    @property
    def beta(self) -> FpMatrix:
        return wedge_matrix(self.spec, self.A) @ self.T


class TSolutions:
    """All invertible T with ``criterion_holds(spec, A, T)``.

    Stored as the affine space of W = T^-1 solving ``D W = A^-1 D wedge(A)``.
    """

    def __init__(self, spec: GroupSpec, A: FpMatrix):
        _square(spec, A, spec.n, "A")
        if not A.is_invertible():
            raise SingularInput("A is singular")
        self.spec = spec
        self.A = A
        L = A.inv() @ spec.D @ wedge_matrix(spec, A)
        try:
            self.space = solve_affine(spec.D, L)
        except Infeasible:
            self.space = None

    def _inverses(self) -> np.ndarray:
        if self.space is None:
            return np.zeros((0, self.spec.m, self.spec.m), dtype=np.int64)
        sp, p = self.space, self.spec.p
        k = sp.dimension
        coeffs = _digits(np.arange(p ** k, dtype=np.int64), p, k)
        base = sp.particular.data
        if k:
            H = np.stack([h.data for h in sp.homogeneous])
            W = (base[None] + np.einsum("bk,kij->bij", coeffs, H)) % p
        else:
            W = base[None].copy()
        return W[kernels.batch_invertible(W, p)]

    def __iter__(self) -> Iterator[FpMatrix]:
        p = self.spec.p
        for W in self._inverses():
            yield FpMatrix(W, p).inv()

    def __len__(self) -> int:
        return int(self._inverses().shape[0])

    def __contains__(self, T: FpMatrix) -> bool:
        if self.space is None or not T.is_invertible():
            return False
        return self.space.contains(T.inv())

    def to_set(self) -> set[FpMatrix]:
        return set(self)


def solve_T_for_A(spec: GroupSpec, A: FpMatrix) -> TSolutions:
    return TSolutions(spec, A)


def criterion_pairs_bruteforce(spec: GroupSpec) -> list[tuple[FpMatrix, FpMatrix]]:
    """Every invertible (A, T) with D wedge(A) T == A D, by scanning GL_n x GL_m.

    No inverses and no equation solving are involved, so this serves as an
    independent check on ``solve_T_for_A``.
    """
    p, n, m = spec.p, spec.n, spec.m
    As = enumerate_gl(n, p)
    Ts = enumerate_gl(m, p)
    D = spec.D.data
    pj, pk = spec._pj, spec._pk
    Aj, Ak = As[:, pj, :], As[:, pk, :]
    W = Aj[:, :, pj] * Ak[:, :, pk] - Aj[:, :, pk] * Ak[:, :, pj]
    L = np.einsum("iq,bqr->bir", D, W) % p
    R = np.einsum("bil,lr->bir", As, D) % p
    hits = kernels.criterion_scan(L, R, Ts, p)
    return [(FpMatrix(As[i], p), FpMatrix(Ts[j], p)) for i, j in hits]


# ---------------------------------------------------------------------------
# full rank: (Q, A, M) coordinates


@dataclass(frozen=True)
class _Frame:
    U: FpMatrix
    V: FpMatrix
    Ui: FpMatrix
    Vi: FpMatrix


@lru_cache(maxsize=64)
def reduced_frame(spec: GroupSpec) -> _Frame:
    """U, V with U D V = [I | 0], plus their inverses."""
    if spec.m < spec.n:
        raise NotFullRank(f"rank(D) = n needs m >= n, got m = {spec.m} < n = {spec.n}")
    U, V = reduce_to_I0(spec.D)
    return _Frame(U, V, U.inv(), V.inv())


@dataclass(frozen=True, eq=False)
class ResElement:
    """(Q, A, M) with A on G/G' written in the reduced basis."""

    spec: GroupSpec
    Q: FpMatrix
    A: FpMatrix
    M: FpMatrix

    def __post_init__(self):
        reduced_frame(self.spec)
        n, k = self.spec.n, self.spec.m - self.spec.n
        if self.Q.shape != (k, n):
            raise SpecMismatch(f"Q must be {k}x{n}, got {self.Q.shape}")
        _square(self.spec, self.A, n, "A")
        _square(self.spec, self.M, k, "M")
        if not self.A.is_invertible():
            raise SingularInput("A is singular")
        if not self.M.is_invertible():
            raise SingularInput("M is singular")

    def __eq__(self, other):
        if not isinstance(other, ResElement):
            return NotImplemented
        return (self.spec, self.Q, self.A, self.M) == (other.spec, other.Q, other.A, other.M)

    def __hash__(self):
        return hash((self.spec, self.Q, self.A, self.M))


def res_identity(spec: GroupSpec) -> ResElement:
    n, k, p = spec.n, spec.m - spec.n, spec.p
    return ResElement(spec, FpMatrix.zeros(k, n, p), FpMatrix.identity(n, p), FpMatrix.identity(k, p))


def res_semidirect_mul(r1: ResElement, r2: ResElement) -> ResElement:
    if r1.spec != r2.spec:
        raise SpecMismatch("elements belong to different groups")
    Q = r2.M.inv() @ r1.Q + r2.Q @ r1.A.inv()
    return ResElement(r1.spec, Q, r1.A @ r2.A, r1.M @ r2.M)


def res_inverse(r: ResElement) -> ResElement:
    return ResElement(r.spec, -(r.M @ r.Q @ r.A), r.A.inv(), r.M.inv())


def res_block(r: ResElement) -> FpMatrix:
    """[[A, 0], [M Q A, M]]."""
    n, k, p = r.spec.n, r.spec.m - r.spec.n, r.spec.p
    out = np.zeros((n + k, n + k), dtype=np.int64)
    out[:n, :n] = r.A.data
    out[n:, :n] = (r.M @ r.Q @ r.A).data
    out[n:, n:] = r.M.data
    return FpMatrix(out, p)


def res_element_to_pair(r: ResElement) -> tuple[FpMatrix, FpMatrix]:
    """(A, beta) in the original bases, beta = wedge(A) T."""
    fr = reduced_frame(r.spec)
    A = fr.Ui @ r.A @ fr.U
    beta = fr.V @ res_block(r) @ fr.Vi
    return A, beta


def res_element_to_solution(r: ResElement) -> CriterionSolution:
    A, beta = res_element_to_pair(r)
    T = wedge_matrix(r.spec, A).inv() @ beta
    return CriterionSolution(r.spec, A, T)


def random_res_element(spec: GroupSpec, rng: np.random.Generator) -> ResElement:
    n, k, p = spec.n, spec.m - spec.n, spec.p
    return ResElement(spec, random_matrix(rng, k, n, p), random_invertible(rng, n, p), random_invertible(rng, k, p))


# ---------------------------------------------------------------------------
# orders


def _require_full_rank(spec: GroupSpec):
    if spec.m < spec.n or rank(spec.D) != spec.n:
        raise NotFullRank(f"D has rank {rank(spec.D)}, need {spec.n}")


def res_group_order(spec: GroupSpec) -> int:
    _require_full_rank(spec)
    n, k, p = spec.n, spec.m - spec.n, spec.p
    return p ** (k * n) * gl_order(n, p) * gl_order(k, p)


def sym_part_order(spec: GroupSpec) -> int:
    n = spec.n
    return spec.p ** (spec.m * (n * (n + 1) // 2))


@dataclass(frozen=True)
class TGOrder:
    value: int
    status: str  # "unconditional" or "conditional"
    sym_order: int
    res_order: int

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "status": self.status,
            "sym_order": str(self.sym_order),
            "res_order": str(self.res_order),
        }


def tg_order(spec: GroupSpec, aut_c_verified: bool = False) -> TGOrder:
    s, r = sym_part_order(spec), res_group_order(spec)
    return TGOrder(s * r, "unconditional" if aut_c_verified else "conditional", s, r)


# ---------------------------------------------------------------------------
# isomorphism witnesses


@dataclass(eq=False)
class IsoWitness:
    """A map theta : G -> (G, o) acting on batches of normal forms."""

    spec: GroupSpec
    form: object
    apply: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
    label: str = ""
    verified: bool = False
    exhaustive: bool = False
    pairs_checked: int = 0
    counterexample: tuple | None = None
    _table: np.ndarray | None = field(default=None, repr=False)

    def __call__(self, e: GroupElement) -> GroupElement:
        a, c = self.apply(np.array([e.a], dtype=np.int64), np.array([e.c], dtype=np.int64))
        return GroupElement(tuple(int(v) for v in a[0]), tuple(int(v) for v in c[0]))

    def table(self) -> np.ndarray:
        """Images of all elements by index (small groups only)."""
        if self._table is None:
            tabs = group_tables(self.spec)
            a, c = self.apply(tabs.a_all, tabs.c_all)
            self._table = np.asarray(index_of(self.spec, a, c), dtype=np.int64)
        return self._table

    def res(self) -> tuple[FpMatrix, FpMatrix]:
        """Induced matrices on G/G' and on G'."""
        spec = self.spec
        n, m, p = spec.n, spec.m, spec.p
        a, _ = self.apply(np.eye(n, dtype=np.int64), np.zeros((n, m), dtype=np.int64))
        _, c = self.apply(np.zeros((m, n), dtype=np.int64), np.eye(m, dtype=np.int64))
        return FpMatrix(a, p), FpMatrix(c, p)


def verify_witness(w: IsoWitness, pairs: int = DEFAULT_PAIRS, seed: int = 0, exhaustive: bool | None = None) -> IsoWitness:
    """Check (x y)^theta == x^theta o y^theta and bijectivity.

    All pairs are checked when |G| <= TABLE_BOUND (or when forced);
    otherwise ``pairs`` random pairs, with bijectivity read off the induced
    matrices (a homomorphism inducing isomorphisms on G/G' and G' is bijective).
    """
    spec = w.spec
    if exhaustive is None:
        exhaustive = spec.order <= TABLE_BOUND
    if exhaustive:
        tabs = group_tables(spec)
        theta = w.table()
        if np.unique(theta).size != tabs.N:
            w.verified, w.exhaustive, w.counterexample = False, True, ("not bijective",)
            return w
        fails, fx, fy = kernels.count_hom_failures(theta, tabs.mult, delta_index_table(w.form), tabs.cadd, tabs.pm)
        w.verified = fails == 0
        w.exhaustive = True
        w.pairs_checked = tabs.N * tabs.N
        w.counterexample = None if fails == 0 else (tabs.element(fx), tabs.element(fy))
        return w
    rng = np.random.default_rng(seed)
    p, n, m = spec.p, spec.n, spec.m
    xa, xc = rng.integers(0, p, (pairs, n)), rng.integers(0, p, (pairs, m))
    ya, yc = rng.integers(0, p, (pairs, n)), rng.integers(0, p, (pairs, m))
    la, lc = w.apply(*mul_arrays(spec, xa, xc, ya, yc))
    ua, uc = w.apply(xa, xc)
    va, vc = w.apply(ya, yc)
    ra, rc = circle_mul_arrays(w.form, ua, uc, va, vc)
    bad = np.nonzero((la != ra).any(axis=1) | (lc != rc).any(axis=1))[0]
    A, beta = w.res()
    w.exhaustive = False
    w.pairs_checked = pairs
    if bad.size:
        i = int(bad[0])
        w.verified = False
        w.counterexample = (
            GroupElement(tuple(int(v) for v in xa[i]), tuple(int(v) for v in xc[i])),
            GroupElement(tuple(int(v) for v in ya[i]), tuple(int(v) for v in yc[i])),
        )
    elif not (A.is_invertible() and beta.is_invertible()):
        w.verified, w.counterexample = False, ("not bijective",)
    else:
        w.verified, w.counterexample = True, None
    return w


def _require_verified(w: IsoWitness) -> IsoWitness:
    if not w.verified:
        raise VerificationFailed(f"{w.label}: isomorphism check failed at {w.counterexample}")
    return w


def sym_isomorphism(spec: GroupSpec, form: BilinearForm, pairs: int = DEFAULT_PAIRS, seed: int = 0) -> IsoWitness:
    """theta(x) = x * Delta(x, x)^(1/2) for symmetric Delta."""
    if not form.is_symmetric():
        raise NotSymmetric("form is not symmetric")
    h = half(spec.p)

    def apply(a, c):
        a = np.asarray(a, dtype=np.int64)
        sq = np.einsum("ri,rj,ijq->rq", a, a, form.tensor)
        return a % spec.p, (c + h * sq) % spec.p

    w = IsoWitness(spec, form, apply, "sym")
    return _require_verified(verify_witness(w, pairs, seed))


def _power_arrays(spec: GroupSpec, a, c, d: int):
    ra = np.zeros_like(a)
    rc = np.zeros_like(c)
    ba, bc = a, c
    while d:
        if d & 1:
            ra, rc = mul_arrays(spec, ra, rc, ba, bc)
        ba, bc = mul_arrays(spec, ba, bc, ba, bc)
        d >>= 1
    return ra, rc


def theta_d(spec: GroupSpec, c: int, pairs: int = DEFAULT_PAIRS, seed: int = 0) -> IsoWitness:
    """x -> x^d with d = (2c + 1)^-1 mod p, an isomorphism onto the circle group of [x, y]^c."""
    p = spec.p
    t = (2 * int(c) + 1) % p
    if t == 0:
        raise HalfExcluded(f"2c + 1 = 0 mod {p} for c = {c}")
    d = pow(t, -1, p)
    from .bilinear import power_form

    def apply(a, cc):
        return _power_arrays(spec, np.asarray(a, dtype=np.int64), np.asarray(cc, dtype=np.int64), d)

    w = IsoWitness(spec, power_form(spec, c), apply, f"theta_{d}")
    return _require_verified(verify_witness(w, pairs, seed))


def _generator_apply(spec: GroupSpec, form, gen_a: np.ndarray, central: np.ndarray):
    """theta(a, c) = prod_o (g_i)^{o a_i}, times c @ central, with g_i = (gen_a[i], 0)."""
    p, n, m = spec.p, spec.n, spec.m
    pw_a = np.zeros((n, p, n), dtype=np.int64)
    pw_c = np.zeros((n, p, m), dtype=np.int64)
    for i in range(n):
        g_a = gen_a[i:i + 1]
        g_c = np.zeros((1, m), dtype=np.int64)
        for k in range(1, p):
            a, c = circle_mul_arrays(form, pw_a[i, k - 1:k], pw_c[i, k - 1:k], g_a, g_c)
            pw_a[i, k], pw_c[i, k] = a[0], c[0]

    wa = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    avecs = _digits(np.arange(p ** n, dtype=np.int64), p, n)
    ta = np.zeros_like(avecs)
    tc = np.zeros((avecs.shape[0], m), dtype=np.int64)
    for i in range(n):
        ta, tc = circle_mul_arrays(form, ta, tc, pw_a[i, avecs[:, i]], pw_c[i, avecs[:, i]])

    def apply(a, c):
        k = (np.asarray(a, dtype=np.int64) % p) @ wa
        return ta[k], (tc[k] + np.asarray(c, dtype=np.int64) @ central) % p

    return apply


def build_isomorphism(spec: GroupSpec, sol: CriterionSolution, pairs: int = DEFAULT_PAIRS, seed: int = 0) -> IsoWitness:
    """The isomorphism G -> (G, o_sigma) with res = (A, wedge(A) T)."""
    if sol.spec != spec:
        raise SpecMismatch("solution belongs to a different group")
    form = sigma_form(sol.sigma)
    beta = sol.beta
    w = IsoWitness(spec, form, _generator_apply(spec, form, sol.A.data, beta.data), "criterion")
    _require_verified(verify_witness(w, pairs, seed))
    if w.res() != (sol.A, beta):
        raise VerificationFailed("induced matrices differ from (A, wedge(A) T)")
    return w


def compose_witnesses(w1: IsoWitness, w2: IsoWitness, pairs: int = DEFAULT_PAIRS, seed: int = 0) -> IsoWitness:
    """x -> (x^theta1)^theta2, checked against the form Delta1^res(theta2) + Delta2."""
    if w1.spec != w2.spec:
        raise SpecMismatch("witnesses belong to different groups")
    A, beta = w2.res()
    form = w1.form.act(A, beta) + w2.form

    def apply(a, c):
        return w2.apply(*w1.apply(a, c))

    return verify_witness(IsoWitness(w1.spec, form, apply, f"{w1.label}*{w2.label}"), pairs, seed)


def find_criterion_A(spec: GroupSpec, T: FpMatrix, budget: int = 10**7, limit: int | None = None) -> list[FpMatrix]:
    """Invertible A with A^-1 D wedge(A) = D T^-1, by scanning up to ``budget`` matrices."""
    p, n = spec.p, spec.n
    total = p ** (n * n)
    Dp = (spec.D @ T.inv()).data
    hits = kernels.stabilizer_scan(spec.D.data, Dp, spec._pj, spec._pk, p, 0, min(total, budget))
    if limit is not None:
        hits = hits[:limit]
    weights = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    return [FpMatrix(((int(h) // weights) % p).reshape(n, n), p) for h in hits]


def isomorphism_for_form(form: BilinearForm, budget: int = 10**7, pairs: int = DEFAULT_PAIRS, seed: int = 0) -> IsoWitness:
    """An isomorphism G -> (G, o_Delta) for a bilinear Delta, if the criterion admits one.

    The anti-symmetric part fixes tau; a matching A is searched for, and the
    symmetric part is absorbed by a second witness composed in front.
    """
    spec = form.spec
    sym, anti = sym_antisym_split(form)
    se = antisym_to_sigma(anti)
    if not se.tau.is_invertible():
        raise SingularT("1 + 2 sigma is singular; no isomorphism exists")
    found = find_criterion_A(spec, se.tau, budget, limit=1)
    if not found:
        raise CriterionFails("no A satisfies the criterion for this tau within budget")
    w2 = build_isomorphism(spec, CriterionSolution(spec, found[0], se.tau), pairs, seed)
    A, beta = w2.res()
    w1 = sym_isomorphism(spec, sym.act(A.inv(), beta.inv()), pairs, seed)
    return _require_verified(compose_witnesses(w1, w2, pairs, seed))


# ---------------------------------------------------------------------------
# presentation of the circle group


def _circle_comm(form, x: GroupElement, y: GroupElement) -> GroupElement:
    # x^-1 o y^-1 o x o y, evaluated step by step
    out = circle_mul(form, circle_inverse(form, x), circle_inverse(form, y))
    return circle_mul(form, circle_mul(form, out, x), y)


def presentation_failures(spec: GroupSpec, T: FpMatrix, Dc: FpMatrix) -> list[int]:
    """Generators i whose relation x_i^{o p} = prod [x_j, x_k]_o^{Dc[i, (j,k)]} fails in (G, o_sigma)."""
    form = sigma_form(SigmaEndo.from_tau(spec, T))
    gens = [generator(spec, i) for i in range(spec.n)]
    comms = [_circle_comm(form, gens[j], gens[k]) for j, k in spec.pairs]
    bad = []
    for i, g in enumerate(gens):
        lhs = circle_power(form, g, spec.p)
        rhs = GroupElement((0,) * spec.n, (0,) * spec.m)
        for q, cm in enumerate(comms):
            rhs = circle_mul(form, rhs, circle_power(form, cm, int(Dc.data[i, q])))
        if lhs != rhs:
            bad.append(i)
    return bad


def circle_presentation_matrix(spec: GroupSpec, T: FpMatrix, check: bool = True) -> FpMatrix:
    """D o = D T^-1, the power matrix of (G, o_sigma) on the images of the generators."""
    _square(spec, T, spec.m, "T")
    if not T.is_invertible():
        raise SingularT("T is singular")
    Dc = spec.D @ T.inv()
    if check:
        bad = presentation_failures(spec, T, Dc)
        if bad:
            raise VerificationFailed(f"power relations fail for generators {bad}")
    return Dc


# ---------------------------------------------------------------------------
# elements of T(G): symmetric part plus restriction


@dataclass(frozen=True, eq=False)
class TGElement:
    sym: BilinearForm
    A: FpMatrix
    beta: FpMatrix

    def __post_init__(self):
        spec = self.sym.spec
        if not self.sym.is_symmetric():
            raise NotSymmetric("sym part must be symmetric")
        Ah = wedge_matrix(spec, self.A)
        if not (self.A.is_invertible() and self.beta.is_invertible()):
            raise SingularInput("res matrices must be invertible")
        if not criterion_holds(spec, self.A, Ah.inv() @ self.beta):
            raise CriterionFails("res part does not come from a criterion solution")

    @property
    def spec(self) -> GroupSpec:
        return self.sym.spec

    @property
    def res_part(self) -> tuple[FpMatrix, FpMatrix]:
        return self.A, self.beta

    @property
    def T(self) -> FpMatrix:
        return wedge_matrix(self.spec, self.A).inv() @ self.beta

    def form(self) -> BilinearForm:
        """The form of the circle group this element represents."""
        return self.sym + sigma_form(SigmaEndo.from_tau(self.spec, self.T))

    def __eq__(self, other):
        if not isinstance(other, TGElement):
            return NotImplemented
        return (self.sym, self.A, self.beta) == (other.sym, other.A, other.beta)

    def __hash__(self):
        return hash((self.sym, self.A, self.beta))


def tg_identity(spec: GroupSpec) -> TGElement:
    return TGElement(zero_form(spec), FpMatrix.identity(spec.n, spec.p), FpMatrix.identity(spec.m, spec.p))


def compose_tg(t1: TGElement, t2: TGElement) -> TGElement:
    if t1.spec != t2.spec:
        raise SpecMismatch("elements belong to different groups")
    return TGElement(t1.sym.act(t2.A, t2.beta) + t2.sym, t1.A @ t2.A, t1.beta @ t2.beta)


def tg_inverse(t: TGElement) -> TGElement:
    Ai, bi = t.A.inv(), t.beta.inv()
    return TGElement(-t.sym.act(Ai, bi), Ai, bi)


def tg_from_witness(w: IsoWitness) -> TGElement:
    sym, _ = sym_antisym_split(w.form)
    A, beta = w.res()
    return TGElement(sym, A, beta)


# ---------------------------------------------------------------------------
# automorphisms of G/G' that lift


@dataclass(frozen=True)
class StabilizerResult:
    status: str  # "exhaustive" or "unknown"
    matrices: tuple[FpMatrix, ...]
    searched: int

    @property
    def certifies_aut_c(self) -> bool:
        """True when the scan was complete and only the identity lifts."""
        if self.status != "exhaustive" or len(self.matrices) != 1:
            return False
        M = self.matrices[0]
        return M == FpMatrix.identity(M.rows, M.p)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "count": len(self.matrices),
            "searched": self.searched,
            "certifies_aut_c": self.certifies_aut_c,
            "matrices": [M.tolist() for M in self.matrices[:16]],
        }


def induced_aut_stabilizer(spec: GroupSpec, budget: int = 10**7, samples: int = 20_000, seed: int = 0) -> StabilizerResult:
    """{A in GL_n : A^-1 D wedge(A) = D}: exhaustive when p^(n^2) <= budget, else sampled."""
    p, n = spec.p, spec.n
    total = p ** (n * n)
    if total <= budget:
        found = find_criterion_A(spec, FpMatrix.identity(spec.m, p), budget)
        return StabilizerResult("exhaustive", tuple(found), total)
    rng = np.random.default_rng(seed)
    D, pj, pk = spec.D.data, spec._pj, spec._pk
    found = {FpMatrix.identity(n, p)}
    for lo in range(0, samples, 4096):
        A = rng.integers(0, p, (min(4096, samples - lo), n, n))
        Aj, Ak = A[:, pj, :], A[:, pk, :]
        W = Aj[:, :, pj] * Ak[:, :, pk] - Aj[:, :, pk] * Ak[:, :, pj]
        ok = ((np.einsum("iq,bqr->bir", D, W) - np.einsum("bil,lr->bir", A, D)) % p == 0).all(axis=(1, 2))
        cand = A[ok]
        found.update(FpMatrix(X, p) for X in cand[kernels.batch_invertible(cand, p)])
    return StabilizerResult("unknown", tuple(sorted(found, key=lambda M: M.data.tobytes())), samples)

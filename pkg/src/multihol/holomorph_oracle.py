"""Brute-force ground truth on permutations of G for tiny groups.

Permutations are arrays of images over element indices and compose left to
right: ``(g * h)[x] = h[g[x]]``.  Everything here works from the
multiplication table alone; the only import from the bilinear side is the
form evaluation used to build the circle operation being tested.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from . import kernels
from .bilinear import BilinearForm, delta_index_table
from .class2_group import GroupSpec, TABLE_BOUND, group_tables
from .errors import BoundExceeded, SpecMismatch

__all__ = [
    "PermGroupSmall",
    "Holomorph",
    "SubgroupReport",
    "perm_mul",
    "perm_inv",
    "closure",
    "rho",
    "enumerate_automorphisms",
    "filter_aut_c_z",
    "aut_generators",
    "build_holomorph",
    "circle_table_of",
    "subgroup_from_form",
    "all_forms",
    "cross_check_correspondence",
    "conjugation_check",
    "circle_group_structure",
    "HOL_BOUND",
    "SEARCH_BOUND",
]

HOL_BOUND = 1_000_000
SEARCH_BOUND = 10**8
CROSS_GROUP_BOUND = 200
CROSS_FORM_BOUND = 1_000_000


def perm_mul(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    return h[g]


def perm_inv(g: np.ndarray) -> np.ndarray:
    out = np.empty_like(g)
    out[g] = np.arange(g.shape[-1], dtype=g.dtype)
    return out


def _keys(perms: np.ndarray) -> set[bytes]:
    perms = np.ascontiguousarray(perms, dtype=np.int32)
    return {row.tobytes() for row in perms}


@dataclass(eq=False)
class PermGroupSmall:
    generators: np.ndarray
    elements: np.ndarray
    _index: set | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return int(self.elements.shape[0])

    @property
    def degree(self) -> int:
        return int(self.elements.shape[1])

    def __contains__(self, perm) -> bool:
        if self._index is None:
            self._index = _keys(self.elements)
        return np.asarray(perm, dtype=np.int32).tobytes() in self._index

    def contains_all(self, perms: np.ndarray) -> np.ndarray:
        if self._index is None:
            self._index = _keys(self.elements)
        perms = np.ascontiguousarray(perms, dtype=np.int32)
        return np.array([row.tobytes() in self._index for row in perms], dtype=bool)


def closure(gens: np.ndarray, bound: int = HOL_BOUND) -> np.ndarray:
    """All products of ``gens`` (breadth first), as a (K, N) array."""
    gens = np.asarray(gens, dtype=np.int32)
    N = gens.shape[1]
    ident = np.arange(N, dtype=np.int32)
    seen = {ident.tobytes()}
    out = [ident]
    frontier = ident[None]
    while frontier.size:
        new = []
        for g in gens:
            cand = g[frontier]  # frontier * g
            for row in cand:
                k = row.tobytes()
                if k not in seen:
                    seen.add(k)
                    new.append(row)
        if len(seen) > bound:
            raise BoundExceeded(f"closure exceeds {bound} permutations")
        frontier = np.array(new, dtype=np.int32).reshape(-1, N)
        out.extend(new)
    return np.array(out, dtype=np.int32)


def rho(spec: GroupSpec) -> PermGroupSmall:
    """Right regular representation, x^rho(y) = x y."""
    tabs = group_tables(spec)
    elements = np.ascontiguousarray(tabs.mult.T, dtype=np.int32)
    gens = np.array([elements[tabs.index(_gen(spec, i))] for i in range(spec.n)], dtype=np.int32)
    return PermGroupSmall(gens, elements)


def _gen(spec, i):
    from .class2_group import generator

    return generator(spec, i)


# ---------------------------------------------------------------------------
# automorphisms


def _power_table(mult: np.ndarray, p: int) -> np.ndarray:
    """pw[x, k] = x^k for 0 <= k <= p."""
    N = mult.shape[0]
    pw = np.zeros((N, p + 1), dtype=np.int64)
    idx = np.arange(N)
    for k in range(1, p + 1):
        pw[:, k] = mult[pw[:, k - 1], idx]
    return pw


def enumerate_automorphisms(spec: GroupSpec, allow_large: bool = False, bound: int = HOL_BOUND) -> PermGroupSmall:
    """All automorphisms, by searching generator images.

    A tuple (y_1..y_n) is kept when the images have independent classes mod
    G' and satisfy y_i^p = prod [y_j, y_k]^D[i,(j,k)]; the induced map on
    normal forms is then checked to be a bijective homomorphism on the full table.
    """
    tabs = group_tables(spec)
    N, p, n, m = tabs.N, spec.p, spec.n, spec.m
    if N ** n > SEARCH_BOUND and not allow_large:
        raise BoundExceeded(f"search space |G|^n = {N ** n} exceeds {SEARCH_BOUND}")
    mult, inv = tabs.mult.astype(np.int64), tabs.inv.astype(np.int64)
    pw = _power_table(mult, p)
    comm = mult[mult[inv[:, None], inv[None, :]], mult]
    D = spec.D.data
    pairs = spec.pairs

    def relations_hold(prefix, last):
        ys = [np.full(last.shape, y, dtype=np.int64) for y in prefix] + [last]
        ok = np.ones(last.shape, dtype=bool)
        for i in range(n):
            rhs = np.zeros(last.shape, dtype=np.int64)
            for q, (j, k) in enumerate(pairs):
                rhs = mult[rhs, pw[comm[ys[j], ys[k]], D[i, q]]]
            ok &= pw[ys[i], p] == rhs
        return ok

    pa = p ** n
    pm = tabs.pm
    a_digits = tabs.a_all[::pm]  # a-vector of each a-index
    wa = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    found = []

    def search(prefix, span):
        # span: mask over a-indices of the span of the chosen a-vectors
        cand = np.nonzero(~span[np.arange(N) // pm])[0]
        if len(prefix) == n - 1:
            ok = relations_hold(prefix, cand)
            found.extend(tuple(prefix) + (int(y),) for y in cand[ok])
            if len(found) > bound:
                raise BoundExceeded(f"more than {bound} automorphisms")
            return
        for y in cand:
            a = a_digits[y // pm]
            grown = np.zeros(pa, dtype=bool)
            members = a_digits[span]
            for t in range(p):
                grown[((members + t * a) % p) @ wa] = True
            search(prefix + [int(y)], grown)

    start = np.zeros(pa, dtype=bool)
    start[0] = True
    search([], start)
    perms = []
    for imgs in found:
        # x_1^a_1 ... x_n^a_n prod [x_j, x_k]^c
        img = np.zeros(N, dtype=np.int64)
        for i in range(n):
            img = mult[img, pw[imgs[i], tabs.a_all[:, i]]]
        for q, (j, k) in enumerate(pairs):
            img = mult[img, pw[comm[imgs[j], imgs[k]], tabs.c_all[:, q]]]
        if np.unique(img).size != N:
            continue
        if not np.array_equal(img[mult], mult[img[:, None], img[None, :]]):
            continue
        perms.append(img.astype(np.int32))
    elements = np.array(perms, dtype=np.int32).reshape(-1, N)
    return PermGroupSmall(aut_generators(elements), elements)


def aut_generators(elements: np.ndarray, seed: int = 0) -> np.ndarray:
    """A small generating set, chosen greedily from a closed set of permutations."""
    rng = np.random.default_rng(seed)
    total = elements.shape[0]
    if total <= 1:
        return elements[:0]
    gens = []
    have: set = set()
    for i in rng.permutation(total):
        if elements[i].tobytes() in have:
            continue
        gens.append(elements[i])
        have = _keys(closure(np.array(gens), bound=total))
        if len(have) == total:
            break
    return np.array(gens, dtype=np.int32)


def _center_mask(mult: np.ndarray) -> np.ndarray:
    return (mult == mult.T).all(axis=1)


@lru_cache(maxsize=32)
def _group_center(spec: GroupSpec) -> np.ndarray:
    return _center_mask(group_tables(spec).mult)


def filter_aut_c_z(spec: GroupSpec, auts: PermGroupSmall) -> PermGroupSmall:
    """Automorphisms trivial on G/Z(G) and on Z(G)."""
    tabs = group_tables(spec)
    Z = _center_mask(tabs.mult)
    zidx = np.nonzero(Z)[0]
    E = auts.elements
    fixes_z = (E[:, zidx] == zidx[None, :]).all(axis=1)
    quot = Z[tabs.mult[tabs.inv[None, :], E]].all(axis=1)
    keep = E[fixes_z & quot]
    return PermGroupSmall(aut_generators(keep), keep)


# ---------------------------------------------------------------------------
# the holomorph, kept as rho(G) * Aut(G)


@dataclass(eq=False)
class Holomorph:
    spec: GroupSpec
    rho: PermGroupSmall
    aut: PermGroupSmall

    @property
    def order(self) -> int:
        return self.rho.order * self.aut.order

    @property
    def generators(self) -> np.ndarray:
        return np.vstack([self.rho.generators, self.aut.generators]).astype(np.int32)

    def __contains__(self, perm) -> bool:
        # perm = alpha rho(y) with y = 1^perm and alpha fixing 1
        perm = np.asarray(perm)
        tabs = group_tables(self.spec)
        y = int(perm[0])
        alpha = tabs.mult[perm, tabs.inv[y]]
        return alpha.astype(np.int32) in self.aut

    def elements(self, bound: int = HOL_BOUND) -> np.ndarray:
        if self.order > bound:
            raise BoundExceeded(f"|Hol(G)| = {self.order} exceeds {bound}")
        R = self.rho.elements
        return np.concatenate([R[:, a] for a in self.aut.elements]).astype(np.int32)

    def normalizes(self, perms: np.ndarray) -> bool:
        """Each generator conjugates the regular set ``perms`` into itself."""
        return all(_conj_closed(perms, g) for g in self.generators)


def _conj_closed(perms: np.ndarray, g: np.ndarray) -> bool:
    # perms is regular: the member sending 0 to w is unique
    by0 = np.empty_like(perms)
    by0[perms[:, 0]] = perms
    conj = g[perms[:, perm_inv(g)]]  # g^-1 n g
    return bool(np.array_equal(conj, by0[conj[:, 0]]))


def build_holomorph(spec: GroupSpec, materialize: bool = True, bound: int = HOL_BOUND, auts: PermGroupSmall | None = None) -> Holomorph:
    """Hol(G) = rho(G) Aut(G).

    With ``materialize`` the order must stay within ``bound``; otherwise the
    factorized form is returned and membership is decided through the factors.
    """
    auts = auts if auts is not None else enumerate_automorphisms(spec)
    hol = Holomorph(spec, rho(spec), auts)
    if materialize and hol.order > bound:
        raise BoundExceeded(f"|Hol(G)| = {hol.order} exceeds {bound}")
    return hol


# ---------------------------------------------------------------------------
# the subgroup attached to a form


def circle_table_of(form) -> np.ndarray:
    tabs = group_tables(form.spec)
    return np.asarray(kernels.circle_table(tabs.mult, delta_index_table(form), tabs.cadd, tabs.pm))


def _blocks(N: int, cells: int = 1 << 22):
    step = max(1, cells // (N * N))
    for lo in range(0, N, step):
        yield np.arange(lo, min(N, lo + step))


@dataclass
class SubgroupReport:
    is_subgroup: bool
    is_regular: bool
    is_normal_in_hol: bool
    gamma_valid: bool
    gamma_in_aut_cz: bool = False
    gamma_antihom: bool = False
    gamma_equivariant: bool = False

    @property
    def ok(self) -> bool:
        return self.is_subgroup and self.is_regular and self.is_normal_in_hol and self.gamma_valid

    def to_json(self) -> dict:
        return dict(self.__dict__, ok=self.ok)


def subgroup_from_form(spec: GroupSpec, form, hol: Holomorph | None = None, aut_cz: PermGroupSmall | None = None) -> tuple[np.ndarray, SubgroupReport]:
    """N = {gamma(x) rho(x)}: the permutations z -> z o x, with verdict flags."""
    if form.spec != spec:
        raise SpecMismatch("form belongs to a different group")
    tabs = group_tables(spec)
    N = tabs.N
    hol = hol if hol is not None else build_holomorph(spec, materialize=False)
    aut_cz = aut_cz if aut_cz is not None else filter_aut_c_z(spec, hol.aut)
    circ = circle_table_of(form)
    perms = np.ascontiguousarray(circ.T, dtype=np.int32)  # perms[x][z] = z o x
    srt = np.sort(perms, axis=1)
    bijective = bool((srt == np.arange(N)).all())
    regular = bijective and np.unique(perms[:, 0]).size == N
    if regular:
        fixers = np.nonzero(perms[:, 0] == 0)[0]
        regular = fixers.size == 1 and np.array_equal(perms[fixers[0]], np.arange(N))
    subgroup = False
    if regular:
        by0 = np.empty_like(perms)
        by0[perms[:, 0]] = perms
        subgroup = True
        for xb in _blocks(N):
            prod = np.take(perms[xb], perms, axis=1)  # [x, y] = n_y * n_x
            if not np.array_equal(prod, by0[prod[..., 0]]):
                subgroup = False
                break
    normal = regular and subgroup and hol.normalizes(perms)
    # gamma(x) = n_x rho(x)^-1
    gam = tabs.mult[perms, tabs.inv[:, None]].astype(np.int32)
    in_cz = bool(aut_cz.contains_all(gam).all())
    mult = tabs.mult
    antihom = True
    for xb in _blocks(N):
        # gamma(x y) == gamma(y) * gamma(x), i.e. z -> gamma(x)[gamma(y)[z]]
        if not np.array_equal(gam[mult[xb]], np.take(gam[xb], gam, axis=1)):
            antihom = False
            break
    equiv = True
    for b in hol.aut.generators:
        bi = perm_inv(b)
        # gamma(x^b) == b^-1 gamma(x) b
        if not np.array_equal(gam[b], b[gam[:, bi]]):
            equiv = False
            break
    report = SubgroupReport(subgroup, bool(regular), bool(normal), in_cz and antihom and equiv, in_cz, antihom, equiv)
    return perms, report


# ---------------------------------------------------------------------------
# the correspondence, both ways


def all_forms(spec: GroupSpec):
    n, m, p = spec.n, spec.m, spec.p
    for flat in product(range(p), repeat=n * n * m):
        yield BilinearForm(spec, np.array(flat, dtype=np.int64).reshape(n, n, m))


def _aut_matrices(spec: GroupSpec, auts: np.ndarray):
    """Matrices of each automorphism on G/G' (read off generator images) and on Z(G)."""
    tabs = group_tables(spec)
    n, m = spec.n, spec.m
    gen_idx = [tabs.index(_gen(spec, i)) for i in range(n)]
    cen_idx = [spec.p ** (m - 1 - q) for q in range(m)]
    B = tabs.a_all[auts[:, gen_idx]]  # (K, n, n)
    Z = tabs.c_all[auts[:, cen_idx]]  # (K, m, m); central elements have zero a-part
    return B, Z


def cross_check_correspondence(spec: GroupSpec, claimed: list | None = None) -> dict:
    """Equivariant forms versus normal regular subgroups with the gamma condition.

    Forward: every tensor is tested for equivariance under all of Aut(G), and
    each passing form must give a normal regular subgroup; failing forms must
    not.  Backward: every choice of gamma values in Aut_c n Aut_z on the
    generators x_i and the central basis is closed up, and the regular normal
    results are collected.  The two sets of subgroups must coincide.

    Forms in ``claimed`` are treated as if they had passed the filter; this is
    how corrupted inputs are injected as negative controls.
    """
    tabs = group_tables(spec, bound=CROSS_GROUP_BOUND)
    p, n, m, N = spec.p, spec.n, spec.m, tabs.N
    if p ** (n * n * m) > CROSS_FORM_BOUND:
        raise BoundExceeded(f"{p ** (n * n * m)} tensors exceed {CROSS_FORM_BOUND}")
    auts = enumerate_automorphisms(spec)
    hol = build_holomorph(spec, materialize=False, auts=auts)
    cz = filter_aut_c_z(spec, auts)
    B, Zm = _aut_matrices(spec, auts.elements)
    # BB[k] maps the flattened tensor to Delta(x_i^b, x_j^b)
    BB = np.einsum("kia,kjb->kijab", B, B).reshape(-1, n * n, n * n)

    forward: dict[bytes, BilinearForm] = {}
    mismatches = []
    scanned = equivariant = 0
    forms = [(f, False) for f in all_forms(spec)] + [(f, True) for f in claimed or []]
    for form, forced in forms:
        scanned += 1
        if forced:
            is_eq = True
        else:
            Tf = form.tensor.reshape(n * n, m)
            is_eq = bool(((BB @ Tf - Tf @ Zm) % p == 0).all())
        perms, rep = subgroup_from_form(spec, form, hol, cz)
        if is_eq:
            equivariant += not forced
            if not rep.ok:
                mismatches.append({"form": _form_json(form), "reason": "form fails to give a normal regular subgroup", "report": rep.to_json()})
                continue
            key = _canon(perms)
            if key in forward:
                mismatches.append({"form": _form_json(form), "reason": "two forms give one subgroup"})
            forward[key] = form
        elif rep.ok:
            mismatches.append({"form": _form_json(form), "reason": "non-equivariant form gives a valid subgroup", "report": rep.to_json()})

    backward = set()
    basis = [tabs.index(_gen(spec, i)) for i in range(n)]
    basis += [int(p ** (m - 1 - q)) for q in range(m)]
    K = cz.elements.astype(np.int64)
    mult = tabs.mult.astype(np.int64)
    for choice in product(range(K.shape[0]), repeat=len(basis)):
        gens = np.array([mult[K[c], x] for c, x in zip(choice, basis)], dtype=np.int32)
        ok, table = kernels.regular_closure(gens)
        if not ok:
            continue
        perms = np.asarray(table, dtype=np.int32)
        gam = mult[perms, tabs.inv[:, None]].astype(np.int32)
        if not cz.contains_all(gam).all():
            continue
        if not hol.normalizes(perms):
            continue
        backward.add(perms.tobytes())
    fwd = set(forward)
    if fwd != backward:
        mismatches.append({"reason": "subgroup sets differ", "only_forms": len(fwd - backward), "only_subgroups": len(backward - fwd)})
    return {
        "spec": spec.to_json(),
        "aut_order": auts.order,
        "aut_cz_order": cz.order,
        "hol_order": hol.order,
        "forms_scanned": scanned,
        "equivariant_forms": equivariant,
        "subgroups_from_forms": len(fwd),
        "subgroups_found": len(backward),
        "gamma_choices": K.shape[0] ** len(basis),
        "bijection": not mismatches,
        "mismatches": mismatches,
    }


def _canon(perms: np.ndarray) -> bytes:
    by0 = np.empty_like(perms)
    by0[perms[:, 0]] = perms
    return np.ascontiguousarray(by0, dtype=np.int32).tobytes()


def _form_json(form):
    if isinstance(form, BilinearForm):
        return form.to_json()
    return {"kind": "table", "values": np.asarray(form.values).tolist()}


def conjugation_check(spec: GroupSpec, theta: np.ndarray, form, hol: Holomorph | None = None) -> bool:
    """theta^-1 rho(G) theta == N as sets, for a bijection theta given as an index table."""
    tabs = group_tables(spec)
    theta = np.asarray(theta, dtype=np.int64)
    if np.unique(theta).size != tabs.N:
        return False
    ti = perm_inv(theta)
    R = tabs.mult.T.astype(np.int64)  # R[y][z] = z y
    conj = theta[R[:, ti]]  # theta^-1 rho(y) theta
    circ = circle_table_of(form)
    return _keys(conj) == _keys(circ.T)


def circle_group_structure(form) -> dict:
    """Commutativity, derived subgroup and center of (G, o), straight from its table.

    Returns flags comparable with ``classify_antisym``: whether (G, o) is
    abelian, whether its derived subgroup is all of G', and whether its
    center equals Z(G).
    """
    spec = form.spec
    tabs = group_tables(spec)
    circ = circle_table_of(form)
    center, seen = kernels.circle_stats(circ, tabs.pm)
    # subgroup of (G, o) generated by the commutator values
    members = np.zeros(tabs.N, dtype=bool)
    members[0] = True
    frontier = np.nonzero(seen)[0]
    gens = frontier
    while frontier.size:
        nxt = np.unique(circ[frontier][:, gens].ravel())
        nxt = nxt[~members[nxt]]
        members[nxt] = True
        frontier = nxt
    derived_set = np.arange(tabs.N) < tabs.pm  # the elements with zero a-part
    zg = _group_center(spec)
    return {
        "abelian": bool(center.all()),
        "derived_full": bool(np.array_equal(members, derived_set)),
        "center_equal": bool(np.array_equal(np.asarray(center), zg)),
        "derived_order": int(members.sum()),
        "center_order": int(np.asarray(center).sum()),
    }

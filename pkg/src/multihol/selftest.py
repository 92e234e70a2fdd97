"""Seeded property suites, runnable without pytest (``multihol selftest``)."""
from __future__ import annotations

import time
from math import comb

import numpy as np

from . import kernels
from .bilinear import (
    BilinearForm,
    SigmaEndo,
    brace_compatibility_check,
    classify_antisym,
    gamma_of,
    power_form,
    sigma_form,
)
from .class2_group import (
    GroupElement,
    GroupSpec,
    group_tables,
    inverse,
    mul_arrays,
    multiply,
    power,
    commutator,
)
from .ff_linalg import FpMatrix, random_invertible, random_matrix, rank, reduce_to_I0, solve_affine
from .tg_structure import (
    build_isomorphism,
    circle_presentation_matrix,
    criterion_holds,
    random_res_element,
    res_block,
    res_element_to_solution,
    res_identity,
    res_inverse,
    res_semidirect_mul,
    sym_isomorphism,
    theta_d,
)

__all__ = ["SUITES", "run_selftest", "full_rank_spec", "random_spec"]


def random_spec(rng, p: int, n: int, rank_wanted: int | None = None) -> GroupSpec:
    m = n * (n - 1) // 2
    while True:
        D = random_matrix(rng, n, m, p)
        if rank_wanted is None or rank(D) == rank_wanted:
            return GroupSpec(p, n, D)


def full_rank_spec(rng, p: int, n: int) -> GroupSpec:
    return random_spec(rng, p, n, n)


def _rand_elems(rng, spec: GroupSpec, k: int):
    return (rng.integers(0, spec.p, (k, spec.n)), rng.integers(0, spec.p, (k, spec.m)))


def suite_linalg(rng, pairs, exhaustive_small):
    fails = 0
    for _ in range(50):
        p = int(rng.choice([3, 5, 7]))
        k = int(rng.integers(1, 6))
        X = random_invertible(rng, k, p)
        fails += X @ X.inv() != FpMatrix.identity(k, p)
        D = random_matrix(rng, k, k + 2, p)
        R = D @ random_matrix(rng, k + 2, 2, p)
        sp = solve_affine(D, R)
        fails += D @ sp.particular != R
        if rank(D) == k:
            U, V = reduce_to_I0(D)
            E = np.hstack([np.eye(k, dtype=np.int64), np.zeros((k, 2), dtype=np.int64)])
            fails += U @ D @ V != FpMatrix(E, p)
    return fails == 0, {"failures": int(fails)}


def _assoc_failures(spec, a, b, c):
    ab = mul_arrays(spec, *a, *b)
    bc = mul_arrays(spec, *b, *c)
    l = mul_arrays(spec, *ab, *c)
    r = mul_arrays(spec, *a, *bc)
    return int(((l[0] != r[0]).any(axis=1) | (l[1] != r[1]).any(axis=1)).sum())


def _power_identity_failures(spec, x: GroupElement, y: GroupElement, d: int) -> int:
    lhs = power(spec, multiply(spec, x, y), d)
    rhs = multiply(spec, multiply(spec, power(spec, x, d), power(spec, y, d)), power(spec, commutator(spec, y, x), comb(d, 2)))
    return int(lhs != rhs)


def suite_group(rng, pairs, exhaustive_small):
    fails = 0
    detail = {}
    spec = random_spec(rng, 3, 4)
    a, b, c = (_rand_elems(rng, spec, pairs) for _ in range(3))
    fails += _assoc_failures(spec, a, b, c)
    for _ in range(min(pairs, 500)):
        x = GroupElement(tuple(int(v) for v in rng.integers(0, 3, 4)), tuple(int(v) for v in rng.integers(0, 3, 6)))
        y = GroupElement(tuple(int(v) for v in rng.integers(0, 3, 4)), tuple(int(v) for v in rng.integers(0, 3, 6)))
        fails += _power_identity_failures(spec, x, y, int(rng.integers(0, 20)))
        fails += multiply(spec, x, inverse(spec, x)) != GroupElement((0,) * 4, (0,) * 6)
    if exhaustive_small:
        for p in (3, 5):
            s = random_spec(rng, p, 2)
            t = group_tables(s)
            fails += kernels.count_assoc_failures(t.mult)
        detail["exhaustive"] = True
    detail["failures"] = int(fails)
    return fails == 0, detail


def suite_bilinear(rng, pairs, exhaustive_small):
    fails = 0
    spec = GroupSpec(3, 2, FpMatrix([[1], [0]], 3))
    f = power_form(spec, 2)
    fails += not brace_compatibility_check(f)
    fails += not gamma_of(f, GroupElement((1, 1), (0,))).valid
    sp = full_rank_spec(rng, 3, 4)
    tensor = rng.integers(0, 3, (4, 4, 6))
    fails += not brace_compatibility_check(BilinearForm(sp, tensor), sample=min(pairs, 2000), seed=int(rng.integers(1 << 30)))
    for c in range(3):
        cls = classify_antisym(power_form(GroupSpec.zero(3, 2), c))
        fails += cls.abelian != (c == 1)
    return fails == 0, {"failures": int(fails)}


def suite_res(rng, pairs, exhaustive_small):
    fails = 0
    spec = full_rank_spec(rng, 3, 4)
    e = res_identity(spec)
    for _ in range(100):
        r1, r2, r3 = (random_res_element(spec, rng) for _ in range(3))
        fails += res_semidirect_mul(res_semidirect_mul(r1, r2), r3) != res_semidirect_mul(r1, res_semidirect_mul(r2, r3))
        fails += res_semidirect_mul(r1, res_inverse(r1)) != e
        fails += res_block(res_semidirect_mul(r1, r2)) != res_block(r1) @ res_block(r2)
        sol = res_element_to_solution(r1)
        fails += not criterion_holds(spec, sol.A, sol.T)
    return fails == 0, {"failures": int(fails)}


def suite_witnesses(rng, pairs, exhaustive_small):
    fails = 0
    seed = int(rng.integers(1 << 30))
    spec = full_rank_spec(rng, 3, 4)
    sol = res_element_to_solution(random_res_element(spec, rng))
    fails += not build_isomorphism(spec, sol, pairs=pairs, seed=seed).verified
    fails += not theta_d(spec, 0, pairs=pairs, seed=seed).verified
    T = random_invertible(rng, spec.m, 3)
    circle_presentation_matrix(spec, T)
    if exhaustive_small:
        for s in (GroupSpec.zero(3, 2), GroupSpec(3, 2, FpMatrix([[1], [0]], 3)), GroupSpec.zero(5, 2)):
            for c in range(s.p):
                if (2 * c + 1) % s.p:
                    fails += not theta_d(s, c).verified
            sym = rng.integers(0, s.p, (2, 2, 1))
            fails += not sym_isomorphism(s, BilinearForm(s, sym + sym.transpose(1, 0, 2))).verified
    return fails == 0, {"failures": int(fails)}


def suite_oracle(rng, pairs, exhaustive_small):
    from .holomorph_oracle import cross_check_correspondence

    if not exhaustive_small:
        return True, {"skipped": "needs --exhaustive-small"}
    detail = {}
    ok = True
    for s in (GroupSpec.zero(3, 2), GroupSpec(3, 2, FpMatrix([[1], [0]], 3)), GroupSpec.zero(5, 2)):
        rep = cross_check_correspondence(s)
        detail[f"{s.p},{s.n},{s.D.tolist()}"] = rep["subgroups_found"]
        ok &= rep["bijection"]
    return ok, detail


SUITES = {
    "ff_linalg": suite_linalg,
    "class2_group": suite_group,
    "bilinear": suite_bilinear,
    "res": suite_res,
    "witnesses": suite_witnesses,
    "oracle": suite_oracle,
}


def run_selftest(seed: int = 0, pairs: int = 10_000, exhaustive_small: bool = False) -> dict:
    results = {}
    for name, fn in SUITES.items():
        rng = np.random.default_rng([seed, len(name)])
        t0 = time.perf_counter()
        try:
            ok, detail = fn(rng, pairs, exhaustive_small)
        except AssertionError as exc:
            ok, detail = False, {"error": str(exc)}
        results[name] = {"passed": bool(ok), "detail": detail, "seconds": round(time.perf_counter() - t0, 3)}
    return {
        "seed": seed,
        "pairs": pairs,
        "exhaustive_small": exhaustive_small,
        "backend": kernels.BACKEND,
        "passed": all(r["passed"] for r in results.values()),
        "suites": results,
    }

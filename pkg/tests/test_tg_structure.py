import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multihol.bilinear import BilinearForm, power_form
from multihol.class2_group import GroupSpec, load_spec, wedge_matrix
from multihol.errors import (
    CriterionFails,
    HalfExcluded,
    NotFullRank,
    NotSymmetric,
    SingularInput,
    SingularT,
    SpecMismatch,
)
from multihol.ff_linalg import FpMatrix, gl_order, random_invertible
from multihol.selftest import random_spec
from multihol.tg_structure import (
    CriterionSolution,
    IsoWitness,
    ResElement,
    TGElement,
    build_isomorphism,
    circle_presentation_matrix,
    compose_tg,
    compose_witnesses,
    criterion_holds,
    criterion_pairs_bruteforce,
    find_criterion_A,
    induced_aut_stabilizer,
    isomorphism_for_form,
    presentation_failures,
    random_res_element,
    reduced_frame,
    res_block,
    res_element_to_pair,
    res_element_to_solution,
    res_group_order,
    res_identity,
    res_inverse,
    res_semidirect_mul,
    solve_T_for_A,
    sym_isomorphism,
    sym_part_order,
    tg_from_witness,
    tg_identity,
    tg_inverse,
    tg_order,
    theta_d,
    verify_witness,
)

Z32 = GroupSpec.zero(3, 2)
D10 = GroupSpec(3, 2, FpMatrix([[1], [0]], 3))
FULL = GroupSpec(3, 4, FpMatrix([[1, 0, 0, 0, 1, 0], [0, 1, 0, 0, 2, 1], [0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1]], 3))


def I(k, p=3):
    return FpMatrix.identity(k, p)


def test_criterion_identity_and_errors():
    assert criterion_holds(FULL, I(4), I(6))
    with pytest.raises(SingularInput):
        criterion_holds(FULL, FpMatrix.zeros(4, 4, 3), I(6))
    with pytest.raises(CriterionFails):
        CriterionSolution(D10, I(2), FpMatrix([[2]], 3))


def test_criterion_zero_D_accepts_everything():
    rng = np.random.default_rng(0)
    for _ in range(10):
        assert criterion_holds(Z32, random_invertible(rng, 2, 3), random_invertible(rng, 1, 3))


def test_solve_T_matches_bruteforce_small():
    for spec in (Z32, D10, GroupSpec(5, 2, FpMatrix([[0], [3]], 5))):
        brute = {(A.data.tobytes(), T.data.tobytes()) for A, T in criterion_pairs_bruteforce(spec)}
        from multihol.ff_linalg import enumerate_gl

        solved = set()
        for A in enumerate_gl(spec.n, spec.p):
            Am = FpMatrix(A, spec.p)
            sols = solve_T_for_A(spec, Am)
            assert len(sols) == len(sols.to_set())
            solved |= {(Am.data.tobytes(), T.data.tobytes()) for T in sols}
        assert brute == solved


def test_tsolutions_membership():
    A = FpMatrix([[1, 1], [0, 1]], 3)
    sols = solve_T_for_A(D10, A)
    for T in sols:
        assert T in sols
        assert criterion_holds(D10, A, T)
    assert FpMatrix.zeros(1, 1, 3) not in sols


def test_orders():
    assert sym_part_order(FULL) == 3**60
    assert res_group_order(FULL) == 3**8 * gl_order(4, 3) * gl_order(2, 3)
    tg = tg_order(FULL)
    assert tg.value == 3**60 * 3**8 * 24261120 * 48
    assert tg.status == "conditional"
    assert tg_order(FULL, aut_c_verified=True).status == "unconditional"
    with pytest.raises(NotFullRank):
        res_group_order(Z32)


def test_reduced_frame():
    fr = reduced_frame(FULL)
    target = np.zeros((4, 6), dtype=np.int64)
    target[:, :4] = np.eye(4, dtype=np.int64)
    assert fr.U @ FULL.D @ fr.V == FpMatrix(target, 3)
    with pytest.raises(NotFullRank):
        reduced_frame(GroupSpec.zero(3, 3))


@given(st.integers(0, 1 << 30))
def test_res_group_axioms(seed):
    rng = np.random.default_rng(seed)
    r1, r2, r3 = (random_res_element(FULL, rng) for _ in range(3))
    e = res_identity(FULL)
    assert res_semidirect_mul(res_semidirect_mul(r1, r2), r3) == res_semidirect_mul(r1, res_semidirect_mul(r2, r3))
    assert res_semidirect_mul(r1, e) == r1 == res_semidirect_mul(e, r1)
    assert res_semidirect_mul(r1, res_inverse(r1)) == e
    assert res_block(res_semidirect_mul(r1, r2)) == res_block(r1) @ res_block(r2)


@given(st.integers(0, 1 << 30))
def test_res_embedding_is_homomorphism(seed):
    rng = np.random.default_rng(seed)
    r1, r2 = random_res_element(FULL, rng), random_res_element(FULL, rng)
    A1, b1 = res_element_to_pair(r1)
    A2, b2 = res_element_to_pair(r2)
    A, b = res_element_to_pair(res_semidirect_mul(r1, r2))
    assert (A, b) == (A1 @ A2, b1 @ b2)
    sol = res_element_to_solution(r1)
    assert sol.beta == b1


def test_res_element_validation():
    with pytest.raises(SingularInput):
        ResElement(FULL, FpMatrix.zeros(2, 4, 3), FpMatrix.zeros(4, 4, 3), I(2))
    with pytest.raises(SpecMismatch):
        ResElement(FULL, FpMatrix.zeros(4, 2, 3), I(4), I(2))
    with pytest.raises(NotFullRank):
        ResElement(Z32, FpMatrix.zeros(0, 2, 3), I(2), FpMatrix.zeros(0, 0, 3))


def test_theta_d_all_c():
    for spec in (Z32, D10):
        for c in (0, 2):
            w = theta_d(spec, c)
            assert w.verified and w.exhaustive
            A, beta = w.res()
            d = pow(2 * c + 1, -1, 3)
            assert A == FpMatrix.scalar(2, d, 3)
            assert beta == FpMatrix.scalar(1, d, 3)
    with pytest.raises(HalfExcluded):
        theta_d(Z32, 1)


def test_theta_d_sampled_on_large_group():
    w = theta_d(FULL, 0, pairs=2000)
    assert w.verified and not w.exhaustive


def test_sym_isomorphism():
    f = BilinearForm(D10, [[[1], [2]], [[2], [0]]])
    w = sym_isomorphism(D10, f)
    assert w.verified
    assert w.res() == (I(2), I(1))
    with pytest.raises(NotSymmetric):
        sym_isomorphism(D10, power_form(D10, 2))


def test_build_isomorphism_res():
    rng = np.random.default_rng(11)
    for _ in range(3):
        sol = res_element_to_solution(random_res_element(FULL, rng))
        w = build_isomorphism(FULL, sol, pairs=3000)
        assert w.verified
        assert w.res() == (sol.A, wedge_matrix(FULL, sol.A) @ sol.T)


def test_verify_witness_rejects_wrong_map():
    form = power_form(Z32, 2)
    w = IsoWitness(Z32, form, lambda a, c: (np.asarray(a) % 3, np.asarray(c) % 3), "identity")
    verify_witness(w)
    assert not w.verified and w.counterexample is not None
    w = IsoWitness(FULL, power_form(FULL, 2), lambda a, c: (np.asarray(a) % 3, np.asarray(c) % 3), "identity")
    verify_witness(w, pairs=500)
    assert not w.verified


def test_isomorphism_for_form():
    rng = np.random.default_rng(5)
    sym = rng.integers(0, 3, (2, 2, 1))
    f = power_form(D10, 2) + BilinearForm(D10, sym + sym.transpose(1, 0, 2))
    w = isomorphism_for_form(f)
    assert w.verified and w.form == f
    with pytest.raises(SingularT):
        isomorphism_for_form(power_form(Z32, 1))


def test_find_criterion_A():
    found = find_criterion_A(D10, I(1))
    assert all(criterion_holds(D10, A, I(1)) for A in found)
    assert I(2) in found


def test_compose_witnesses_law():
    w1 = theta_d(D10, 0)
    w2 = sym_isomorphism(D10, BilinearForm(D10, [[[0], [1]], [[1], [1]]]))
    w = compose_witnesses(w1, w2)
    assert w.verified
    assert tg_from_witness(w) == compose_tg(tg_from_witness(w1), tg_from_witness(w2))


def test_tg_group_laws():
    e = tg_identity(Z32)
    w = theta_d(Z32, 2)
    t = tg_from_witness(w)
    assert compose_tg(t, e) == t == compose_tg(e, t)
    assert compose_tg(t, tg_inverse(t)) == e
    s = tg_from_witness(sym_isomorphism(Z32, BilinearForm(Z32, [[[1], [0]], [[0], [2]]])))
    assert compose_tg(compose_tg(s, t), s) == compose_tg(s, compose_tg(t, s))
    assert t.form() == power_form(Z32, 2)


def test_tg_element_rejects_bad_res():
    with pytest.raises(CriterionFails):
        TGElement(BilinearForm(D10, np.zeros((2, 2, 1))), I(2), FpMatrix([[2]], 3))


def test_presentation_matrix():
    rng = np.random.default_rng(2)
    spec = random_spec(rng, 3, 3)
    T = random_invertible(rng, 3, 3)
    Dc = circle_presentation_matrix(spec, T)
    assert Dc == spec.D @ T.inv()
    wrong = Dc + FpMatrix(np.eye(3, dtype=int), 3)
    assert presentation_failures(spec, T, wrong)
    with pytest.raises(SingularT):
        circle_presentation_matrix(spec, FpMatrix.zeros(3, 3, 3))


def test_presentation_matches_sigma_form_group():
    # tau = 2 on G' for c = 2 at p = 3: D o = D * 2^-1
    T = FpMatrix.scalar(1, 5, 3)
    assert circle_presentation_matrix(D10, T) == FpMatrix([[2], [0]], 3)


def test_induced_aut_stabilizer_exhaustive_and_sampled():
    st_small = induced_aut_stabilizer(D10)
    assert st_small.status == "exhaustive"
    assert all(criterion_holds(D10, A, I(1)) for A in st_small.matrices)
    assert not st_small.certifies_aut_c or len(st_small.matrices) == 1
    big = induced_aut_stabilizer(FULL, samples=2000)
    assert big.status == "unknown" and not big.certifies_aut_c
    assert I(4) in big.matrices


def test_data_solution_files_verify():
    import json
    from pathlib import Path

    data = Path(__file__).resolve().parents[1] / "data"
    spec = load_spec(data / "g3_4_full.json")
    A = FpMatrix(json.loads((data / "g3_4_A.json").read_text()), 3)
    T = FpMatrix(json.loads((data / "g3_4_T.json").read_text()), 3)
    assert criterion_holds(spec, A, T)
    assert build_isomorphism(spec, CriterionSolution(spec, A, T), pairs=2000).verified

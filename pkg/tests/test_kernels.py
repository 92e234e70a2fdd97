"""The numba and numpy backends must agree on every kernel."""
import os
import subprocess
import sys

import numpy as np
import pytest

from multihol import kernels
from multihol.bilinear import FormTable, delta_index_table, form_values, power_form
from multihol.class2_group import GroupSpec, element_arrays, group_tables
from multihol.ff_linalg import FpMatrix, enumerate_gl
from multihol.selftest import random_spec
from multihol.tg_structure import theta_d

nb = pytest.importorskip("multihol.kernels._numba")
npk = kernels.get_backend("numpy")

SPECS = [GroupSpec.zero(3, 2), GroupSpec(3, 2, FpMatrix([[1], [0]], 3)), GroupSpec(5, 2, FpMatrix([[2], [4]], 5))]


@pytest.mark.parametrize("spec", SPECS)
def test_mult_table(spec):
    a, c = element_arrays(spec)
    args = (a, c, spec.D.data, spec._pj, spec._pk, spec.p)
    assert np.array_equal(nb.mult_table(*args), npk.mult_table(*args))


@pytest.mark.parametrize("spec", SPECS)
def test_circle_and_hom_kernels(spec):
    tabs = group_tables(spec)
    delta = delta_index_table(power_form(spec, 0))
    circ_nb = nb.circle_table(tabs.mult, delta, tabs.cadd, tabs.pm)
    assert np.array_equal(circ_nb, npk.circle_table(tabs.mult, delta, tabs.cadd, tabs.pm))
    theta = theta_d(spec, 0).table()
    assert nb.count_hom_failures(theta, tabs.mult, delta, tabs.cadd, tabs.pm) == (0, -1, -1)
    assert npk.count_hom_failures(theta, tabs.mult, delta, tabs.cadd, tabs.pm)[0] == 0
    bad = theta.copy()
    bad[[1, 2]] = bad[[2, 1]]
    r_nb = nb.count_hom_failures(bad, tabs.mult, delta, tabs.cadd, tabs.pm)
    r_np = npk.count_hom_failures(bad, tabs.mult, delta, tabs.cadd, tabs.pm)
    assert r_nb[0] == r_np[0] > 0
    assert tuple(r_nb) == tuple(int(v) for v in r_np)


@pytest.mark.parametrize("spec", SPECS)
def test_assoc_brace_stats(spec):
    tabs = group_tables(spec)
    assert nb.count_assoc_failures(tabs.mult) == npk.count_assoc_failures(tabs.mult) == 0
    broken = np.array(tabs.mult)
    broken[1, 1], broken[1, 2] = broken[1, 2], broken[1, 1]
    assert nb.count_assoc_failures(broken) == npk.count_assoc_failures(broken) > 0
    vals = form_values(power_form(spec, 1)).copy()
    vals[1, 1] = (vals[1, 1] + 1) % spec.p
    for form in (power_form(spec, 1), FormTable(spec, vals)):
        circ = np.asarray(nb.circle_table(tabs.mult, delta_index_table(form), tabs.cadd, tabs.pm))
        assert nb.count_brace_failures(tabs.mult, circ, tabs.inv) == npk.count_brace_failures(tabs.mult, circ, tabs.inv)
    circ = np.asarray(nb.circle_table(tabs.mult, delta_index_table(power_form(spec, 0)), tabs.cadd, tabs.pm))
    for a, b in zip(nb.circle_stats(circ, tabs.pm), npk.circle_stats(circ, tabs.pm)):
        assert np.array_equal(a, b)


def test_linear_algebra_kernels():
    rng = np.random.default_rng(0)
    mats = rng.integers(0, 3, (500, 3, 3))
    assert np.array_equal(nb.batch_invertible(mats, 3), npk.batch_invertible(mats, 3))
    spec = random_spec(rng, 3, 2, 1)
    As = enumerate_gl(2, 3)
    Ts = enumerate_gl(1, 3)
    L = rng.integers(0, 3, (len(As), 2, 1))
    R = (L @ Ts[1]) % 3
    assert np.array_equal(nb.criterion_scan(L, R, Ts, 3), npk.criterion_scan(L, R, Ts, 3))
    args = (spec.D.data, spec.D.data, spec._pj, spec._pk, 3, 0, 3**4)
    assert np.array_equal(np.sort(nb.stabilizer_scan(*args)), np.sort(npk.stabilizer_scan(*args)))


def test_regular_closure():
    spec = SPECS[1]
    tabs = group_tables(spec)
    R = np.ascontiguousarray(tabs.mult.T, dtype=np.int32)
    gens = R[[tabs.index(e) for e in (tabs.element(9), tabs.element(3))]]
    ok_nb, t_nb = nb.regular_closure(gens)
    ok_np, t_np = npk.regular_closure(gens)
    assert ok_nb == ok_np
    if ok_nb:
        assert np.array_equal(t_nb, t_np)
    ok_nb, _ = nb.regular_closure(R[[9, 1]])
    ok_np, _ = npk.regular_closure(R[[9, 1]])
    assert ok_nb == ok_np


def test_env_flag_selects_numpy():
    code = "from multihol import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, MULTIHOL_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env["MULTIHOL_DISABLE_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"


def test_get_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.get_backend("cuda")

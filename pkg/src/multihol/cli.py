"""multihol command line.

Exit codes: 0 ok, 1 a property or verification failed, 2 bad input,
3 a mathematical precondition does not hold, 4 a resource bound was hit.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .bilinear import antisym_to_sigma, form_from_literal, power_form, sym_antisym_split
from .class2_group import PAIR_ORDER, GroupSpec, load_spec, omega1_in_derived, wedge_matrix
from .errors import BoundExceeded, InputError, NotFullRank, PreconditionError, SpecError, VerificationFailed
from .ff_linalg import FpMatrix, rank

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_MATH, EXIT_BOUND = 0, 1, 2, 3, 4


def _load_matrix(path: str, spec: GroupSpec, name: str) -> FpMatrix:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON ({exc})", name) from exc
    arr = np.asarray(data)
    if arr.ndim != 2 or not np.issubdtype(arr.dtype, np.integer):
        raise InputError("must be a 2-d array of integers", name)
    return FpMatrix(arr, spec.p)


def _load_form(path_or_literal: str, spec: GroupSpec):
    text = path_or_literal
    if not text.lstrip().startswith("{"):
        with open(text) as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON ({exc})", "form") from exc
    return form_from_literal(spec, doc)


def analyze(spec: GroupSpec, budget: int = 10**7, seed: int = 0, samples: int = 4096) -> dict:
    from .tg_structure import induced_aut_stabilizer, res_group_order, sym_part_order, tg_order

    t0 = time.perf_counter()
    report = {
        "spec": spec.to_json(),
        "pair_order": PAIR_ORDER,
        "m": spec.m,
        "rank_D": rank(spec.D),
        "omega1_in_derived": omega1_in_derived(spec),
        "sym_part_order": sym_part_order(spec),
    }
    stab = induced_aut_stabilizer(spec, budget=budget, samples=samples, seed=seed)
    report["stabilizer"] = stab.to_json()
    try:
        report["res_group_order"] = res_group_order(spec)
        tg = tg_order(spec, aut_c_verified=stab.certifies_aut_c)
        report["tg_order"] = {"value": tg.value, "status": tg.status}
    except NotFullRank as exc:
        report["res_group_order"] = {"error": "NotFullRank", "message": str(exc)}
        report["tg_order"] = {"error": "NotFullRank", "message": str(exc)}
    report["seconds"] = round(time.perf_counter() - t0, 4)
    return report


def _witness_report(w, spec: GroupSpec, T: FpMatrix | None) -> dict:
    from .tg_structure import circle_presentation_matrix

    A, beta = w.res()
    out = {
        "witness": w.label,
        "verified": w.verified,
        "exhaustive": w.exhaustive,
        "pairs_checked": w.pairs_checked,
        "res_c": A.tolist(),
        "res_z": beta.tolist(),
    }
    if T is not None:
        out["tau"] = T.tolist()
        out["D_circ"] = circle_presentation_matrix(spec, T).tolist()
    return out


def verify(spec: GroupSpec, args) -> dict:
    from .tg_structure import CriterionSolution, build_isomorphism, isomorphism_for_form, theta_d

    p = spec.p
    if args.power_c is not None:
        w = theta_d(spec, args.power_c, pairs=args.pairs, seed=args.seed)
        T = FpMatrix.scalar(spec.m, 2 * args.power_c + 1, p)
        return {"mode": "power", "c": args.power_c, **_witness_report(w, spec, T)}
    if args.criterion:
        A = _load_matrix(args.criterion[0], spec, "A")
        T = _load_matrix(args.criterion[1], spec, "T")
        if A.shape != (spec.n, spec.n):
            raise InputError(f"must be {spec.n}x{spec.n}", "A")
        if T.shape != (spec.m, spec.m):
            raise InputError(f"must be {spec.m}x{spec.m}", "T")
        w = build_isomorphism(spec, CriterionSolution(spec, A, T), pairs=args.pairs, seed=args.seed)
        rep = _witness_report(w, spec, T)
        rep["res_z_equals_wedge_A_T"] = w.res()[1] == wedge_matrix(spec, A) @ T
        return {"mode": "criterion", **rep}
    form = _load_form(args.form, spec)
    w = isomorphism_for_form(form, budget=args.budget, pairs=args.pairs, seed=args.seed)
    _, anti = sym_antisym_split(form)
    return {"mode": "form", **_witness_report(w, spec, antisym_to_sigma(anti).tau)}


def oracle(spec: GroupSpec, inject_corrupt: bool = False) -> dict:
    from .bilinear import BilinearForm, FormTable, form_values
    from .holomorph_oracle import conjugation_check, cross_check_correspondence
    from .tg_structure import sym_isomorphism, theta_d

    claimed = []
    if inject_corrupt:
        vals = form_values(power_form(spec, 1)).copy()
        vals[1, 1] = (vals[1, 1] + 1) % spec.p
        claimed.append(FormTable(spec, vals))
    report = cross_check_correspondence(spec, claimed=claimed)
    conj = {}
    for c in range(spec.p):
        if (2 * c + 1) % spec.p:
            w = theta_d(spec, c)
            conj[f"theta_d c={c}"] = conjugation_check(spec, w.table(), w.form)
    sym = np.zeros((spec.n, spec.n, spec.m), dtype=np.int64)
    sym[0, 0, 0] = 1
    w = sym_isomorphism(spec, BilinearForm(spec, sym))
    conj["sym e11"] = conjugation_check(spec, w.table(), w.form)
    report["conjugation"] = conj
    report["passed"] = report["bijection"] and all(conj.values())
    return report


def _print_human(report: dict, indent: int = 0):
    pad = "  " * indent
    for key, val in report.items():
        if isinstance(val, dict):
            print(f"{pad}{key}:")
            _print_human(val, indent + 1)
        else:
            print(f"{pad}{key}: {val}")


def _emit(report: dict, as_json: bool):
    if as_json:
        print(json.dumps(report, indent=2, default=_json_default))
    else:
        _print_human(report)


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, FpMatrix):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multihol", description="Circle groups and T(G) for class-two p-groups given by power data.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized check")
    common.add_argument("--pairs", type=int, default=10_000, help="random pairs for sampled verification")
    common.add_argument("--budget", type=int, default=10**7, help="largest exhaustive matrix scan")
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", parents=[common], help="orders and the induced-automorphism scan")
    p_an.add_argument("spec")

    p_ver = sub.add_parser("verify", parents=[common], help="construct and verify an isomorphism G -> (G, o)")
    p_ver.add_argument("spec")
    mode = p_ver.add_mutually_exclusive_group(required=True)
    mode.add_argument("--power-c", type=int, help="theta_d for the form [x, y]^c")
    mode.add_argument("--form", help="form literal (JSON text or file)")
    mode.add_argument("--criterion", nargs=2, metavar=("A.json", "T.json"), help="matrices A and tau")

    p_or = sub.add_parser("oracle", parents=[common], help="brute-force correspondence check on a tiny group")
    p_or.add_argument("spec")
    p_or.add_argument("--inject-corrupt", action="store_true", help="add a corrupted form claimed to be valid")

    p_st = sub.add_parser("selftest", parents=[common], help="run the seeded property suites")
    p_st.add_argument("--exhaustive-small", action="store_true", help="add exhaustive (3,2) and (5,2) suites")
    return parser


def _error(kind: str, exc: Exception, as_json: bool):
    field = getattr(exc, "field", None)
    msg = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    if field:
        msg["field"] = field
    if as_json:
        print(json.dumps(msg))
    else:
        where = f" [{field}]" if field else ""
        print(f"error: {type(exc).__name__}{where}: {exc}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    as_json = args.json
    try:
        if args.command == "selftest":
            from .selftest import run_selftest

            report = run_selftest(seed=args.seed, pairs=args.pairs, exhaustive_small=args.exhaustive_small)
            _emit(report, as_json)
            return EXIT_OK if report["passed"] else EXIT_FAIL
        spec = load_spec(args.spec)
        if args.command == "analyze":
            _emit(analyze(spec, budget=args.budget, seed=args.seed), as_json)
            return EXIT_OK
        if args.command == "verify":
            report = verify(spec, args)
            _emit(report, as_json)
            return EXIT_OK if report["verified"] else EXIT_FAIL
        report = oracle(spec, inject_corrupt=args.inject_corrupt)
        _emit(report, as_json)
        if not report["passed"]:
            for mm in report["mismatches"][:3]:
                print(f"counterexample: {json.dumps(mm, default=_json_default)}", file=sys.stderr)
            return EXIT_FAIL
        return EXIT_OK
    except (InputError, SpecError) as exc:
        _error("input", exc, as_json)
        return EXIT_INPUT
    except OSError as exc:
        _error("input", exc, as_json)
        return EXIT_INPUT
    except PreconditionError as exc:
        _error("precondition", exc, as_json)
        return EXIT_MATH
    except BoundExceeded as exc:
        _error("bound", exc, as_json)
        return EXIT_BOUND
    except (VerificationFailed, AssertionError) as exc:
        _error("verification", exc, as_json)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

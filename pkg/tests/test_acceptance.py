"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""

import io
import json
import time
from fractions import Fraction

import numpy as np
import pytest

from bisymplectic import (PairTag, builtin_example, classify_pair, complex_kernel_check,
                          eta_symmetry_check, linalg, nijenhuis, rank_2form, recursion_operator,
                          triple_operators)
from bisymplectic.catalog import catalog_names
from bisymplectic.cli import main
from bisymplectic.documents import form_to_terms, shipped_path
from bisymplectic.recursion import eigenspace
from bisymplectic.triples import metric_hyperholomorphic

from conftest import ACCEPTANCE
from generators import expected_eigenspaces, random_nondegenerate_pair, random_symplectic_pair
from bisymplectic import Subspace

CASES = 1000


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def cli(*argv):
    out = io.StringIO()
    start = time.perf_counter()
    code = main([str(a) for a in argv], out)
    return code, json.loads(out.getvalue()), time.perf_counter() - start


def exact_matrix(rows):
    return linalg.as_exact([[Fraction(x) for x in row] for row in rows])


def test_criterion_01_dotti_fino():
    code, r, dt = cli("verify-example", "dotti-fino-8")
    ident = linalg.identity(8)
    squares = all(linalg.matrices_equal(a @ a, -ident)
                  for a in (exact_matrix(r["operators"][k]) for k in ("A1", "A2", "A3")))
    c = r["checks"]
    forms_ok = all(c[f"form{i}_{p}"] for i in (1, 2, 3) for p in ("closed", "nondegenerate"))
    ok = (code == 0 and forms_ok and squares and c["anticommute"] and c["metric_independent_of_i"]
          and r["inertia"] == [4, 4, 0] and dt < 1)
    record(1, ok, f"tag={r['tag']} signature={r['signature']} squares=-Id:{squares} {dt:.2f}s")


def test_criterion_02_nil3xr():
    code, r, dt = cli("verify-example", "nil3xR")
    c = r["checks"]
    ok = (code == 0 and r["tag"] == "Hypersymplectic" and c["metric_sign_chain"]
          and r["inertia"] == [2, 2, 0] and dt < 1)
    record(2, ok, f"tag={r['tag']} sign_chain={c['metric_sign_chain']} signature={r['signature']} {dt:.2f}s")


def test_criterion_03_holomorphic_symplectic_pair():
    code, r, dt = cli("verify-example", "hsp-8")
    c = r["checks"]
    ok = (code == 0 and r["tag"] == "HolomorphicSymplecticPair" and c["commute"]
          and r["eigenspace_dims"] == {"plus": 4, "minus": 4} and c["leaves_holomorphic_symplectic"]
          and dt < 1)
    record(3, ok, f"tag={r['tag']} dims={r['eigenspace_dims']} leaves={c['leaves_holomorphic_symplectic']} {dt:.2f}s")


def test_criterion_04_symplectic_triple():
    code, r, dt = cli("verify-example", "triple-6")
    w = builtin_example("triple-6").forms
    pairs = [(i, j) for i in range(3) for j in range(i + 1, 3)]
    all_pairs = all(classify_pair(w[i], w[j]).tag == PairTag.SYMPLECTIC_PAIR for i, j in pairs)
    ranks = sorted({rank_2form(w[i] + s * w[j]) for i, j in pairs for s in (1, -1)})
    # the literal clause: every w_i +- w_j of rank 4
    ok = (code == 0 and r["tag"] == "SymplecticTriple" and all_pairs and ranks == [4] and dt < 1)
    record(4, ok, f"tag={r['tag']} pairs_symplectic={all_pairs} ranks(w_i+-w_j)={ranks} {dt:.2f}s")


def test_criterion_05_kernel_property():
    rng = np.random.default_rng(20240505)
    failures = 0
    for case in range(CASES):
        n = (4, 6, 8)[case % 3]
        omega, eta, b, p = random_symplectic_pair(rng, n)
        c = classify_pair(omega, eta)
        plus, minus = expected_eigenspaces(b, p)
        good = (c.tag == PairTag.SYMPLECTIC_PAIR and c.kernels_match
                and c.plus_space == Subspace(n, plus) == eigenspace(c.operator, 1)
                and c.minus_space == Subspace(n, minus) == eigenspace(c.operator, -1))
        failures += not good
    record(5, failures == 0, f"{CASES} random exact symplectic pairs, failures={failures}")


def test_criterion_06_operator_algebra():
    rng = np.random.default_rng(20240606)
    failures = 0
    for case in range(CASES):
        n = (2, 4, 6)[case % 3]
        omega, eta = random_nondegenerate_pair(rng, n)
        a, b = recursion_operator(omega, eta), recursion_operator(eta, omega)
        good = linalg.matrices_equal(a @ b, linalg.identity(n)) and eta_symmetry_check(omega, eta, a)
        failures += not good
    record(6, failures == 0, f"{CASES} random non-degenerate pairs, failures={failures}")


def test_criterion_07_nijenhuis():
    checked, failures = 0, []
    names = list(catalog_names()) + ["product(dotti-fino-8,flat-hk-4)", "product(nil3xR,flat-hs-4)"]
    for name in names:
        entry = builtin_example(name)
        ident = linalg.identity(entry.n)
        for k, a in enumerate(triple_operators(*entry.forms), 1):
            sq = a @ a
            if linalg.matrices_equal(sq, ident) or linalg.matrices_equal(sq, -ident):
                checked += 1
                if not nijenhuis(entry.algebra, a).is_zero:
                    failures.append(f"{name}:A{k}")
    record(7, checked > 0 and not failures, f"{checked} operators with square +-Id, nonzero={failures}")


def test_criterion_08_moser_flow():
    start = time.perf_counter()
    details, ok = [], True
    for name in ("t2-family", "t4-pair-family"):
        code, r, _ = cli("moser-flow", shipped_path(name))
        last = r["checkpoints"][-1]
        code_c, conv, _ = cli("convergence-study", shipped_path(name))
        ratio = conv["rows"][1]["ratio"]
        ok &= (code == 0 and last["t"] == 1.0 and last["omega_error"] < 1e-6 and last["eta_error"] < 1e-6
               and code_c == 0 and ratio >= 12)
        details.append(f"{name}: err(w)={last['omega_error']:.1e} err(eta)={last['eta_error']:.1e} ratio={ratio:.1f}")
    dt = time.perf_counter() - start
    record(8, ok and dt < 10, "; ".join(details) + f" {dt:.2f}s")


def test_criterion_09_signature_combinators():
    sigs, ok = {}, True
    for name, want in (("product(dotti-fino-8,flat-hk-4)", [8, 4]), ("product(dotti-fino-8,-flat-hk-4)", [4, 8])):
        code, r, dt = cli("verify-example", name)
        sigs[name] = r["signature"]
        ok &= code == 0 and r["inertia"] == want + [0] and dt < 1
    record(9, ok, " ".join(f"{k}={v}" for k, v in sigs.items()))


def test_criterion_10_negative_controls(tmp_path):
    outcomes = {}
    # scaled form: the triple stops being hyperholomorphic
    entry = builtin_example("dotti-fino-8")
    algebra = json.loads(shipped_path("dotti-fino-8").read_text())["algebra"]
    forms = [form_to_terms(f) for f in entry.forms]
    forms[1] = [[i, j, str(2 * Fraction(c))] for i, j, c in forms[1]]
    path = tmp_path / "scaled.json"
    path.write_text(json.dumps({"mode": "triple", "dimension": 8, "algebra": algebra, "forms": forms}))
    code, r, _ = cli("classify-triple", path)
    outcomes["scaled_forms"] = code == 1 and r["tag"] == "Generic"

    # sign-flipped operator: the metric check and the complex kernel check both reject it
    a1, a2, a3 = triple_operators(*entry.forms)
    flipped = metric_hyperholomorphic(entry.forms, (a1, a2, -a3))
    w1, w2, _ = entry.forms
    outcomes["sign_flipped_operator"] = (not flipped.ok
                                         and not complex_kernel_check(w1, w2, -recursion_operator(w1, w2)))

    # non-Jacobi algebra: rejected on input with the offending triple named
    path = tmp_path / "jacobi.json"
    path.write_text(json.dumps({"mode": "pair", "dimension": 4,
                                "algebra": {"brackets": [[1, 2, 1, 1], [1, 3, 2, 1]]},
                                "forms": [[[1, 2, 1], [3, 4, 1]], [[1, 2, 1], [3, 4, -1]]]}))
    code, r, _ = cli("classify-pair", path)
    outcomes["non_jacobi_algebra"] = code == 2 and any("(e1, e2, e3)" in e for e in r["errors"])
    record(10, all(outcomes.values()), " ".join(f"{k}={v}" for k, v in outcomes.items()))

"""Command line front-end.

Every command prints one JSON report (sorted keys, rationals as ``"p/q"``) and
exits with 0 when all checks pass, 1 when a check fails or a structure is
Generic, and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .catalog import ExampleCatalogEntry, builtin_example, catalog_names
from .documents import InputDocument, InputError, form_to_terms, parse_input, render
from .exterior import KForm, form_matrix, pfaffian
from .lie import LieAlgebra, ce_differential, is_closed, nijenhuis
from .moser import (DegenerateFamilyError, IntertwiningError, StepSizeError, cohomology_drift,
                    convergence_study, integrate_flow, intertwining_check, sample_points)
from .recursion import FLOAT_TOL, DegenerateFormError, PairTag, classify_pair, eta_symmetry_check
from .triples import CyclicIdentityError, TripleTag, classify_triple

__all__ = ["main", "run", "UsageError", "VERIFY_ALL_PRODUCTS"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# products exercised by verify-all on top of the plain catalog
VERIFY_ALL_PRODUCTS = (
    "product(dotti-fino-8,flat-hk-4)",
    "product(dotti-fino-8,-flat-hk-4)",
    "product(nil3xR,flat-hs-4)",
)

FLOW_ERROR_LIMIT = 1e-6
FIELD_LIMIT = 1e-12
DRIFT_LIMIT = 1e-10
ORDER_RATIO = 12.0
ROUNDOFF_FLOOR = 1e-13


class UsageError(Exception):
    pass


class Options:
    def __init__(self, mode: Optional[str] = None, tolerance: Optional[float] = None,
                 seed: Optional[int] = None, halvings: int = 1):
        if tolerance is not None and mode != "float":
            raise UsageError("--tolerance is only meaningful with --mode float")
        if tolerance is not None and not tolerance > 0:
            raise UsageError("--tolerance must be positive")
        self.mode, self.seed, self.halvings = mode, seed, halvings
        self.tolerance = tolerance

    @property
    def exact(self) -> bool:
        return self.mode != "float"

    @property
    def tol(self) -> float:
        if self.exact:
            return 0
        return FLOAT_TOL if self.tolerance is None else self.tolerance

    def prepare(self, forms: Sequence[KForm]) -> List[KForm]:
        return list(forms) if self.exact else [f.to_float() for f in forms]


def _square_is_pm_identity(a, tol) -> bool:
    sq = a @ a
    ident = linalg.identity(a.shape[0], linalg.is_exact(a))
    return linalg.matrices_equal(sq, ident, tol) or linalg.matrices_equal(sq, -ident, tol)


def _form_checks(g: LieAlgebra, forms: Sequence[KForm], tol) -> Dict[str, bool]:
    out = {}
    for i, f in enumerate(forms, 1):
        if f.exact:
            out[f"form{i}_closed"] = is_closed(g, f)
        else:
            out[f"form{i}_closed"] = f.k >= f.n or ce_differential(g, f).is_zero(tol)
        out[f"form{i}_nondegenerate"] = f.n % 2 == 0 and abs(pfaffian(form_matrix(f), tol)) > tol
    return out


def _nijenhuis_checks(g: LieAlgebra, ops: Sequence, tol) -> Dict[str, bool]:
    out = {}
    for i, a in enumerate(ops, 1):
        if _square_is_pm_identity(a, tol):
            out[f"nijenhuis_A{i}_zero"] = nijenhuis(g, a, tol).is_zero
    return out


def _expect_checks(expect: Dict[str, Any], tag: str, signature: Optional[Tuple[int, int]]) -> Dict[str, bool]:
    out = {}
    if "tag" in expect:
        out["expected_tag"] = expect["tag"] == tag
    if "signature" in expect:
        out["expected_signature"] = signature is not None and list(expect["signature"]) == list(signature)
    return out


def _pair_report(g: LieAlgebra, forms: Sequence[KForm], expect, opts: Options) -> Tuple[dict, int]:
    omega, eta = opts.prepare(forms)
    tol = opts.tol
    checks = _form_checks(g, (omega, eta), tol)
    if not all(v for k, v in checks.items() if k.endswith("nondegenerate")):
        return {"checks": checks, "error": "degenerate form"}, EXIT_FAIL
    c = classify_pair(omega, eta, tol)
    checks["eta_symmetric"] = eta_symmetry_check(omega, eta, c.operator, tol)
    checks.update(_nijenhuis_checks(g, [c.operator], tol))
    report: Dict[str, Any] = {"tag": c.tag.value, "operator": c.operator}
    if c.tag == PairTag.SYMPLECTIC_PAIR:
        checks["kernels_are_eigenspaces"] = bool(c.kernels_match)
        report["ranks"] = list(c.ranks)
        report["plus_space"] = c.plus_space.basis
        report["minus_space"] = c.minus_space.basis
    if c.min_poly_degree is not None:
        report["min_poly_degree"] = c.min_poly_degree
    checks.update(_expect_checks(expect, c.tag.value, None))
    report["checks"] = checks
    ok = all(checks.values()) and c.tag != PairTag.GENERIC
    return report, EXIT_OK if ok else EXIT_FAIL


def _triple_report(g: LieAlgebra, forms: Sequence[KForm], expect, opts: Options) -> Tuple[dict, int]:
    forms = opts.prepare(forms)
    tol = opts.tol
    checks = _form_checks(g, forms, tol)
    if not all(v for k, v in checks.items() if k.endswith("nondegenerate")):
        return {"checks": checks, "error": "degenerate form"}, EXIT_FAIL
    try:
        c = classify_triple(*forms, tol=tol)
    except CyclicIdentityError as exc:
        return {"checks": checks, "error": str(exc)}, EXIT_FAIL
    checks.update(c.checks)
    checks.update(_nijenhuis_checks(g, c.operators, tol))
    report: Dict[str, Any] = {
        "tag": c.tag.value,
        "permutation": list(c.permutation),
        "operators": {f"A{i}": a for i, a in enumerate(c.operators, 1)},
        "square_signs": list(c.square_signs),
    }
    sig = None
    if c.metric is not None:
        # raw inertia (p, q): negating a triple flips g, so (4, 8) and (8, 4) are distinct
        sig = tuple(c.metric.signature[:2])
        checks.update({f"metric_{k}": v for k, v in c.metric.checks.items()})
        report["metric"] = c.metric.metric
        report["signature"] = list(sig)
        report["inertia"] = list(c.metric.signature)
        report["sign_pattern"] = list(c.metric.sign_pattern)
    if c.splitting is not None:
        report["eigenspace_dims"] = {"plus": c.splitting[0].dim, "minus": c.splitting[1].dim}
    checks.update(_expect_checks(expect, c.tag.value, sig))
    report["checks"] = checks
    ok = all(checks.values()) and c.tag != TripleTag.GENERIC
    return report, EXIT_OK if ok else EXIT_FAIL


def _entry_expect(entry: ExampleCatalogEntry) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    if entry.expected_tag is not None:
        out["tag"] = entry.expected_tag.value
    if entry.expected_signature is not None:
        out["signature"] = list(entry.expected_signature)
    return out


def verify_example(name: str, opts: Options) -> Tuple[dict, int]:
    try:
        entry = builtin_example(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    report, status = _triple_report(entry.algebra, entry.forms, _entry_expect(entry), opts)
    report["example"] = entry.name
    report["dimension"] = entry.n
    report["forms"] = [form_to_terms(f) for f in entry.forms]
    return report, status


def verify_all(opts: Options) -> Tuple[dict, int]:
    results, status = {}, EXIT_OK
    for name in list(catalog_names()) + list(VERIFY_ALL_PRODUCTS):
        report, code = verify_example(name, opts)
        results[name] = {"tag": report.get("tag"), "signature": report.get("signature"),
                         "passed": code == EXIT_OK,
                         "failed_checks": sorted(k for k, v in report["checks"].items() if not v)}
        status = max(status, code)
    return {"examples": results}, status


def _flow_setup(doc: InputDocument, opts: Options):
    params = doc.parameters
    seed = params["seed"] if opts.seed is None else opts.seed
    points = sample_points(doc.dimension, params["samples"], seed)
    return doc.family, points, seed


def moser_flow(doc: InputDocument, opts: Options) -> Tuple[dict, int]:
    pair, points, seed = _flow_setup(doc, opts)
    report: Dict[str, Any] = {"seed": seed, "steps": doc.parameters["steps"],
                              "samples": doc.parameters["samples"]}
    res = intertwining_check(pair, points)
    report["intertwining"] = {"primitive": res.primitive, "operator_drift": res.operator_drift}
    try:
        flow = integrate_flow(pair, points, doc.parameters["steps"])
    except (IntertwiningError, StepSizeError, DegenerateFamilyError) as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        return report, EXIT_FAIL
    report["checkpoints"] = [
        {"t": t, "omega_error": float(ew), "eta_error": float(ee), "min_det": float(d)}
        for t, ew, ee, d in zip(flow.times, flow.omega_errors, flow.eta_errors, flow.min_det)]
    drift = max(cohomology_drift(pair.omega), cohomology_drift(pair.eta))
    report["max_error"] = flow.max_error
    report["field_mismatch"] = flow.field_mismatch
    report["field_residual"] = flow.field_residual
    report["cohomology_drift"] = drift
    checks = {
        "pullback_error_below_1e-6": flow.max_error < FLOW_ERROR_LIMIT,
        "flow_orientation_preserving": bool(np.all(flow.min_det > 0)),
        "fields_agree": flow.field_mismatch < FIELD_LIMIT,
        "interior_equation": flow.field_residual < FIELD_LIMIT,
        "cohomology_constant": drift < DRIFT_LIMIT,
    }
    report["checks"] = checks
    return report, EXIT_OK if all(checks.values()) else EXIT_FAIL


def convergence(doc: InputDocument, opts: Options) -> Tuple[dict, int]:
    pair, points, seed = _flow_setup(doc, opts)
    report: Dict[str, Any] = {"seed": seed, "halvings": opts.halvings}
    try:
        rows = convergence_study(pair, points, doc.parameters["steps"], opts.halvings)
    except (IntertwiningError, StepSizeError, DegenerateFamilyError) as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        return report, EXIT_FAIL
    table, checks = [], {}
    for prev, row in zip([None] + rows[:-1], rows):
        entry = {"steps": row.steps, "omega_error": row.omega_error, "eta_error": row.eta_error}
        if prev is not None:
            ratio = prev.error / row.error if row.error > 0 else float("inf")
            entry["ratio"] = ratio
            # below the roundoff floor the ratio carries no information
            checks[f"fourth_order_{prev.steps}_to_{row.steps}"] = ratio >= ORDER_RATIO or prev.error < ROUNDOFF_FLOOR
        table.append(entry)
    report["rows"] = table
    report["checks"] = checks
    return report, EXIT_OK if all(checks.values()) else EXIT_FAIL


_DOC_MODES = {"classify-pair": "pair", "classify-triple": "triple", "moser-flow": "flow",
              "convergence-study": "flow"}


def run(command: str, document=None, opts: Optional[Options] = None) -> Tuple[dict, int]:
    """Run ``command`` on a parsed document (or an example name) and return ``(report, status)``.

    Raises :class:`UsageError` on a command/document mismatch.
    """
    opts = opts or Options()
    if command == "verify-example":
        return verify_example(document, opts)
    if command == "verify-all":
        return verify_all(opts)
    if command not in _DOC_MODES:
        raise UsageError(f"unknown command {command!r}")
    if document.mode != _DOC_MODES[command]:
        raise UsageError(f"{command} needs a {_DOC_MODES[command]} document, got mode {document.mode!r}")
    if document.mode == "flow" and opts.mode == "exact":
        raise UsageError("flow documents are integrated in floating point; --mode exact does not apply")
    if command == "classify-pair":
        return _pair_report(document.lie_algebra, document.forms, document.expect, opts)
    if command == "classify-triple":
        return _triple_report(document.lie_algebra, document.forms, document.expect, opts)
    if command == "moser-flow":
        return moser_flow(document, opts)
    return convergence(document, opts)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default=None,
                        help="arithmetic for algebraic commands (default exact)")
    common.add_argument("--tolerance", type=float, default=None, help="zero threshold, float mode only")
    common.add_argument("--seed", type=int, default=None, help="sample seed for flow commands")

    p = argparse.ArgumentParser(prog="bisymplectic", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("classify-pair", "classify-triple", "moser-flow"):
        sub.add_parser(name, parents=[common]).add_argument("file")
    cs = sub.add_parser("convergence-study", parents=[common])
    cs.add_argument("file")
    cs.add_argument("--halvings", type=int, default=1)
    sub.add_parser("verify-example", parents=[common]).add_argument("name")
    sub.add_parser("verify-all", parents=[common])
    return p


def _emit(report: dict, status: int, out) -> None:
    report = dict(report)
    report["exit_status"] = status
    out.write(json.dumps(render(report), sort_keys=True, indent=2) + "\n")


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    try:
        opts = Options(args.mode, args.tolerance, args.seed, getattr(args, "halvings", 1))
        if getattr(args, "halvings", 1) < 0:
            raise UsageError("--halvings must be non-negative")
        if args.command in ("verify-example", "verify-all"):
            target = getattr(args, "name", None)
            header = {"input": target or "catalog"}
        else:
            target = parse_input(args.file)
            header = {"input_sha256": target.sha256, "mode": target.mode}
        report, status = run(args.command, target, opts)
    except InputError as exc:
        _emit({"command": args.command, "errors": exc.violations}, EXIT_USAGE, out)
        return EXIT_USAGE
    except OSError as exc:
        _emit({"command": args.command, "errors": [str(exc)]}, EXIT_USAGE, out)
        return EXIT_USAGE
    except UsageError as exc:
        _emit({"command": args.command, "errors": [str(exc)]}, EXIT_USAGE, out)
        return EXIT_USAGE
    except DegenerateFormError as exc:
        report, status = {"error": str(exc)}, EXIT_FAIL
        header = {}
    report = {**header, **report, "command": args.command}
    _emit(report, status, out)
    return status


if __name__ == "__main__":
    raise SystemExit(main())

"""JSON input documents for the command line front-end.

Grammar (all indices 1-based, rationals as ``"p/q"`` strings or integers)::

    {
      "mode": "pair" | "triple" | "flow",
      "dimension": n,
      "algebra": {"brackets": [[i, j, k, "c"], ...]},      # optional, default abelian
      "forms": [[[i, j, "c"], ...], ...],                    # 2 forms (pair) or 3 (triple)
      "expect": {"tag": "...", "signature": [p, q]},         # optional
      "family": {                                            # flow mode only
        "omega": {"base": [[i, j, "c"], ...],
                  "primitive": [{"power": p, "index": j,
                                 "terms": [{"freq": [k1, ..., kn], "cos": c, "sin": s}]}]},
        "eta":   {...same shape...}
      },
      "parameters": {"epsilon": 1, "steps": 200, "samples": 64, "seed": 0}   # flow mode only
    }

Form terms must have ``i < j`` and may not repeat.  In flow mode the
trigonometric coefficients may be JSON numbers; ``epsilon`` scales every
primitive.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .exterior import KForm
from .lie import LieAlgebra, abelian, validate_lie
from .moser import FormFamily, FormField, PairFamily, TrigPoly

__all__ = ["InputError", "InputDocument", "parse_input", "parse_text", "render", "form_to_terms",
           "shipped_path"]

MODES = ("pair", "triple", "flow")
FLOW_DEFAULTS = {"epsilon": 1.0, "steps": 200, "samples": 64, "seed": 0}


class InputError(ValueError):
    """Every problem found in a document; ``violations`` lists them one per entry."""

    def __init__(self, violations: List[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass
class InputDocument:
    mode: str
    dimension: int
    sha256: str
    algebra: Optional[LieAlgebra] = None
    forms: List[KForm] = field(default_factory=list)
    family: Optional[PairFamily] = None
    parameters: Dict[str, Any] = field(default_factory=dict)
    expect: Dict[str, Any] = field(default_factory=dict)

    @property
    def lie_algebra(self) -> LieAlgebra:
        return self.algebra if self.algebra is not None else abelian(self.dimension)


def _rational(value, where: str, errors: List[str]) -> Optional[Fraction]:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        errors.append(f"{where}: coefficient {value!r} must be an integer or a 'p/q' string")
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        errors.append(f"{where}: malformed rational {value!r}")
        return None


def _real(value, where: str, errors: List[str]) -> Optional[float]:
    if isinstance(value, bool):
        errors.append(f"{where}: {value!r} is not a number")
        return None
    if isinstance(value, (int, float)):
        return float(value)
    r = _rational(value, where, errors)
    return None if r is None else float(r)


def _index(value, n: int, where: str, errors: List[str]) -> Optional[int]:
    if isinstance(value, bool) or not isinstance(value, int):
        errors.append(f"{where}: index {value!r} is not an integer")
        return None
    if not 1 <= value <= n:
        errors.append(f"{where}: index {value} out of range 1..{n}")
        return None
    return value


def _parse_form(raw, n: int, where: str, errors: List[str], exact: bool = True) -> Optional[KForm]:
    if not isinstance(raw, list):
        errors.append(f"{where}: a form is a list of [i, j, coefficient] terms")
        return None
    coeffs: Dict[Tuple[int, int], Any] = {}
    ok = True
    for t, term in enumerate(raw):
        at = f"{where}[{t}]"
        if not isinstance(term, list) or len(term) != 3:
            errors.append(f"{at}: expected [i, j, coefficient]")
            ok = False
            continue
        i, j = _index(term[0], n, at, errors), _index(term[1], n, at, errors)
        c = _rational(term[2], at, errors) if exact else _real(term[2], at, errors)
        if i is None or j is None or c is None:
            ok = False
            continue
        if i >= j:
            errors.append(f"{at}: indices must satisfy i < j, got ({i}, {j})")
            ok = False
            continue
        if (i, j) in coeffs:
            errors.append(f"{at}: duplicate term for e{i}^e{j}")
            ok = False
            continue
        coeffs[(i, j)] = c
    return KForm(n, 2, coeffs, exact) if ok else None


def _parse_algebra(raw, n: int, errors: List[str]) -> Optional[LieAlgebra]:
    if not isinstance(raw, dict) or not isinstance(raw.get("brackets", []), list):
        errors.append("algebra: expected {\"brackets\": [[i, j, k, c], ...]}")
        return None
    entries = []
    for t, entry in enumerate(raw.get("brackets", [])):
        at = f"algebra.brackets[{t}]"
        if not isinstance(entry, list) or len(entry) != 4:
            errors.append(f"{at}: expected [i, j, k, coefficient]")
            continue
        idx = [_index(v, n, at, errors) for v in entry[:3]]
        c = _rational(entry[3], at, errors)
        if None in idx or c is None:
            continue
        entries.append((*idx, c))
    if len(entries) != len(raw.get("brackets", [])):
        return None
    report = validate_lie(n, entries)
    if not report.valid:
        errors.extend(f"algebra: {v}" for v in report.antisymmetry_violations)
        errors.extend(f"algebra: Jacobi identity fails for (e{a}, e{b}, e{c})"
                      for a, b, c in report.jacobi_violations)
        return None
    return LieAlgebra(n, entries)


def _parse_primitive(raw, n: int, where: str, errors: List[str]) -> Dict[int, FormField]:
    out: Dict[int, FormField] = {}
    if not isinstance(raw, list):
        errors.append(f"{where}: primitive must be a list")
        return out
    for t, piece in enumerate(raw):
        at = f"{where}[{t}]"
        if not isinstance(piece, dict):
            errors.append(f"{at}: expected an object")
            continue
        power, index = piece.get("power", 0), _index(piece.get("index"), n, at, errors)
        if isinstance(power, bool) or not isinstance(power, int) or power < 0:
            errors.append(f"{at}: power must be a non-negative integer")
            continue
        terms = []
        for s, term in enumerate(piece.get("terms", [])):
            tat = f"{at}.terms[{s}]"
            freq = term.get("freq") if isinstance(term, dict) else None
            if not isinstance(freq, list) or len(freq) != n or not all(
                    isinstance(k, int) and not isinstance(k, bool) for k in freq):
                errors.append(f"{tat}: freq must be a list of {n} integers")
                continue
            c, sn = _real(term.get("cos", 0), tat, errors), _real(term.get("sin", 0), tat, errors)
            if c is not None and sn is not None:
                terms.append((freq, c, sn))
        if index is None:
            continue
        field_ = FormField(n, 1, {(index,): TrigPoly(n, terms)})
        out[power] = out[power] + field_ if power in out else field_
    return out


def _parse_family(raw, n: int, errors: List[str]) -> Optional[PairFamily]:
    if not isinstance(raw, dict) or set(raw) != {"omega", "eta"}:
        errors.append("family: expected exactly the keys 'omega' and 'eta'")
        return None
    parts = {}
    for key in ("omega", "eta"):
        member = raw[key]
        if not isinstance(member, dict):
            errors.append(f"family.{key}: expected an object")
            continue
        count = len(errors)
        base = _parse_form(member.get("base"), n, f"family.{key}.base", errors, exact=False)
        prim = _parse_primitive(member.get("primitive", []), n, f"family.{key}.primitive", errors)
        if base is not None and len(errors) == count:
            parts[key] = FormFamily(base, prim)
    if len(parts) != 2:
        return None
    return PairFamily(parts["omega"], parts["eta"])


def parse_text(text: str) -> InputDocument:
    """Parse and validate a document, collecting every violation before raising."""
    sha = hashlib.sha256(text.encode()).hexdigest()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError([f"line {exc.lineno}, column {exc.colno}: {exc.msg}"]) from None
    errors: List[str] = []
    if not isinstance(raw, dict):
        raise InputError(["document must be a JSON object"])
    mode = raw.get("mode")
    if mode not in MODES:
        errors.append(f"mode: must be one of {', '.join(MODES)}, got {mode!r}")
    n = raw.get("dimension")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(errors + [f"dimension: must be a positive integer, got {n!r}"])
    doc = InputDocument(mode=mode, dimension=n, sha256=sha, expect=dict(raw.get("expect", {})))
    if "algebra" in raw:
        doc.algebra = _parse_algebra(raw["algebra"], n, errors)
    if mode in ("pair", "triple"):
        want = 2 if mode == "pair" else 3
        forms = raw.get("forms")
        if not isinstance(forms, list) or len(forms) != want:
            errors.append(f"forms: {mode} mode needs exactly {want} forms")
        else:
            doc.forms = [_parse_form(f, n, f"forms[{i}]", errors) for i, f in enumerate(forms)]
    elif mode == "flow":
        doc.family = _parse_family(raw.get("family"), n, errors)
        params = dict(FLOW_DEFAULTS)
        params.update(raw.get("parameters", {}))
        for key in ("steps", "samples", "seed"):
            if isinstance(params[key], bool) or not isinstance(params[key], int) or params[key] < 0:
                errors.append(f"parameters.{key}: must be a non-negative integer")
        eps = _real(params["epsilon"], "parameters.epsilon", errors)
        params["epsilon"] = eps
        doc.parameters = params
        if doc.family is not None and eps is not None:
            doc.family = doc.family.scaled(eps)
    if errors:
        raise InputError(errors)
    return doc


def shipped_path(name: str) -> Path:
    """Path of a document shipped in the package ``data`` directory, e.g. ``"t2-family"``."""
    return Path(str(resources.files("bisymplectic") / "data" / f"{name}.json"))


def parse_input(path) -> InputDocument:
    return parse_text(Path(path).read_text())


def render(value):
    """JSON-ready copy with Fractions as ``"p/q"`` strings and arrays as nested lists."""
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "tolist") and not isinstance(value, (str, bytes)):
        return render(value.tolist())
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, float):
        return value
    if hasattr(value, "item"):
        return render(value.item())
    return str(value)


def form_to_terms(f: KForm) -> List[list]:
    return [[i, j, str(c)] for (i, j), c in sorted(f.coeffs.items())]

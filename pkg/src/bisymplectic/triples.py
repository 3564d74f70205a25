"""Triples of symplectic forms: operators, classification, induced metrics.

Indices are cyclic mod 3 and follow ``i_X w_i = i_{A_{i+2} X} w_{i+1}``, so

* ``A_3 = recursion_operator(w_1, w_2)``
* ``A_1 = recursion_operator(w_2, w_3)``
* ``A_2 = recursion_operator(w_3, w_1)``

and every cyclic composition ``A_{i+2} A_{i+1} A_i`` is the identity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .exterior import KForm, form_matrix, rank_2form, restrict, signature
from .lie import Subspace
from .recursion import PairTag, classify_pair, default_tol, eigenspace, recursion_operator

__all__ = [
    "CyclicIdentityError",
    "TripleTag",
    "MetricReport",
    "TripleClassification",
    "triple_operators",
    "classify_triple",
    "metric_hyperholomorphic",
    "metric_hypersymplectic",
]


class CyclicIdentityError(RuntimeError):
    """Computed operators violate ``A_3 A_2 A_1 = Id``; indicates a bug, not bad input."""


class TripleTag(str, enum.Enum):
    HYPERHOLOMORPHIC_SYMPLECTIC = "HyperholomorphicSymplectic"
    HYPERSYMPLECTIC = "Hypersymplectic"
    HOLOMORPHIC_SYMPLECTIC_PAIR = "HolomorphicSymplecticPair"
    SYMPLECTIC_TRIPLE = "SymplecticTriple"
    GENERIC = "Generic"


@dataclass(frozen=True)
class MetricReport:
    metric: np.ndarray
    signature: Tuple[int, int, int]
    checks: Dict[str, bool]
    definite: bool
    sign_pattern: Tuple[int, int, int] = (1, 1, 1)

    @property
    def display_signature(self) -> Tuple[int, int]:
        """``(p, q)`` with ``p >= q``; ``g`` is only defined up to global sign."""
        p, q, _ = self.signature
        return (max(p, q), min(p, q))

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


@dataclass(frozen=True)
class TripleClassification:
    tag: TripleTag
    permutation: Tuple[int, int, int]
    operators: Tuple[np.ndarray, np.ndarray, np.ndarray]
    square_signs: Tuple[int, int, int]
    forms: Tuple[KForm, KForm, KForm]
    metric: Optional[MetricReport] = None
    checks: Dict[str, bool] = field(default_factory=dict)
    splitting: Optional[Tuple[Subspace, Subspace]] = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values()) and (self.metric is None or self.metric.ok)


def _ident(n: int, like) -> np.ndarray:
    return linalg.identity(n, linalg.is_exact(like))


def triple_operators(w1: KForm, w2: KForm, w3: KForm, tol: Optional[float] = None):
    if not (w1.n == w2.n == w3.n):
        raise ValueError("forms live in different dimensions")
    tol = default_tol(w1, w2, w3) if tol is None else tol
    a3 = recursion_operator(w1, w2, tol)
    a1 = recursion_operator(w2, w3, tol)
    a2 = recursion_operator(w3, w1, tol)
    ident = _ident(w1.n, a1)
    for lhs in (a3 @ a2 @ a1, a1 @ a3 @ a2, a2 @ a1 @ a3):
        if not linalg.matrices_equal(lhs, ident, tol):
            raise CyclicIdentityError("cyclic composition of recursion operators is not Id")
    return a1, a2, a3


def _square_sign(a, tol) -> int:
    sq = a @ a
    ident = _ident(a.shape[0], a)
    if linalg.matrices_equal(sq, ident, tol):
        return 1
    if linalg.matrices_equal(sq, -ident, tol):
        return -1
    return 0


def _is_pm_identity(a, tol) -> bool:
    ident = _ident(a.shape[0], a)
    return linalg.matrices_equal(a, ident, tol) or linalg.matrices_equal(a, -ident, tol)


def _nondegenerate(m, tol) -> bool:
    return abs(linalg.det(m, tol)) > tol


def _sign_pattern(mats, ops, g, tol) -> Tuple[int, int, int]:
    """``s_i`` with ``w_i(X, A_i Y) = s_i g(X, Y)``; 0 if neither sign fits."""
    out = []
    for m, a in zip(mats, ops):
        h = m @ a
        out.append(1 if linalg.matrices_equal(h, g, tol) else -1 if linalg.matrices_equal(-h, g, tol) else 0)
    return tuple(out)


def metric_hyperholomorphic(forms: Sequence[KForm], ops: Sequence, tol: Optional[float] = None) -> MetricReport:
    """``g(X, Y) = w_i(X, A_i Y)``, computed from slot 1 and checked for i = 2, 3."""
    tol = default_tol(*forms) if tol is None else tol
    mats = [form_matrix(f) for f in forms]
    ident = _ident(forms[0].n, ops[0])
    if not all(linalg.matrices_equal(a @ a, -ident, tol) for a in ops):
        raise ValueError("metric_hyperholomorphic needs A_i^2 = -Id for all i")
    g = mats[0] @ ops[0]
    checks = {
        "independent_of_i": all(linalg.matrices_equal(m @ a, g, tol) for m, a in zip(mats[1:], ops[1:])),
        "symmetric": linalg.is_symmetric(g, tol),
        "nondegenerate": _nondegenerate(g, tol),
        "invariant": all(linalg.matrices_equal(a.T @ g @ a, g, tol) for a in ops),
    }
    sig = signature(g, tol) if checks["symmetric"] else (0, 0, forms[0].n)
    n = forms[0].n
    return MetricReport(g, sig, checks, definite=sig[0] == n or sig[1] == n,
                        sign_pattern=_sign_pattern(mats, ops, g, tol))


def metric_hypersymplectic(forms: Sequence[KForm], ops: Sequence, tol: Optional[float] = None) -> MetricReport:
    """``g = w_1(X, I Y) = -w_2(X, S Y) = -w_3(X, T Y)`` after renumbering.

    Requires ``A_1^2 = -Id`` and ``A_2^2 = A_3^2 = Id``.  Here ``I = A_1``,
    ``S = A_2`` and ``T = IS = A_1 A_2``.  The cyclic identity forces
    ``A_1 A_2 = -A_3``, so in terms of the raw operators the pattern is
    ``w_3(X, A_3 Y) = +g``; ``sign_pattern`` records it as ``(1, -1, 1)``.
    """
    tol = default_tol(*forms) if tol is None else tol
    mats = [form_matrix(f) for f in forms]
    a1, a2, a3 = ops
    ident = _ident(forms[0].n, a1)
    if not (linalg.matrices_equal(a1 @ a1, -ident, tol)
            and linalg.matrices_equal(a2 @ a2, ident, tol)
            and linalg.matrices_equal(a3 @ a3, ident, tol)):
        raise ValueError("metric_hypersymplectic needs A_1^2 = -Id, A_2^2 = A_3^2 = Id")
    g = mats[0] @ a1
    t = a1 @ a2
    checks = {
        "sign_chain": (linalg.matrices_equal(-(mats[1] @ a2), g, tol)
                       and linalg.matrices_equal(-(mats[2] @ t), g, tol)),
        "symmetric": linalg.is_symmetric(g, tol),
        "nondegenerate": _nondegenerate(g, tol),
        "invariant_A1": linalg.matrices_equal(a1.T @ g @ a1, g, tol),
        "anti_invariant_A2_A3": all(linalg.matrices_equal(a.T @ g @ a, -g, tol) for a in (a2, a3)),
    }
    sig = signature(g, tol) if checks["symmetric"] else (0, 0, forms[0].n)
    checks["neutral"] = sig[0] == sig[1] and sig[2] == 0
    n = forms[0].n
    return MetricReport(g, sig, checks, definite=sig[0] == n or sig[1] == n,
                        sign_pattern=_sign_pattern(mats, ops, g, tol))


def _rotate(forms, ops, r):
    perm = tuple((r + s) % 3 + 1 for s in range(3))
    return perm, tuple(forms[(r + s) % 3] for s in range(3)), tuple(ops[(r + s) % 3] for s in range(3))


def _commute(a, b, tol, anti=False) -> bool:
    return linalg.matrices_equal(a @ b, -(b @ a) if anti else b @ a, tol)


def _restricted_holomorphic(forms, ops, space: Subspace, tol) -> bool:
    """Both complex structures restrict to holomorphic symplectic structures on ``space``."""
    if space.dim == 0:
        return True
    basis = space.basis
    w1, w2, w3 = (restrict(f, basis) for f in forms)
    try:
        # A_1 intertwines (w2, w3), A_2 intertwines (w3, w1)
        return all(classify_pair(x, y, tol).tag == PairTag.HOLOMORPHIC_SYMPLECTIC
                   for x, y in ((w2, w3), (w3, w1)))
    except ValueError:
        return False


def classify_triple(w1: KForm, w2: KForm, w3: KForm, tol: Optional[float] = None) -> TripleClassification:
    """Classify a triple by the signs of ``A_i^2``, renumbering to canonical slots.

    The returned ``permutation`` lists which input form (1-based) sits in each
    slot.  Hyperholomorphic and symplectic triples keep the input order;
    hypersymplectic triples are rotated so that ``A_1^2 = -Id``, holomorphic
    symplectic pairs so that ``A_3^2 = Id``.
    """
    tol = default_tol(w1, w2, w3) if tol is None else tol
    forms = (w1, w2, w3)
    ops = triple_operators(w1, w2, w3, tol)
    signs = tuple(_square_sign(a, tol) for a in ops)
    n = w1.n
    checks: Dict[str, bool] = {"cyclic_identity": True}

    def result(tag, r=0, **kw):
        perm, fs, os_ = _rotate(forms, ops, r)
        sg = tuple(signs[(r + s) % 3] for s in range(3))
        return TripleClassification(tag, perm, os_, sg, fs, checks=checks, **kw)

    if 0 in signs:
        return result(TripleTag.GENERIC)
    negatives = signs.count(-1)

    if negatives == 3:
        a1, a2, a3 = ops
        checks["anticommute"] = all(_commute(x, y, tol, anti=True) for x, y in ((a1, a2), (a2, a3), (a3, a1)))
        # A_3 A_2 A_1 = Id with A_3^2 = -Id forces A_2 A_1 = -A_3
        checks["quaternion_relation"] = linalg.matrices_equal(a2 @ a1, -a3, tol)
        metric = metric_hyperholomorphic(forms, ops, tol)
        return result(TripleTag.HYPERHOLOMORPHIC_SYMPLECTIC, metric=metric)

    if negatives == 1:
        r = signs.index(-1)
        perm, fs, (a1, a2, a3) = _rotate(forms, ops, r)
        checks["anticommute"] = all(_commute(x, y, tol, anti=True) for x, y in ((a1, a2), (a2, a3), (a3, a1)))
        checks["A2A1_equals_A3"] = linalg.matrices_equal(a2 @ a1, a3, tol)
        metric = metric_hypersymplectic(fs, (a1, a2, a3), tol)
        return result(TripleTag.HYPERSYMPLECTIC, r, metric=metric)

    if negatives == 2:
        r = (signs.index(1) + 1) % 3
        perm, fs, (a1, a2, a3) = _rotate(forms, ops, r)
        if _is_pm_identity(a3, tol):
            return result(TripleTag.GENERIC, r)
        plus, minus = eigenspace(a3, 1, tol), eigenspace(a3, -1, tol)
        ident = _ident(n, a1)
        checks["commute"] = all(_commute(x, y, tol) for x, y in ((a1, a2), (a2, a3), (a3, a1)))
        checks["A2A1_equals_A3"] = linalg.matrices_equal(a2 @ a1, a3, tol)
        checks["leaf_dims_multiple_of_4"] = plus.dim % 4 == 0 and minus.dim % 4 == 0 and plus.dim + minus.dim == n
        # on E+ the complex structures are conjugate (A_2 = -A_1), on E- they agree
        p_proj = (ident + a3) / 2
        m_proj = (ident - a3) / 2
        checks["conjugate_on_plus_agree_on_minus"] = (
            linalg.matrices_equal((a2 + a1) @ p_proj, 0 * ident, tol)
            and linalg.matrices_equal((a2 - a1) @ m_proj, 0 * ident, tol))
        checks["leaves_holomorphic_symplectic"] = (_restricted_holomorphic(fs, (a1, a2, a3), plus, tol)
                                                   and _restricted_holomorphic(fs, (a1, a2, a3), minus, tol))
        return result(TripleTag.HOLOMORPHIC_SYMPLECTIC_PAIR, r, splitting=(plus, minus))

    if any(_is_pm_identity(a, tol) for a in ops):
        return result(TripleTag.GENERIC)
    pairs_ok = True
    ranks_ok = []
    for i, j in ((0, 1), (1, 2), (2, 0)):
        c = classify_pair(forms[i], forms[j], tol)
        pairs_ok &= c.tag == PairTag.SYMPLECTIC_PAIR and bool(c.kernels_match)
        ranks_ok.append(all(0 < r < n for r in (rank_2form(forms[i] + forms[j], tol),
                                                 rank_2form(forms[i] - forms[j], tol))))
    checks["pairs_are_symplectic_pairs"] = pairs_ok
    checks["pair_ranks_proper"] = all(ranks_ok)
    checks["dimension_at_least_6"] = n >= 6
    return result(TripleTag.SYMPLECTIC_TRIPLE)

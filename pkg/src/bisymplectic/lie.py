"""Lie algebras given by structure constants, and left-invariant calculus on them.

A Lie algebra on the frame ``e_1, ..., e_n`` is specified by brackets
``[e_i, e_j] = sum_k c^k_ij e_k``.  Left-invariant forms are constant-coefficient
:class:`~bisymplectic.exterior.KForm` objects; their exterior derivative is the
Chevalley-Eilenberg differential, fixed on 1-forms by
``d alpha(X, Y) = -alpha([X, Y])``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .exterior import KForm, to_scalar, wedge

__all__ = [
    "LieAlgebraError",
    "LieReport",
    "LieAlgebra",
    "validate_lie",
    "abelian",
    "direct_sum",
    "ce_differential",
    "is_closed",
    "NijenhuisResult",
    "nijenhuis",
    "Subspace",
    "is_subalgebra",
]


class LieAlgebraError(ValueError):
    """Raised for antisymmetry or Jacobi violations; carries the full report."""

    def __init__(self, message: str, report: "LieReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class LieReport:
    valid: bool
    antisymmetry_violations: Tuple[str, ...] = ()
    jacobi_violations: Tuple[Tuple[int, int, int], ...] = ()
    nilpotency_step: Optional[int] = None
    lower_central_dims: Tuple[int, ...] = ()


def _normalize_brackets(n: int, entries: Iterable[Sequence]) -> Tuple[Dict[Tuple[int, int], Dict[int, Fraction]], List[str]]:
    """Collect ``(i, j, k, c)`` entries into ``{(i, j): {k: c}}`` with ``i < j``."""
    table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    seen: Dict[Tuple[int, int, int], Fraction] = {}
    problems: List[str] = []
    for entry in entries:
        i, j, k, c = entry
        i, j, k = int(i), int(j), int(k)
        c = to_scalar(c)
        if not all(1 <= x <= n for x in (i, j, k)):
            problems.append(f"bracket index out of range in [e{i}, e{j}] -> e{k}")
            continue
        if i == j:
            if c != 0:
                problems.append(f"[e{i}, e{i}] has nonzero e{k} component {c}")
            continue
        key = (min(i, j), max(i, j), k)
        value = c if i < j else -c
        if key in seen:
            if seen[key] != value:
                problems.append(
                    f"[e{key[0]}, e{key[1]}] e{k}-component given inconsistently "
                    f"({seen[key]} vs {value})"
                )
            continue
        seen[key] = value
        if value != 0:
            table.setdefault((key[0], key[1]), {})[k] = value
    return table, problems


class LieAlgebra:
    """A validated Lie algebra; construction raises :class:`LieAlgebraError`.

    ``brackets`` is an iterable of ``(i, j, k, c)`` meaning the ``e_k`` component
    of ``[e_i, e_j]`` is ``c`` (1-based).  Entries with ``i > j`` are accepted and
    read through antisymmetry; giving both orders inconsistently is an error.
    """

    def __init__(self, n: int, brackets: Iterable[Sequence] = ()):
        report, table = _validate(n, brackets)
        if not report.valid:
            raise LieAlgebraError(_describe(report), report)
        self._n = n
        self._table = table
        self._report = report
        # c[k, i, j] in 0-based storage, exact
        c = linalg.zeros((n, n, n))
        for (i, j), comps in table.items():
            for k, v in comps.items():
                c[k - 1, i - 1, j - 1] = v
                c[k - 1, j - 1, i - 1] = -v
        self._c = c

    @property
    def n(self) -> int:
        return self._n

    @property
    def report(self) -> LieReport:
        return self._report

    @property
    def nilpotency_step(self) -> Optional[int]:
        return self._report.nilpotency_step

    @property
    def structure_constants(self) -> np.ndarray:
        """Array ``c[k, i, j]`` (0-based) with ``[e_i, e_j] = sum_k c[k, i, j] e_k``."""
        return self._c.copy()

    def brackets(self) -> List[Tuple[int, int, int, Fraction]]:
        return [(i, j, k, v) for (i, j), comps in sorted(self._table.items())
                for k, v in sorted(comps.items())]

    def is_abelian(self) -> bool:
        return not self._table

    def bracket(self, x: Sequence, y: Sequence) -> np.ndarray:
        """``[x, y]`` for coefficient vectors in the frame."""
        return _bracket(self._table, self._n, x, y)

    def __repr__(self) -> str:
        return f"LieAlgebra(n={self._n}, brackets={len(self.brackets())})"


def _bracket(table, n: int, x: Sequence, y: Sequence) -> np.ndarray:
    exact = linalg.is_exact(np.asarray(x)) and linalg.is_exact(np.asarray(y))
    out = linalg.zeros(n, exact)
    for (i, j), comps in table.items():
        w = x[i - 1] * y[j - 1] - x[j - 1] * y[i - 1]
        if w == 0:
            continue
        for k, v in comps.items():
            out[k - 1] += w * (v if exact else float(v))
    return out


def _unit(n: int, i: int) -> np.ndarray:
    v = linalg.zeros(n)
    v[i] = Fraction(1)
    return v


def _validate(n: int, brackets: Iterable[Sequence]):
    table, problems = _normalize_brackets(n, brackets)
    if problems:
        return LieReport(False, antisymmetry_violations=tuple(problems)), table
    basis = [_unit(n, i) for i in range(n)]
    jacobi = []
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                x, y, z = basis[a], basis[b], basis[c]
                s = (_bracket(table, n, _bracket(table, n, x, y), z)
                     + _bracket(table, n, _bracket(table, n, y, z), x)
                     + _bracket(table, n, _bracket(table, n, z, x), y))
                if any(v != 0 for v in s):
                    jacobi.append((a + 1, b + 1, c + 1))
    if jacobi:
        return LieReport(False, jacobi_violations=tuple(jacobi)), table
    dims, step = _lower_central_series(table, n)
    return LieReport(True, nilpotency_step=step, lower_central_dims=tuple(dims)), table


def _lower_central_series(table, n: int):
    """Dimensions of g = g^1 > g^2 = [g, g] > ... and the nilpotency step."""
    current = [_unit(n, i) for i in range(n)]
    dims = [n]
    frame = [_unit(n, i) for i in range(n)]
    for _ in range(n + 1):
        spans = [_bracket(table, n, x, y) for x in frame for y in current]
        spans = [v for v in spans if any(c != 0 for c in v)]
        if not spans:
            dims.append(0)
            return dims, len(dims) - 1
        r, piv = linalg.rref(np.array(spans, dtype=object))
        current = [r[i] for i in range(len(piv))]
        if len(current) == dims[-1]:
            # series stabilised at a nonzero ideal: not nilpotent
            return dims, None
        dims.append(len(current))
    return dims, None


def _describe(report: LieReport) -> str:
    lines = list(report.antisymmetry_violations)
    for a, b, c in report.jacobi_violations:
        lines.append(f"Jacobi identity fails for (e{a}, e{b}, e{c})")
    return "; ".join(lines)


def validate_lie(n: int, brackets: Iterable[Sequence]) -> LieReport:
    """Check raw brackets without raising; see :class:`LieReport`."""
    return _validate(n, list(brackets))[0]


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, ())


def direct_sum(g: LieAlgebra, h: LieAlgebra) -> LieAlgebra:
    shift = g.n
    entries = g.brackets() + [(i + shift, j + shift, k + shift, v) for i, j, k, v in h.brackets()]
    return LieAlgebra(g.n + h.n, entries)


def ce_differential(g: LieAlgebra, f: KForm) -> KForm:
    """Chevalley-Eilenberg differential of a left-invariant form.

    ``d e^k = -sum_{i<j} c^k_ij e^i ^ e^j`` on the dual frame, extended to
    higher degree as a graded derivation.
    """
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: form on {f.n}, algebra on {g.n}")
    n, exact = g.n, f.exact
    if f.k >= n:
        raise ValueError("a top-degree form has no differential in this frame")
    de: Dict[int, KForm] = {}
    for k in range(1, n + 1):
        terms = {(i, j): -comps[k] for (i, j), comps in g._table.items() if k in comps}
        de[k] = KForm(n, 2, terms, exact)
    out = KForm(n, f.k + 1, exact=exact)
    for idx, c in f.coeffs.items():
        for pos, i in enumerate(idx):
            if de[i].is_zero():
                continue
            left = KForm.basis(n, *idx[:pos], exact=exact)
            right = KForm.basis(n, *idx[pos + 1:], exact=exact)
            out = out + ((-1) ** pos * c) * wedge(wedge(left, de[i]), right)
    return out


def is_closed(g: LieAlgebra, f: KForm) -> bool:
    if f.k == g.n:
        return True
    return ce_differential(g, f).is_zero()


@dataclass(frozen=True)
class NijenhuisResult:
    """``table[i][j]`` is ``N_A(e_i, e_j)`` (0-based array indices)."""

    table: np.ndarray
    is_zero: bool

    def __getitem__(self, ij):
        return self.table[ij]


def nijenhuis(g: LieAlgebra, a, tol: float = 0) -> NijenhuisResult:
    """Nijenhuis torsion ``A^2[X,Y] + [AX,AY] - A[AX,Y] - A[X,AY]`` on frame pairs."""
    a = np.asarray(a)
    n = g.n
    if a.shape != (n, n):
        raise ValueError(f"endomorphism of shape {a.shape} on an algebra of dimension {n}")
    exact = linalg.is_exact(a)
    a2 = a @ a
    frame = [linalg.identity(n, exact)[i] for i in range(n)]
    images = [a @ v for v in frame]
    table = np.empty((n, n, n), dtype=object if exact else np.float64)
    for i in range(n):
        for j in range(n):
            if j < i:
                table[i, j] = -table[j, i]
                continue
            x, y, ax, ay = frame[i], frame[j], images[i], images[j]
            table[i, j] = (a2 @ g.bracket(x, y) + g.bracket(ax, ay)
                           - a @ g.bracket(ax, y) - a @ g.bracket(x, ay))
    zero = linalg.is_zero_matrix(table.reshape(n * n, n), tol)
    return NijenhuisResult(table, zero)


class Subspace:
    """A linear subspace of the ``n``-dimensional frame, stored in echelon form."""

    def __init__(self, n: int, basis: Iterable[Sequence], tol: float = 0):
        rows = [list(v) for v in basis]
        if any(len(r) != n for r in rows):
            raise ValueError(f"basis vectors must have length {n}")
        exact = tol == 0
        m = (linalg.as_exact(rows) if exact else linalg.as_float(rows)) if rows else linalg.zeros((0, n), exact)
        if rows and linalg.rank(m, tol) != len(rows):
            raise ValueError("basis vectors are linearly dependent")
        self._n = n
        self._tol = tol
        self._basis = linalg.rref(m, tol)[0][: len(rows)] if rows else m

    @property
    def n(self) -> int:
        return self._n

    @property
    def dim(self) -> int:
        return self._basis.shape[0]

    @property
    def basis(self) -> np.ndarray:
        """Basis vectors as rows, in reduced row echelon form."""
        return self._basis.copy()

    def contains(self, v: Sequence) -> bool:
        if self.dim == 0:
            return linalg.is_zero_matrix(np.asarray([v]), self._tol)
        m = np.concatenate([self._basis, np.asarray([v], dtype=self._basis.dtype)])
        return linalg.rank(m, self._tol) == self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self._n == other._n and self.dim == other.dim
                and linalg.matrices_equal(self._basis, other._basis, self._tol))

    def __repr__(self) -> str:
        return f"Subspace(n={self._n}, dim={self.dim})"


def is_subalgebra(g: LieAlgebra, s: Subspace) -> bool:
    if s.n != g.n:
        raise ValueError("subspace and algebra live in different dimensions")
    b = s.basis
    return all(s.contains(g.bracket(b[i], b[j]))
               for i in range(s.dim) for j in range(i + 1, s.dim))

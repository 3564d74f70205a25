"""Dense linear algebra that works identically on exact and floating matrices.

Exact matrices are numpy arrays of ``dtype=object`` holding
:class:`fractions.Fraction` entries; float matrices are ordinary ``float64``
arrays.  Every routine takes a ``tol`` argument used for zero tests: it must be
``0`` for exact input (the default) and a small positive number for floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

__all__ = [
    "as_exact",
    "as_float",
    "is_exact",
    "identity",
    "zeros",
    "rref",
    "rank",
    "nullspace",
    "inverse",
    "solve",
    "det",
    "is_skew",
    "is_symmetric",
    "skew_matrix",
    "sym_matrix",
    "matrices_equal",
    "is_zero_matrix",
    "block_diag",
]


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(
        f"refusing implicit conversion of {type(x).__name__} to an exact rational"
    )


def as_exact(m) -> np.ndarray:
    """Return an object array of Fractions; floats are rejected."""
    a = np.asarray(m, dtype=object)
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = _to_fraction(x)
    return out


def as_float(m) -> np.ndarray:
    """Explicit (lossy) conversion to float64."""
    a = np.asarray(m, dtype=object)
    return np.vectorize(float, otypes=[np.float64])(a) if a.size else np.zeros(a.shape)


def is_exact(m) -> bool:
    return np.asarray(m).dtype == object


def identity(n: int, exact: bool = True) -> np.ndarray:
    if not exact:
        return np.eye(n)
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def zeros(shape, exact: bool = True) -> np.ndarray:
    if not exact:
        return np.zeros(shape)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def _work_copy(m) -> np.ndarray:
    a = np.array(m, dtype=object if is_exact(m) else np.float64)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return a


def rref(m, tol: float = 0) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are chosen by largest magnitude in the column, which is harmless for
    rationals and necessary for floats.
    """
    a = _work_copy(m)
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        col = [abs(a[i, c]) for i in range(r, rows)]
        best = max(range(len(col)), key=col.__getitem__)
        if col[best] <= tol:
            if tol:
                a[r:, c] = 0.0
            continue
        p = r + best
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] / a[r, c]
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, tol: float = 0) -> int:
    a = np.asarray(m)
    if a.size == 0:
        return 0
    return len(rref(a, tol)[1])


def nullspace(m, tol: float = 0) -> np.ndarray:
    """Basis of the right kernel, one vector per row, in reduced echelon form."""
    a = _work_copy(m)
    cols = a.shape[1]
    r, pivots = rref(a, tol)
    free = [c for c in range(cols) if c not in pivots]
    exact = is_exact(a)
    basis = zeros((len(free), cols), exact)
    for b, f in enumerate(free):
        basis[b, f] = Fraction(1) if exact else 1.0
        for row, p in enumerate(pivots):
            basis[b, p] = -r[row, f]
    if len(free) == 0:
        return basis
    return rref(basis, tol)[0]


def inverse(m, tol: float = 0) -> np.ndarray:
    a = _work_copy(m)
    n, k = a.shape
    if n != k:
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([a, identity(n, is_exact(a))], axis=1)
    r, pivots = rref(aug, tol)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise np.linalg.LinAlgError("singular matrix")
    return r[:, n:]


def solve(m, b, tol: float = 0) -> np.ndarray:
    return inverse(m, tol) @ np.asarray(b)


def det(m, tol: float = 0):
    a = _work_copy(m)
    n = a.shape[0]
    exact = is_exact(a)
    out = Fraction(1) if exact else 1.0
    for c in range(n):
        p = max(range(c, n), key=lambda i: abs(a[i, c]))
        if abs(a[p, c]) <= tol:
            return Fraction(0) if exact else 0.0
        if p != c:
            a[[c, p]] = a[[p, c]]
            out = -out
        out = out * a[c, c]
        for i in range(c + 1, n):
            if a[i, c] != 0:
                a[i] = a[i] - (a[i, c] / a[c, c]) * a[c]
    return out


def matrices_equal(a, b, tol: float = 0) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    if tol == 0:
        return bool(np.all(a == b))
    diff = np.abs(as_float(a) - as_float(b))
    scale = max(1.0, float(np.max(np.abs(as_float(b)))) if b.size else 1.0)
    return bool(np.all(diff <= tol * scale))


def is_zero_matrix(a, tol: float = 0) -> bool:
    a = np.asarray(a)
    return matrices_equal(a, np.zeros(a.shape, dtype=a.dtype) if not is_exact(a) else zeros(a.shape), tol)


def is_skew(m, tol: float = 0) -> bool:
    a = np.asarray(m)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and matrices_equal(a.T, -a, tol)


def is_symmetric(m, tol: float = 0) -> bool:
    a = np.asarray(m)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and matrices_equal(a.T, a, tol)


def skew_matrix(m, tol: float = 0) -> np.ndarray:
    """Validate that ``m`` is skew-symmetric and return it as an array."""
    a = np.asarray(m)
    if not is_skew(a, tol):
        raise ValueError("matrix is not skew-symmetric")
    return a


def sym_matrix(m, tol: float = 0) -> np.ndarray:
    """Validate that ``m`` is symmetric and return it as an array."""
    a = np.asarray(m)
    if not is_symmetric(a, tol):
        raise ValueError("matrix is not symmetric")
    return a


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    exact = all(is_exact(b) for b in blocks)
    n = sum(b.shape[0] for b in blocks)
    out = zeros((n, n), exact)
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at:at + k, at:at + k] = b
        at += k
    return out


def span_contains(basis: Iterable[Sequence], v: Sequence, tol: float = 0) -> bool:
    rows = [list(b) for b in basis]
    if not rows:
        return is_zero_matrix(np.asarray([v]), tol)
    return rank(np.array(rows + [list(v)], dtype=np.asarray(v).dtype), tol) == rank(
        np.array(rows, dtype=np.asarray(v).dtype), tol
    )

"""Alternating forms over a fixed frame ``e_1, ..., e_n``.

Sign convention shared by the whole package: for a 2-form ``f`` the matrix
``M = form_matrix(f)`` has ``M[i][j]`` equal to the coefficient of
``e^i ^ e^j`` (``i < j``), so that ``f(X, Y) = X^T M Y``.  Frame indices are
1-based in every public interface; numpy matrices are 0-based as usual.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import linalg

__all__ = [
    "KForm",
    "wedge",
    "contract",
    "form_matrix",
    "matrix_form",
    "pfaffian",
    "rank_2form",
    "signature",
    "to_scalar",
    "restrict",
]

Index = Tuple[int, ...]


def to_scalar(x, exact: bool = True):
    """Coerce ``x`` to the scalar type of the given mode.

    Exact mode accepts ints, Fractions and ``"p/q"`` strings; floats raise
    ``TypeError`` because a float has no canonical rational value here.
    """
    if exact:
        return linalg._to_fraction(x)
    if isinstance(x, str):
        return float(Fraction(x))
    return float(x)


def _sort_with_sign(idx: Sequence[int]) -> Tuple[int, Optional[Index]]:
    """Sort indices, returning the permutation sign (0 on repetition)."""
    idx = list(idx)
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
            elif idx[j] == idx[j + 1]:
                return 0, None
    if len(set(idx)) != len(idx):
        return 0, None
    return sign, tuple(idx)


class KForm:
    """A degree-``k`` alternating form on an ``n``-dimensional frame.

    Coefficients are stored sparsely against strictly increasing 1-based index
    tuples; missing tuples are zero.  Instances are immutable.
    """

    __slots__ = ("_n", "_k", "_exact", "_coeffs")

    def __init__(self, n: int, k: int, coeffs: Optional[Mapping[Index, object]] = None,
                 exact: bool = True):
        if n < 1:
            raise ValueError("dimension must be positive")
        if not 0 <= k <= n:
            raise ValueError(f"degree {k} out of range for dimension {n}")
        store: Dict[Index, object] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != k:
                raise ValueError(f"index {idx} does not have length {k}")
            if any(not 1 <= i <= n for i in idx):
                raise ValueError(f"index {idx} out of range 1..{n}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index {idx} is not strictly increasing")
            c = to_scalar(c, exact)
            if c != 0:
                store[idx] = c
        self._n, self._k, self._exact, self._coeffs = n, k, exact, store

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Sequence], exact: bool = True) -> "KForm":
        """Build a form from ``(i_1, ..., i_k, coefficient)`` terms in any index order.

        ``KForm.from_terms(8, [(8, 1, 1)])`` is ``e^8 ^ e^1 = -e^1 ^ e^8``.
        Repeated index tuples are summed.
        """
        terms = [tuple(t) for t in terms]
        if not terms:
            raise ValueError("from_terms needs at least one term; use KForm(n, k) for zero")
        k = len(terms[0]) - 1
        acc: Dict[Index, object] = {}
        for t in terms:
            if len(t) - 1 != k:
                raise ValueError("terms of mixed degree")
            sign, idx = _sort_with_sign(t[:-1])
            if idx is None:
                continue
            acc[idx] = acc.get(idx, 0) + sign * to_scalar(t[-1], exact)
        return cls(n, k, acc, exact)

    @classmethod
    def basis(cls, n: int, *indices: int, exact: bool = True) -> "KForm":
        """The decomposable form ``e^{i_1} ^ ... ^ e^{i_k}``."""
        if not indices:
            return cls(n, 0, {(): 1}, exact)
        return cls.from_terms(n, [tuple(indices) + (1,)], exact)

    @property
    def n(self) -> int:
        return self._n

    @property
    def k(self) -> int:
        return self._k

    @property
    def exact(self) -> bool:
        return self._exact

    @property
    def coeffs(self) -> Dict[Index, object]:
        return dict(self._coeffs)

    def __getitem__(self, idx: Index):
        sign, key = _sort_with_sign(idx)
        if key is None:
            return to_scalar(0, self._exact)
        return sign * self._coeffs.get(key, to_scalar(0, self._exact))

    def is_zero(self, tol: float = 0) -> bool:
        return all(abs(c) <= tol for c in self._coeffs.values())

    def to_float(self) -> "KForm":
        return KForm(self._n, self._k, {i: float(c) for i, c in self._coeffs.items()}, exact=False)

    def _check_compatible(self, other: "KForm") -> None:
        if not isinstance(other, KForm):
            raise TypeError("expected a KForm")
        if other._n != self._n:
            raise ValueError(f"dimension mismatch: {self._n} vs {other._n}")
        if other._exact != self._exact:
            raise TypeError("cannot mix exact and float forms; convert explicitly")

    def __add__(self, other: "KForm") -> "KForm":
        self._check_compatible(other)
        if other._k != self._k:
            raise ValueError("cannot add forms of different degree")
        acc = dict(self._coeffs)
        for idx, c in other._coeffs.items():
            acc[idx] = acc.get(idx, 0) + c
        return KForm(self._n, self._k, acc, self._exact)

    def __neg__(self) -> "KForm":
        return KForm(self._n, self._k, {i: -c for i, c in self._coeffs.items()}, self._exact)

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, s) -> "KForm":
        if isinstance(s, KForm):
            return NotImplemented
        s = to_scalar(s, self._exact)
        return KForm(self._n, self._k, {i: s * c for i, c in self._coeffs.items()}, self._exact)

    __rmul__ = __mul__

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (self._n, self._k, self._coeffs) == (other._n, other._k, other._coeffs)

    def __hash__(self):
        return hash((self._n, self._k, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"KForm(n={self._n}, k={self._k}, 0)"
        parts = []
        for idx in sorted(self._coeffs):
            name = "^".join(f"e{i}" for i in idx) or "1"
            parts.append(f"{self._coeffs[idx]}*{name}")
        return f"KForm(n={self._n}, k={self._k}, " + " + ".join(parts) + ")"


def wedge(f: KForm, g: KForm) -> KForm:
    f._check_compatible(g)
    if f.k + g.k > f.n:
        raise ValueError(f"degree overflow: {f.k} + {g.k} > {f.n}")
    acc: Dict[Index, object] = {}
    for a, ca in f._coeffs.items():
        for b, cb in g._coeffs.items():
            sign, idx = _sort_with_sign(a + b)
            if idx is None:
                continue
            acc[idx] = acc.get(idx, 0) + sign * ca * cb
    return KForm(f.n, f.k + g.k, acc, f.exact)


def contract(v: Sequence, f: KForm) -> KForm:
    """Interior product ``i_v f``, i.e. ``f(v, ...)``."""
    if f.k < 1:
        raise ValueError("cannot contract a 0-form")
    if len(v) != f.n:
        raise ValueError(f"vector of length {len(v)} for dimension {f.n}")
    v = [to_scalar(x, f.exact) for x in v]
    acc: Dict[Index, object] = {}
    for idx, c in f._coeffs.items():
        for pos, i in enumerate(idx):
            x = v[i - 1]
            if x == 0:
                continue
            rest = idx[:pos] + idx[pos + 1:]
            acc[rest] = acc.get(rest, 0) + (-1) ** pos * x * c
    return KForm(f.n, f.k - 1, acc, f.exact)


def form_matrix(f: KForm) -> np.ndarray:
    if f.k != 2:
        raise ValueError(f"form_matrix needs a 2-form, got degree {f.k}")
    m = linalg.zeros((f.n, f.n), f.exact)
    for (i, j), c in f._coeffs.items():
        m[i - 1, j - 1] = c
        m[j - 1, i - 1] = -c
    return m


def matrix_form(m, exact: Optional[bool] = None, tol: float = 0) -> KForm:
    """Inverse of :func:`form_matrix`; ``m`` must be skew-symmetric."""
    a = np.asarray(m)
    if exact is None:
        exact = linalg.is_exact(a)
    a = linalg.skew_matrix(linalg.as_exact(a) if exact else linalg.as_float(a), tol)
    n = a.shape[0]
    return KForm(n, 2, {(i + 1, j + 1): a[i, j] for i in range(n) for j in range(i + 1, n)}, exact)


def pfaffian(m, tol: float = 0):
    """Pfaffian by skew-symmetric (Parlett-Reid) elimination with pivoting."""
    a = linalg.skew_matrix(m, tol)
    a = np.array(a, dtype=object if linalg.is_exact(a) else np.float64)
    n = a.shape[0]
    if n % 2:
        raise ValueError("Pfaffian of an odd-dimensional matrix")
    exact = linalg.is_exact(a)
    value = Fraction(1) if exact else 1.0
    for k in range(0, n - 1, 2):
        col = [abs(a[i, k]) for i in range(k + 1, n)]
        kp = k + 1 + max(range(len(col)), key=col.__getitem__)
        if kp != k + 1:
            a[[k + 1, kp]] = a[[kp, k + 1]]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            value = -value
        if abs(a[k, k + 1]) <= tol:
            return Fraction(0) if exact else 0.0
        value = value * a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            a[k + 2:, k + 2:] = (a[k + 2:, k + 2:]
                                 + np.outer(tau, a[k + 2:, k + 1])
                                 - np.outer(a[k + 2:, k + 1], tau))
    return value


def rank_2form(f: KForm, tol: float = 0) -> int:
    return linalg.rank(form_matrix(f), tol)


def signature(s, tol: float = 0) -> Tuple[int, int, int]:
    """Inertia ``(p, q, z)`` of a symmetric matrix by symmetric pivoting.

    Pivots on the largest diagonal entry.  When the remaining diagonal
    vanishes but some ``a_rc`` does not, the congruence ``e_r -> e_r + e_c``
    puts ``2 a_rc`` on the diagonal.  Congruence preserves inertia, so the
    counts are exact in rational mode.
    """
    a = linalg.sym_matrix(s, tol)
    a = np.array(a, dtype=object if linalg.is_exact(a) else np.float64)
    p = q = 0
    while a.shape[0]:
        n = a.shape[0]
        diag = [abs(a[i, i]) for i in range(n)]
        i = max(range(n), key=diag.__getitem__)
        if diag[i] > tol:
            piv = a[i, i]
            if piv > 0:
                p += 1
            else:
                q += 1
            rest = [r for r in range(n) if r != i]
            col = a[rest, i]
            a = a[np.ix_(rest, rest)] - np.outer(col, col) / piv
            continue
        off = [(abs(a[r, c]), r, c) for r in range(n) for c in range(r + 1, n)]
        if not off or max(off)[0] <= tol:
            break
        _, r, c = max(off)
        # e_r + e_c has value 2 a_rc on the diagonal, so re-pivot on it
        a[r] = a[r] + a[c]
        a[:, r] = a[:, r] + a[:, c]
    z = a.shape[0]
    return p, q, z


def restrict(f: KForm, basis) -> KForm:
    """Pull a 2-form back along the inclusion spanned by the rows of ``basis``."""
    b = np.asarray(basis)
    if b.ndim != 2 or b.shape[1] != f.n:
        raise ValueError("basis rows must have the form's dimension")
    m = b @ form_matrix(f) @ b.T
    return matrix_form(m, exact=f.exact)

"""Recursion operators of pairs of non-degenerate 2-forms, and their classification.

For non-degenerate ``omega`` and ``eta`` the recursion operator is the unique
``A`` with ``i_X omega = i_{AX} eta``; with the package sign convention this is
``A = M_eta^{-1} M_omega``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import linalg
from .exterior import KForm, contract, form_matrix, pfaffian, rank_2form, wedge
from .lie import Subspace

__all__ = [
    "DegenerateFormError",
    "PairTag",
    "PairClassification",
    "default_tol",
    "recursion_operator",
    "eta_symmetry_check",
    "classify_pair",
    "complex_kernel_check",
    "couple_conditions",
    "minimal_polynomial_degree",
    "eigenspace",
]

FLOAT_TOL = 1e-9


class DegenerateFormError(ValueError):
    """A form that must be non-degenerate has vanishing Pfaffian."""

    def __init__(self, which: str):
        super().__init__(f"form {which} is degenerate")
        self.which = which


class PairTag(str, enum.Enum):
    TRIVIAL_IDENTITY = "TrivialIdentity"
    TRIVIAL_NEGATION = "TrivialNegation"
    SYMPLECTIC_PAIR = "SymplecticPair"
    HOLOMORPHIC_SYMPLECTIC = "HolomorphicSymplectic"
    GENERIC = "Generic"


@dataclass(frozen=True)
class PairClassification:
    tag: PairTag
    operator: np.ndarray
    plus_space: Optional[Subspace] = None
    minus_space: Optional[Subspace] = None
    omega_plus: Optional[KForm] = None
    omega_minus: Optional[KForm] = None
    ranks: Optional[Tuple[int, int]] = None
    kernels_match: Optional[bool] = None
    min_poly_degree: Optional[int] = None


def default_tol(*forms: KForm) -> float:
    """0 for exact forms, the documented float tolerance otherwise."""
    return 0 if all(f.exact for f in forms) else FLOAT_TOL


def _check_nondegenerate(f: KForm, name: str, tol: float) -> None:
    if f.k != 2:
        raise ValueError(f"{name} must be a 2-form, got degree {f.k}")
    if f.n % 2 or abs(pfaffian(form_matrix(f), tol)) <= tol:
        raise DegenerateFormError(name)


def recursion_operator(omega: KForm, eta: KForm, tol: Optional[float] = None) -> np.ndarray:
    if omega.n != eta.n:
        raise ValueError(f"dimension mismatch: {omega.n} vs {eta.n}")
    tol = default_tol(omega, eta) if tol is None else tol
    _check_nondegenerate(omega, "omega", tol)
    _check_nondegenerate(eta, "eta", tol)
    return linalg.inverse(form_matrix(eta), tol) @ form_matrix(omega)


def eta_symmetry_check(omega: KForm, eta: KForm, a, tol: Optional[float] = None) -> bool:
    """``eta(AX, Y) == eta(X, AY)``, i.e. ``A^T M_eta == M_eta A``."""
    tol = default_tol(omega, eta) if tol is None else tol
    m = form_matrix(eta)
    a = np.asarray(a)
    return linalg.matrices_equal(a.T @ m, m @ a, tol)


def minimal_polynomial_degree(a, tol: float = 0) -> int:
    """Smallest ``d`` with ``I, A, ..., A^d`` linearly dependent."""
    a = np.asarray(a)
    n = a.shape[0]
    power = linalg.identity(n, linalg.is_exact(a))
    rows = [power.reshape(-1)]
    for d in range(1, n + 1):
        power = power @ a
        rows.append(power.reshape(-1))
        if linalg.rank(np.array(rows), tol) < len(rows):
            return d
    return n


def eigenspace(a, value, tol: float = 0) -> Subspace:
    a = np.asarray(a)
    n = a.shape[0]
    shifted = a - value * linalg.identity(n, linalg.is_exact(a))
    return Subspace(n, linalg.nullspace(shifted, tol), tol)


def kernel(f: KForm, tol: float = 0) -> Subspace:
    return Subspace(f.n, linalg.nullspace(form_matrix(f), tol), tol)


def classify_pair(omega: KForm, eta: KForm, tol: Optional[float] = None) -> PairClassification:
    """Classify ``(omega, eta)`` by the algebraic type of its recursion operator.

    ``A = +-Id`` are reported as trivial before anything else.  ``A^2 = Id``
    yields a symplectic pair: ``D+ = ker(omega - eta)`` and ``D- = ker(omega + eta)``
    are returned together with ``Omega+- = omega +- eta`` and their ranks, and
    ``kernels_match`` records whether these kernels equal the eigenspaces of A.
    ``A^2 = -Id`` is holomorphic symplectic; anything else is generic and carries
    the degree of the minimal polynomial of A.
    """
    tol = default_tol(omega, eta) if tol is None else tol
    a = recursion_operator(omega, eta, tol)
    n = omega.n
    ident = linalg.identity(n, linalg.is_exact(a))
    if linalg.matrices_equal(a, ident, tol):
        return PairClassification(PairTag.TRIVIAL_IDENTITY, a)
    if linalg.matrices_equal(a, -ident, tol):
        return PairClassification(PairTag.TRIVIAL_NEGATION, a)
    square = a @ a
    if linalg.matrices_equal(square, ident, tol):
        plus_form, minus_form = omega + eta, omega - eta
        d_plus, d_minus = kernel(minus_form, tol), kernel(plus_form, tol)
        match = (d_plus == eigenspace(a, 1, tol) and d_minus == eigenspace(a, -1, tol)
                 and d_plus.dim + d_minus.dim == n)
        return PairClassification(
            PairTag.SYMPLECTIC_PAIR, a,
            plus_space=d_plus, minus_space=d_minus,
            omega_plus=plus_form, omega_minus=minus_form,
            ranks=(rank_2form(plus_form, tol), rank_2form(minus_form, tol)),
            kernels_match=match,
        )
    if linalg.matrices_equal(square, -ident, tol):
        return PairClassification(PairTag.HOLOMORPHIC_SYMPLECTIC, a)
    return PairClassification(PairTag.GENERIC, a, min_poly_degree=minimal_polynomial_degree(a, tol))


def complex_kernel_check(omega: KForm, eta: KForm, a, tol: Optional[float] = None) -> bool:
    """Check that every ``X = u + i A u`` lies in the kernel of ``omega + i eta``.

    Real and imaginary parts are carried as separate forms, so for rational
    input the arithmetic is exact Gaussian-rational arithmetic.  Raises if
    ``A^2 != -Id``.
    """
    tol = default_tol(omega, eta) if tol is None else tol
    a = np.asarray(a)
    n = omega.n
    if not linalg.matrices_equal(a @ a, -linalg.identity(n, linalg.is_exact(a)), tol):
        raise ValueError("complex_kernel_check requires A^2 = -Id")
    for col in range(n):
        u = linalg.identity(n, omega.exact)[col]
        au = a @ u
        # i_{u + i v}(omega + i eta) = (i_u omega - i_v eta) + i (i_u eta + i_v omega)
        real = contract(u, omega) - contract(au, eta)
        imag = contract(u, eta) + contract(au, omega)
        if not (real.is_zero(tol) and imag.is_zero(tol)):
            return False
    return True


def couple_conditions(omega: KForm, eta: KForm, tol: Optional[float] = None) -> Tuple[bool, bool]:
    """``(omega^omega == eta^eta, omega^eta == 0)`` in dimension four."""
    if omega.n != 4 or eta.n != 4:
        raise ValueError("couple conditions are defined in dimension 4")
    tol = default_tol(omega, eta) if tol is None else tol
    return ((wedge(omega, omega) - wedge(eta, eta)).is_zero(tol),
            wedge(omega, eta).is_zero(tol))

"""Seeded random exact inputs shared by the property tests and the acceptance suite."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from bisymplectic import linalg, matrix_form, pfaffian


def random_rational(rng, span=4, den=4) -> Fraction:
    return Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, den + 1)))


def random_skew(rng, n) -> np.ndarray:
    m = linalg.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            c = random_rational(rng)
            m[i, j], m[j, i] = c, -c
    return m


def random_nondegenerate_skew(rng, n) -> np.ndarray:
    while True:
        m = random_skew(rng, n)
        if pfaffian(m) != 0:
            return m


def random_invertible(rng, n) -> np.ndarray:
    while True:
        b = linalg.as_exact(rng.integers(-2, 3, size=(n, n)))
        if linalg.det(b) != 0:
            return b


def random_symplectic_pair(rng, n):
    """``(omega, eta, B, p)`` with ``Omega+`` of rank ``p`` on the first ``p`` coordinates
    and ``Omega-`` on the rest, both moved by the congruence ``B``.

    The recursion operator is ``A = B^-1 diag(Id_p, -Id_{n-p}) B``.
    """
    p = 2 * int(rng.integers(1, n // 2))
    plus, minus = linalg.zeros((n, n)), linalg.zeros((n, n))
    plus[:p, :p] = random_nondegenerate_skew(rng, p)
    minus[p:, p:] = random_nondegenerate_skew(rng, n - p)
    b = random_invertible(rng, n)
    plus, minus = b.T @ plus @ b, b.T @ minus @ b
    half = Fraction(1, 2)
    omega = matrix_form(half * (plus + minus))
    eta = matrix_form(half * (plus - minus))
    return omega, eta, b, p


def expected_eigenspaces(b, p):
    """Column vectors of ``B^-1`` span the ``+1`` (first ``p``) and ``-1`` eigenspaces."""
    binv = linalg.inverse(b)
    return binv[:, :p].T, binv[:, p:].T


def random_nondegenerate_pair(rng, n):
    return (matrix_form(random_nondegenerate_skew(rng, n)),
            matrix_form(random_nondegenerate_skew(rng, n)))

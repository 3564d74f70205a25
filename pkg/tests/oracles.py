"""Slow, independent reference computations used only by the tests."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def perm_sign(p) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def pfaffian_matchings(m) -> Fraction:
    """Expansion along the first row: sum over perfect matchings."""
    m = [[Fraction(x) for x in row] for row in np.asarray(m).tolist()]

    def rec(idx):
        if not idx:
            return Fraction(1)
        first, rest = idx[0], idx[1:]
        total = Fraction(0)
        for pos, j in enumerate(rest):
            if m[first][j]:
                total += (-1) ** pos * m[first][j] * rec(rest[:pos] + rest[pos + 1:])
        return total

    n = len(m)
    return rec(tuple(range(n))) if n % 2 == 0 else Fraction(0)


def evaluate(coeffs, vectors) -> Fraction:
    """Value of ``sum c_I e^I`` on vectors; ``e^I(v_1..v_k) = det(v_a[I_b])``."""
    total = Fraction(0)
    k = len(vectors)
    for idx, c in coeffs.items():
        for perm in itertools.permutations(range(k)):
            term = Fraction(perm_sign(perm))
            for a, b in enumerate(perm):
                term *= vectors[a][idx[b] - 1]
            total += c * term
    return total


def wedge_bruteforce(n, f, k, g, l):
    """Coefficients of ``f ^ g`` from the shuffle-sum definition, evaluated on basis tuples."""
    out = {}
    unit = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for idx in itertools.combinations(range(1, n + 1), k + l):
        vecs = [unit[i - 1] for i in idx]
        total = Fraction(0)
        for perm in itertools.permutations(range(k + l)):
            s = perm_sign(perm)
            total += s * evaluate(f, [vecs[p] for p in perm[:k]]) * evaluate(g, [vecs[p] for p in perm[k:]])
        total /= _fact(k) * _fact(l)
        if total:
            out[idx] = total
    return out


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def inertia_float(s):
    w = np.linalg.eigvalsh(np.asarray(s, dtype=float))
    return int((w > 1e-9).sum()), int((w < -1e-9).sum()), int((abs(w) <= 1e-9).sum())


def nijenhuis_dense(c, a):
    """Direct evaluation with float structure constants ``c[k, i, j]``."""
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    n = a.shape[0]

    def br(x, y):
        return np.einsum("kij,i,j->k", c, x, y)

    out = np.zeros((n, n, n))
    eye = np.eye(n)
    for i in range(n):
        for j in range(n):
            x, y = eye[i], eye[j]
            out[i, j] = a @ a @ br(x, y) + br(a @ x, a @ y) - a @ br(a @ x, y) - a @ br(x, a @ y)
    return out


def finite_difference(fn, x, h=1e-6):
    """Central differences of a vector function, columns = d/dx_k."""
    x = np.asarray(x, dtype=float)
    cols = []
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        cols.append((fn(x + e) - fn(x - e)) / (2 * h))
    return np.stack(cols, axis=-1)


def product_bruteforce(factors):
    """Coefficients of ``f_1 ^ ... ^ f_r`` by expanding every choice of one term per factor."""
    out = {}
    for choice in itertools.product(*(list(f.items()) for f in factors)):
        idx = sum((t[0] for t in choice), ())
        if len(set(idx)) < len(idx):
            continue
        order = sorted(range(len(idx)), key=idx.__getitem__)
        coeff = Fraction(perm_sign(order))
        for _, c in choice:
            coeff *= c
        key = tuple(sorted(idx))
        out[key] = out.get(key, 0) + coeff
    return {k: v for k, v in out.items() if v}

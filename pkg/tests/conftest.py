import itertools
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bisymplectic import KForm, linalg

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@st.composite
def kforms(draw, n, k, density=0.6):
    coeffs = {}
    for idx in itertools.combinations(range(1, n + 1), k):
        if draw(st.floats(0, 1)) < density:
            coeffs[idx] = draw(small_rationals)
    return KForm(n, k, coeffs)


@st.composite
def skew_matrices(draw, n):
    m = linalg.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            c = draw(small_rationals)
            m[i, j], m[j, i] = c, -c
    return m


@st.composite
def int_matrices(draw, n, lo=-3, hi=3):
    vals = draw(st.lists(st.integers(lo, hi), min_size=n * n, max_size=n * n))
    return linalg.as_exact(np.array(vals).reshape(n, n))


@st.composite
def invertible_matrices(draw, n):
    # unit lower times unit upper times signed permutation: always invertible
    lower, upper = linalg.identity(n), linalg.identity(n)
    for i in range(n):
        for j in range(i):
            lower[i, j] = Fraction(draw(st.integers(-2, 2)))
            upper[j, i] = Fraction(draw(st.integers(-2, 2)))
    perm = draw(st.permutations(range(n)))
    p = linalg.zeros((n, n))
    for i, j in enumerate(perm):
        p[i, j] = Fraction(draw(st.sampled_from([-1, 1])))
    return lower @ upper @ p


def standard_symplectic(n):
    m = linalg.zeros((n, n))
    for i in range(0, n, 2):
        m[i, i + 1], m[i + 1, i] = Fraction(1), Fraction(-1)
    return m


# PASS/FAIL lines collected by the acceptance suite
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bisymplectic import (DegenerateFormError, KForm, PairTag, Subspace, builtin_example,
                          classify_pair, complex_kernel_check, contract, couple_conditions,
                          eta_symmetry_check, form_matrix, linalg, matrix_form,
                          recursion_operator)
from bisymplectic.recursion import eigenspace, minimal_polynomial_degree

from generators import (expected_eigenspaces, random_invertible, random_nondegenerate_pair,
                        random_symplectic_pair)

HALF = Fraction(1, 2)


def e(n, *idx):
    return KForm.basis(n, *idx)


def block_pair():
    plus, minus = e(4, 1, 2), e(4, 3, 4)
    return HALF * (plus + minus), HALF * (plus - minus)


def flat_holomorphic():
    return e(4, 1, 2) + e(4, 3, 4), e(4, 1, 3) + KForm.from_terms(4, [(4, 2, 1)])


class TestRecursionOperator:
    def test_equal_forms(self):
        w = e(4, 1, 2) + e(4, 3, 4)
        assert linalg.matrices_equal(recursion_operator(w, w), linalg.identity(4))

    def test_scaling(self):
        c = Fraction(3, 7)
        a = recursion_operator(c * e(2, 1, 2), e(2, 1, 2))
        assert linalg.matrices_equal(a, c * linalg.identity(2))

    def test_block_pair(self):
        a = recursion_operator(*block_pair())
        assert a.tolist() == np.diag([1, 1, -1, -1]).tolist()

    def test_defining_identity(self):
        omega, eta = flat_holomorphic()
        a = recursion_operator(omega, eta)
        for col in range(4):
            x = linalg.identity(4)[col]
            assert contract(x, omega) == contract(a @ x, eta)

    def test_degenerate_reports_which(self):
        with pytest.raises(DegenerateFormError) as exc:
            recursion_operator(e(4, 1, 2), e(4, 1, 2) + e(4, 3, 4))
        assert exc.value.which == "omega"
        with pytest.raises(DegenerateFormError) as exc:
            recursion_operator(e(4, 1, 2) + e(4, 3, 4), e(4, 1, 2))
        assert exc.value.which == "eta"

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            recursion_operator(e(2, 1, 2), e(4, 1, 2) + e(4, 3, 4))

    @given(st.sampled_from([2, 4, 6]), st.integers(0, 2 ** 32 - 1))
    def test_round_trip_and_symmetry(self, n, seed):
        omega, eta = random_nondegenerate_pair(np.random.default_rng(seed), n)
        a, b = recursion_operator(omega, eta), recursion_operator(eta, omega)
        assert linalg.matrices_equal(a @ b, linalg.identity(n))
        assert eta_symmetry_check(omega, eta, a)
        # oracle: eta(AX, Y) - eta(X, AY) on every frame pair
        m = form_matrix(eta)
        for i in range(n):
            for j in range(n):
                x, y = linalg.identity(n)[i], linalg.identity(n)[j]
                assert (a @ x) @ m @ y == x @ m @ (a @ y)

    @given(st.integers(0, 2 ** 32 - 1))
    def test_float_mode_agrees(self, seed):
        omega, eta = random_nondegenerate_pair(np.random.default_rng(seed), 4)
        exact = recursion_operator(omega, eta)
        approx = recursion_operator(omega.to_float(), eta.to_float())
        assert np.allclose(approx, linalg.as_float(exact), atol=1e-8)


class TestEtaSymmetry:
    def test_identical_forms(self):
        w = e(4, 1, 2) + e(4, 3, 4)
        assert eta_symmetry_check(w, w, linalg.identity(4))

    def test_block_pair(self):
        w, eta = block_pair()
        assert eta_symmetry_check(w, eta, recursion_operator(w, eta))

    def test_wrong_operator(self):
        w, eta = block_pair()
        bad = linalg.as_exact([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])
        assert not eta_symmetry_check(w, eta, bad)


class TestClassifyPair:
    def test_trivial(self):
        w = e(4, 1, 2) + e(4, 3, 4)
        assert classify_pair(w, w).tag == PairTag.TRIVIAL_IDENTITY
        assert classify_pair(-w, w).tag == PairTag.TRIVIAL_NEGATION

    def test_block_pair(self):
        c = classify_pair(*block_pair())
        assert c.tag == PairTag.SYMPLECTIC_PAIR and c.kernels_match
        assert c.plus_space == Subspace(4, [[1, 0, 0, 0], [0, 1, 0, 0]])
        assert c.minus_space == Subspace(4, [[0, 0, 1, 0], [0, 0, 0, 1]])
        assert c.ranks == (2, 2)
        assert c.omega_plus == e(4, 1, 2) and c.omega_minus == e(4, 3, 4)

    def test_holomorphic(self):
        c = classify_pair(*flat_holomorphic())
        assert c.tag == PairTag.HOLOMORPHIC_SYMPLECTIC
        assert linalg.matrices_equal(c.operator @ c.operator, -linalg.identity(4))

    def test_generic(self):
        w, eta = e(4, 1, 2) + e(4, 3, 4), e(4, 1, 2) + 2 * e(4, 3, 4)
        c = classify_pair(w, eta)
        assert c.tag == PairTag.GENERIC
        assert c.operator.tolist() == np.diag([1, 1, Fraction(1, 2), Fraction(1, 2)]).tolist()
        assert c.min_poly_degree == 2

    def test_generic_direct_division(self):
        # the other order: A = M_eta^-1 M_w = diag(1, 1, 2, 2)
        w, eta = e(4, 1, 2) + 2 * e(4, 3, 4), e(4, 1, 2) + e(4, 3, 4)
        assert classify_pair(w, eta).operator.tolist() == np.diag([1, 1, 2, 2]).tolist()

    def test_eigenspace_output_is_echelon(self):
        c = classify_pair(*block_pair())
        assert linalg.matrices_equal(c.plus_space.basis, linalg.rref(c.plus_space.basis)[0])

    @given(st.sampled_from([4, 6, 8]), st.integers(0, 2 ** 32 - 1))
    def test_random_symplectic_pairs(self, n, seed):
        omega, eta, b, p = random_symplectic_pair(np.random.default_rng(seed), n)
        c = classify_pair(omega, eta)
        assert c.tag == PairTag.SYMPLECTIC_PAIR and c.kernels_match
        plus, minus = expected_eigenspaces(b, p)
        assert c.plus_space == Subspace(n, plus) == eigenspace(c.operator, 1)
        assert c.minus_space == Subspace(n, minus) == eigenspace(c.operator, -1)
        assert c.ranks == (p, n - p)


class TestMinimalPolynomial:
    def test_examples(self):
        assert minimal_polynomial_degree(linalg.identity(3)) == 1
        assert minimal_polynomial_degree(linalg.as_exact(np.diag([1, 2, 2]))) == 2
        jordan = linalg.as_exact([[2, 1, 0], [0, 2, 1], [0, 0, 2]])
        assert minimal_polynomial_degree(jordan) == 3


class TestComplexKernel:
    def test_flat(self):
        w, eta = flat_holomorphic()
        assert complex_kernel_check(w, eta, recursion_operator(w, eta))

    def test_dotti_fino_pair(self):
        w1, w2, _ = builtin_example("dotti-fino-8").forms
        assert complex_kernel_check(w1, w2, recursion_operator(w1, w2))

    def test_sign_flipped_operator(self):
        # -A still squares to -Id but is the conjugate structure
        w, eta = flat_holomorphic()
        assert not complex_kernel_check(w, eta, -recursion_operator(w, eta))

    def test_single_entry_flip_violates_precondition(self):
        w, eta = flat_holomorphic()
        bad = recursion_operator(w, eta).copy()
        bad[0] = -bad[0]
        with pytest.raises(ValueError):
            complex_kernel_check(w, eta, bad)


class TestCoupleConditions:
    def test_flat_holomorphic(self):
        assert couple_conditions(*flat_holomorphic()) == (True, True)

    def test_equal_forms(self):
        w = e(4, 1, 2) + e(4, 3, 4)
        assert couple_conditions(w, w) == (True, False)

    def test_block_pair(self):
        # w^2 = e1234/2, eta^2 = -e1234/2, w ^ eta = (e1234 - e1234)/4
        assert couple_conditions(*block_pair()) == (False, True)

    def test_wrong_dimension(self):
        with pytest.raises(ValueError):
            couple_conditions(e(2, 1, 2), e(2, 1, 2))

    @given(st.integers(0, 2 ** 32 - 1))
    def test_holomorphic_implies_couple(self, seed):
        # pull the flat structure back by a random invertible matrix
        b = random_invertible(np.random.default_rng(seed), 4)
        w, eta = flat_holomorphic()
        w, eta = matrix_form(b.T @ form_matrix(w) @ b), matrix_form(b.T @ form_matrix(eta) @ b)
        assert classify_pair(w, eta).tag == PairTag.HOLOMORPHIC_SYMPLECTIC
        assert couple_conditions(w, eta) == (True, True)

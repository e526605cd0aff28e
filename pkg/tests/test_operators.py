"""Shift algebra, matrices, norms, and the projection quadrature oracle."""

import io

import numpy as np
import pytest

from bergshift import (
    BasisVector,
    Monomial,
    MonomialSum,
    PreconditionError,
    Sampled,
    TruncationError,
    WeightedShift,
    add_shifts,
    apply,
    brute_force_toeplitz,
    commutator,
    compose,
    identity_shift,
    matrix,
    operator_norm_estimate,
    power,
    read_matrix_csv,
    scale,
    shift_from_symbol,
    shift_sum,
    sum_commutator,
    write_matrix_csv,
    zero_shift,
)


class TestShiftFromSymbol:
    def test_symbol_z_is_unweighted_shift(self):
        sh = shift_from_symbol(1, Monomial(1), 30)
        assert np.allclose(sh.weights.real, 1.0, atol=1e-15)
        # oracle confirmation at a few k
        for k in (0, 3, 11):
            assert brute_force_toeplitz(1, Monomial(1), k) == pytest.approx(1.0, abs=1e-11)

    def test_radial_square_diagonal(self):
        sh = shift_from_symbol(0, Monomial(2), 20)
        ks = np.arange(21)
        assert np.allclose(sh.weights.real, (2 * ks + 2) / (2 * ks + 4), atol=1e-15)
        assert brute_force_toeplitz(0, Monomial(2), 4) == pytest.approx(10 / 12, abs=1e-11)

    def test_symbol_z_squared(self):
        sh = shift_from_symbol(2, Monomial(2), 20)
        assert np.allclose(sh.weights.real, 1.0, atol=1e-15)
        assert brute_force_toeplitz(2, Monomial(2), 5) == pytest.approx(1.0, abs=1e-11)

    def test_monomial_sum_symbol(self):
        sym = MonomialSum(((1.0, 2.0), (0.5, 4.0)))
        sh = shift_from_symbol(1, sym, 10)
        k = 3
        z = 2 * k + 3
        expected = 2 * (k + 2) * (1 / (z + 2) + 0.5 / (z + 4))
        assert sh.weights[k].real == pytest.approx(expected, rel=1e-14)

    def test_sampled_symbol_routes_through_quadrature(self):
        sh = shift_from_symbol(1, Sampled(lambda r: r**3), 5, quad_tol=1e-12)
        want = shift_from_symbol(1, Monomial(3), 5)
        assert np.allclose(sh.weights, want.weights, atol=1e-10)


class TestBruteForceOracle:
    def test_projection_of_basis_vector_is_itself(self):
        assert brute_force_toeplitz(0, Monomial(0), 5) == pytest.approx(1.0, abs=1e-11)

    def test_degree_one_radial_r(self):
        # 2(0+2) * 1/4
        assert brute_force_toeplitz(1, Monomial(1), 0) == pytest.approx(1.0, abs=1e-11)

    def test_degree_two_radial_quartic(self):
        # 2(k+3)/(2k+8) at k=0
        assert brute_force_toeplitz(2, Monomial(4), 0) == pytest.approx(3 / 4, abs=1e-11)


class TestCompose:
    def test_identity_neutral(self):
        a = shift_from_symbol(1, Monomial(3), 20)
        out = compose(a, identity_shift(20))
        assert out.degree == a.degree
        assert np.allclose(out.weights, a.weights[: out.k_max + 1])

    def test_two_unweighted_shifts(self):
        a = shift_from_symbol(1, Monomial(1), 20)
        out = compose(a, a)
        assert out.degree == 2
        assert np.allclose(out.weights.real, 1.0)

    def test_diagonal_after_shift(self):
        diag = shift_from_symbol(0, Monomial(2), 20)
        sh = shift_from_symbol(1, Monomial(1), 20)
        out = compose(diag, sh)
        ks = np.arange(out.k_max + 1)
        assert np.allclose(out.weights.real, (2 * ks + 4) / (2 * ks + 6))

    def test_degree_adds(self):
        a = shift_from_symbol(2, Monomial(3), 20)
        b = shift_from_symbol(3, Monomial(1), 20)
        assert compose(a, b).degree == 5

    def test_associativity_in_weight_algebra(self):
        # reordering float products moves the last ulp, nothing more
        a = shift_from_symbol(1, Monomial(2), 40)
        b = shift_from_symbol(2, Monomial(3), 40)
        c = shift_from_symbol(1, Monomial(4), 40)
        left = compose(a, compose(b, c))
        right = compose(compose(a, b), c)
        kk = min(left.k_max, right.k_max)
        assert left.degree == right.degree == 4
        np.testing.assert_allclose(left.weights[: kk + 1], right.weights[: kk + 1],
                                   rtol=5e-16, atol=0)

    def test_empty_truncation_rejected(self):
        a = shift_from_symbol(1, Monomial(1), 2)
        b = shift_from_symbol(5, Monomial(1), 10)
        with pytest.raises(TruncationError):
            compose(a, b)


class TestPower:
    def test_first_power_is_identity_on_weights(self):
        a = shift_from_symbol(1, Monomial(3), 20)
        assert np.array_equal(power(a, 1).weights, a.weights)

    def test_unweighted_fifth_power(self):
        a = shift_from_symbol(1, Monomial(1), 20)
        out = power(a, 5)
        assert out.degree == 5
        assert np.allclose(out.weights.real, 1.0)

    def test_insufficient_truncation(self):
        a = shift_from_symbol(2, Monomial(1), 3)
        with pytest.raises(TruncationError):
            power(a, 4)

    def test_exponent_validation(self):
        a = shift_from_symbol(1, Monomial(1), 5)
        with pytest.raises(PreconditionError):
            power(a, 0)


class TestCommutator:
    def test_self_commutator_vanishes(self):
        a = shift_from_symbol(1, Monomial(3), 30)
        out = commutator(a, a)
        assert np.all(out.weights == 0)

    def test_antisymmetry_exact(self):
        a = shift_from_symbol(1, Monomial(2), 30)
        b = shift_from_symbol(2, Monomial(3), 30)
        ab, ba = commutator(a, b), commutator(b, a)
        assert np.array_equal(ab.weights, -ba.weights)

    def test_shift_against_diagonal_closed_form(self):
        a = shift_from_symbol(1, Monomial(1), 40)
        b = shift_from_symbol(0, Monomial(2), 40)
        out = commutator(a, b)
        ks = np.arange(out.k_max + 1)
        assert np.allclose(out.weights.real, -1.0 / ((ks + 2) * (ks + 3)), atol=1e-15)

    def test_cubic_pair_closed_form(self):
        # weights w(k) = 2(k+2)/(2k+6) and 2(k+3)/(2k+7); eliminating the
        # transform values by hand gives
        # [a, b](k) = 8 (k+4)(3k+11) / ((2k+6)(2k+7)(2k+9)(2k+10)),
        # confirmed below against projection-oracle weights
        a = shift_from_symbol(1, Monomial(3), 60)
        b = shift_from_symbol(2, Monomial(3), 60)
        out = commutator(a, b)
        ks = np.arange(out.k_max + 1)
        form = 8 * (ks + 4) * (3 * ks + 11) / (
            (2 * ks + 6) * (2 * ks + 7) * (2 * ks + 9) * (2 * ks + 10))
        assert np.allclose(out.weights.real, form, atol=1e-15)
        for k in (0, 5):
            ora = (brute_force_toeplitz(1, Monomial(3), k + 2)
                   * brute_force_toeplitz(2, Monomial(3), k)
                   - brute_force_toeplitz(2, Monomial(3), k + 1)
                   * brute_force_toeplitz(1, Monomial(3), k))
            assert out.weights[k].real == pytest.approx(ora, abs=1e-10)

    def test_square_cubic_pair_closed_form(self):
        # this pair produces the compact form 4(k+4)/((2k+5)(2k+7)(2k+9))
        a = shift_from_symbol(1, Monomial(2), 60)
        b = shift_from_symbol(2, Monomial(3), 60)
        out = commutator(a, b)
        ks = np.arange(out.k_max + 1)
        form = 4 * (ks + 4) / ((2 * ks + 5) * (2 * ks + 7) * (2 * ks + 9))
        assert np.allclose(out.weights.real, form, atol=1e-16)


class TestSumsAndScaling:
    def test_single_term_sum(self):
        a = shift_from_symbol(1, Monomial(3), 10)
        s = shift_sum([a])
        assert s.degrees == (1,)
        assert s.term(1) is a

    def test_scale_by_zero(self):
        a = shift_from_symbol(1, Monomial(3), 10)
        assert np.all(scale(a, 0).weights == 0)

    def test_two_term_structure(self):
        s = shift_sum([
            shift_from_symbol(1, Monomial(3), 10),
            shift_from_symbol(2, Monomial(3), 10),
        ])
        assert s.degrees == (1, 2)

    def test_duplicate_degrees_rejected(self):
        a = shift_from_symbol(1, Monomial(3), 10)
        b = shift_from_symbol(1, Monomial(2), 10)
        with pytest.raises(PreconditionError):
            shift_sum([a, b])

    def test_add_same_degree(self):
        a = shift_from_symbol(1, Monomial(3), 10)
        out = add_shifts(a, scale(a, -1))
        assert np.all(out.weights == 0)

    def test_sum_commutator_collects_colliding_degrees(self):
        # degrees 1+2 and 2+1 collide at total degree 3
        s = shift_sum([shift_from_symbol(1, Monomial(3), 30),
                       shift_from_symbol(2, Monomial(5), 30)])
        t = shift_sum([shift_from_symbol(1, Monomial(3), 30),
                       shift_from_symbol(2, Monomial(5), 30)])
        out = sum_commutator(s, t)
        deg3 = out.term(3)
        assert deg3 is not None
        assert np.max(np.abs(deg3.weights)) < 1e-15  # [x, x] = 0


class TestApply:
    def test_unweighted_shift_moves_basis_vector(self):
        a = shift_from_symbol(1, Monomial(1), 10)
        e3 = np.zeros(4)
        e3[3] = 1.0
        out = apply(a, e3)
        assert out[4] == pytest.approx(1.0)
        assert np.count_nonzero(out) == 1

    def test_diagonal_action_on_constant(self):
        d = shift_from_symbol(0, Monomial(2), 10)
        out = apply(d, [1.0])
        assert out[0] == pytest.approx(0.5)

    def test_zero_operator(self):
        z = zero_shift(2, 10)
        assert np.all(apply(z, [1.0, 2.0, 3.0]) == 0)

    def test_support_is_single_shifted_index(self):
        a = shift_from_symbol(3, Monomial(2), 25)
        for k in range(20):
            e = np.zeros(k + 1)
            e[k] = 1.0
            out = apply(a, e)
            assert set(np.nonzero(out)[0]) == {k + 3}

    def test_length_overflow(self):
        a = shift_from_symbol(1, Monomial(1), 4)
        with pytest.raises(TruncationError):
            apply(a, np.ones(9))

    def test_shift_sum_accumulates(self):
        s = shift_sum([shift_from_symbol(1, Monomial(1), 10),
                       shift_from_symbol(2, Monomial(2), 10)])
        out = apply(s, [1.0])
        assert out[1] != 0 and out[2] != 0 and out[0] == 0


class TestMatrix:
    def test_identity_matrix(self):
        assert np.array_equal(matrix(identity_shift(5), 3), np.eye(3, dtype=complex))

    def test_unweighted_subdiagonal(self):
        m = matrix(shift_from_symbol(1, Monomial(1), 5), 3)
        expect = np.zeros((3, 3), dtype=complex)
        expect[1, 0] = expect[2, 1] = 1.0
        assert np.array_equal(m, expect)

    def test_commutator_matches_matrix_products(self):
        K = 16
        a = shift_from_symbol(1, Monomial(2), 64)
        b = shift_from_symbol(2, Monomial(3), 64)
        lhs = matrix(commutator(a, b), K)
        rhs = matrix(a, K) @ matrix(b, K) - matrix(b, K) @ matrix(a, K)
        deg = a.degree + b.degree
        band = np.tril(np.ones((K, K)), -deg) * np.triu(np.ones((K, K)), -deg)
        assert np.max(np.abs((lhs - rhs) * band)) < 1e-15

    def test_compose_matches_matrix_product_on_band(self):
        K = 12
        a = shift_from_symbol(1, Monomial(2), 64)
        b = shift_from_symbol(2, Monomial(4), 64)
        lhs = matrix(compose(a, b), K)
        rhs = matrix(a, K) @ matrix(b, K)
        deg = a.degree + b.degree
        for k in range(K - deg):
            assert abs(lhs[k + deg, k] - rhs[k + deg, k]) <= 1e-13 * abs(rhs[k + deg, k])

    def test_size_beyond_truncation(self):
        with pytest.raises(TruncationError):
            matrix(shift_from_symbol(1, Monomial(1), 4), 10)


class TestNormEstimate:
    def test_unweighted_shift_below_one(self):
        a = shift_from_symbol(1, Monomial(1), 1000)
        v = operator_norm_estimate(a)
        assert 0.999 < v < 1.0

    def test_zero_operator(self):
        assert operator_norm_estimate(zero_shift(1, 10)) == 0.0

    def test_diagonal_supremum_at_truncation(self):
        a = shift_from_symbol(0, Monomial(2), 500)
        v = operator_norm_estimate(a)
        assert v == pytest.approx((2 * 500 + 2) / (2 * 500 + 4), rel=1e-14)
        assert 0 < v < 1


class TestCsvRoundTrip:
    def test_real_matrix(self, tmp_path):
        m = matrix(shift_from_symbol(1, Monomial(3), 10), 8)
        path = tmp_path / "m.csv"
        write_matrix_csv(m, path)
        assert np.array_equal(read_matrix_csv(path), m)

    def test_complex_matrix(self):
        m = (0.3 - 1.7j) * matrix(shift_from_symbol(2, Monomial(1), 10), 6)
        buf = io.StringIO()
        write_matrix_csv(m, buf)
        buf.seek(0)
        assert np.array_equal(read_matrix_csv(buf), m)


class TestValueTypes:
    def test_basis_vector_norm(self):
        assert BasisVector(4).norm_squared == pytest.approx(1 / 5)

    def test_weights_are_frozen(self):
        a = shift_from_symbol(1, Monomial(1), 5)
        with pytest.raises(ValueError):
            a.weights[0] = 2.0

    def test_nonfinite_weights_rejected(self):
        with pytest.raises(PreconditionError):
            WeightedShift(1, [1.0, float("nan")])

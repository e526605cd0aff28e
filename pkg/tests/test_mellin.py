"""Transform values, quadrature, and the uniqueness-condition checker."""

import math

import numpy as np
import pytest

from bergshift import (
    INCONCLUSIVE,
    SATISFIED,
    VIOLATED,
    DomainError,
    MellinDomainPoint,
    Monomial,
    MonomialSum,
    PoleError,
    PreconditionError,
    QuadratureError,
    Sampled,
    adaptive_quadrature,
    mellin_eval,
    mellin_monomial,
    muntz_szasz_check,
)


def quad_oracle(f, z, tol=1e-13):
    """Independent route: integrate f(r) r^(z-1) directly."""
    return adaptive_quadrature(lambda r: f(r) * r ** (z - 1), 0.0, 1.0, tol)


class TestMellinEval:
    def test_constant_symbol_at_z3(self):
        assert mellin_eval(Monomial(0), 3) == pytest.approx(1 / 3, abs=1e-15)

    def test_square_symbol_at_shift_grid_point(self):
        # z = 2k+p+2 with k=0, p=1 lands on z=3; oracle integral gives 1/5
        oracle = quad_oracle(lambda r: r**2, 3)
        assert oracle == pytest.approx(1 / 5, abs=1e-12)
        assert mellin_eval(Monomial(2), 3) == pytest.approx(oracle, abs=1e-12)

    def test_sampled_cubic_within_quad_tol(self):
        val = mellin_eval(Sampled(lambda r: r**3), 4, quad_tol=1e-12)
        assert val == pytest.approx(1 / 7, abs=1e-12)

    @pytest.mark.parametrize("n", [0, 1, 2, 5, 9])
    @pytest.mark.parametrize("z", [2.0, 3.5, 7.0, 2 + 3j])
    def test_monomial_and_closed_form_identical(self, n, z):
        assert mellin_eval(Monomial(n), z) == mellin_monomial(n, z)

    @pytest.mark.parametrize("n", [0, 2, 4])
    def test_sampled_wrapper_agrees_with_closed_form(self, n):
        closed = mellin_monomial(n, 5.0)
        sampled = mellin_eval(Sampled(lambda r, n=n: r**n), 5.0, quad_tol=1e-12)
        assert abs(sampled - closed) < 1e-12

    def test_linearity_of_monomial_sum(self):
        rng = np.random.default_rng(7)
        coeffs = rng.uniform(-2, 2, size=6)
        exps = rng.uniform(-0.5, 8.0, size=6)
        sym = MonomialSum(tuple(zip(coeffs, exps)))
        z = 4.25
        direct = mellin_eval(sym, z)
        summed = sum(c / (z + e) for c, e in zip(coeffs, exps))
        assert abs(direct - summed) <= 10 * np.finfo(float).eps * len(coeffs)

    def test_analytic_derivative_by_finite_differences(self):
        # d/dz of 1/(z+n) is -1/(z+n)^2
        n, z, h = 3, 5.0, 1e-4
        fd = (mellin_eval(Monomial(n), z + h) - mellin_eval(Monomial(n), z - h)) / (2 * h)
        assert fd == pytest.approx(-1.0 / (z + n) ** 2, abs=1e-6)

    def test_domain_left_of_two_rejected(self):
        with pytest.raises(DomainError):
            mellin_eval(Monomial(2), 1.5)

    def test_domain_point_wrapper(self):
        pt = MellinDomainPoint(2.5)
        assert mellin_eval(Monomial(0), pt) == pytest.approx(1 / 2.5)
        with pytest.raises(DomainError):
            MellinDomainPoint(1.0)


class TestMellinMonomial:
    def test_unit_value(self):
        assert mellin_monomial(0, 1) == pytest.approx(1.0)

    def test_cubic_against_quadrature_oracle(self):
        oracle = quad_oracle(lambda r: r**3, 4)
        assert mellin_monomial(3, 4) == pytest.approx(oracle, abs=1e-12)
        assert oracle == pytest.approx(1 / 7, abs=1e-12)

    def test_pole_raises(self):
        with pytest.raises(PoleError):
            mellin_monomial(1, -1)

    def test_left_of_pole_rejected(self):
        with pytest.raises(DomainError):
            mellin_monomial(2, -3.0)

    def test_negative_exponent_rejected(self):
        with pytest.raises(PreconditionError):
            mellin_monomial(-1, 3)


class TestSymbols:
    def test_monomial_rejects_negative_exponent(self):
        with pytest.raises(PreconditionError):
            Monomial(-2)

    def test_monomial_sum_rejects_nonintegrable_exponent(self):
        with pytest.raises(DomainError):
            MonomialSum(((1.0, -1.0),))

    def test_monomial_sum_rejects_nonfinite_coefficient(self):
        with pytest.raises(PreconditionError):
            MonomialSum(((float("inf"), 2.0),))

    def test_sampled_integrability_hint_checked(self):
        with pytest.raises(DomainError):
            Sampled(lambda r: r**-2, min_exponent=-2.0)

    def test_symbols_evaluate_pointwise(self):
        assert Monomial(3)(0.5) == 0.125
        assert MonomialSum(((2.0, 1.0), (1.0, 0.0)))(0.5) == pytest.approx(2.0)


class TestQuadrature:
    def test_smooth_polynomial_exact(self):
        val = adaptive_quadrature(lambda r: 5 * r**4, 0.0, 1.0, 1e-13)
        assert val == pytest.approx(1.0, abs=1e-13)

    def test_oscillatory_integrand(self):
        val = adaptive_quadrature(lambda r: math.cos(40 * r), 0.0, 1.0, 1e-12)
        assert val == pytest.approx(math.sin(40) / 40, abs=1e-11)

    def test_nonconvergence_carries_estimate(self):
        # near-singular integrand with an absurd tolerance and a tiny panel cap
        with pytest.raises(QuadratureError) as err:
            adaptive_quadrature(lambda r: r**-0.99, 1e-12, 1.0, 1e-16, max_panels=8)
        assert err.value.estimate > 0

    def test_nonfinite_integrand_rejected(self):
        with pytest.raises(QuadratureError):
            adaptive_quadrature(lambda r: float("nan"), 0.0, 1.0, 1e-10)


class TestMuntzSzasz:
    def test_odd_grid_partial_sum_frozen(self):
        # direct summation of 1/(2k+3) for k = 0..10000; the partial sum
        # reaches only about 4.587, short of threshold 5, so the finite
        # evidence is inconclusive and the sum itself is the regression value
        points = [2 * k + 3 for k in range(10001)]
        partial = math.fsum(1.0 / p for p in points)
        assert partial == pytest.approx(4.587025189208386, abs=1e-12)
        assert muntz_szasz_check(points, 5.0) == INCONCLUSIVE
        assert muntz_szasz_check(points, partial - 0.1) == SATISFIED

    def test_zero_point_violates(self):
        assert muntz_szasz_check([0.0, 3.0, 5.0], 1.0) == VIOLATED

    def test_imaginary_points_inconclusive(self):
        points = [1j * k for k in range(1, 101)]
        assert muntz_szasz_check(points, 1e-9) == INCONCLUSIVE

    def test_repeated_points_rejected(self):
        with pytest.raises(PreconditionError):
            muntz_szasz_check([3.0, 5.0, 3.0], 1.0)

    def test_empty_rejected(self):
        with pytest.raises(PreconditionError):
            muntz_szasz_check([], 1.0)

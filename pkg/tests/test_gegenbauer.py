"""Gegenbauer evaluation, normalization, quadrature and transform tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphkern.errors import ResourceLimitError
from sphkern.gegenbauer import (
    GegenbauerParams,
    SeriesCoeffs,
    clamp_x,
    eval_gegenbauer,
    fourier_coeff,
    gegenbauer_at_one,
    moment,
    norm_h,
    quadrature_rule,
    series_eval,
    transform,
    weight_w,
)
from sphkern.kernels import TruncatedPower
from sphkern.zonal import constant_kernel, gegenbauer_kernel

P0 = GegenbauerParams(0.0)
P_HALF = GegenbauerParams(0.5)
P1 = GegenbauerParams(1.0)
P2 = GegenbauerParams(2.0)


class TestEvalGegenbauer:
    def test_degree_zero_is_one(self):
        assert eval_gegenbauer(P1, 0, 0.3) == 1.0

    def test_lambda_zero_chebyshev_scaling(self):
        # C^0_n = (2/n) T_n, so C^0_2(1) = 1
        assert eval_gegenbauer(P0, 2, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_chebyshev_u2(self):
        # C^1_2 = U_2 = 4x^2 - 1 vanishes at 1/2
        assert eval_gegenbauer(P1, 2, 0.5) == pytest.approx(0.0, abs=1e-15)

    def test_legendre_values(self):
        # C^(1/2)_n are the Legendre polynomials
        xs = np.linspace(-1, 1, 11)
        p3 = 0.5 * (5 * xs**3 - 3 * xs)
        assert np.allclose(eval_gegenbauer(P_HALF, 3, xs), p3, atol=1e-14)

    def test_negative_degree_rejected(self):
        with pytest.raises(ValueError):
            eval_gegenbauer(P1, -1, 0.0)

    def test_clamp_slack(self):
        assert eval_gegenbauer(P1, 3, 1.0 + 5e-13) == pytest.approx(gegenbauer_at_one(P1, 3))
        with pytest.raises(ValueError):
            eval_gegenbauer(P1, 3, 1.0 + 1e-9)

    @settings(deadline=None, max_examples=60)
    @given(
        st.floats(min_value=-1.0, max_value=1.0),
        st.integers(min_value=0, max_value=20),
        st.sampled_from([0.5, 1.0, 2.0]),
    )
    def test_bounded_by_value_at_one(self, x, n, lam):
        p = GegenbauerParams(lam)
        at_one = gegenbauer_at_one(p, n)
        assert abs(eval_gegenbauer(p, n, x)) <= at_one * (1 + 1e-12)

    def test_lambda_zero_limit(self):
        grid = np.linspace(-1, 1, 101)
        small = GegenbauerParams(1e-6)
        for n in range(1, 9):
            lim = np.asarray(eval_gegenbauer(small, n, grid)) / 1e-6
            assert np.max(np.abs(lim - eval_gegenbauer(P0, n, grid))) < 1e-4


class TestAtOne:
    def test_u2_at_one(self):
        assert gegenbauer_at_one(P1, 2) == pytest.approx(3.0)

    def test_degree_zero(self):
        assert gegenbauer_at_one(P_HALF, 0) == 1.0

    def test_gamma_ratio(self):
        # Gamma(7) / (Gamma(4) Gamma(4)) = 20, cross-checked by the recurrence
        assert gegenbauer_at_one(P2, 3) == pytest.approx(20.0)
        assert eval_gegenbauer(P2, 3, 1.0) == pytest.approx(20.0)

    def test_lambda_zero(self):
        assert gegenbauer_at_one(P0, 4) == pytest.approx(0.5)

    def test_large_degree_no_overflow(self):
        assert math.isfinite(gegenbauer_at_one(P2, 10_000))


class TestNormH:
    def test_lambda_one_degree_zero(self):
        # integral of sqrt(1-x^2) over [-1,1]
        assert norm_h(P1, 0) == pytest.approx(math.pi / 2, rel=1e-13)

    def test_lambda_one_degree_one(self):
        assert norm_h(P1, 1) == pytest.approx(math.pi / 2, rel=1e-13)

    def test_legendre_mass(self):
        assert norm_h(P_HALF, 0) == pytest.approx(2.0, rel=1e-13)

    def test_agrees_with_quadrature(self):
        for p in (P_HALF, P1, P2):
            rule = quadrature_rule(p, 40)
            for n in (0, 1, 4, 9):
                vals = np.asarray(eval_gegenbauer(p, n, rule.nodes))
                assert rule.integrate(vals**2) == pytest.approx(norm_h(p, n), rel=1e-10)

    def test_lambda_zero_unsupported(self):
        with pytest.raises(ValueError, match="weight_w"):
            norm_h(P0, 2)


class TestWeightW:
    def test_lambda_zero_values(self):
        assert weight_w(P0, 0) == pytest.approx(1 / math.pi)
        assert weight_w(P0, 3) == pytest.approx(2 / math.pi)

    def test_reciprocal_of_normalized_norm(self):
        # int (W^lam_n)^2 dOmega = 1 / w_lam(n); at lam=1, n=1 this gives 8/pi
        for p, n in [(P1, 1), (P1, 2), (P2, 5), (P_HALF, 3), (P0, 2)]:
            rule = quadrature_rule(p, 60)
            w_n = np.asarray(eval_gegenbauer(p, n, rule.nodes)) / gegenbauer_at_one(p, n)
            assert rule.integrate(w_n**2) == pytest.approx(1.0 / weight_w(p, n), rel=1e-10)
        assert weight_w(P1, 1) == pytest.approx(8 / math.pi, rel=1e-13)


class TestQuadrature:
    def test_total_mass_legendre(self):
        assert quadrature_rule(P_HALF, 5).weights.sum() == pytest.approx(2.0)

    def test_total_mass_lambda_one(self):
        assert quadrature_rule(P1, 5).weights.sum() == pytest.approx(math.pi / 2)

    def test_x_squared(self):
        rule = quadrature_rule(P1, 8)
        assert rule.integrate(rule.nodes**2) == pytest.approx(math.pi / 8, rel=1e-13)

    def test_exactness_up_to_degree(self):
        for lam in (0.0, 0.5, 1.0, 2.0):
            p = GegenbauerParams(lam)
            for order in (2, 7, 15):
                rule = quadrature_rule(p, order)
                for k in range(2 * order):
                    want = moment(p, k)
                    assert rule.integrate(rule.nodes**k) == pytest.approx(
                        want, abs=1e-12 * moment(p, 0)
                    )

    def test_nodes_sorted_weights_positive(self):
        rule = quadrature_rule(P2, 30)
        assert np.all(np.diff(rule.nodes) > 0)
        assert np.all(rule.weights > 0)

    def test_order_limit(self):
        with pytest.raises(ResourceLimitError):
            quadrature_rule(P1, 200_000)
        with pytest.raises(ValueError):
            quadrature_rule(P1, 0)


class TestTransform:
    def test_orthogonality_diagonal(self):
        s = transform(gegenbauer_kernel(P1, 2, normalized=True), P1, 3, order=64)
        assert s.coeffs[2] == pytest.approx(1.0 / weight_w(P1, 2), rel=1e-12)
        assert abs(s.coeffs[3]) < 1e-12

    def test_constant_at_lambda_zero(self):
        assert fourier_coeff(constant_kernel(1.0), P0, 0, order=64) == pytest.approx(math.pi)

    def test_orthogonality_matrix(self):
        for p in (P0, P_HALF, P1, P2):
            rule = quadrature_rule(p, 64)
            table = np.vstack(
                [
                    np.asarray(eval_gegenbauer(p, n, rule.nodes)) / gegenbauer_at_one(p, n)
                    for n in range(13)
                ]
            )
            gram = (table * rule.weights) @ table.T
            expected = np.diag([1.0 / weight_w(p, n) for n in range(13)])
            assert np.max(np.abs(gram - expected)) < 1e-9

    def test_non_finite_samples_raise(self):
        from sphkern.errors import EvaluationError
        from sphkern.zonal import ZonalKernel

        bad = ZonalKernel(fn=lambda x: np.where(x > 0, np.inf, 1.0))
        with pytest.raises(EvaluationError):
            transform(bad, P1, 3, order=16)


class TestSeriesEval:
    def test_constant_series(self):
        c = 2.5
        s = SeriesCoeffs(params=P1, coeffs=np.array([c / weight_w(P1, 0), 0.0, 0.0]), truncation=2)
        for x in (-1.0, -0.2, 0.7, 1.0):
            assert series_eval(s, x) == pytest.approx(c)

    def test_round_trip_w12(self):
        s = transform(gegenbauer_kernel(P1, 2, normalized=True), P1, 4, order=64)
        assert series_eval(s, 1.0) == pytest.approx(1.0, abs=1e-8)

    def test_f2_reconstruction_outside_support(self):
        # Gibbs-limited: the partial sum near the support edge stays small
        f2 = TruncatedPower(2, math.pi / 2).as_kernel()
        s = transform(f2, P1, 80, order=400)
        assert abs(series_eval(s, math.cos(math.pi / 2 + 0.3))) < 2e-2

    def test_partial_sums_monotone_at_one_for_nonneg_coeffs(self):
        # uniform convergence evidence: nonnegative terms accumulate at x=1
        f2 = TruncatedPower(2, math.pi / 2).as_kernel()
        s = transform(f2, P1, 40, order=400)
        partials = [
            series_eval(SeriesCoeffs(params=P1, coeffs=s.coeffs[: n + 1], truncation=n), 1.0)
            for n in range(5, 41, 5)
        ]
        assert np.all(np.diff(partials) > -1e-12)

    def test_cesaro_smoothing_tames_gibbs_overshoot(self):
        # the cap indicator has a genuine jump; raw partial sums overshoot
        # near it, Cesaro-damped sums do not
        from sphkern.convolution import cap_indicator

        chi = cap_indicator(0.0)
        s = transform(chi, P1, 80, order=400)
        xs = np.linspace(0.02, 0.3, 120)
        raw_overshoot = np.max(series_eval(s, xs)) - 1.0
        smooth_overshoot = np.max(series_eval(s, xs, cesaro=1.0)) - 1.0
        assert raw_overshoot > 0.02
        assert smooth_overshoot < raw_overshoot / 2


def test_series_coeffs_length_validation():
    with pytest.raises(ValueError):
        SeriesCoeffs(params=P1, coeffs=np.zeros(3), truncation=3)


def test_params_validation():
    with pytest.raises(ValueError):
        GegenbauerParams(-0.5)
    assert GegenbauerParams.for_sphere(3).lam == 1.0
    assert GegenbauerParams.for_sphere(2).sphere_dim == pytest.approx(2.0)


@settings(deadline=None, max_examples=40)
@given(st.floats(min_value=-1.0 - 1e-12, max_value=1.0 + 1e-12))
def test_clamp_keeps_interval(x):
    assert -1.0 <= float(clamp_x(x)) <= 1.0

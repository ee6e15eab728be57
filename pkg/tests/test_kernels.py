"""Kernel family tests: truncated powers, montee closed forms and recurrence,
smoothness ladder, and the cap self-convolution kernels N_d."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphkern.kernels import (
    CLOSED_FORM_TAGS,
    CapConvKernel,
    MonteeIterate,
    TruncatedPower,
    cap_kernel_coefficients,
    eval_cap_kernel,
    eval_montee_closed_form,
    eval_montee_recurrence,
    eval_truncated_power,
    kernel_from_descriptor,
)
from sphkern.operators import montee_numeric

CAP_ANGLES = (math.pi / 6, math.pi / 4, math.pi / 3)


class TestTruncatedPower:
    def test_value_at_one(self):
        k = TruncatedPower(2, math.pi / 2)
        assert eval_truncated_power(k, 1.0) == pytest.approx((math.pi / 2) ** 2)

    def test_boundary_zero(self):
        k = TruncatedPower(2, math.pi / 2)
        assert eval_truncated_power(k, 0.0) == pytest.approx(0.0, abs=1e-30)

    def test_interior_value(self):
        k = TruncatedPower(3, 1.0)
        assert eval_truncated_power(k, math.cos(0.5)) == pytest.approx(0.125, rel=1e-12)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            TruncatedPower(0, 1.0)
        with pytest.raises(ValueError):
            TruncatedPower(2, math.pi)

    @settings(deadline=None, max_examples=40)
    @given(
        st.integers(min_value=1, max_value=6),
        st.floats(min_value=0.1, max_value=3.0),
        st.floats(min_value=-1.0, max_value=1.0),
    )
    def test_support_and_sign(self, m, t, x):
        val = eval_truncated_power(TruncatedPower(m, t), x)
        assert val >= 0.0
        if math.acos(x) >= t:
            assert val == 0.0


class TestMonteeClosedForms:
    def test_if2_vanishes_at_knot(self):
        t = math.pi / 2
        assert eval_montee_closed_form("If2", t, math.cos(t)) == pytest.approx(0.0, abs=1e-15)

    def test_if3_at_theta_zero(self):
        # substituting theta=0, u=t=1 gives 6 sin(1) - 5
        assert eval_montee_closed_form("If3", 1.0, 1.0) == pytest.approx(6 * math.sin(1.0) - 5)

    def test_i2f4_beyond_support(self):
        assert eval_montee_closed_form("I2f4", 1.0, math.cos(1.5)) == 0.0

    def test_unknown_tag(self):
        with pytest.raises(ValueError):
            eval_montee_closed_form("If9", 1.0, 0.0)

    @pytest.mark.parametrize("t", (0.5, math.pi / 2, 2.5))
    @pytest.mark.parametrize("tag", CLOSED_FORM_TAGS)
    def test_matches_numeric_montee(self, tag, t):
        parents = {
            "If2": TruncatedPower(2, t).as_kernel(),
            "If3": TruncatedPower(3, t).as_kernel(),
            "If4": TruncatedPower(4, t).as_kernel(),
            "I2f3": MonteeIterate(TruncatedPower(3, t), 1).as_kernel(),
            "I2f4": MonteeIterate(TruncatedPower(4, t), 1).as_kernel(),
        }
        image = montee_numeric(parents[tag], tol=1e-12)
        grid = np.linspace(-1.0, 1.0, 501)
        assert np.max(np.abs(image(grid) - eval_montee_closed_form(tag, t, grid))) < 1e-8

    def test_support_vanishing_on_grid(self):
        grid = np.linspace(-1.0, 1.0, 2001)
        for t in (0.5, 2.5):
            beyond = grid[np.arccos(grid) >= t]
            for tag in CLOSED_FORM_TAGS:
                assert np.all(eval_montee_closed_form(tag, t, beyond) == 0.0)


class TestMonteeRecurrence:
    def test_base_case_matches_closed_form_exactly(self):
        grid = np.linspace(-1.0, 1.0, 101)
        t = math.pi / 2
        assert np.allclose(
            eval_montee_recurrence(2, t, grid),
            eval_montee_closed_form("If2", t, grid),
            atol=1e-14,
        )

    def test_m1_at_support_edge(self):
        assert eval_montee_recurrence(1, 1.0, math.cos(1.0)) == pytest.approx(0.0, abs=1e-15)

    def test_m5_against_adaptive_quadrature(self):
        f5 = TruncatedPower(5, 1.0).as_kernel()
        image = montee_numeric(f5, tol=1e-12)
        x = math.cos(0.3)
        assert eval_montee_recurrence(5, 1.0, x) == pytest.approx(image(x), abs=1e-8)

    @pytest.mark.parametrize("m", range(1, 9))
    def test_matches_numeric_montee(self, m):
        fm = TruncatedPower(m, 1.0).as_kernel()
        image = montee_numeric(fm, tol=1e-12)
        grid = np.linspace(-1.0, 1.0, 301)
        assert np.max(np.abs(image(grid) - eval_montee_recurrence(m, 1.0, grid))) < 1e-8

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            eval_montee_recurrence(0, 1.0, 0.0)
        with pytest.raises(ValueError):
            eval_montee_recurrence(3, 1.0, 0.0, k=2)


class TestMonteeIterate:
    def test_i3f4_via_numeric_composition(self):
        # I^3 f_4 has no closed-form evaluator; the numeric composition must
        # agree with a direct montee of the I^2 f_4 closed form
        t = 2.0
        i3 = MonteeIterate(TruncatedPower(4, t), 3).as_kernel()
        oracle = montee_numeric(MonteeIterate(TruncatedPower(4, t), 2).as_kernel(), tol=1e-12)
        grid = np.linspace(-1.0, 1.0, 51)
        assert np.max(np.abs(i3(grid) - oracle(grid))) < 1e-9

    def test_derivative_chain(self):
        t = 1.0
        i2 = MonteeIterate(TruncatedPower(3, t), 2).as_kernel()
        assert i2.derivative is not None
        grid = np.linspace(-1.0, 1.0, 101)
        assert np.allclose(i2.derivative(grid), eval_montee_closed_form("If3", t, grid))

    def test_support_matches_base(self):
        t = 1.5
        i2 = MonteeIterate(TruncatedPower(4, t), 2).as_kernel()
        grid = np.linspace(-1.0, math.cos(t), 200, endpoint=False)
        assert np.all(i2(grid) == 0.0)


def _fd_derivative(f, x, k, h):
    stencils = {
        0: ([1.0], 0),
        1: ([-0.5, 0.0, 0.5], 1),
        2: ([1.0, -2.0, 1.0], 1),
        3: ([-0.5, 1.0, 0.0, -1.0, 0.5], 2),
    }
    coeffs, reach = stencils[k]
    xs = x + h * np.arange(-reach, reach + 1)
    return float(np.dot(coeffs, f(xs)) / h**k) if k else float(f(np.array([x]))[0])


class TestSmoothnessLadder:
    # f_2 is C^0[-1,1], I f_3 is C^1, I^2 f_4 is C^2; the classes are sharp
    # at x = 1 where the next derivative diverges, while across the interior
    # knot the k-th difference quotient is continuous.
    CASES = (
        (lambda x: np.asarray(eval_truncated_power(TruncatedPower(2, 1.2), x)), 0),
        (lambda x: np.asarray(eval_montee_closed_form("If3", 1.2, x)), 1),
        (lambda x: np.asarray(eval_montee_closed_form("I2f4", 1.2, x)), 2),
    )

    @pytest.mark.parametrize("f,k", CASES)
    def test_kth_derivative_continuous_at_knot(self, f, k):
        knot = math.cos(1.2)
        h = 1e-4
        left = _fd_derivative(f, knot - 20 * h, k, h)
        right = _fd_derivative(f, knot + 20 * h, k, h)
        assert abs(left - right) < 1e-4

    @pytest.mark.parametrize("f,k", CASES)
    def test_next_derivative_diverges_at_one(self, f, k):
        vals = []
        for delta in (1e-1, 1e-2, 1e-3):
            vals.append(abs(_fd_derivative(f, 1.0 - delta, k + 1, delta / 40)))
        assert vals[1] > 2.0 * vals[0]
        assert vals[2] > 2.0 * vals[1]


class TestCapCoefficients:
    def test_n3_normalizer(self):
        coeffs = cap_kernel_coefficients(3, math.pi / 4)
        assert coeffs.a == pytest.approx(math.pi / 8 - 0.25, rel=1e-14)

    def test_n3_ad_product(self):
        coeffs = cap_kernel_coefficients(3, math.pi / 4)
        assert coeffs.products["ad"] == pytest.approx(0.25)

    def test_n5_normalizer_formula(self):
        s = math.pi / 3
        coeffs = cap_kernel_coefficients(5, s)
        want = 0.25 * math.sin(s) * math.cos(s) ** 3 - (5 / 8) * math.sin(s) * math.cos(s) + (3 / 8) * s
        assert coeffs.a == pytest.approx(want, rel=1e-14)

    def test_normalizers_match_cap_mass(self):
        # a = (g *_m g)(1) equals int_c^1 (1 - y^2)^(m - 1/2) dy
        for d, m in ((3, 1), (5, 2), (7, 3), (9, 4)):
            for s in CAP_ANGLES:
                c = math.cos(s)
                theta = np.linspace(0.0, s, 4001)
                integrand = np.sin(theta) ** (2 * m)
                mass = np.trapezoid(integrand, theta)
                assert cap_kernel_coefficients(d, s).a == pytest.approx(mass, rel=1e-6)

    def test_invalid_dimension(self):
        with pytest.raises(ValueError):
            cap_kernel_coefficients(4, 0.5)

    def test_invalid_angle(self):
        with pytest.raises(ValueError):
            cap_kernel_coefficients(3, math.pi / 2)


class TestCapKernels:
    @pytest.mark.parametrize("d", (3, 5, 7, 9))
    @pytest.mark.parametrize("s", CAP_ANGLES)
    def test_normalization_exact(self, d, s):
        assert eval_cap_kernel(d, s, 1.0) == 1.0

    @pytest.mark.parametrize("d", (3, 5, 7, 9))
    @pytest.mark.parametrize("s", CAP_ANGLES)
    def test_boundary_zero(self, d, s):
        edge = math.cos(2 * s)
        assert abs(eval_cap_kernel(d, s, edge + 1e-13)) < 1e-10
        assert eval_cap_kernel(d, s, edge) == 0.0

    def test_boundary_substitution_n3(self):
        # 1 + 2 s b + d tan(s) collapses to 1 - a/a with the printed products
        s = math.pi / 4
        coeffs = cap_kernel_coefficients(3, s)
        val = 1.0 + coeffs.b * 2 * s + coeffs.d * math.tan(s)
        assert val == pytest.approx(0.0, abs=1e-14)

    def test_support_zero(self):
        assert eval_cap_kernel(9, 0.6, math.cos(1.3)) == 0.0

    @pytest.mark.parametrize("d", (3, 5, 7, 9))
    def test_continuity_and_observed_nonnegativity(self, d):
        # nonnegativity is observed on the grid, not claimed in general
        for s in CAP_ANGLES:
            grid = np.linspace(-1.0, 1.0, 2001)
            vals = eval_cap_kernel(d, s, grid)
            assert np.min(vals) >= -1e-12
            # continuity at the one breakpoint (support edge)
            edge = math.cos(2 * s)
            assert abs(eval_cap_kernel(d, s, edge + 1e-9) - eval_cap_kernel(d, s, edge)) < 1e-6

    def test_near_one_evaluation_stable(self):
        # the tan-half-angle branch keeps relative accuracy near x = 1
        s = math.pi / 4
        xs = 1.0 - np.logspace(-15, -1, 30)
        vals = eval_cap_kernel(3, s, xs)
        assert np.all(np.isfinite(vals))
        assert np.all(np.abs(vals - 1.0) < 0.5)


class TestDescriptors:
    @pytest.mark.parametrize(
        "desc",
        [
            {"family": "truncated_power", "m": 2, "t": 1.0},
            {"family": "montee", "m": 3, "k": 2, "t": 1.0},
            {"family": "cap_conv", "d": 5, "s": 0.7},
            {"family": "series", "coeffs": [1.0, 0.5, 0.25], "lambda": 1.0},
        ],
    )
    def test_round_trip(self, desc):
        kernel = kernel_from_descriptor(desc)
        assert kernel.descriptor["family"] == desc["family"]
        rebuilt = kernel_from_descriptor(kernel.descriptor)
        grid = np.linspace(-1.0, 1.0, 31)
        assert np.allclose(kernel(grid), rebuilt(grid), atol=1e-12)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            kernel_from_descriptor({"family": "gaussian"})

    def test_missing_key(self):
        with pytest.raises(ValueError):
            kernel_from_descriptor({"family": "truncated_power", "m": 2})

    def test_cap_kernel_object(self):
        kern = CapConvKernel(3, 0.5)
        assert kern(1.0) == 1.0
        assert kern.coeffs.a > 0

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracstab.numerics import (
    BranchPolicy,
    PowerKind,
    QuadrantTag,
    atan2_emulated,
    cos_argument,
    kernel_coefficients,
    principal_arg,
    real_power,
)

ALL_POLICIES = list(BranchPolicy)


class TestPrincipalArg:
    @pytest.mark.parametrize(
        "z, expected",
        [
            (complex(1, 0), 0.0),
            (complex(0, 1), math.pi / 2),
            (complex(-1, 0), math.pi),
        ],
    )
    def test_axis_points(self, z, expected):
        assert principal_arg(z) == pytest.approx(expected, abs=1e-15)

    def test_zero_is_total_by_convention(self):
        assert principal_arg(0j) == 0.0

    def test_negative_zero_imag_stays_in_range(self):
        # atan2(-0.0, -1.0) is -pi; the principal range is (-pi, pi].
        assert principal_arg(complex(-1.0, -0.0)) == math.pi

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            principal_arg(complex(math.inf, 0.0))

    @given(
        x=st.floats(-1e6, 1e6, allow_nan=False),
        y=st.floats(-1e6, 1e6, allow_nan=False),
    )
    def test_range(self, x, y):
        a = principal_arg(complex(x, y))
        assert -math.pi < a <= math.pi


class TestAtan2Emulated:
    def test_first_quadrant(self):
        assert atan2_emulated(1.0, 1.0) == pytest.approx(math.pi / 4, abs=1e-15)

    def test_second_quadrant_matches_native(self):
        assert atan2_emulated(1.0, -1.0) == pytest.approx(3 * math.pi / 4, abs=1e-15)
        assert atan2_emulated(1.0, -1.0) == pytest.approx(math.atan2(1.0, -1.0), abs=1e-15)

    def test_documented_mismatch_on_negative_real_axis(self):
        # sign(0) = 0 collapses the correction term; the native value is pi.
        assert atan2_emulated(0.0, -1.0) == 0.0
        assert math.atan2(0.0, -1.0) == math.pi

    def test_rejects_x_zero(self):
        with pytest.raises(ValueError):
            atan2_emulated(1.0, 0.0)

    @given(
        x=st.floats(-1e3, 1e3, allow_nan=False).filter(lambda v: abs(v) > 1e-9),
        y=st.floats(-1e3, 1e3, allow_nan=False).filter(lambda v: abs(v) > 1e-9),
    )
    def test_agrees_with_principal_arg_off_axes(self, x, y):
        assert atan2_emulated(y, x) == pytest.approx(principal_arg(complex(x, y)), abs=1e-12)


class TestRealPower:
    @pytest.mark.parametrize("policy", ALL_POLICIES)
    def test_positive_base(self, policy):
        res = real_power(4.0, 0.5, policy)
        assert res.kind is PowerKind.REAL
        assert res.real_part == pytest.approx(2.0)
        assert res.imag_part == 0.0

    def test_principal_square_root_of_minus_one(self):
        res = real_power(-1.0, 0.5, BranchPolicy.PRINCIPAL_COMPLEX)
        assert res.kind is PowerKind.COMPLEX
        assert res.real_part == pytest.approx(0.0, abs=1e-15)
        assert res.imag_part == pytest.approx(1.0)

    def test_odd_root(self):
        res = real_power(-8.0, 1.0 / 3.0, BranchPolicy.REAL_ODD_ROOT)
        assert res.kind is PowerKind.REAL
        assert res.real_part == pytest.approx(-2.0)

    def test_restricted_rejects_negative_base(self):
        res = real_power(-1.0, 0.5, BranchPolicy.RESTRICTED_DOMAIN)
        assert res.kind is PowerKind.UNDEFINED
        assert math.isnan(res.real_part)

    @pytest.mark.parametrize("policy", ALL_POLICIES)
    def test_zero_cases(self, policy):
        assert real_power(0.0, 0.0, policy).real_part == 1.0
        assert real_power(0.0, 0.7, policy).real_part == 0.0
        assert real_power(0.0, -1.0, policy).kind is PowerKind.UNDEFINED

    @pytest.mark.parametrize("policy", ALL_POLICIES)
    def test_integer_exponents_are_policy_free(self, policy):
        assert real_power(-2.0, 3.0, policy).real_part == pytest.approx(-8.0)
        assert real_power(-2.0, 1.0, policy).real_part == pytest.approx(-2.0)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            real_power(math.nan, 0.5, BranchPolicy.PRINCIPAL_COMPLEX)

    @given(
        base=st.floats(0.0, 1e6, allow_nan=False),
        exponent=st.floats(-3.0, 3.0, allow_nan=False),
    )
    def test_policies_agree_for_nonnegative_base(self, base, exponent):
        results = [real_power(base, exponent, p) for p in ALL_POLICIES]
        kinds = {r.kind for r in results}
        assert len(kinds) == 1
        if results[0].kind is PowerKind.REAL:
            vals = {r.real_part for r in results}
            assert len(vals) == 1


class TestCosArgument:
    def test_limit_case_zero_angle(self):
        res = cos_argument(0.0, 0.8)
        assert res.value == pytest.approx(-math.pi / 1.2, abs=1e-12)
        assert res.quadrant is QuadrantTag.QUADRANT_III

    def test_right_angle(self):
        res = cos_argument(math.pi / 2, 0.5)
        assert res.value == pytest.approx(-math.pi / 3, abs=1e-12)
        assert res.quadrant is QuadrantTag.QUADRANT_IV

    def test_quadrant_boundary(self):
        q = 0.6
        res = cos_argument(q * math.pi / 2, q)
        assert res.value == pytest.approx(-math.pi / 2, abs=1e-12)
        assert res.quadrant is QuadrantTag.BOUNDARY

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            cos_argument(-0.1, 0.5)
        with pytest.raises(ValueError):
            cos_argument(math.pi + 0.1, 0.5)
        with pytest.raises(ValueError):
            cos_argument(0.5, 0.0)
        with pytest.raises(ValueError):
            cos_argument(0.5, 1.5)

    def test_quadrant_iff_sector_over_grid(self):
        # cos of the mapped angle is negative exactly inside the excluded
        # sector; checked over a 1000-point (angle, order) grid.
        for a in np.linspace(0.0, math.pi - 1e-9, 40):
            for q in np.linspace(0.02, 0.98, 25):
                value, _ = cos_argument(float(a), float(q))
                assert (math.cos(value) < 0.0) == (a < q * math.pi / 2)


class TestKernelCoefficients:
    def test_half_order_prefix(self):
        k = kernel_coefficients(0.5, 3)
        assert k.b[0] == 1.0
        assert k.b[1] == pytest.approx(0.5, abs=0.0)
        assert k.b[2] == pytest.approx(0.375, abs=0.0)

    def test_order_one_is_all_ones(self):
        k = kernel_coefficients(1.0, 64)
        assert np.all(k.b == 1.0)

    @pytest.mark.parametrize("q", [0.3, 0.5, 0.85])
    def test_matches_direct_gamma_ratio(self, q):
        k = kernel_coefficients(q, 51)
        for j in range(51):
            exact = math.exp(math.lgamma(j + q) - math.lgamma(q) - math.lgamma(j + 1))
            assert k.b[j] == pytest.approx(exact, rel=1e-12)

    @pytest.mark.parametrize("q", [0.1, 0.5, 0.99])
    def test_recurrence_holds_exactly(self, q):
        # Ratio-first evaluation order, matching the cumulative product.
        k = kernel_coefficients(q, 40)
        for j in range(1, 40):
            assert k.b[j] == k.b[j - 1] * ((j - 1 + q) / j)

    @pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
    def test_positive_and_strictly_decreasing(self, q):
        b = kernel_coefficients(q, 200).b
        assert np.all(b > 0.0)
        assert np.all(np.diff(b) < 0.0)

    @pytest.mark.parametrize("q", [0.3, 0.5, 0.85])
    def test_partial_sum_growth(self, q):
        # The cumulative weight grows like n**q / Gamma(q+1); the direct
        # partial-sum oracle below evaluates the gamma ratios in log space.
        n = 10_000
        total = float(kernel_coefficients(q, n).b.sum())
        j = np.arange(n, dtype=np.float64)
        oracle = float(np.exp(
            np.vectorize(math.lgamma)(j + q) - math.lgamma(q) - np.vectorize(math.lgamma)(j + 1)
        ).sum())
        assert total == pytest.approx(oracle, rel=1e-10)
        approx = n ** q / math.gamma(q + 1)
        assert 0.95 < total / approx < 1.05

    def test_invalid_order(self):
        with pytest.raises(ValueError):
            kernel_coefficients(0.0, 5)
        with pytest.raises(ValueError):
            kernel_coefficients(1.2, 5)
        with pytest.raises(ValueError):
            kernel_coefficients(0.5, 0)

    def test_weights_are_read_only(self):
        k = kernel_coefficients(0.5, 5)
        with pytest.raises(ValueError):
            k.b[0] = 2.0

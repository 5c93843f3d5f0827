"""
Unit tests for the Lienard reduction, the involution and the focal values at E2.
"""

import pytest

from core.config import get_tolerances
from core.exceptions import ConstraintViolation, EquilibriumLost, H2Zero
from models.focus import FocusStability
from services import focus_quantities, local_analysis


@pytest.fixture
def ex51_x2(ex51_params):
    return local_analysis.upper_equilibrium(ex51_params).x


@pytest.fixture
def ex52_x2(ex52_params):
    return local_analysis.upper_equilibrium(ex52_params).x


class TestLienardSeries:
    """Jets of p, G and H against closed-form derivatives."""

    def test_p_derivatives(self, ex51_params, ex51_x2):
        p = focus_quantities.lienard_series(ex51_params, ex51_x2).p
        for k, expected in enumerate(focus_quantities.closed_form_p_derivatives(ex51_params, ex51_x2)):
            assert p.derivative_at(k) == pytest.approx(expected, rel=1e-9)

    def test_g_derivatives(self, ex52_params, ex52_x2):
        G = focus_quantities.lienard_series(ex52_params, ex52_x2).G
        for k, expected in enumerate(focus_quantities.closed_form_g_derivatives(ex52_params, ex52_x2), start=1):
            assert G.derivative_at(k) == pytest.approx(expected, rel=1e-9)

    def test_h_values(self, ex51_params, ex51_x2):
        h = focus_quantities.lienard_h(ex51_params, ex51_x2)
        assert h == pytest.approx([92.569, -881.70, 5513.29, 66058.3, -4679701.6, 179970281], rel=1e-4)

    def test_h_closed_form(self, ex51_params, ex51_x2):
        assert focus_quantities.lienard_h_closed_form(ex51_params, ex51_x2) == pytest.approx(
            focus_quantities.lienard_h(ex51_params, ex51_x2), rel=1e-8
        )
        assert focus_quantities.h2_closed_form(ex51_params, ex51_x2) == pytest.approx(
            focus_quantities.lienard_h(ex51_params, ex51_x2)[0], rel=1e-8
        )

    def test_h_closed_form_needs_equilibrium(self, ex51_params, ex51_x2):
        """Away from E2 the expansion no longer matches the jet."""
        shifted = ex51_x2 + 0.01
        closed = focus_quantities.lienard_h_closed_form(ex51_params, shifted)
        jets = focus_quantities.lienard_h(ex51_params, shifted)
        assert closed[0] != pytest.approx(jets[0], rel=1e-6)


class TestInvolution:
    """theta(x) = -x + nu2 x^2 + ... with H(theta) = H."""

    def test_nu_from_h(self, ex51_params, ex51_x2):
        nu = focus_quantities.nu_coefficients(focus_quantities.lienard_h(ex51_params, ex51_x2))
        assert nu[0] == pytest.approx(3.17492, rel=1e-5)
        assert nu[1] == pytest.approx(-nu[0] ** 2)

    def test_theta_series(self, ex51_params, ex51_x2):
        H = focus_quantities.lienard_series(ex51_params, ex51_x2).H
        theta = focus_quantities.theta_series(H)
        nu = focus_quantities.nu_coefficients(focus_quantities.lienard_h(ex51_params, ex51_x2))
        assert theta[0] == 0.0
        assert theta[1] == pytest.approx(-1.0)
        assert theta[2] == pytest.approx(nu[0], rel=1e-8)
        assert theta[3] == pytest.approx(nu[1], rel=1e-8)
        residual = H.compose(theta) - H
        assert max(abs(v) for v in residual.coeffs) < 1e-8 * max(abs(v) for v in H.coeffs)

    def test_h2_zero(self):
        with pytest.raises(H2Zero):
            focus_quantities.nu_coefficients([0.0, 1.0, 1.0, 1.0, 1.0, 1.0])


class TestFocalValues:
    """Weak-focus order and stability at the published points."""

    def test_ex51(self, ex51_params):
        report = focus_quantities.focal_values(
            ex51_params, tol=get_tolerances().SIX_DIGIT_FOCUS_TOL
        )
        assert report.x2 == pytest.approx(0.40054456, abs=1e-7)
        assert report.coefficients[4:] == pytest.approx([130.568, -1036.37, 6682.9, -33975], rel=1e-3)
        assert report.B5 == pytest.approx(15668.7, rel=1e-2)
        assert report.order == 2
        assert report.stability is FocusStability.UNSTABLE
        assert report.h2 == pytest.approx(92.569, rel=1e-4)

    def test_ex52(self, ex52_params):
        report = focus_quantities.focal_values(
            ex52_params, tol=get_tolerances().SIX_DIGIT_FOCUS_TOL
        )
        assert report.B7 == pytest.approx(152.59, rel=1e-2)
        assert report.coefficients[6] == pytest.approx(0.0302753, rel=1e-3)
        assert report.order == 3
        assert report.stability is FocusStability.UNSTABLE
        assert report.nu2 == pytest.approx(1.22078, rel=1e-5)
        assert report.h2 == pytest.approx(82.905, rel=1e-4)

    def test_named_values_are_derivatives(self, ex52_params):
        report = focus_quantities.focal_values(ex52_params)
        assert report.B3 == pytest.approx(6.0 * report.coefficients[2])
        assert report.B5 == pytest.approx(120.0 * report.coefficients[4])
        assert report.B7 == pytest.approx(5040.0 * report.coefficients[6])

    def test_six_digit_rounding_under_default_tolerance(self, ex51_params):
        """B1 = -2.3e-5 from six-digit rounding is a first-order focus at 1e-6."""
        report = focus_quantities.focal_values(ex51_params)
        assert report.B1 == pytest.approx(-2.3058e-5, rel=1e-2)
        assert report.order == 0
        assert report.stability is FocusStability.STABLE

    def test_even_coefficients_follow_odd(self, ex51_params):
        report = focus_quantities.focal_values(ex51_params)
        B = report.coefficients
        assert B[1] == pytest.approx(-0.5 * report.nu2 * B[0], rel=1e-6)
        assert B[5] == pytest.approx(-2.5 * report.nu2 * B[4], rel=1e-3)
        assert report.even[0] == pytest.approx(B[1], rel=1e-6)

    def test_first_order_focus(self, ex51_params):
        """Moving off the Hopf surface makes B1 dominant."""
        params = ex51_params.replace(n=ex51_params.n - 1e-3)
        report = focus_quantities.focal_values(params)
        assert report.order == 0
        assert report.stability is FocusStability.UNSTABLE

    def test_no_upper_equilibrium(self, origin_params):
        with pytest.raises(EquilibriumLost):
            focus_quantities.focal_values(origin_params)


class TestVanishingRule:
    """|B| < tol * max(1, |B_next|) counts as zero."""

    def test_relative_to_next(self):
        order, stability = focus_quantities._order_and_stability([3e-6, -4.0, 1.0, 1.0], 1e-6)
        assert order == 1
        assert stability is FocusStability.STABLE

    def test_absolute_floor(self):
        order, stability = focus_quantities._order_and_stability([2e-6, 0.5, 1.0, 1.0], 1e-6)
        assert order == 0
        assert stability is FocusStability.UNSTABLE

    def test_all_vanishing(self):
        order, stability = focus_quantities._order_and_stability([0.0, 0.0, 0.0, 1e-9], 1e-6)
        assert order == 3
        assert stability is FocusStability.UNDETERMINED


class TestCodimJacobian:
    """Independence of the focal values in the unfolding parameters."""

    def test_ex51(self, ex51_params):
        result = focus_quantities.codim_jacobian(ex51_params, ["a", "n"], [1, 3])
        assert len(result.matrix) == 2
        assert result.determinant == pytest.approx(140651.33, rel=1e-4)

    @pytest.mark.slow
    def test_ex52(self, ex52_params):
        result = focus_quantities.codim_jacobian(ex52_params, ["a", "c", "n"], [1, 3, 5])
        assert result.parameters == ["a", "c", "n"]
        assert result.determinant == pytest.approx(7467.49, rel=1e-3)

    def test_rows_in_derivative_normalisation(self, ex51_params):
        """The B3 row is six times the row of the raw cubic coefficient."""
        result = focus_quantities.codim_jacobian(ex51_params, ["a"], [3])
        raw_step = 1e-6
        plus = focus_quantities.focal_values(ex51_params.replace(a=ex51_params.a + raw_step))
        minus = focus_quantities.focal_values(ex51_params.replace(a=ex51_params.a - raw_step))
        raw = (plus.coefficients[2] - minus.coefficients[2]) / (2 * raw_step)
        assert result.matrix[0][0] == pytest.approx(6.0 * raw, rel=1e-3)

    def test_length_mismatch(self, ex51_params):
        with pytest.raises(ConstraintViolation):
            focus_quantities.codim_jacobian(ex51_params, ["a", "n"], [1])

    def test_unknown_parameter(self, ex51_params):
        with pytest.raises(ConstraintViolation):
            focus_quantities.codim_jacobian(ex51_params, ["a", "z"], [1, 3])


class TestNestedCycleTargets:
    """Lower focal values that factor the displacement at chosen amplitudes."""

    def test_two_amplitudes(self):
        targets = focus_quantities.nested_cycle_targets(120.0, [0.1, 0.2])
        # c5 = 1, displacement (s^2 - 0.01)(s^2 - 0.04)
        assert targets == pytest.approx([0.0004, 6.0 * -0.05])

    def test_three_amplitudes(self):
        leading = 5040.0 * 2.0
        targets = focus_quantities.nested_cycle_targets(leading, [0.1, 0.2, 0.3])
        r1, r2, r3 = 0.01, 0.04, 0.09
        assert targets == pytest.approx([
            -2.0 * r1 * r2 * r3,
            6.0 * 2.0 * (r1 * r2 + r1 * r3 + r2 * r3),
            -120.0 * 2.0 * (r1 + r2 + r3),
        ])

    def test_rejects_nonpositive(self):
        with pytest.raises(ConstraintViolation):
            focus_quantities.nested_cycle_targets(1.0, [0.1, 0.0])


@pytest.mark.slow
class TestUnfoldFocalValues:
    """Newton continuation on codim_jacobian."""

    def test_ex51_two_small_cycles(self, ex51_params):
        leading = focus_quantities.focal_values(ex51_params).B5
        targets = focus_quantities.nested_cycle_targets(leading, [0.02, 0.05])
        result = focus_quantities.unfold_focal_values(ex51_params, ["a", "n"], [1, 3], targets)
        assert result.residual < 1e-6
        assert result.params.a == pytest.approx(-0.35987816, abs=1e-6)
        assert result.params.n == pytest.approx(0.05001924, abs=1e-7)
        assert result.params.c == ex51_params.c
        report = focus_quantities.focal_values(result.params)
        assert report.order == 0
        assert report.B1 == pytest.approx(targets[0], rel=1e-4)

    def test_ex52_three_small_cycles(self, ex52_params):
        leading = focus_quantities.focal_values(ex52_params).B7
        targets = focus_quantities.nested_cycle_targets(leading, [0.1, 0.2, 0.3])
        result = focus_quantities.unfold_focal_values(ex52_params, ["a", "m", "n"], [1, 3, 5], targets)
        assert result.residual < 1e-6
        assert result.params.a == pytest.approx(2.48148046, abs=1e-6)
        assert result.params.m == pytest.approx(0.03770234, abs=1e-7)
        assert result.params.n == pytest.approx(0.03769350, abs=1e-7)
        assert focus_quantities.focal_values(result.params).B7 > 0.0

    def test_polished_weak_focus_orders(self, ex51_params, ex52_params):
        """With the lower values steered to zero the default tolerance sees the full order."""
        second = focus_quantities.unfold_focal_values(ex51_params, ["a", "n"], [1, 3], [0.0, 0.0])
        report = focus_quantities.focal_values(second.params)
        assert report.order == 2
        assert report.stability is FocusStability.UNSTABLE

        third = focus_quantities.unfold_focal_values(
            ex52_params, ["a", "m", "n"], [1, 3, 5], [0.0, 0.0, 0.0]
        )
        report = focus_quantities.focal_values(third.params)
        assert report.order == 3
        assert report.stability is FocusStability.UNSTABLE

    def test_target_count_mismatch(self, ex51_params):
        with pytest.raises(ConstraintViolation):
            focus_quantities.unfold_focal_values(ex51_params, ["a", "n"], [1, 3], [0.0])

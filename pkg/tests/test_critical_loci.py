"""
Unit tests for the Bogdanov-Takens loci, thresholds and normal-form coefficients.
"""

import math

import pytest

from core.exceptions import ComplexRoots, ConditionFailed, EtaNotZero
from models.critical import CriticalRegime, EradicationCase
from models.params import DimensionlessParams
from services import critical_loci, equilibria


@pytest.fixture
def bt2_params() -> DimensionlessParams:
    n, c = critical_loci.sn_critical(-0.3, 0.5, 0.4)
    return DimensionlessParams(a=-0.3, b=0.5, c=c, m=0.4, n=n)


class TestCodimensionTwo:
    """x*, n*, c* and the residuals at the cusp."""

    def test_x_star_solves_quadratic(self):
        x = critical_loci.x_star(-0.3, 0.4)
        assert x == pytest.approx(0.9819981851164729, rel=1e-12)
        assert x * x - 2 * (-0.3) * 0.4 * x - 3 * 0.4 == pytest.approx(0.0, abs=1e-14)

    def test_x_star_requires_positive_m(self):
        with pytest.raises(ConditionFailed):
            critical_loci.x_star(-0.3, 0.0)

    def test_sn_critical(self):
        n, c = critical_loci.sn_critical(-0.3, 0.5, 0.4)
        assert n == pytest.approx(0.3173104771188579, rel=1e-10)
        assert c == pytest.approx(0.12534492020352755, rel=1e-10)

    def test_c_star_formula_agrees(self, bt2_params):
        x = critical_loci.x_star(-0.3, 0.4)
        assert critical_loci.c_star_formula(-0.3, 0.5, 0.4, bt2_params.n, x) == pytest.approx(
            bt2_params.c, rel=1e-10
        )

    def test_residuals_vanish(self, bt2_params):
        x = critical_loci.x_star(-0.3, 0.4)
        residuals = critical_loci.critical_residuals(bt2_params, x)
        assert abs(residuals["trace"]) < 1e-10
        assert abs(residuals["det"]) < 1e-10
        assert abs(residuals["eta"]) > 0.1

    def test_critical_point_model(self):
        point = critical_loci.critical_point(-0.3, 0.5, 0.4)
        assert point.regime is CriticalRegime.CODIM2
        assert point.y_star == pytest.approx(point.x_star / point.n_star)
        assert point.b_star is None

    def test_no_positive_n_star(self):
        """Large m leaves m D >= x*^2."""
        with pytest.raises(ConditionFailed):
            critical_loci.sn_critical(-0.3, 0.5, 5.0)

    def test_c_for_double_root(self, fig5a_params):
        roots = critical_loci.c_for_double_root(fig5a_params)
        assert any(r == pytest.approx(0.29999987, abs=1e-4) for r in roots)
        for c in roots:
            params = fig5a_params.replace(c=c)
            rc = equilibria.reduce(params)
            assert abs(equilibria.discriminant(params)) < 1e-8 * rc.scale


class TestThresholds:
    """b1, b2 and the psychological-effect gamma thresholds."""

    def test_b_roots_closed_form(self, ex51_params):
        a, _, c, m, n = ex51_params.as_tuple()
        assert critical_loci.b_roots(a, c, m, n) == pytest.approx(
            critical_loci.b_roots_closed_form(a, c, m, n), rel=1e-9
        )

    def test_b_roots_zero_the_discriminant(self, ex51_params):
        a, _, c, m, n = ex51_params.as_tuple()
        for b in critical_loci.b_roots(a, c, m, n):
            if b <= 0.0 or a <= -3.0 * (b / 4.0) ** (1.0 / 3.0):
                continue
            params = ex51_params.replace(b=b)
            assert abs(equilibria.discriminant(params)) < 1e-8 * equilibria.reduce(params).scale

    def test_complex_roots(self):
        with pytest.raises(ComplexRoots):
            critical_loci._quadratic_roots(1.0, 0.0, 1.0)

    def test_gamma_thresholds(self, dimensional_params):
        result = critical_loci.gamma_thresholds(dimensional_params)
        assert (result.gamma1, result.gamma2) == pytest.approx((-13.26437, 11.27386), abs=1e-4)
        assert (result.gamma1, result.gamma2) == pytest.approx(
            critical_loci.gamma_thresholds_direct(dimensional_params), rel=1e-9
        )
        assert result.case is EradicationCase.STRADDLING
        assert result.eradication_ranges[0][0] == pytest.approx(11.27386, abs=1e-4)
        assert math.isinf(result.eradication_ranges[0][1])

    def test_threshold_ignores_gamma(self, dimensional_params):
        other = dimensional_params.model_copy(update={"gamma": 40.0})
        assert critical_loci.gamma_thresholds(other).gamma2 == pytest.approx(
            critical_loci.gamma_thresholds(dimensional_params).gamma2
        )

    @pytest.mark.parametrize(
        "gamma1, gamma2, case, ranges",
        [
            (-2.0, -1.0, EradicationCase.BOTH_NEGATIVE, [(0.0, math.inf)]),
            (-2.0, 1.0, EradicationCase.STRADDLING, [(1.0, math.inf)]),
            (1.0, 2.0, EradicationCase.BOTH_POSITIVE, [(0.0, 1.0), (2.0, math.inf)]),
        ],
    )
    def test_eradication_regime(self, gamma1, gamma2, case, ranges):
        assert critical_loci.eradication_regime(gamma1, gamma2) == (case, ranges)


class TestNormalForm:
    """xi coefficients, zeta, eta and chi."""

    def test_zeta_eta_at_bt2(self, bt2_params):
        coeffs = critical_loci.normal_form(bt2_params)
        assert coeffs.xi1 == pytest.approx(bt2_params.n, rel=1e-9)
        assert coeffs.xi2 == pytest.approx(-bt2_params.n**2, rel=1e-9)
        assert coeffs.zeta == pytest.approx(-0.9347832, rel=1e-6)
        assert coeffs.eta == pytest.approx(-1.2087739, rel=1e-6)
        assert coeffs.chi is None

    def test_rational_forms(self, bt2_params):
        x = critical_loci.x_star(-0.3, 0.4)
        coeffs = critical_loci.xi_coefficients(bt2_params, x)
        assert critical_loci.zeta_rational(bt2_params, x) == pytest.approx(coeffs.zeta, rel=1e-8)
        assert critical_loci.eta_rational(bt2_params, x) == pytest.approx(coeffs.eta, rel=1e-8)

    @pytest.mark.parametrize("which", ["bt2", "bt3"])
    def test_closed_form_xi(self, bt2_params, which):
        params = bt2_params if which == "bt2" else critical_loci.bt3_params(-1.8, 0.06438)
        x = critical_loci.x_star(params.a, params.m)
        coeffs = critical_loci.xi_coefficients(params, x, higher=True)
        assert critical_loci.xi_closed_form(params, x) == pytest.approx(coeffs.xi[2:], rel=1e-7)

    def test_chi_requires_eta_zero(self, bt2_params):
        with pytest.raises(EtaNotZero):
            critical_loci.chi(bt2_params, critical_loci.x_star(-0.3, 0.4))


class TestCodimensionThree:
    """(c*, n*, b*) and the chi coefficient."""

    def test_bt3_critical(self):
        point = critical_loci.bt3_critical(-1.8, 0.06438)
        assert point.regime is CriticalRegime.CODIM3
        assert point.x_star == pytest.approx(0.33861474, abs=1e-7)
        assert point.c_star == pytest.approx(0.33027667, abs=1e-7)
        assert point.n_star == pytest.approx(0.17282549, abs=1e-7)
        assert point.b_star == pytest.approx(0.9999935, abs=1e-6)

    def test_bt3_residuals(self):
        params = critical_loci.bt3_params(-1.8, 0.06438)
        residuals = critical_loci.critical_residuals(params, critical_loci.x_star(-1.8, 0.06438))
        assert all(abs(v) < 1e-8 for v in residuals.values())

    def test_chi(self):
        params = critical_loci.bt3_params(-1.8, 0.06438)
        x = critical_loci.x_star(-1.8, 0.06438)
        coeffs = critical_loci.normal_form(params, higher=True)
        assert coeffs.chi == pytest.approx(15598.51, rel=1e-5)
        assert coeffs.chi == pytest.approx(critical_loci.chi_rational(-1.8, x), rel=1e-6)
        assert critical_loci.hbar(-1.8 * x, x) > 0.0

    def test_inadmissible_triple(self):
        """a > 0 pushes b* negative."""
        with pytest.raises(ConditionFailed):
            critical_loci.bt3_critical(1.0, 0.5)

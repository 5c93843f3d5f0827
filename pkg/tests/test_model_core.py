"""
Unit tests for parameter validation, scaling and the reduced vector field.
"""

import math

import numpy as np
import pytest

from core.exceptions import ConstraintViolation, DenominatorNonpositive
from models.params import DimensionlessParams, MonotonicityKind
from services import equilibria, model_core


class TestValidation:
    """Parameter invariants."""

    def test_published_sets_are_valid(self, fig5a_params, fig8_params, ex51_params, ex52_params):
        for params in (fig5a_params, fig8_params, ex51_params, ex52_params):
            assert model_core.validate(params) is params

    def test_a_lower_bound(self):
        """-3 (1/4)^(1/3) is about -1.8899."""
        assert model_core.a_lower_bound(1.0) == pytest.approx(-1.889881574, rel=1e-9)

    def test_a_below_bound(self, fig5a_params):
        with pytest.raises(ConstraintViolation) as exc:
            model_core.validate(fig5a_params.replace(a=-1.9))
        assert "a > -3*(b/4)^(1/3)" in exc.value.message

    @pytest.mark.parametrize("name", ["b", "c", "m", "n"])
    def test_nonpositive_rates(self, fig5a_params, name):
        with pytest.raises(ConstraintViolation) as exc:
            model_core.validate(fig5a_params.replace(**{name: 0.0}))
        assert exc.value.code == "ConstraintViolation"

    def test_non_finite(self, fig5a_params):
        with pytest.raises(ConstraintViolation):
            model_core.validate(fig5a_params.replace(c=math.inf))


class TestScaling:
    """Dimensional rates to (a, b, c, m, n) and back."""

    def test_nondimensionalize(self, dimensional_params):
        p = model_core.nondimensionalize(dimensional_params)
        sigma = math.sqrt(0.1 * 0.2 / 0.3)
        assert p.a == pytest.approx(-0.4 * sigma)
        assert p.b == pytest.approx(0.1 * 0.2 * 1.0 / 0.3 * sigma)
        assert p.c == pytest.approx(0.1 * sigma)
        assert p.m == pytest.approx(1.5)
        assert p.n == pytest.approx(0.75)

    def test_dimensional_state_conserves_population(self, dimensional_params):
        state = model_core.to_dimensional_state((0.3, 0.4), dimensional_params)
        assert state.S + state.I + state.R == pytest.approx(dimensional_params.Lambda / dimensional_params.d)
        assert state.I / state.R == pytest.approx(0.75)

    def test_invalid_dimensional(self, dimensional_params):
        with pytest.raises(ConstraintViolation):
            model_core.nondimensionalize(dimensional_params.model_copy(update={"beta": -3.0}))


class TestIncidence:
    """The cubic saturated incidence g(I)."""

    def test_incidence_value(self, dimensional_params):
        I = 2.0
        expected = 0.3 * 8.0 / (1.0 - 0.8 + 8.0)
        assert model_core.incidence(I, dimensional_params) == pytest.approx(expected)

    def test_incidence_negative(self, dimensional_params):
        with pytest.raises(ConstraintViolation):
            model_core.incidence(-1.0, dimensional_params)

    def test_derivative_matches_difference(self, dimensional_params):
        h = 1e-6
        for I in (0.5, 1.0, 3.0):
            numeric = (
                model_core.incidence(I + h, dimensional_params) - model_core.incidence(I - h, dimensional_params)
            ) / (2 * h)
            assert model_core.incidence_derivative(I, dimensional_params) == pytest.approx(numeric, rel=1e-6)

    def test_monotonicity(self, dimensional_params):
        shape = model_core.monotonicity_class(dimensional_params)
        assert shape.kind is MonotonicityKind.INCREASING_DECREASING
        assert shape.extremum == pytest.approx(3.75)
        increasing = model_core.monotonicity_class(dimensional_params.model_copy(update={"beta": 0.5}))
        assert increasing.kind is MonotonicityKind.INCREASING
        assert increasing.extremum is None


class TestVectorField:
    """Field, Jacobian and boundary flux."""

    def test_denominator_lower_bound(self, fig5a_params):
        grid = np.linspace(0.0, 5.0, 50001)
        sampled = min(model_core.denominator(x, fig5a_params) for x in grid)
        assert model_core.denominator_lower_bound(fig5a_params) == pytest.approx(sampled, abs=1e-8)

    def test_denominator_lower_bound_nonnegative_a(self, ex52_params):
        assert model_core.denominator_lower_bound(ex52_params) == 1.0

    def test_nonpositive_denominator(self):
        params = DimensionlessParams(a=-3.0, b=1.0, c=0.3, m=0.5, n=0.4)
        with pytest.raises(DenominatorNonpositive):
            model_core.vector_field((1.0, 1.0), params)

    def test_equilibria_are_zeros(self, ex51_params):
        for eq in equilibria.solve_equilibria(ex51_params):
            dx, dy = model_core.vector_field((eq.x, eq.y), ex51_params)
            assert abs(dx) < 1e-12
            assert abs(dy) < 1e-12

    def test_jacobian_matches_finite_differences(self, ex51_params, rng):
        """100 random states, central differences."""
        h = 1e-6
        for _ in range(100):
            x, y = rng.uniform(0.05, 1.5), rng.uniform(0.0, 10.0)
            J = model_core.jacobian((x, y), ex51_params)
            fx_plus = np.array(model_core.vector_field((x + h, y), ex51_params))
            fx_minus = np.array(model_core.vector_field((x - h, y), ex51_params))
            fy_plus = np.array(model_core.vector_field((x, y + h), ex51_params))
            fy_minus = np.array(model_core.vector_field((x, y - h), ex51_params))
            numeric = np.column_stack([(fx_plus - fx_minus) / (2 * h), (fy_plus - fy_minus) / (2 * h)])
            scale = max(1.0, float(np.abs(J).max()))
            assert np.allclose(J, numeric, rtol=1e-6, atol=1e-6 * scale)

    def test_equilibrium_j11(self, ex51_params):
        for eq in equilibria.positive_equilibria(ex51_params):
            J = model_core.jacobian((eq.x, eq.y), ex51_params)
            assert model_core.equilibrium_j11((eq.x, eq.y), ex51_params) == pytest.approx(J[0, 0], abs=1e-10)

    def test_det_numerator(self, ex52_params):
        for eq in equilibria.positive_equilibria(ex52_params):
            state = (eq.x, eq.y)
            det = float(np.linalg.det(model_core.jacobian(state, ex52_params)))
            D = model_core.denominator(eq.x, ex52_params)
            assert model_core.jacobian_det_numerator(state, ex52_params) / D == pytest.approx(det, abs=1e-10)

    def test_boundary_flux_inward_when_m_at_least_one(self, dimensional_params):
        params = model_core.nondimensionalize(dimensional_params)
        grid = np.linspace(0.0, 1.0 / params.c, 200)
        assert np.all(model_core.trapping_region_flux(params, grid) <= 1e-12)

    def test_boundary_flux_formula(self, ex51_params):
        """On x + y = 1/c the flux is x (1 - m) - n y."""
        grid = np.linspace(0.1, 5.0, 7)
        flux = model_core.trapping_region_flux(ex51_params, grid)
        expected = [x * (1 - ex51_params.m) - ex51_params.n * (1 / ex51_params.c - x) for x in grid]
        assert flux.tolist() == pytest.approx(expected)

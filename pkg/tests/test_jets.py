"""
Unit tests for truncated Taylor arithmetic.
"""

import math

import pytest

from utils.jets import Jet


class TestJetArithmetic:
    """Products, quotients and powers truncated at the jet order."""

    def test_cube_derivatives(self):
        """x^3 at 2 has derivatives 8, 12, 12, 6, 0."""
        x = Jet.variable(2.0, 4)
        assert (x**3).derivatives().tolist() == pytest.approx([8.0, 12.0, 12.0, 6.0, 0.0])

    def test_reciprocal_geometric_series(self):
        """1/(1 - s) has all coefficients 1."""
        jet = Jet([1.0, -1.0], 5).reciprocal()
        assert jet.coeffs.tolist() == pytest.approx([1.0] * 6)

    def test_inverse_derivatives(self):
        """d^k/dx^k (1/x) at 2 is (-1)^k k! / 2^(k+1)."""
        inverse = 1.0 / Jet.variable(2.0, 7)
        for k in range(8):
            expected = (-1) ** k * math.factorial(k) / 2.0 ** (k + 1)
            assert inverse.derivative_at(k) == pytest.approx(expected, rel=1e-13)

    def test_sqrt(self):
        """sqrt(4 + s) = 2 + s/4 - s^2/64 + s^3/512."""
        root = Jet([4.0, 1.0], 3).sqrt()
        assert root.coeffs.tolist() == pytest.approx([2.0, 0.25, -1.0 / 64.0, 1.0 / 512.0])

    def test_quotient_matches_product_with_reciprocal(self):
        x = Jet.variable(0.7, 6)
        lhs = (x**2 + 1.0) / (x - 3.0)
        rhs = (x**2 + 1.0) * (x - 3.0).reciprocal()
        assert lhs.coeffs.tolist() == pytest.approx(rhs.coeffs.tolist())

    def test_scalar_operations(self):
        x = Jet.variable(1.0, 2)
        assert (2.0 - x).coeffs.tolist() == pytest.approx([1.0, -1.0, 0.0])
        assert (3.0 / x).value == pytest.approx(3.0)
        assert (x * 4).coeffs.tolist() == pytest.approx([4.0, 4.0, 0.0])


class TestJetCalculus:
    """Derivative, integral and composition."""

    def test_integral_then_derivative(self):
        jet = Jet([1.0, 2.0, 3.0, 0.0], 3)
        assert jet.integral().derivative().coeffs.tolist() == pytest.approx([1.0, 2.0, 3.0, 0.0])

    def test_integral_constant(self):
        assert Jet([2.0, 0.0], 1).integral(5.0).coeffs.tolist() == pytest.approx([5.0, 2.0])

    def test_compose(self):
        """(1 + s + s^2/2) o (2 s) = 1 + 2 s + 2 s^2."""
        outer = Jet([1.0, 1.0, 0.5], 2)
        inner = Jet([0.0, 2.0], 2)
        assert outer.compose(inner).coeffs.tolist() == pytest.approx([1.0, 2.0, 2.0])

    def test_shift_down(self):
        assert Jet([0.0, 3.0, 4.0], 2).shift_down().coeffs.tolist() == pytest.approx([3.0, 4.0, 0.0])

    def test_evaluate(self):
        assert Jet([1.0, 2.0, 3.0]).evaluate(2.0) == pytest.approx(17.0)


class TestJetErrors:
    """Invalid operations."""

    def test_compose_requires_zero_constant(self):
        with pytest.raises(ValueError):
            Jet([1.0, 1.0], 2).compose(Jet([0.5, 1.0], 2))

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            Jet([1.0, 1.0], 2) + Jet([1.0, 1.0], 3)

    def test_reciprocal_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            Jet([0.0, 1.0], 2).reciprocal()

    def test_negative_power(self):
        with pytest.raises(ValueError):
            Jet.variable(1.0, 2) ** -1

    def test_empty(self):
        with pytest.raises(ValueError):
            Jet([])

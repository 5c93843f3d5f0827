"""
Unit tests for the cusp curve, the surface BS and its front classification.
"""

import numpy as np
import pytest

from models.dynamics import CycleStability
from models.geometry import CurveLabel, FrontClass
from services import bifurcation_geometry as geometry
from services import equilibria


class TestCusp:
    """(p, q) = (-3 z^2, 2 z^3)."""

    @pytest.mark.parametrize("z", [-1.5, -0.2, 0.0, 0.7, 2.0])
    def test_on_zero_set(self, z):
        p, q = geometry.cusp_point(z)
        assert geometry.cusp_residual(p, q) == pytest.approx(0.0, abs=1e-12)
        assert equilibria.discriminant_pq(p, q) == pytest.approx(0.0, abs=1e-10)

    def test_curve_sample(self):
        sample = geometry.cusp_curve([0.0, 1.0])
        assert sample.label is CurveLabel.CUSP_CURVE
        assert sample.points == [(0.0, 0.0), (-3.0, 2.0)]


class TestSurfaceBS:
    """Parametrization, tangent plane and singular set."""

    def test_negative_radius(self):
        with pytest.raises(ValueError):
            geometry.bs_surface(-0.1, 0.0)

    def test_s_form_matches(self, rng):
        for _ in range(20):
            r, mu3 = rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0)
            assert geometry.bs_surface(r, mu3) == pytest.approx(geometry.bs_in_s(r * r, mu3))

    def test_partials_match_differences(self, rng):
        h = 1e-6
        for _ in range(20):
            r, mu3 = rng.uniform(0.1, 1.5), rng.uniform(-1.0, 1.0)
            d_r, d_mu3 = geometry.bs_partials(r, mu3)
            numeric_r = (np.array(geometry.bs_surface(r + h, mu3)) - geometry.bs_surface(r - h, mu3)) / (2 * h)
            numeric_mu3 = (np.array(geometry.bs_surface(r, mu3 + h)) - geometry.bs_surface(r, mu3 - h)) / (2 * h)
            assert np.allclose(d_r, numeric_r, atol=1e-6)
            assert np.allclose(d_mu3, numeric_mu3, atol=1e-6)

    def test_cross_product(self, rng):
        for _ in range(20):
            r, mu3 = rng.uniform(0.0, 1.5), rng.uniform(-1.0, 3.0)
            d_r, d_mu3 = geometry.bs_partials(r, mu3)
            assert geometry.bs_cross_product(r, mu3) == pytest.approx(tuple(np.cross(d_r, d_mu3)), abs=1e-12)

    def test_unit_normal_is_normal(self):
        r, mu3 = 0.8, 0.3
        normal = np.array(geometry.unit_normal(r))
        d_r, d_mu3 = geometry.bs_partials(r, mu3)
        assert np.linalg.norm(normal) == pytest.approx(1.0)
        assert np.dot(normal, d_r) == pytest.approx(0.0, abs=1e-12)
        assert np.dot(normal, d_mu3) == pytest.approx(0.0, abs=1e-12)

    def test_singular_set_and_edge_image(self):
        for r in (0.0, 0.4, 1.1):
            assert geometry.singular_set(r, 3 * r * r)
            assert geometry.bs_surface(r, 3 * r * r) == pytest.approx(geometry.curve_c(r))
        assert not geometry.singular_set(0.4, 0.0)


class TestFrontClassification:
    @pytest.mark.parametrize(
        "r, mu3, expected",
        [
            (0.5, 0.1, FrontClass.REGULAR),
            (0.5, 0.75, FrontClass.CUSPIDAL_EDGE),
            (1.0, 3.0, FrontClass.CUSPIDAL_EDGE),
            (0.0, 0.0, FrontClass.SWALLOWTAIL),
        ],
    )
    def test_classes(self, r, mu3, expected):
        point = geometry.front_classify(r, mu3)
        assert point.classification is expected
        assert geometry.classify_front_numeric(r, mu3) is expected
        assert point.image == pytest.approx(geometry.bs_surface(r, mu3))

    @pytest.mark.slow
    def test_numeric_agrees_with_closed_form_on_grid(self):
        """200 x 200 grid plus points on the edge mu3 = 3 r^2, the origin among them."""
        points = [(r, mu3) for r in np.linspace(0.0, 1.0, 200) for mu3 in np.linspace(-1.0, 3.0, 200)]
        points += [(r, 3.0 * r * r) for r in np.linspace(0.0, 1.0, 25)]
        mismatches = [
            (r, mu3) for r, mu3 in points
            if geometry.classify_front_numeric(r, mu3) is not geometry._classify_closed_form(r, mu3, 1e-9)
        ]
        assert mismatches == []

    @pytest.mark.parametrize("r", [0.0, 0.3, 0.8])
    def test_null_direction_on_edge(self, r):
        sigma, eta = geometry.front_null_direction(r, 3.0 * r * r)
        assert sigma[-1] < 1e-8
        assert abs(eta[0]) == pytest.approx(1.0, abs=1e-9)
        assert eta[1] == pytest.approx(0.0, abs=1e-9)

    def test_singular_function_vanishes_on_edge_only(self):
        assert geometry.singular_function(0.6, 1.08) == pytest.approx(0.0, abs=1e-12)
        assert abs(geometry.singular_function(0.6, 0.5)) > 1.0

    def test_radius_axis_is_regular(self):
        """r = 0 folds the parametrisation but not the front."""
        assert geometry.classify_front_numeric(0.0, 0.7) is FrontClass.REGULAR
        assert geometry.classify_front_numeric(0.0, -0.4) is FrontClass.REGULAR


class TestPotential:
    """Degeneracy of the radial potential."""

    def test_origin_level_four(self):
        assert geometry.potential_degeneracy(0.0, (0.0, 0.0, 0.0)) == 4

    def test_level_three(self):
        assert geometry.potential_degeneracy(1.0, (1.0, -3.0, 3.0)) == 3

    def test_generic_bs_level_two(self):
        r, mu3 = 0.5, 0.2
        mu1, mu2, _ = geometry.bs_surface(r, mu3)
        assert geometry.potential_degeneracy(r, (mu1, mu2, mu3)) == 2

    def test_rhs_is_potential_slope(self):
        mu, r, h = (0.3, -0.2, 0.5), 0.7, 1e-6
        numeric = (geometry.potential(r + h, mu) - geometry.potential(r - h, mu)) / (2 * h)
        assert geometry.normal_form_radial_rhs(r, mu) == pytest.approx(numeric, rel=1e-7)


class TestNormalFormPortrait:
    """Nested cycles of the radial normal form, innermost first."""

    def test_no_cycles(self):
        portrait = geometry.normal_form_portrait((-0.1, -1.0, -1.0))
        assert portrait.cycles == []
        assert portrait.origin_stable

    def test_supercritical_side(self):
        portrait = geometry.normal_form_portrait((0.01, -1.0, 0.0))
        assert not portrait.origin_stable
        assert portrait.stability == [CycleStability.STABLE]
        assert portrait.cycles[0].radius == pytest.approx(0.1, rel=1e-3)

    def test_subcritical_side(self):
        portrait = geometry.normal_form_portrait((-0.01, 1.0, 0.0))
        assert portrait.origin_stable
        assert portrait.stability == [CycleStability.UNSTABLE, CycleStability.STABLE]

    def test_three_cycles(self):
        """Roots s = 0.01, 0.04, 0.09 of mu1 + mu2 s + mu3 s^2 - s^3."""
        portrait = geometry.normal_form_portrait((3.6e-5, -0.0049, 0.14))
        assert [c.radius for c in portrait.cycles] == pytest.approx([0.1, 0.2, 0.3], rel=1e-9)
        assert portrait.stability == [
            CycleStability.STABLE, CycleStability.UNSTABLE, CycleStability.STABLE
        ]
        assert not portrait.origin_stable

    def test_semi_stable_on_bs(self):
        mu = geometry.bs_surface(0.5, 0.2)
        portrait = geometry.normal_form_portrait(mu)
        assert portrait.stability == [CycleStability.SEMI_STABLE]
        assert portrait.cycles[0].radius == pytest.approx(0.5, rel=1e-6)
        assert geometry.potential_degeneracy(0.5, mu) == 2

    def test_triple_root_on_edge_curve(self):
        """Triple root on C: dr/dt still changes sign across it."""
        portrait = geometry.normal_form_portrait(geometry.curve_c(0.8))
        assert portrait.stability == [CycleStability.STABLE]
        assert portrait.cycles[0].radius == pytest.approx(0.8, rel=1e-4)

    def test_hopf_label(self):
        assert geometry.normal_form_portrait((0.0, -0.5, 0.0)).hopf is CurveLabel.H_MINUS
        assert geometry.normal_form_portrait((0.0, 0.5, 0.0)).origin_stable is False


class TestUnfoldingSurfaces:
    def test_hopf_half_plane(self):
        assert geometry.hopf_half_plane((0.0, 0.5, 0.0)) is CurveLabel.H_PLUS
        assert geometry.hopf_half_plane((0.0, -0.5, 0.0)) is CurveLabel.H_MINUS
        assert geometry.hopf_half_plane((0.1, -0.5, 0.0)) is None

    def test_swallowtail_axis(self):
        assert geometry.swallowtail(0.0, 0.7) == (0.0, 0.0, 0.7)

    def test_triangulate(self):
        assert geometry.triangulate(2, 2) == [(0, 1, 2), (1, 3, 2)]

    def test_surfaces(self):
        samples = geometry.hopf_unfolding_surfaces(mesh=5)
        labels = [s.label for s in samples]
        assert labels == [
            CurveLabel.H_PLUS, CurveLabel.H_MINUS, CurveLabel.BS, CurveLabel.BS,
            CurveLabel.C, CurveLabel.SWALLOWTAIL,
        ]
        h_plus, h_minus = samples[0], samples[1]
        assert all(p[1] > 0 for p in h_plus.points)
        assert all(p[1] < 0 for p in h_minus.points)
        assert len(samples[2].triangles) == 32
        assert samples[3].metadata["piece"] == "s<0"
        assert len(samples[4].points) == 5

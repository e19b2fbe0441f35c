import numpy as np
import pytest

from spin_torus.hamiltonian import SystemParams, propagator_analytic
from spin_torus.manifold import (
    DegenerateShear,
    ManifoldKind,
    StepTooSmall,
    TorusPoint,
    classify,
    diagonalize_check,
    evolve_family,
    evolve_family_sheared,
    family_invariants,
    metric_analytic,
    metric_numeric,
    params_to_point,
)
from spin_torus.qstate import (
    PureState2Q,
    apply,
    plus_minus_state,
    plus_plus_state,
    random_state,
    up_down,
    up_up,
)


def near_polarized_state(eps: float) -> PureState2Q:
    """Almost all weight on |up up>, with the small remainder split so the
    metric cross term survives while the phi direction collapses."""
    return PureState2Q.from_amplitudes(
        np.sqrt(1.0 - 2.0 * eps), np.sqrt(eps), -np.sqrt(eps), 0.0
    )


class TestTorusPoint:
    def test_canonical_wraps_both_angles(self):
        point = TorusPoint(np.pi + 0.3, -0.5).canonical()
        assert point.theta == pytest.approx(0.3)
        assert point.phi == pytest.approx(2.0 * np.pi - 0.5)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            TorusPoint(np.nan, 0.0)

    def test_params_to_point(self):
        point = params_to_point(coupling=1.5, field=-0.25, t=2.0)
        assert point.theta == pytest.approx(6.0)
        assert point.phi == pytest.approx(-1.0)


class TestEvolveFamily:
    def test_matches_propagator(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            state = random_state(rng)
            coupling, field = rng.uniform(-3, 3, size=2)
            t = float(rng.uniform(0, 6))
            params = SystemParams(float(coupling), float(field))
            via_u = apply(propagator_analytic(params, t), state)
            via_family = evolve_family(state, params_to_point(coupling, field, t))
            np.testing.assert_allclose(
                via_family.vector, via_u.vector, atol=1e-12
            )

    def test_theta_antiperiod_exact(self):
        rng = np.random.default_rng(22)
        for _ in range(20):
            state = random_state(rng)
            point = TorusPoint(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            base = evolve_family(state, point).vector
            shifted = evolve_family(
                state, TorusPoint(point.theta + np.pi, point.phi)
            ).vector
            np.testing.assert_allclose(shifted, -base, atol=1e-12)

    def test_phi_period_exact(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            state = random_state(rng)
            point = TorusPoint(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            base = evolve_family(state, point).vector
            wrapped = evolve_family(
                state, TorusPoint(point.theta, point.phi + 2 * np.pi)
            ).vector
            np.testing.assert_allclose(wrapped, base, atol=1e-12)

    def test_sheared_family_unshears(self):
        state = PureState2Q.normalized(0.4, 0.7, -0.2j, 0.5)
        k = metric_analytic(state).shear
        point = TorusPoint(0.8, 1.9)
        sheared = evolve_family_sheared(state, point, k)
        plain = evolve_family(state, TorusPoint(0.8, 1.9 - k * 0.8))
        np.testing.assert_allclose(sheared.vector, plain.vector, atol=1e-15)


class TestInvariants:
    def test_reference_values(self):
        inv = family_invariants(up_down())
        assert (inv.aligned, inv.mismatch, inv.imbalance) == (0.0, 1.0, 0.0)

    @pytest.mark.parametrize("chi", [0.3, np.pi / 3, np.pi / 2, 2.0])
    def test_plus_minus_family(self, chi):
        inv = family_invariants(plus_minus_state(chi, 0.9))
        assert inv.aligned == pytest.approx(np.sin(chi) ** 2 / 2, abs=1e-14)
        assert inv.mismatch == pytest.approx(1.0, abs=1e-14)
        assert inv.imbalance == pytest.approx(0.0, abs=1e-14)

    def test_constant_along_the_family(self):
        rng = np.random.default_rng(31)
        state = random_state(rng)
        reference = family_invariants(state)
        for _ in range(10):
            moved = evolve_family(
                state, TorusPoint(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            )
            inv = family_invariants(moved)
            assert inv.aligned == pytest.approx(reference.aligned, abs=1e-13)
            assert inv.mismatch == pytest.approx(reference.mismatch, abs=1e-13)
            assert inv.imbalance == pytest.approx(reference.imbalance, abs=1e-13)


class TestMetricAnalytic:
    def test_component_formulas(self):
        state = PureState2Q.normalized(0.5, 0.6, -0.3j, 0.2)
        inv = family_invariants(state)
        metric = metric_analytic(state, gamma=1.5)
        g2 = 1.5 ** 2
        assert metric.g_theta_theta == pytest.approx(
            g2 * inv.mismatch * (2 - inv.mismatch)
        )
        assert metric.g_phi_phi == pytest.approx(
            g2 * (inv.aligned - inv.imbalance ** 2)
        )
        assert metric.g_theta_phi == pytest.approx(
            g2 * inv.mismatch * inv.imbalance
        )

    def test_shear_removes_cross_term_in_closed_form(self):
        rng = np.random.default_rng(41)
        for _ in range(30):
            metric = metric_analytic(random_state(rng))
            assert metric.shear is not None
            # Diagonalized determinant must match the raw determinant.
            raw_det = metric.determinant()
            diag_det = metric.g_theta_theta_diag * metric.g_phi_phi_diag
            assert diag_det == pytest.approx(raw_det, abs=1e-13)

    def test_diagonal_components_nonnegative(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            metric = metric_analytic(random_state(rng))
            assert metric.g_theta_theta_diag >= -1e-13
            assert metric.g_phi_phi_diag >= -1e-13

    def test_degenerate_phi_direction_has_no_shear(self):
        metric = metric_analytic(up_down())
        assert metric.shear is None
        assert metric.g_phi_phi == 0.0
        assert metric.g_theta_theta == pytest.approx(1.0)

    def test_unresolvable_shear_raises(self):
        with pytest.raises(DegenerateShear):
            metric_analytic(near_polarized_state(4e-13))

    def test_rejects_bad_gamma(self):
        with pytest.raises(ValueError, match="gamma"):
            metric_analytic(up_down(), gamma=-2.0)


class TestMetricNumeric:
    def test_agrees_with_closed_form(self):
        rng = np.random.default_rng(51)
        for _ in range(10):
            state = random_state(rng)
            expected = metric_analytic(state)
            point = TorusPoint(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            measured = metric_numeric(state, point)
            assert measured.g_theta_theta == pytest.approx(
                expected.g_theta_theta, abs=1e-6
            )
            assert measured.g_theta_phi == pytest.approx(
                expected.g_theta_phi, abs=1e-6
            )
            assert measured.g_phi_phi == pytest.approx(
                expected.g_phi_phi, abs=1e-6
            )

    def test_gamma_scales_quadratically(self):
        state = plus_minus_state(1.1, 0.0)
        point = TorusPoint(0.4, 0.9)
        unit = metric_numeric(state, point, gamma=1.0)
        scaled = metric_numeric(state, point, gamma=3.0)
        assert scaled.g_theta_theta == pytest.approx(
            9.0 * unit.g_theta_theta, abs=1e-5
        )

    def test_step_bounds(self):
        state = plus_minus_state(1.0, 0.0)
        point = TorusPoint(0.1, 0.1)
        with pytest.raises(StepTooSmall):
            metric_numeric(state, point, h=1e-7)
        with pytest.raises(ValueError, match="coarse"):
            metric_numeric(state, point, h=0.5)

    def test_degenerate_phi_direction_measured(self):
        measured = metric_numeric(up_down(), TorusPoint(0.7, 1.3))
        assert measured.shear is None
        assert measured.g_phi_phi == pytest.approx(0.0, abs=1e-10)
        assert measured.g_theta_theta == pytest.approx(1.0, abs=1e-6)


class TestDiagonalizeCheck:
    def test_cross_term_vanishes_in_sheared_coordinates(self):
        rng = np.random.default_rng(61)
        for _ in range(15):
            sheared = diagonalize_check(random_state(rng))
            assert abs(sheared.g_theta_phi) < 1e-8

    def test_diagonal_entries_match_closed_form(self):
        state = PureState2Q.normalized(0.7, 0.1, 0.5j, -0.4)
        expected = metric_analytic(state)
        sheared = diagonalize_check(state)
        assert sheared.g_theta_theta == pytest.approx(
            expected.g_theta_theta_diag, abs=1e-7
        )
        assert sheared.g_phi_phi == pytest.approx(
            expected.g_phi_phi_diag, abs=1e-7
        )


class TestClassify:
    def test_generic_state_is_flat_torus(self):
        report = classify(PureState2Q.normalized(0.5, 0.6, -0.3j, 0.2))
        assert report.kind is ManifoldKind.FLAT_TORUS
        assert report.dimension == 2
        assert report.circle_radius is None
        assert report.flatness_residual < 1e-6

    def test_up_down_is_theta_circle_with_unit_radius(self):
        report = classify(up_down(), gamma=1.0)
        assert report.kind is ManifoldKind.CIRCLE
        assert report.dimension == 1
        assert report.circle_radius == pytest.approx(1.0, abs=1e-12)
        assert report.radius_extrapolated is True

    @pytest.mark.parametrize("chi", [0.4, 1.1, 2.3])
    def test_plus_plus_is_phi_circle(self, chi):
        gamma = 1.3
        report = classify(plus_plus_state(chi, 0.6), gamma=gamma)
        assert report.kind is ManifoldKind.CIRCLE
        assert report.circle_radius == pytest.approx(
            gamma * np.sin(chi) / np.sqrt(2.0), abs=1e-10
        )
        assert report.radius_extrapolated is False

    def test_polarized_state_is_point(self):
        report = classify(up_up())
        assert report.kind is ManifoldKind.POINT
        assert report.dimension == 0
        assert report.radius_phi_circle == pytest.approx(0.0, abs=1e-12)
        assert report.radius_theta_circle == pytest.approx(0.0, abs=1e-12)

    def test_sheared_rank_one_metric_is_still_a_circle(self):
        # Both raw diagonal entries are positive here, but the determinant
        # vanishes: the surface is a line in disguise, and only the
        # diagonalized components expose that.
        state = PureState2Q.from_amplitudes(np.sqrt(0.5), 0.5, -0.5, 0.0)
        metric = metric_analytic(state)
        assert metric.g_theta_theta > 0.1
        assert metric.g_phi_phi > 0.1
        report = classify(state)
        assert report.kind is ManifoldKind.CIRCLE
        assert report.circle_radius == pytest.approx(0.5, abs=1e-12)

    def test_both_radius_candidates_always_reported(self):
        report = classify(plus_minus_state(0.8, 0.0), gamma=2.0)
        assert report.kind is ManifoldKind.FLAT_TORUS
        assert report.radius_phi_circle == pytest.approx(
            2.0 * np.sin(0.8) / np.sqrt(2.0), abs=1e-12
        )
        assert report.radius_theta_circle == pytest.approx(2.0, abs=1e-12)

    def test_seeded_sampling_is_deterministic(self):
        state = PureState2Q.normalized(0.3, 0.8, 0.1, -0.4j)
        first = classify(state, seed=7)
        second = classify(state, seed=7)
        assert first.flatness_residual == second.flatness_residual

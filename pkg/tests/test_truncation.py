"""Truncation rules and the radial projection."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvtem.errors import (
    ConfigurationError,
    DegenerateGrowthError,
    StepSizeTooLargeError,
)
from mvtem.truncation import (
    DEFAULT_KAPPA,
    polynomial_rule,
    project,
    radius,
    rate_tuned_kappa,
)

VOL32_RULE = polynomial_rule(alpha=1.0, growth_const=2.0, trunc_constant=8.0)
DW_RULE = polynomial_rule(alpha=2.0, growth_const=3.0, trunc_constant=12.0)


class TestPolynomialRule:
    def test_threshold_schedule(self):
        # h(dt) = K * dt**(-1/3), checked against independent scalar math.
        assert VOL32_RULE.h(2.0**-10) == pytest.approx(8.0 * 2.0 ** (10.0 / 3.0), rel=1e-15)
        assert VOL32_RULE.h(1.0) == 8.0

    def test_radius_closed_forms(self):
        # alpha=1, L=2, K=8: r(dt) = K*dt^(-1/3)/(2L) - 1 = 2*dt^(-1/3) - 1.
        assert radius(VOL32_RULE, 2.0**-10) == pytest.approx(
            2.0 * 2.0 ** (10.0 / 3.0) - 1.0, rel=1e-15
        )
        # alpha=2, L=3, K=12: r(dt) = sqrt(2*dt^(-1/3) - 1).
        assert radius(DW_RULE, 2.0**-10) == pytest.approx(
            math.sqrt(2.0 * 2.0 ** (10.0 / 3.0) - 1.0), rel=1e-15
        )
        assert radius(DW_RULE, 0.25) == pytest.approx(
            math.sqrt(2.0 * 0.25 ** (-1.0 / 3.0) - 1.0), rel=1e-15
        )

    def test_radius_at_unit_step(self):
        # At dt=1 both built-in envelopes leave exactly the unit ball.
        assert radius(VOL32_RULE, 1.0) == pytest.approx(1.0, rel=1e-15)
        assert radius(DW_RULE, 1.0) == pytest.approx(1.0, rel=1e-15)

    def test_radius_grows_as_dt_shrinks(self):
        radii = [radius(VOL32_RULE, 2.0**-j) for j in range(0, 16)]
        assert all(r2 > r1 for r1, r2 in zip(radii, radii[1:]))

    def test_phi_round_trip(self):
        for u in (0.5, 1.0, 3.7, 19.0):
            assert VOL32_RULE.phi_inv(VOL32_RULE.phi(u)) == pytest.approx(u, rel=1e-12)
            assert DW_RULE.phi_inv(DW_RULE.phi(u)) == pytest.approx(u, rel=1e-12)

    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(DegenerateGrowthError):
            polynomial_rule(alpha=0.0, growth_const=2.0, trunc_constant=8.0)
        with pytest.raises(DegenerateGrowthError):
            polynomial_rule(alpha=-1.0, growth_const=2.0, trunc_constant=8.0)

    def test_rejects_threshold_at_or_below_envelope_floor(self):
        # K must exceed phi(0) = 2L or no dt in (0, 1] has a positive radius.
        with pytest.raises(StepSizeTooLargeError):
            polynomial_rule(alpha=1.0, growth_const=2.0, trunc_constant=4.0)
        with pytest.raises(StepSizeTooLargeError):
            polynomial_rule(alpha=1.0, growth_const=2.0, trunc_constant=3.0)

    def test_rejects_kappa_outside_band(self):
        for kappa in (0.0, -0.1, 0.4, 1.0):
            with pytest.raises(ConfigurationError):
                polynomial_rule(alpha=1.0, growth_const=2.0, trunc_constant=8.0, kappa=kappa)

    def test_rejects_dt_outside_unit_interval(self):
        for dt in (0.0, -0.5, 1.5):
            with pytest.raises(ConfigurationError):
                radius(VOL32_RULE, dt)

    def test_phi_inv_rejects_values_below_floor(self):
        with pytest.raises(StepSizeTooLargeError):
            VOL32_RULE.phi_inv(4.0)


class TestRateTunedKappa:
    def test_value(self):
        # q*alpha / (2*(p-q)): q=2, p=8, alpha=1 -> 1/6.
        assert rate_tuned_kappa(2.0, 8.0, 1.0) == pytest.approx(1.0 / 6.0, rel=1e-15)

    def test_rejects_kappa_out_of_band(self):
        with pytest.raises(ConfigurationError):
            rate_tuned_kappa(2.0, 4.0, 2.0)  # would need kappa = 1

    def test_rejects_bad_moment_orders(self):
        with pytest.raises(ConfigurationError):
            rate_tuned_kappa(4.0, 3.0, 1.0)

    def test_feeds_polynomial_rule(self):
        kappa = rate_tuned_kappa(2.0, 8.0, 1.0)
        rule = polynomial_rule(1.0, 2.0, 8.0, kappa=kappa)
        assert rule.kappa == pytest.approx(kappa)


class TestProject:
    def test_inside_points_exactly_unchanged(self):
        x = np.array([[0.5, -0.25], [0.0, 0.0], [0.6, 0.8]])
        out = project(x, 1.0)
        assert np.array_equal(out, x)

    def test_scalar_hand_values(self):
        assert project(np.array([3.0]), 2.0)[0] == pytest.approx(2.0, rel=1e-15)
        assert project(np.array([-3.0]), 2.0)[0] == pytest.approx(-2.0, rel=1e-15)
        out = project(np.array([[3.0, 4.0]]), 1.0)
        assert out[0] == pytest.approx([0.6, 0.8], rel=1e-15)

    def test_huge_finite_states_do_not_overflow(self):
        # sqrt(sum of squares) would overflow at 1e200 per coordinate.
        x = np.array([[1e200, 1e200], [-1e300, 2e299]])
        out = project(x, 2.0)
        norms = np.linalg.norm(out, axis=1)
        assert np.all(np.isfinite(out))
        assert norms == pytest.approx([2.0, 2.0], rel=1e-12)

    def test_rejects_nonpositive_radius(self):
        for r in (0.0, -1.0, math.inf, math.nan):
            with pytest.raises(ConfigurationError):
                project(np.array([1.0]), r)

    @given(
        st.lists(
            st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
            min_size=1,
            max_size=5,
        ),
        st.floats(min_value=1e-3, max_value=1e3, allow_nan=False),
    )
    def test_idempotent(self, coords, r):
        x = np.array([coords])
        once = project(x, r)
        twice = project(once, r)
        assert np.array_equal(once, twice)

    @given(
        st.integers(min_value=1, max_value=4),
        st.floats(min_value=1e-3, max_value=1e3),
        st.integers(min_value=0, max_value=2**32 - 1),
    )
    @settings(max_examples=50)
    def test_bound_and_direction(self, dim, r, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(8, dim)) * 10 ** rng.uniform(-3, 4)
        out = project(x, r)
        norms = np.linalg.norm(out, axis=1)
        assert np.all(norms <= r * (1.0 + 1e-12))
        # The projection is radial: the direction never flips.
        dots = np.sum(out * x, axis=1)
        assert np.all(dots >= 0.0)

    @given(
        st.integers(min_value=1, max_value=4),
        st.floats(min_value=1e-2, max_value=1e2),
        st.integers(min_value=0, max_value=2**32 - 1),
    )
    @settings(max_examples=50)
    def test_contraction_on_pairs(self, dim, r, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(16, dim)) * 10 ** rng.uniform(-2, 3)
        y = rng.normal(size=(16, dim)) * 10 ** rng.uniform(-2, 3)
        d_proj = np.linalg.norm(project(x, r) - project(y, r), axis=1)
        d_orig = np.linalg.norm(x - y, axis=1)
        assert np.all(d_proj <= d_orig * (1.0 + 1e-12) + 1e-300)

    def test_single_vector_shape_preserved(self):
        out = project(np.array([3.0, 4.0]), 1.0)
        assert out.shape == (2,)
        assert np.linalg.norm(out) == pytest.approx(1.0, rel=1e-12)

    def test_default_kappa_is_one_third(self):
        assert DEFAULT_KAPPA == pytest.approx(1.0 / 3.0, rel=1e-15)
        assert VOL32_RULE.kappa == DEFAULT_KAPPA

"""One-step schemes, ensemble simulation, and the coupled error pipeline."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvtem.errors import ConfigurationError, NumericOverflowError
from mvtem.measures import EmpiricalMeasure
from mvtem.models import ModelSpec, builtin_double_well, builtin_vol32
from mvtem.noise import NoisePlan
from mvtem.scheme import (
    ObserverConfig,
    ParticleEnsemble,
    coupled_rmse,
    draw_initial,
    em_step,
    simulate,
    tem_step,
)
from mvtem.truncation import polynomial_rule, project, radius

VOL32 = builtin_vol32()
DW = builtin_double_well()
VOL32_RULE = polynomial_rule(1.0, 2.0, 8.0)
DW_RULE = polynomial_rule(2.0, 3.0, 12.0)


class PinnedPlan:
    """Noise plan stand-in returning pinned standard normals at every step."""

    def __init__(self, normals_matrix, fine_dt):
        self._normals = np.asarray(normals_matrix, dtype=float)
        self.fine_dt = float(fine_dt)
        self.n_particles = self._normals.shape[0]
        self.dim_noise = self._normals.shape[1]

    def normals(self, fine_step):
        return self._normals

    def increment(self, fine_step):
        return math.sqrt(self.fine_dt) * self._normals


def linear_decay_model() -> ModelSpec:
    """f(x) = -x, g = 0: one Euler step multiplies states by (1 - dt)."""
    return ModelSpec(
        name="linear_decay",
        dim_state=1,
        dim_noise=1,
        drift=lambda x, mu: -np.asarray(x, dtype=float),
        diffusion=lambda x, mu: np.zeros_like(np.asarray(x, dtype=float))[..., None],
        growth_alpha=1.0,
        trunc_constant=8.0,
        vectorized=True,
    )


class TestDrawInitial:
    def make_gen(self):
        return np.random.default_rng(0)

    def test_number(self):
        states = draw_initial(1.5, 4, 1, self.make_gen())
        assert np.array_equal(states, np.full((4, 1), 1.5))

    def test_constant_mapping(self):
        states = draw_initial({"type": "constant", "value": -2.0}, 3, 1, self.make_gen())
        assert np.array_equal(states, np.full((3, 1), -2.0))

    def test_normal_mapping_reproducible(self):
        a = draw_initial({"type": "normal", "mean": 1.0, "sd": 2.0}, 5, 1, np.random.default_rng(9))
        b = draw_initial({"type": "normal", "mean": 1.0, "sd": 2.0}, 5, 1, np.random.default_rng(9))
        assert np.array_equal(a, b)
        assert a.shape == (5, 1)

    def test_file_source(self, tmp_path):
        path = tmp_path / "init.csv"
        np.savetxt(path, np.arange(6.0).reshape(6, 1), delimiter=",")
        states = draw_initial({"type": "file", "path": str(path)}, 4, 1, self.make_gen())
        assert np.array_equal(states, np.arange(4.0).reshape(4, 1))
        with pytest.raises(ConfigurationError):
            draw_initial({"type": "file", "path": str(path)}, 10, 1, self.make_gen())

    def test_array_and_callable(self):
        arr = np.array([1.0, 2.0, 3.0])
        assert draw_initial(arr, 3, 1, self.make_gen()).shape == (3, 1)
        states = draw_initial(lambda gen, m, d: np.ones((m, d)), 2, 1, self.make_gen())
        assert np.array_equal(states, np.ones((2, 1)))

    def test_shape_and_type_validation(self):
        with pytest.raises(ConfigurationError):
            draw_initial(np.ones((2, 1)), 3, 1, self.make_gen())
        with pytest.raises(ConfigurationError):
            draw_initial({"type": "mystery"}, 3, 1, self.make_gen())
        with pytest.raises(ConfigurationError):
            draw_initial({"type": "normal", "sd": -1.0}, 3, 1, self.make_gen())


class TestSingleSteps:
    def test_tem_step_hand_computed(self):
        # Double well, M=2, dt=1/4, pinned normals Z=(0.3, -1.1); expected
        # states from scalar arithmetic: project init, one Euler update with
        # mean interaction, projection is a no-op (both inside the ball).
        dt = 0.25
        r = radius(DW_RULE, dt)
        assert r == pytest.approx(1.4747210257999304, abs=1e-16)
        init = project(np.array([[1.0], [-2.0]]), r)
        assert init[:, 0] == pytest.approx([1.0, -1.4747210257999304], abs=1e-16)

        plan = PinnedPlan([[0.3], [-1.1]], fine_dt=dt)
        stepped = tem_step(ParticleEnsemble(init, 0, dt), DW, DW_RULE, plan)
        assert stepped.states[:, 0] == pytest.approx(
            [-0.05934012822499124, 1.1299831322720195], abs=1e-15
        )
        assert stepped.step_index == 1
        assert stepped.time == pytest.approx(0.25)

    def test_tem_step_projects_onto_ball(self):
        dt = 0.5
        plan = PinnedPlan([[8.0]], fine_dt=dt)  # one huge increment
        ens = ParticleEnsemble(np.array([[1.0]]), 0, dt)
        stepped = tem_step(ens, DW, DW_RULE, plan)
        r = radius(DW_RULE, dt)
        assert abs(stepped.states[0, 0]) <= r * (1.0 + 1e-12)

    def test_tem_step_raises_on_nonfinite_proposal(self):
        exploding = ModelSpec(
            name="exploding",
            dim_state=1,
            dim_noise=1,
            drift=lambda x, mu: np.full_like(np.asarray(x, dtype=float), np.inf),
            diffusion=lambda x, mu: np.zeros_like(np.asarray(x, dtype=float))[..., None],
            growth_alpha=1.0,
            trunc_constant=8.0,
            vectorized=True,
        )
        plan = PinnedPlan([[0.0]], fine_dt=0.5)
        with pytest.raises(NumericOverflowError) as err:
            tem_step(ParticleEnsemble(np.array([[1.0]]), 3, 0.5), exploding, VOL32_RULE, plan)
        assert err.value.step == 4
        assert err.value.particle == 0

    def test_em_step_keeps_nonfinite(self):
        plan = PinnedPlan([[0.0]], fine_dt=0.5)
        ens = ParticleEnsemble(np.array([[np.inf]]), 0, 0.5)
        stepped = em_step(ens, VOL32, plan)
        assert not np.isfinite(stepped.states).all()

    def test_linear_decay_exact(self):
        model = linear_decay_model()
        dt = 0.5
        plan = PinnedPlan([[0.0], [0.0]], fine_dt=dt)
        ens = ParticleEnsemble(np.array([[1.0], [-0.5]]), 0, dt)
        stepped = tem_step(ens, model, VOL32_RULE, plan)
        assert np.array_equal(stepped.states, np.array([[0.5], [-0.25]]))

    def test_step_requires_integer_grid_ratio(self):
        plan = NoisePlan(1, 1, 1, fine_dt=0.4)
        with pytest.raises(ConfigurationError):
            tem_step(ParticleEnsemble(np.array([[0.0]]), 0, 0.5), VOL32, VOL32_RULE, plan)


class TestSimulate:
    def test_deterministic_decay_closed_form(self):
        # With f = -x, g = 0 and dt = 1/2, mean_sq after one step is exactly
        # (1 - 1/2)^2 = 0.25 and after two steps 0.0625.
        model = linear_decay_model()
        res = simulate(model, VOL32_RULE, 4, 0.5, 1.0, 1.0, noise=123)
        assert np.array_equal(res.mean_sq, np.array([1.0, 0.25, 0.0625]))

    def test_time_grid(self):
        res = simulate(VOL32, VOL32_RULE, 2, 0.25, 1.0, 0.5, noise=7)
        assert np.array_equal(res.times, np.array([0.0, 0.25, 0.5, 0.75, 1.0]))
        assert res.final.step_index == 4

    def test_initial_projection_flag(self):
        dt = 0.25
        r = radius(VOL32_RULE, dt)
        res_on = simulate(VOL32, VOL32_RULE, 3, dt, dt, 5.0, noise=1, truncate_initial=True)
        res_off = simulate(VOL32, VOL32_RULE, 3, dt, dt, 5.0, noise=1, truncate_initial=False)
        assert res_on.mean_sq[0] == pytest.approx(r * r, rel=1e-12)
        assert res_off.mean_sq[0] == pytest.approx(25.0, rel=1e-15)

    def test_snapshots_and_paths(self):
        obs = ObserverConfig(snapshot_times=(0.5, 1.0), path_particles=(0, 2))
        res = simulate(VOL32, VOL32_RULE, 4, 0.25, 1.0, 1.0, noise=11, observers=obs)
        assert set(res.snapshots) == {0.5, 1.0}
        assert res.snapshots[1.0].shape == (4, 1)
        assert np.array_equal(res.snapshots[1.0], res.final.states)
        assert res.paths.shape == (5, 2)
        assert res.paths[0] == pytest.approx([1.0, 1.0])

    def test_observer_validation(self):
        obs = ObserverConfig(snapshot_times=(2.0,))
        with pytest.raises(ConfigurationError):
            simulate(VOL32, VOL32_RULE, 2, 0.25, 1.0, 1.0, noise=1, observers=obs)
        obs = ObserverConfig(snapshot_times=(0.3,))
        with pytest.raises(ConfigurationError):
            simulate(VOL32, VOL32_RULE, 2, 0.25, 1.0, 1.0, noise=1, observers=obs)
        obs = ObserverConfig(path_particles=(5,))
        with pytest.raises(ConfigurationError):
            simulate(VOL32, VOL32_RULE, 2, 0.25, 1.0, 1.0, noise=1, observers=obs)

    def test_em_blowup_flagged_with_inf_sentinel(self):
        res = simulate(VOL32, None, 4, 0.2, 4.0, 40.0, noise=5, scheme="em")
        assert res.overflow_step is not None
        assert res.mean_sq[-1] == math.inf
        assert res.max_norm[-1] == math.inf

    def test_tem_never_overflows_where_em_does(self):
        res = simulate(VOL32, VOL32_RULE, 4, 0.2, 4.0, 40.0, noise=5, scheme="tem")
        assert res.overflow_step is None
        assert np.all(np.isfinite(res.mean_sq))

    def test_scheme_validation(self):
        with pytest.raises(ConfigurationError):
            simulate(VOL32, VOL32_RULE, 2, 0.25, 1.0, 1.0, noise=1, scheme="heun")
        with pytest.raises(ConfigurationError):
            simulate(VOL32, None, 2, 0.25, 1.0, 1.0, noise=1, scheme="tem")
        with pytest.raises(ConfigurationError):
            simulate(VOL32, VOL32_RULE, 2, 1.5, 3.0, 1.0, noise=1)
        with pytest.raises(ConfigurationError):
            simulate(VOL32, VOL32_RULE, 2, 0.3, 1.0, 1.0, noise=1)

    def test_noise_plan_shape_validation(self):
        plan = NoisePlan(1, 3, 1, 0.25)
        with pytest.raises(ConfigurationError):
            simulate(VOL32, VOL32_RULE, 2, 0.25, 1.0, 1.0, noise=plan)

    def test_reproducible_from_seed(self):
        a = simulate(DW, DW_RULE, 8, 0.125, 1.0, 1.0, noise=99)
        b = simulate(DW, DW_RULE, 8, 0.125, 1.0, 1.0, noise=99)
        assert np.array_equal(a.final.states, b.final.states)
        assert np.array_equal(a.mean_sq, b.mean_sq)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=10, deadline=None)
    def test_exchangeability_under_particle_permutation(self, seed):
        # Relabeling particles (and their noise streams) must relabel the
        # trajectories: the empirical interaction sees the cloud as a set.
        rng = np.random.default_rng(seed)
        m = 8
        perm = rng.permutation(m)
        init = rng.normal(size=(m, 1))
        plan = NoisePlan(seed, m, 1, 0.125)
        base = simulate(DW, DW_RULE, m, 0.125, 1.0, init, noise=plan)
        view = simulate(DW, DW_RULE, m, 0.125, 1.0, init[perm], noise=plan.permuted(perm))
        np.testing.assert_allclose(view.final.states, base.final.states[perm], rtol=1e-9, atol=1e-12)


class TestCoupledRmse:
    def test_matches_independent_per_run_oracle(self):
        # Oracle: run each step size separately, regenerating its increments
        # from the plan as ascending window sums.  The lockstep pipeline must
        # reproduce those states bit for bit.
        model, rule = VOL32, VOL32_RULE
        m, T, ref_dt = 4, 0.25, 2.0**-6
        dts = [2.0**-4, 2.0**-3]
        seed = 314

        plan = NoisePlan(seed, m, model.dim_noise, ref_dt)
        init = draw_initial(1.0, m, 1, plan.init_generator())

        def run_at(dt: float) -> np.ndarray:
            ratio = round(dt / ref_dt)
            r = radius(rule, dt)
            states = project(init, r)
            mu_steps = round(T / dt)
            for k in range(mu_steps):
                inc = np.zeros((m, model.dim_noise))
                for n in range(k * ratio, (k + 1) * ratio):
                    inc = inc + plan.increment(n)
                mu = EmpiricalMeasure(states)
                drift = np.asarray(model.drift(states, mu), dtype=float)
                diff = np.asarray(model.diffusion(states, mu), dtype=float)
                states = states + drift * dt + diff[:, :, 0] * inc
                states = project(states, r)
            return states

        ref_states = run_at(ref_dt)
        expected = []
        for dt in dts:
            diff = run_at(dt) - ref_states
            expected.append(float(np.sqrt(np.mean(np.sum(diff * diff, axis=1)))))

        result = coupled_rmse(model, rule, m, dts, ref_dt, T, 1.0, seed)
        assert result.rmse == tuple(expected)

    def test_error_decreases_with_step(self):
        result = coupled_rmse(VOL32, VOL32_RULE, 64, [2.0**-4, 2.0**-6, 2.0**-8], 2.0**-12, 0.5, 1.0, seed=2)
        assert result.rmse[0] > result.rmse[1] > result.rmse[2]

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            coupled_rmse(VOL32, VOL32_RULE, 4, [], 2.0**-6, 0.5, 1.0, seed=1)
        with pytest.raises(ConfigurationError):
            coupled_rmse(VOL32, VOL32_RULE, 4, [0.25, 0.25], 2.0**-6, 0.5, 1.0, seed=1)
        with pytest.raises(ConfigurationError):
            coupled_rmse(VOL32, VOL32_RULE, 4, [0.3], 2.0**-6, 0.5, 1.0, seed=1)

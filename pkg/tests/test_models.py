"""Built-in models, the registry, and the inequality margin checks."""

import dataclasses

import numpy as np
import pytest

from mvtem.errors import ConfigurationError, UnknownModelError
from mvtem.measures import EmpiricalMeasure
from mvtem.models import (
    ModelSpec,
    builtin_double_well,
    builtin_vol32,
    check_contraction,
    check_dissipativity,
    get_model,
    list_models,
    register_model,
    zero_equilibrium,
)


def dirac(x: float) -> EmpiricalMeasure:
    return EmpiricalMeasure.dirac([x])


class TestBuiltinCoefficients:
    def test_vol32_values(self):
        model = builtin_vol32()
        mu = dirac(1.0)
        # f(x, mu) = x(-2 - |x|) + mean(mu); g(x) = |x|^{3/2} / 2.
        assert model.drift(np.array([1.0]), mu)[0] == pytest.approx(-2.0)
        assert model.drift(np.array([-2.0]), mu)[0] == pytest.approx(9.0)
        assert model.diffusion(np.array([4.0]), mu)[0, 0] == pytest.approx(4.0)
        assert model.diffusion(np.array([-4.0]), mu)[0, 0] == pytest.approx(4.0)

    def test_double_well_values(self):
        model = builtin_double_well()
        mu = dirac(0.5)
        # f(x, mu) = 2x(-1 - x^2) + mean(mu); g(x) = (1 - x^2) / 2.
        assert model.drift(np.array([1.0]), mu)[0] == pytest.approx(-3.5)
        assert model.drift(np.array([-2.0]), mu)[0] == pytest.approx(20.5)
        assert model.diffusion(np.array([2.0]), mu)[0, 0] == pytest.approx(-1.5)
        assert model.diffusion(np.array([0.0]), mu)[0, 0] == pytest.approx(0.5)

    def test_vectorized_broadcast_matches_scalar(self):
        for model in (builtin_vol32(), builtin_double_well()):
            mu = EmpiricalMeasure(np.array([[0.3], [-1.7], [2.2]]))
            states = np.array([[0.3], [-1.7], [2.2]])
            batch_f = model.drift(states, mu)
            batch_g = model.diffusion(states, mu)
            for i in range(3):
                assert batch_f[i] == pytest.approx(model.drift(states[i], mu))
                assert batch_g[i, :, 0] == pytest.approx(model.diffusion(states[i], mu)[:, 0])

    def test_zero_equilibrium(self):
        assert zero_equilibrium(builtin_vol32()) is True
        # The double-well diffusion is 1/2 at the origin: no equilibrium.
        assert zero_equilibrium(builtin_double_well()) is False

    def test_spec_is_frozen(self):
        model = builtin_vol32()
        with pytest.raises(dataclasses.FrozenInstanceError):
            model.name = "other"


class TestRegistry:
    def test_builtins_listed(self):
        names = [name for name, _ in list_models()]
        assert names == sorted(names)
        assert "vol32" in names and "double_well" in names

    def test_get_model_round_trip(self):
        assert get_model("vol32").name == "vol32"
        assert get_model("double_well").name == "double_well"

    def test_unknown_model_names_known_ones(self):
        with pytest.raises(UnknownModelError) as err:
            get_model("nope")
        assert "vol32" in str(err.value)
        assert err.value.field == "model"

    def test_register_conflict_and_overwrite(self):
        factory = builtin_vol32
        with pytest.raises(ConfigurationError):
            register_model("vol32", factory)
        register_model("vol32", factory, overwrite=True)  # restores the same factory


class TestDissipativity:
    def test_vol32_probe_value_frozen(self):
        # 2*1*f(1, d1) + g(1)^2 + 3*1 - 1*1 with f(1, d1) = -2, g(1) = 1/2:
        # -4 + 0.25 + 3 - 1 = -1.75, computed by scalar arithmetic.
        report = check_dissipativity(builtin_vol32(), [(np.array([1.0]), dirac(1.0))])
        assert report.values[0] == pytest.approx(-1.75, abs=1e-15)
        assert report.consistent

    def test_double_well_grid_tight_at_origin(self):
        # Grid search over x in {-3..3}, mu in {d-1, d0, d1} certifies
        # (lam1, lam2, C) = (3.5, 1, 0.25) with the worst margin exactly 0,
        # attained at x = 0 where 2xf + g^2 = 1/4.
        model = builtin_double_well()
        probes = [
            (np.array([float(x)]), dirac(float(m)))
            for x in range(-3, 4)
            for m in (-1.0, 0.0, 1.0)
        ]
        report = check_dissipativity(model, probes, constant=0.25)
        assert report.worst == pytest.approx(0.0, abs=1e-14)
        assert report.consistent

    def test_vol32_random_cloud_probes(self):
        rng = np.random.default_rng(21)
        model = builtin_vol32()
        probes = []
        for _ in range(200):
            x = rng.uniform(-6, 6)
            cloud = rng.uniform(-4, 4, size=(8, 1))
            probes.append((np.array([x]), EmpiricalMeasure(cloud)))
        report = check_dissipativity(model, probes)
        assert report.consistent

    def test_requires_declared_or_explicit_parameters(self):
        bare = dataclasses.replace(builtin_vol32(), dissipativity=None)
        with pytest.raises(ConfigurationError):
            check_dissipativity(bare, [(np.array([1.0]), dirac(0.0))])
        report = check_dissipativity(bare, [(np.array([1.0]), dirac(0.0))], lams=(3.0, 1.0))
        assert report.lam1 == 3.0

    def test_rejects_bad_parameter_order(self):
        with pytest.raises(ConfigurationError):
            check_dissipativity(
                builtin_vol32(), [(np.array([1.0]), dirac(0.0))], lams=(1.0, 3.0)
            )

    def test_empty_probes_rejected(self):
        with pytest.raises(ConfigurationError):
            check_dissipativity(builtin_vol32(), [])


class TestContraction:
    def test_builtin_pairs_hold(self):
        rng = np.random.default_rng(33)
        for model in (builtin_vol32(), builtin_double_well()):
            pairs = []
            for _ in range(200):
                x1, x2 = rng.uniform(-4, 4, size=2)
                c1 = rng.uniform(-3, 3, size=(6, 1))
                c2 = rng.uniform(-3, 3, size=(6, 1))
                pairs.append(
                    (np.array([x1]), EmpiricalMeasure(c1), np.array([x2]), EmpiricalMeasure(c2))
                )
            report = check_contraction(model, pairs)
            assert report.consistent, f"{model.name} worst={report.worst}"

    def test_equal_pair_margin_zero(self):
        model = builtin_vol32()
        mu = EmpiricalMeasure(np.array([[0.4], [-0.9]]))
        report = check_contraction(model, [(np.array([0.7]), mu, np.array([0.7]), mu)])
        assert report.worst == pytest.approx(0.0, abs=1e-15)


class TestCustomModel:
    def test_nonvectorized_loop_path(self):
        # Per-particle (non-vectorized) coefficients must behave like the
        # built-in broadcast path when wrapped into a spec.
        base = builtin_vol32()
        loop = ModelSpec(
            name="vol32_loop",
            dim_state=1,
            dim_noise=1,
            drift=lambda x, mu: base.drift(x, mu),
            diffusion=lambda x, mu: base.diffusion(x, mu),
            growth_alpha=1.0,
            trunc_constant=8.0,
            vectorized=False,
        )
        mu = EmpiricalMeasure(np.array([[1.0], [2.0]]))
        assert loop.drift(np.array([2.0]), mu)[0] == base.drift(np.array([2.0]), mu)[0]

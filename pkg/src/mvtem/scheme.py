"""Explicit one-step schemes for the interacting particle system.

The truncated scheme advances every particle with a plain Euler-Maruyama
update against the current empirical measure and then projects the result
onto the truncation ball for the step size in use.  The untruncated variant
(`em`) performs the same update without the projection; it exists as the
unstable baseline, so non-finite states are retained and flagged rather than
raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConfigurationError, DimensionMismatchError, NumericOverflowError
from .measures import EmpiricalMeasure
from .models import ModelSpec
from .noise import NoisePlan
from .truncation import TruncationRule, project, radius


@dataclass(frozen=True)
class ParticleEnsemble:
    """States (M, d) of all particles at one grid time t_k = k * dt."""

    states: np.ndarray
    step_index: int
    dt: float

    @property
    def time(self) -> float:
        return self.step_index * self.dt

    @property
    def size(self) -> int:
        return self.states.shape[0]

    def measure(self) -> EmpiricalMeasure:
        return EmpiricalMeasure(self.states)


def draw_initial(init, n_particles: int, dim: int, generator: np.random.Generator) -> np.ndarray:
    """Materialise an initial condition spec into an (M, d) state array.

    Accepted forms: a number (constant state), a mapping with a ``type`` of
    ``constant`` / ``normal`` / ``file``, an explicit array of shape (M, d)
    or (M,) for d = 1, or a callable (generator, M, d) -> array.
    """
    if isinstance(init, (int, float)):
        return np.full((n_particles, dim), float(init))
    if callable(init):
        states = np.asarray(init(generator, n_particles, dim), dtype=float)
    elif isinstance(init, Mapping):
        kind = init.get("type")
        if kind == "constant":
            value = np.atleast_1d(np.asarray(init["value"], dtype=float))
            if value.shape != (dim,):
                raise ConfigurationError(
                    f"constant init value has shape {value.shape}, expected ({dim},)",
                    field="init.value",
                )
            return np.tile(value, (n_particles, 1))
        elif kind == "normal":
            mean = float(init.get("mean", 0.0))
            sd = float(init.get("sd", 1.0))
            if sd < 0.0:
                raise ConfigurationError("init.sd must be >= 0", field="init.sd")
            states = mean + sd * generator.standard_normal((n_particles, dim))
        elif kind == "file":
            states = np.loadtxt(init["path"], delimiter=",", ndmin=2)
            if states.shape[0] < n_particles:
                raise ConfigurationError(
                    f"init file holds {states.shape[0]} rows, need {n_particles}",
                    field="init.path",
                )
            states = states[:n_particles]
        else:
            raise ConfigurationError(f"unknown init type {kind!r}", field="init.type")
    else:
        states = np.asarray(init, dtype=float)
        if states.ndim == 1:
            states = states[:, None]
    states = np.asarray(states, dtype=float)
    if states.shape != (n_particles, dim):
        raise ConfigurationError(
            f"initial states have shape {states.shape}, expected ({n_particles}, {dim})",
            field="init",
        )
    return states


def _coefficients(model: ModelSpec, states: np.ndarray, mu: EmpiricalMeasure):
    m_particles = states.shape[0]
    if model.vectorized:
        drift = np.asarray(model.drift(states, mu), dtype=float)
        diff = np.asarray(model.diffusion(states, mu), dtype=float)
    else:
        drift = np.stack(
            [np.asarray(model.drift(states[i], mu), dtype=float) for i in range(m_particles)]
        )
        diff = np.stack(
            [np.asarray(model.diffusion(states[i], mu), dtype=float) for i in range(m_particles)]
        )
    if drift.shape != states.shape:
        raise DimensionMismatchError(
            f"drift returned shape {drift.shape}, expected {states.shape}"
        )
    expected = (m_particles, model.dim_state, model.dim_noise)
    if diff.shape != expected:
        raise DimensionMismatchError(
            f"diffusion returned shape {diff.shape}, expected {expected}"
        )
    return drift, diff


def _euler_update(model: ModelSpec, states: np.ndarray, dt: float, d_brownian: np.ndarray) -> np.ndarray:
    mu = EmpiricalMeasure(states)
    drift, diff = _coefficients(model, states, mu)
    if diff.shape[1:] == (1, 1):
        noise_term = diff[:, :, 0] * d_brownian
    else:
        noise_term = np.einsum("pij,pj->pi", diff, d_brownian)
    return states + drift * dt + noise_term


def _noise_for(ensemble: ParticleEnsemble, noise: NoisePlan) -> np.ndarray:
    ratio = ensemble.dt / noise.fine_dt
    ratio_int = round(ratio)
    if not math.isclose(ratio, ratio_int, rel_tol=1e-12) or ratio_int < 1:
        raise ConfigurationError(
            f"ensemble dt {ensemble.dt} is not an integer multiple of the plan's "
            f"fine_dt {noise.fine_dt}",
            field="dt",
        )
    if ratio_int == 1:
        return noise.increment(ensemble.step_index)
    return noise.coarse_increment(ensemble.step_index, ratio_int)


def tem_step(
    ensemble: ParticleEnsemble,
    model: ModelSpec,
    rule: TruncationRule,
    noise: NoisePlan,
    radius_value: float | None = None,
) -> ParticleEnsemble:
    """One truncated step: Euler-Maruyama update, then radial projection."""
    d_brownian = _noise_for(ensemble, noise)
    proposed = _euler_update(model, ensemble.states, ensemble.dt, d_brownian)
    bad = ~np.isfinite(proposed).all(axis=1)
    if bad.any():
        particle = int(np.argmax(bad))
        raise NumericOverflowError(
            f"non-finite state for particle {particle} at step {ensemble.step_index + 1}",
            particle=particle,
            step=ensemble.step_index + 1,
        )
    if radius_value is None:
        radius_value = radius(rule, ensemble.dt)
    new_states = project(proposed, radius_value)
    return ParticleEnsemble(new_states, ensemble.step_index + 1, ensemble.dt)


def em_step(
    ensemble: ParticleEnsemble, model: ModelSpec, noise: NoisePlan
) -> ParticleEnsemble:
    """One untruncated Euler-Maruyama step; non-finite states are retained."""
    d_brownian = _noise_for(ensemble, noise)
    with np.errstate(over="ignore", invalid="ignore"):
        proposed = _euler_update(model, ensemble.states, ensemble.dt, d_brownian)
    return ParticleEnsemble(proposed, ensemble.step_index + 1, ensemble.dt)


@dataclass(frozen=True)
class ObserverConfig:
    """What simulate() records along the way."""

    snapshot_times: tuple[float, ...] = ()
    path_particles: tuple[int, ...] = ()


@dataclass
class SimulationResult:
    times: np.ndarray
    mean_sq: np.ndarray
    max_norm: np.ndarray
    snapshots: dict[float, np.ndarray]
    paths: np.ndarray | None
    path_particles: tuple[int, ...]
    overflow_step: int | None
    final: ParticleEnsemble


def _steps_for(T: float, dt: float, field_name: str = "T") -> int:
    n = T / dt
    n_int = round(n)
    if n_int < 0 or not math.isclose(n, n_int, rel_tol=0.0, abs_tol=1e-9 * max(1.0, abs(n))):
        raise ConfigurationError(
            f"{field_name}={T} is not an integer multiple of dt={dt}", field=field_name
        )
    return int(n_int)


def _state_norms(states: np.ndarray) -> np.ndarray:
    if states.shape[1] == 1:
        return np.abs(states[:, 0])
    return np.sqrt(np.sum(states * states, axis=1))


def _finite_or_inf(value: float) -> float:
    return value if math.isfinite(value) else math.inf


def simulate(
    model: ModelSpec,
    rule: TruncationRule | None,
    n_particles: int,
    dt: float,
    T: float,
    init,
    noise: NoisePlan | int,
    observers: ObserverConfig | None = None,
    scheme: str = "tem",
    truncate_initial: bool = True,
) -> SimulationResult:
    """Run one ensemble to time T, recording moments and requested observers.

    ``scheme`` is "tem" (projected; requires a rule) or "em" (plain; any rule
    is ignored).  ``noise`` is a NoisePlan or a seed from which one is built
    with fine_dt = dt.  With scheme "em", non-finite states are kept and the
    first offending step is reported as ``overflow_step``; second moments
    turn into the +inf sentinel from there on.
    """
    if scheme not in ("tem", "em"):
        raise ConfigurationError(f"unknown scheme {scheme!r}", field="scheme")
    if scheme == "tem" and rule is None:
        raise ConfigurationError("the truncated scheme requires a rule", field="truncation")
    if not 0.0 < dt <= 1.0:
        raise ConfigurationError(f"dt must lie in (0, 1], got {dt}", field="dt")
    observers = observers or ObserverConfig()
    if isinstance(noise, NoisePlan):
        plan = noise
        if plan.n_particles != n_particles or plan.dim_noise != model.dim_noise:
            raise ConfigurationError(
                "noise plan shape does not match (M, dim_noise)", field="noise"
            )
    else:
        plan = NoisePlan(int(noise), n_particles, model.dim_noise, dt)

    n_steps = _steps_for(T, dt)
    snap_steps: dict[int, float] = {}
    for t in observers.snapshot_times:
        k = _steps_for(t, dt, field_name="snapshot_times")
        if k > n_steps:
            raise ConfigurationError(
                f"snapshot time {t} exceeds T={T}", field="snapshot_times"
            )
        snap_steps[k] = float(t)
    for p in observers.path_particles:
        if not 0 <= int(p) < n_particles:
            raise ConfigurationError(f"path particle {p} out of range", field="path_particles")

    states = draw_initial(init, n_particles, model.dim_state, plan.init_generator())
    if scheme == "tem" and truncate_initial:
        states = project(states, radius(rule, dt))
    ensemble = ParticleEnsemble(states, 0, float(dt))

    times = np.empty(n_steps + 1)
    mean_sq = np.empty(n_steps + 1)
    max_norm = np.empty(n_steps + 1)
    snapshots: dict[float, np.ndarray] = {}
    track = tuple(int(p) for p in observers.path_particles)
    paths = np.empty((n_steps + 1, len(track))) if track else None
    overflow_step: int | None = None
    radius_value = radius(rule, dt) if scheme == "tem" else None

    for k in range(n_steps + 1):
        times[k] = k * dt
        with np.errstate(over="ignore", invalid="ignore"):
            norms = _state_norms(ensemble.states)
            mean_sq[k] = _finite_or_inf(float(np.mean(norms**2)))
            max_norm[k] = _finite_or_inf(float(np.max(norms)))
        if overflow_step is None and not np.isfinite(ensemble.states).all():
            overflow_step = k
        if k in snap_steps:
            snapshots[snap_steps[k]] = ensemble.states.copy()
        if paths is not None:
            if model.dim_state == 1:
                paths[k] = ensemble.states[track, 0]
            else:
                paths[k] = norms[list(track)]
        if k == n_steps:
            break
        if scheme == "tem":
            ensemble = tem_step(ensemble, model, rule, plan, radius_value=radius_value)
        else:
            ensemble = em_step(ensemble, model, plan)

    return SimulationResult(
        times=times,
        mean_sq=mean_sq,
        max_norm=max_norm,
        snapshots=snapshots,
        paths=paths,
        path_particles=track,
        overflow_step=overflow_step,
        final=ensemble,
    )


@dataclass(frozen=True)
class CoupledRmseResult:
    dts: tuple[float, ...]
    rmse: tuple[float, ...]
    ref_dt: float
    T: float
    n_particles: int


def coupled_rmse(
    model: ModelSpec,
    rule: TruncationRule,
    n_particles: int,
    dts: Sequence[float],
    ref_dt: float,
    T: float,
    init,
    seed: int,
    truncate_initial: bool = True,
) -> CoupledRmseResult:
    """Terminal RMSE of coarse runs against a fine reference on shared noise.

    All runs start from the same initial draw and consume the same fine
    Brownian increments; a coarse run at dt = ratio * ref_dt steps once per
    ratio fine steps using their ascending sum.  The runs advance in lockstep
    through fine time, so each fine increment is generated exactly once.
    RMSE(dt) = sqrt((1/M) sum_i |Y_i^dt(T) - Y_i^ref(T)|^2).
    """
    dts = [float(dt) for dt in dts]
    if len(dts) < 1:
        raise ConfigurationError("dts must be non-empty", field="dts")
    if len(set(dts)) != len(dts):
        raise ConfigurationError("dts contains duplicates", field="dts")
    ratios = []
    for dt in dts:
        ratio = dt / ref_dt
        ratio_int = round(ratio)
        if ratio_int < 1 or not math.isclose(ratio, ratio_int, rel_tol=1e-12):
            raise ConfigurationError(
                f"dt={dt} is not an integer multiple of ref_dt={ref_dt}", field="dts"
            )
        ratios.append(int(ratio_int))
    n_fine = _steps_for(T, ref_dt)
    for dt in dts:
        _steps_for(T, dt)

    plan = NoisePlan(int(seed), n_particles, model.dim_noise, float(ref_dt))
    init_states = draw_initial(init, n_particles, model.dim_state, plan.init_generator())

    def start_states(dt: float) -> np.ndarray:
        if truncate_initial:
            return project(init_states, radius(rule, dt))
        return init_states.copy()

    ref_radius = radius(rule, ref_dt)
    ref_states = start_states(ref_dt)
    coarse = []
    for dt, ratio in zip(dts, ratios):
        coarse.append(
            {
                "dt": dt,
                "ratio": ratio,
                "radius": radius(rule, dt),
                "states": start_states(dt),
                "acc": np.zeros((n_particles, model.dim_noise)),
            }
        )

    for n in range(n_fine):
        inc = plan.increment(n)
        proposed = _euler_update(model, ref_states, ref_dt, inc)
        if not np.isfinite(proposed).all():
            particle = int(np.argmax(~np.isfinite(proposed).all(axis=1)))
            raise NumericOverflowError(
                f"reference run produced a non-finite state for particle {particle} "
                f"at fine step {n + 1}",
                particle=particle,
                step=n + 1,
            )
        ref_states = project(proposed, ref_radius)
        for run in coarse:
            run["acc"] += inc
            if (n + 1) % run["ratio"] == 0:
                stepped = _euler_update(model, run["states"], run["dt"], run["acc"])
                if not np.isfinite(stepped).all():
                    particle = int(np.argmax(~np.isfinite(stepped).all(axis=1)))
                    raise NumericOverflowError(
                        f"coarse run dt={run['dt']} produced a non-finite state for "
                        f"particle {particle}",
                        particle=particle,
                        step=(n + 1) // run["ratio"],
                    )
                run["states"] = project(stepped, run["radius"])
                run["acc"] = np.zeros((n_particles, model.dim_noise))

    rmse = []
    for run in coarse:
        diff = run["states"] - ref_states
        rmse.append(float(np.sqrt(np.mean(np.sum(diff * diff, axis=1)))))
    return CoupledRmseResult(
        dts=tuple(dts),
        rmse=tuple(rmse),
        ref_dt=float(ref_dt),
        T=float(T),
        n_particles=int(n_particles),
    )

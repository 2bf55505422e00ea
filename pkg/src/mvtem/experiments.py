"""Experiment protocols and their delimited/JSON report format.

Every experiment returns an :class:`ExperimentReport` carrying tables (one
CSV each), scalar stats, and an echo of the fully resolved configuration.
Re-running an experiment from the echoed config with the same seed
reproduces every table byte for byte; wall-clock time lives only in
report.json and is excluded from that contract.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from ._version import __version__
from .errors import ConfigurationError, InputDataError
from .measures import (
    EmpiricalMeasure,
    fournier_rate_probe,
    standard_normal_sampler,
    w2_sorted_1d,
)
from .models import ModelSpec, zero_equilibrium
from .noise import NoisePlan
from .scheme import ObserverConfig, SimulationResult, coupled_rmse, simulate
from .truncation import TruncationRule


def _fmt_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    text = str(value)
    if any(ch in text for ch in ",\n\r\""):
        raise ConfigurationError(f"table cell {text!r} needs quoting, which is unsupported")
    return text


@dataclass
class Table:
    """A named rectangular table destined for <name>.csv."""

    name: str
    columns: tuple[str, ...]
    rows: list[tuple]

    @property
    def filename(self) -> str:
        return f"{self.name}.csv"

    def write_csv(self, directory: Path) -> Path:
        path = Path(directory) / self.filename
        lines = [",".join(self.columns)]
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ConfigurationError(
                    f"table {self.name}: row width {len(row)} != {len(self.columns)}"
                )
            lines.append(",".join(_fmt_cell(v) for v in row))
        path.write_text("\n".join(lines) + "\n")
        return path


def _json_safe(value):
    if isinstance(value, Mapping):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else repr(v)
    if isinstance(value, np.ndarray):
        return [_json_safe(v) for v in value.tolist()]
    return value


@dataclass
class ExperimentReport:
    kind: str
    config: dict
    stats: dict
    tables: list[Table]
    seed: int
    wallclock_seconds: float
    version: str = __version__

    def table(self, name: str) -> Table:
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(name)

    def write(self, out_dir) -> list[Path]:
        """Write every table plus report.json; returns the written paths."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = [t.write_csv(out_dir) for t in self.tables]
        payload = {
            "kind": self.kind,
            "version": self.version,
            "seed": self.seed,
            "wallclock_seconds": self.wallclock_seconds,
            "stats": _json_safe(self.stats),
            "config": _json_safe(self.config),
            "tables": {t.name: t.filename for t in self.tables},
        }
        path = out_dir / "report.json"
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        written.append(path)
        return written


def read_report(report_dir) -> dict:
    """Parse report.json from a report directory."""
    path = Path(report_dir) / "report.json"
    if not path.is_file():
        raise InputDataError(f"no report.json in {report_dir}", field="report")
    return json.loads(path.read_text())


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    intercept: float
    residual_stderr: float | None


def fit_power_law(x: Sequence[float], y: Sequence[float]) -> PowerLawFit:
    """Least-squares slope of log2(y) against log2(x), with slope std error."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 2:
        raise ConfigurationError("power-law fit needs at least two (x, y) pairs", field="dts")
    if np.any(x <= 0.0) or np.any(y <= 0.0) or not np.all(np.isfinite(np.log2(y))):
        raise ConfigurationError("power-law fit needs positive finite data")
    order = np.argsort(x)
    lx, ly = np.log2(x[order]), np.log2(y[order])
    slope, intercept = np.polyfit(lx, ly, 1)
    stderr = None
    if x.size > 2:
        resid = ly - (slope * lx + intercept)
        sxx = float(np.sum((lx - lx.mean()) ** 2))
        stderr = float(np.sqrt(np.sum(resid**2) / (x.size - 2) / sxx))
    return PowerLawFit(slope=float(slope), intercept=float(intercept), residual_stderr=stderr)


_SEED_MASK = 2**64 - 1


def child_seed(master: int, *indices: int) -> int:
    """Deterministic independent sub-stream seed for (master, indices)."""
    entropy = [int(master) & _SEED_MASK] + [int(i) for i in indices]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def _rule_echo(rule: TruncationRule | None, truncate_initial: bool) -> dict | None:
    if rule is None:
        return None
    echo: dict = {"kappa": rule.kappa, "truncate_initial": bool(truncate_initial)}
    if rule.alpha is not None and rule.growth_const is not None:
        echo.update({"alpha": rule.alpha, "L": rule.growth_const, "K": rule.trunc_constant})
    else:
        echo.update({"K": rule.trunc_constant, "custom": True})
    return echo


def _init_echo(init) -> dict:
    if isinstance(init, (int, float)):
        return {"type": "constant", "value": float(init)}
    if isinstance(init, Mapping):
        kind = init.get("type")
        if kind == "constant":
            return {"type": "constant", "value": float(init["value"])}
        if kind == "normal":
            return {
                "type": "normal",
                "mean": float(init.get("mean", 0.0)),
                "sd": float(init.get("sd", 1.0)),
            }
        if kind == "file":
            return {"type": "file", "path": str(init["path"])}
        return dict(init)
    if callable(init):
        return {"type": "custom"}
    return {"type": "array"}


def _map_jobs(fn: Callable, jobs: Sequence, threads: int) -> list:
    """Apply fn over jobs, optionally on a thread pool; order preserved."""
    if threads == 0:
        threads = os.cpu_count() or 1
    if threads <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
        return list(pool.map(fn, jobs))


def _time_grid_label(t: float) -> str:
    return f"{t:g}"


def convergence_experiment(
    model: ModelSpec,
    rule: TruncationRule,
    n_particles: int,
    dts: Sequence[float],
    ref_dt: float,
    T: float,
    init,
    seed: int,
    *,
    truncate_initial: bool = True,
    threads: int = 1,
) -> ExperimentReport:
    """Strong-error decay of the truncated scheme against a fine reference.

    Runs all step sizes on one set of coupled Brownian paths and fits the
    log-log slope of terminal RMSE against dt.
    """
    started = time.perf_counter()
    dts = sorted((float(d) for d in dts), reverse=True)
    if len(dts) < 2:
        raise ConfigurationError(
            "convergence needs at least two step sizes to fit a slope", field="dts"
        )
    for dt in dts:
        if dt / ref_dt < 2.0:
            raise ConfigurationError(
                f"dts must be strictly coarser than ref_dt, got dt={dt}", field="dts"
            )
    result = coupled_rmse(
        model, rule, n_particles, dts, ref_dt, T, init, seed,
        truncate_initial=truncate_initial,
    )
    fit = fit_power_law(result.dts, result.rmse)
    table = Table(
        name="rmse",
        columns=("dt", "rmse"),
        rows=[(dt, r) for dt, r in zip(result.dts, result.rmse)],
    )
    config = {
        "experiment": "convergence",
        "model": model.name,
        "truncation": _rule_echo(rule, truncate_initial),
        "M": int(n_particles),
        "dts": list(dts),
        "ref_dt": float(ref_dt),
        "T": float(T),
        "init": _init_echo(init),
        "seed": int(seed),
    }
    stats = {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual_stderr": fit.residual_stderr,
    }
    return ExperimentReport(
        kind="convergence",
        config=config,
        stats=stats,
        tables=[table],
        seed=int(seed),
        wallclock_seconds=time.perf_counter() - started,
    )


def stability_experiment(
    model: ModelSpec,
    rule: TruncationRule,
    n_particles: int,
    dt: float,
    T: float,
    initial_value: float,
    seed: int,
    *,
    truncate_initial: bool = True,
    threads: int = 1,
) -> ExperimentReport:
    """Mean-square decay of the truncated scheme next to the plain scheme.

    Both schemes consume identical Brownian increments from the same plan.
    Requires a model with a zero equilibrium (f and g vanish at (0, dirac_0))
    and declared contraction parameters; the truncated second moment should
    decay exponentially while the plain scheme is free to blow up, in which
    case its second moments turn into +inf sentinels.
    """
    started = time.perf_counter()
    if not zero_equilibrium(model):
        raise ConfigurationError(
            f"model {model.name!r} has no zero equilibrium: stability decay to the "
            "origin is not defined for it",
            field="model",
        )
    if model.contraction is None:
        raise ConfigurationError(
            f"model {model.name!r} declares no contraction parameters", field="model"
        )
    plan = NoisePlan(int(seed), n_particles, model.dim_noise, float(dt))
    tem = simulate(
        model, rule, n_particles, dt, T, float(initial_value), plan,
        scheme="tem", truncate_initial=truncate_initial,
    )
    em = simulate(
        model, None, n_particles, dt, T, float(initial_value), plan, scheme="em"
    )
    tail = tem.times >= T / 2.0 - 1e-12
    positive = tail & np.isfinite(tem.mean_sq) & (tem.mean_sq > 0.0)
    decay_rate = None
    if int(positive.sum()) >= 2:
        coeffs = np.polyfit(tem.times[positive], np.log(tem.mean_sq[positive]), 1)
        decay_rate = float(coeffs[0])
    rows = [
        (t, ms_t, ms_e)
        for t, ms_t, ms_e in zip(tem.times, tem.mean_sq, em.mean_sq)
    ]
    table = Table(name="moments", columns=("t", "tem_mean_sq", "em_mean_sq"), rows=rows)
    config = {
        "experiment": "stability",
        "model": model.name,
        "truncation": _rule_echo(rule, truncate_initial),
        "M": int(n_particles),
        "dt": float(dt),
        "T": float(T),
        "init": {"type": "constant", "value": float(initial_value)},
        "seed": int(seed),
    }
    stats = {
        "tem_initial_mean_sq": float(tem.mean_sq[0]),
        "tem_terminal_mean_sq": float(tem.mean_sq[-1]),
        "tem_decay_rate": decay_rate,
        "em_terminal_mean_sq": float(em.mean_sq[-1]),
        "em_overflow_step": em.overflow_step,
        "em_overflow_time": None if em.overflow_step is None else em.overflow_step * float(dt),
        "em_max_mean_sq": float(np.max(em.mean_sq)),
    }
    return ExperimentReport(
        kind="stability",
        config=config,
        stats=stats,
        tables=[table],
        seed=int(seed),
        wallclock_seconds=time.perf_counter() - started,
    )


def moment_bound_experiment(
    model: ModelSpec,
    rule: TruncationRule,
    n_particles: int,
    dt: float,
    T_long: float,
    init,
    seed: int,
    *,
    truncate_initial: bool = True,
    threads: int = 1,
) -> ExperimentReport:
    """Uniform-in-time second-moment boundedness over a long horizon.

    Requires declared dissipativity parameters (lam1, lam2) and a step size
    below the admissible bound min(2 / (lam1 - lam2), 1).
    """
    started = time.perf_counter()
    if model.dissipativity is None:
        raise ConfigurationError(
            f"model {model.name!r} declares no dissipativity parameters", field="model"
        )
    lam1, lam2 = model.dissipativity
    bound = min(2.0 / (lam1 - lam2), 1.0)
    if not 0.0 < dt <= bound:
        raise ConfigurationError(
            f"dt={dt} outside the admissible range (0, {bound:g}] for "
            f"dissipativity ({lam1:g}, {lam2:g})",
            field="dt",
        )
    sim = simulate(
        model, rule, n_particles, dt, T_long, init, int(seed),
        scheme="tem", truncate_initial=truncate_initial,
    )
    table = Table(
        name="moments",
        columns=("t", "mean_sq", "max_norm"),
        rows=list(zip(sim.times, sim.mean_sq, sim.max_norm)),
    )
    second_half = sim.times >= T_long / 2.0 - 1e-12
    max_full = float(np.max(sim.mean_sq))
    max_second = float(np.max(sim.mean_sq[second_half]))
    config = {
        "experiment": "moments",
        "model": model.name,
        "truncation": _rule_echo(rule, truncate_initial),
        "M": int(n_particles),
        "dt": float(dt),
        "T": float(T_long),
        "init": _init_echo(init),
        "seed": int(seed),
    }
    stats = {
        "max_mean_sq": max_full,
        "max_mean_sq_second_half": max_second,
        "terminal_mean_sq": float(sim.mean_sq[-1]),
        "plateau": bool(math.isfinite(max_full) and max_second <= max_full),
        "admissible_dt_bound": bound,
    }
    return ExperimentReport(
        kind="moments",
        config=config,
        stats=stats,
        tables=[table],
        seed=int(seed),
        wallclock_seconds=time.perf_counter() - started,
    )


def _init_label(init) -> str:
    if isinstance(init, (int, float)):
        return f"c{float(init):g}"
    if isinstance(init, Mapping):
        kind = init.get("type")
        if kind == "constant":
            return f"c{float(init['value']):g}"
        if kind == "normal":
            return f"n{float(init.get('mean', 0.0)):g}s{float(init.get('sd', 1.0)):g}"
        if kind == "file":
            return Path(init["path"]).stem
    return "custom"


def invariant_measure_experiment(
    model: ModelSpec,
    rule: TruncationRule,
    n_particles: int,
    dt: float,
    T_list: Sequence[float],
    init_list: Sequence,
    seed: int,
    *,
    bins: tuple[int, float, float] = (200, -3.0, 3.0),
    threads: int = 1,
    truncate_initial: bool = True,
) -> ExperimentReport:
    """Long-time convergence to, and uniqueness of, the invariant measure.

    Each initial condition runs with its own independent noise stream; the
    first one additionally reruns under a second derived seed, and the W2
    distance between the two terminal clouds is the sampling noise floor that
    cross-init distances are judged against.  Histograms use fixed bins so
    density curves at different times and inits share an x-grid.
    """
    started = time.perf_counter()
    if model.dim_state != 1:
        raise ConfigurationError(
            "the invariant-measure experiment compares 1-D snapshot clouds", field="model"
        )
    times = sorted(set(float(t) for t in T_list))
    if not times:
        raise ConfigurationError("T_list must be non-empty", field="T_list")
    inits = list(init_list)
    if not inits:
        raise ConfigurationError("init_list must be non-empty", field="init_list")
    terminal = times[-1]
    n_bins, lo, hi = int(bins[0]), float(bins[1]), float(bins[2])
    if n_bins < 1 or not lo < hi:
        raise ConfigurationError(f"invalid histogram bins {bins}", field="bins")
    edges = np.linspace(lo, hi, n_bins + 1)

    jobs = [(idx, 0) for idx in range(len(inits))] + [(0, 1)]

    def run(job: tuple[int, int]) -> SimulationResult:
        idx, variant = job
        return simulate(
            model, rule, n_particles, dt, terminal, inits[idx],
            child_seed(seed, 3, idx, variant),
            observers=ObserverConfig(snapshot_times=tuple(times)),
            scheme="tem", truncate_initial=truncate_initial,
        )

    results = _map_jobs(run, jobs, threads)
    by_init = results[: len(inits)]
    floor_run = results[-1]
    labels = [_init_label(init) for init in inits]

    matrix_rows = []
    for label, sim in zip(labels, by_init):
        for ta in times:
            for tb in times:
                value = w2_sorted_1d(
                    EmpiricalMeasure(sim.snapshots[ta]), EmpiricalMeasure(sim.snapshots[tb])
                ).value
                matrix_rows.append((label, ta, tb, value))
    w2_matrix = Table(name="w2_matrix", columns=("init", "t_a", "t_b", "value"), rows=matrix_rows)

    cross_rows = []
    max_cross = 0.0
    for i in range(len(inits)):
        for j in range(i + 1, len(inits)):
            value = w2_sorted_1d(
                EmpiricalMeasure(by_init[i].snapshots[terminal]),
                EmpiricalMeasure(by_init[j].snapshots[terminal]),
            ).value
            cross_rows.append((labels[i], labels[j], value))
            max_cross = max(max_cross, value)
    w2_inits = Table(name="w2_inits", columns=("init_a", "init_b", "value"), rows=cross_rows)

    noise_floor = w2_sorted_1d(
        EmpiricalMeasure(by_init[0].snapshots[terminal]),
        EmpiricalMeasure(floor_run.snapshots[terminal]),
    ).value

    def histogram_table(name: str, states: np.ndarray) -> Table:
        counts, _ = np.histogram(states[:, 0], bins=edges)
        density = counts / (states.shape[0] * np.diff(edges))
        rows = [
            (edges[i], edges[i + 1], density[i])
            for i in range(n_bins)
        ]
        return Table(name=name, columns=("bin_left", "bin_right", "density"), rows=rows)

    tables = [w2_matrix, w2_inits]
    for t in times:
        tables.append(histogram_table(f"histogram_{_time_grid_label(t)}", by_init[0].snapshots[t]))
    for label, sim in zip(labels, by_init):
        tables.append(histogram_table(f"histogram_final_{label}", sim.snapshots[terminal]))

    config = {
        "experiment": "invariant",
        "model": model.name,
        "truncation": _rule_echo(rule, truncate_initial),
        "M": int(n_particles),
        "dt": float(dt),
        "T_list": times,
        "init_list": [_init_echo(init) for init in inits],
        "bins": [n_bins, lo, hi],
        "seed": int(seed),
    }
    stats = {
        "terminal_time": terminal,
        "noise_floor": noise_floor,
        "max_cross_init_w2": max_cross if cross_rows else None,
        "init_labels": labels,
    }
    return ExperimentReport(
        kind="invariant",
        config=config,
        stats=stats,
        tables=tables,
        seed=int(seed),
        wallclock_seconds=time.perf_counter() - started,
    )


def chaos_experiment(
    model: ModelSpec,
    rule: TruncationRule | None,
    m_list: Sequence[int],
    m_ref: int,
    dt: float,
    T: float,
    init,
    replications: int,
    seed: int,
    *,
    threads: int = 1,
    truncate_initial: bool = True,
) -> ExperimentReport:
    """Decay of W2^2 between M-particle ensembles and a large reference.

    For each replication one reference ensemble of m_ref particles runs with
    independent noise; every M in m_list then runs independently and the
    squared sorted-1d distance between its terminal cloud and the first M
    reference states is recorded.  Means over replications land in chaos.csv.
    """
    started = time.perf_counter()
    if model.dim_state != 1:
        raise ConfigurationError(
            "the chaos experiment compares 1-D terminal clouds", field="model"
        )
    ms = sorted(int(m) for m in m_list)
    if len(ms) < 2:
        raise ConfigurationError("M_list needs at least two sizes", field="M_list")
    if m_ref < 4 * ms[-1]:
        raise ConfigurationError(
            f"M_ref={m_ref} must be at least 4 * max(M_list) = {4 * ms[-1]}", field="M_ref"
        )
    if replications < 1:
        raise ConfigurationError("replications must be >= 1", field="replications")
    scheme_name = "tem" if rule is not None else "em"

    def run_one(job: int) -> list[float]:
        rep = job
        ref = simulate(
            model, rule, int(m_ref), dt, T, init, child_seed(seed, 4, rep, 0),
            scheme=scheme_name, truncate_initial=truncate_initial,
        )
        ref_states = ref.final.states
        values = []
        for j, m in enumerate(ms):
            sub = simulate(
                model, rule, m, dt, T, init, child_seed(seed, 4, rep, j + 1),
                scheme=scheme_name, truncate_initial=truncate_initial,
            )
            w2 = w2_sorted_1d(
                EmpiricalMeasure(sub.final.states), EmpiricalMeasure(ref_states[:m])
            ).value
            values.append(w2 * w2)
        return values

    per_rep = np.asarray(_map_jobs(run_one, list(range(replications)), threads))
    means = per_rep.mean(axis=0)
    stds = per_rep.std(axis=0, ddof=1) if replications > 1 else np.zeros(len(ms))
    fit = fit_power_law(ms, means)
    table = Table(
        name="chaos",
        columns=("m", "mean_w2sq", "std_w2sq"),
        rows=[(m, float(mu), float(sd)) for m, mu, sd in zip(ms, means, stds)],
    )
    config = {
        "experiment": "chaos",
        "model": model.name,
        "truncation": _rule_echo(rule, truncate_initial),
        "M_list": ms,
        "M_ref": int(m_ref),
        "dt": float(dt),
        "T": float(T),
        "replications": int(replications),
        "init": _init_echo(init),
        "seed": int(seed),
    }
    stats = {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual_stderr": fit.residual_stderr,
        "strictly_decreasing": bool(np.all(np.diff(means) < 0.0)),
    }
    return ExperimentReport(
        kind="chaos",
        config=config,
        stats=stats,
        tables=[table],
        seed=int(seed),
        wallclock_seconds=time.perf_counter() - started,
    )


def fournier_experiment(
    init,
    m_list: Sequence[int],
    replications: int,
    seed: int,
    *,
    q: float = 2.0,
    reference_size: int = 2**20,
    threads: int = 1,
) -> ExperimentReport:
    """Empirical-measure W_q^q decay rate for i.i.d. samples of a 1-D law."""
    started = time.perf_counter()
    if init is None:
        init = {"type": "normal", "mean": 0.0, "sd": 1.0}
    if callable(init):
        sampler = init
    elif isinstance(init, Mapping) and init.get("type") == "normal":
        mean = float(init.get("mean", 0.0))
        sd = float(init.get("sd", 1.0))
        if sd <= 0.0:
            raise ConfigurationError(
                "the sampled law must not be degenerate (sd > 0)", field="init.sd"
            )

        def sampler(rng, n):
            return mean + sd * standard_normal_sampler(rng, n)

    else:
        raise ConfigurationError(
            "fournier sampling law must be normal or a callable sampler", field="init"
        )
    probe = fournier_rate_probe(
        m_list, replications, int(seed), sampler, q=q, reference_size=reference_size
    )
    table = Table(
        name="fournier",
        columns=("m", "mean_wqq", "std_wqq"),
        rows=[
            (m, mu, sd)
            for m, mu, sd in zip(probe.m_list, probe.mean_wqq, probe.std_wqq)
        ],
    )
    config = {
        "experiment": "fournier",
        "M_list": list(probe.m_list),
        "replications": int(replications),
        "q": float(q),
        "reference_size": int(reference_size),
        "init": _init_echo(init),
        "seed": int(seed),
    }
    stats = {
        "slope": probe.slope,
        "intercept": probe.intercept,
        "q": probe.q,
        "reference_size": probe.reference_size,
    }
    return ExperimentReport(
        kind="fournier",
        config=config,
        stats=stats,
        tables=[table],
        seed=int(seed),
        wallclock_seconds=time.perf_counter() - started,
    )


def simulate_experiment(
    model: ModelSpec,
    rule: TruncationRule | None,
    n_particles: int,
    dt: float,
    T: float,
    init,
    seed: int,
    *,
    scheme: str = "tem",
    snapshot_times: Sequence[float] = (),
    path_particles: Sequence[int] = (),
    truncate_initial: bool = True,
    threads: int = 1,
) -> ExperimentReport:
    """One plain ensemble run exposed as a report: moments, paths, snapshots."""
    started = time.perf_counter()
    observers = ObserverConfig(
        snapshot_times=tuple(float(t) for t in snapshot_times),
        path_particles=tuple(int(p) for p in path_particles),
    )
    sim = simulate(
        model, rule, n_particles, dt, T, init, int(seed),
        observers=observers, scheme=scheme, truncate_initial=truncate_initial,
    )
    tables = [
        Table(
            name="moments",
            columns=("t", "mean_sq", "max_norm"),
            rows=list(zip(sim.times, sim.mean_sq, sim.max_norm)),
        )
    ]
    if sim.paths is not None:
        rows = []
        for k, t in enumerate(sim.times):
            for col, particle in enumerate(sim.path_particles):
                rows.append((t, particle, sim.paths[k, col]))
        tables.append(Table(name="paths", columns=("t", "particle", "value"), rows=rows))
    for t, states in sorted(sim.snapshots.items()):
        columns = tuple(f"x{i}" for i in range(states.shape[1]))
        tables.append(
            Table(
                name=f"snapshot_{_time_grid_label(t)}",
                columns=columns,
                rows=[tuple(row) for row in states],
            )
        )
    config = {
        "experiment": "simulate",
        "model": model.name,
        "truncation": _rule_echo(rule, truncate_initial),
        "M": int(n_particles),
        "dt": float(dt),
        "T": float(T),
        "scheme": scheme,
        "init": _init_echo(init),
        "observers": {
            "snapshot_times": list(observers.snapshot_times),
            "path_particles": list(observers.path_particles),
        },
        "seed": int(seed),
    }
    stats = {
        "terminal_mean_sq": float(sim.mean_sq[-1]),
        "max_mean_sq": float(np.max(sim.mean_sq)),
        "overflow_step": sim.overflow_step,
    }
    return ExperimentReport(
        kind="simulate",
        config=config,
        stats=stats,
        tables=tables,
        seed=int(seed),
        wallclock_seconds=time.perf_counter() - started,
    )

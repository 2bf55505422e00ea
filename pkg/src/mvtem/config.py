"""Run configuration: JSON schema validation and experiment dispatch.

A run config is a flat JSON object naming the experiment, the model, an
optional truncation block, the numeric parameters, an init block, and a
mandatory seed (runs never default to wall-clock entropy).  Step sizes on
the convergence path must be dyadic (2**-j) so coarse grids nest into the
reference grid exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .errors import (
    ConfigurationError,
    DegenerateGrowthError,
    InputDataError,
    MVTEMError,
    NonDyadicStepError,
    NumericOverflowError,
    StepSizeTooLargeError,
    UnknownModelError,
    UnsupportedSizeError,
)
from .experiments import (
    ExperimentReport,
    chaos_experiment,
    convergence_experiment,
    fournier_experiment,
    invariant_measure_experiment,
    moment_bound_experiment,
    simulate_experiment,
    stability_experiment,
)
from .models import ModelSpec, get_model
from .truncation import DEFAULT_KAPPA, TruncationRule, polynomial_rule

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_UNKNOWN_MODEL = 3
EXIT_NON_DYADIC = 4
EXIT_STEP_TOO_LARGE = 5
EXIT_NUMERIC = 6

EXPERIMENT_KINDS = (
    "convergence",
    "stability",
    "moments",
    "invariant",
    "chaos",
    "fournier",
    "simulate",
)

# Paper-calibrated envelope parameters for the built-in models: phi(u) =
# 2L(1 + u**alpha) with threshold constant K.
BUILTIN_TRUNCATION: dict[str, dict[str, float]] = {
    "vol32": {"alpha": 1.0, "L": 2.0, "K": 8.0},
    "double_well": {"alpha": 2.0, "L": 3.0, "K": 12.0},
}


def exit_code_for(err: MVTEMError) -> int:
    if isinstance(err, UnknownModelError):
        return EXIT_UNKNOWN_MODEL
    if isinstance(err, NonDyadicStepError):
        return EXIT_NON_DYADIC
    if isinstance(err, (StepSizeTooLargeError, DegenerateGrowthError)):
        return EXIT_STEP_TOO_LARGE
    if isinstance(err, NumericOverflowError):
        return EXIT_NUMERIC
    if isinstance(err, (ConfigurationError, InputDataError, UnsupportedSizeError)):
        return EXIT_VALIDATION
    return EXIT_VALIDATION


def error_record(err: MVTEMError) -> dict:
    return {
        "error": type(err).__name__,
        "field": getattr(err, "field", None),
        "message": str(err),
        "exit_code": exit_code_for(err),
    }


def is_dyadic(value: float) -> bool:
    """Whether value equals 2**-j exactly for some integer j >= 0."""
    if not (isinstance(value, (int, float)) and 0.0 < float(value) <= 1.0):
        return False
    mantissa, _ = math.frexp(float(value))
    return mantissa == 0.5


def load_config(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file {path} does not exist", field="config")
    try:
        cfg = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ConfigurationError(f"config file {path} is not valid JSON: {err}", field="config")
    if not isinstance(cfg, dict):
        raise ConfigurationError("config root must be a JSON object", field="config")
    return cfg


def apply_overrides(cfg: dict, assignments: Sequence[str]) -> dict:
    """Apply --set key=value overrides; dotted keys descend into sub-objects."""
    out = json.loads(json.dumps(cfg))
    for assignment in assignments:
        key, sep, raw = assignment.partition("=")
        if not sep or not key:
            raise ConfigurationError(
                f"--set expects key=value, got {assignment!r}", field="set"
            )
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            nxt = node.get(part)
            if not isinstance(nxt, dict):
                nxt = {}
                node[part] = nxt
            node = nxt
        node[parts[-1]] = value
    return out


def _require(cfg: Mapping, key: str, kinds, field: str | None = None):
    if key not in cfg or cfg[key] is None:
        raise ConfigurationError(f"config key {key!r} is required", field=field or key)
    value = cfg[key]
    if kinds is not None and not isinstance(value, kinds):
        raise ConfigurationError(
            f"config key {key!r} has type {type(value).__name__}", field=field or key
        )
    return value


def _positive_number(cfg: Mapping, key: str) -> float:
    value = _require(cfg, key, (int, float))
    if isinstance(value, bool) or not float(value) > 0.0:
        raise ConfigurationError(f"config key {key!r} must be positive", field=key)
    return float(value)


def _positive_int(cfg: Mapping, key: str) -> int:
    value = _require(cfg, key, int)
    if isinstance(value, bool) or value < 1:
        raise ConfigurationError(f"config key {key!r} must be a positive integer", field=key)
    return int(value)


def _seed(cfg: Mapping) -> int:
    value = _require(cfg, "seed", int)
    if isinstance(value, bool) or value < 0:
        raise ConfigurationError("seed must be a non-negative integer", field="seed")
    return int(value)


def _init_block(cfg: Mapping, key: str = "init"):
    value = _require(cfg, key, (int, float, dict))
    if isinstance(value, bool):
        raise ConfigurationError(f"config key {key!r} must be a number or object", field=key)
    if isinstance(value, dict):
        kind = value.get("type")
        if kind not in ("constant", "normal", "file"):
            raise ConfigurationError(
                f"init type must be constant, normal, or file, got {kind!r}",
                field=f"{key}.type",
            )
    return value


def _dyadic_step(value: float, field: str) -> float:
    if not is_dyadic(value):
        raise NonDyadicStepError(
            f"{field}={value!r} must be a dyadic step 2**-j with j >= 0", field=field
        )
    return float(value)


@dataclass(frozen=True)
class ResolvedRun:
    """A validated config: model, rule, and the experiment parameters."""

    experiment: str
    model: ModelSpec | None
    rule: TruncationRule | None
    truncate_initial: bool
    params: dict
    seed: int
    out: str | None


def build_rule(model: ModelSpec, trunc_cfg: Mapping | None) -> tuple[TruncationRule, bool]:
    """Resolve a truncation block against the model's built-in defaults."""
    merged: dict[str, Any] = dict(BUILTIN_TRUNCATION.get(model.name, {}))
    if trunc_cfg:
        merged.update(trunc_cfg)
    truncate_initial = bool(merged.pop("truncate_initial", True))
    missing = [k for k in ("alpha", "L", "K") if k not in merged]
    if missing:
        raise ConfigurationError(
            f"model {model.name!r} has no default truncation rule; config must "
            f"provide truncation keys {missing}",
            field="truncation",
        )
    rule = polynomial_rule(
        alpha=float(merged["alpha"]),
        growth_const=float(merged["L"]),
        trunc_constant=float(merged["K"]),
        kappa=float(merged.get("kappa", DEFAULT_KAPPA)),
    )
    return rule, truncate_initial


def resolve_config(cfg: Mapping) -> ResolvedRun:
    """Validate a raw config dict into a dispatchable run description."""
    experiment = _require(cfg, "experiment", str)
    if experiment not in EXPERIMENT_KINDS:
        raise ConfigurationError(
            f"unknown experiment {experiment!r}; expected one of {EXPERIMENT_KINDS}",
            field="experiment",
        )
    seed = _seed(cfg)
    out = cfg.get("out")

    model = None
    rule = None
    truncate_initial = True
    if experiment != "fournier":
        model = get_model(_require(cfg, "model", str))
        trunc_cfg = cfg.get("truncation")
        if trunc_cfg is not None and not isinstance(trunc_cfg, dict):
            raise ConfigurationError("truncation block must be an object", field="truncation")
        rule, truncate_initial = build_rule(model, trunc_cfg)

    params: dict[str, Any] = {}
    if experiment == "convergence":
        dts = _require(cfg, "dts", list)
        params["dts"] = [_dyadic_step(v, "dts") for v in dts]
        params["ref_dt"] = _dyadic_step(_positive_number(cfg, "ref_dt"), "ref_dt")
        params["n_particles"] = _positive_int(cfg, "M")
        params["T"] = _positive_number(cfg, "T")
        params["init"] = _init_block(cfg)
    elif experiment == "stability":
        params["n_particles"] = _positive_int(cfg, "M")
        params["dt"] = _positive_number(cfg, "dt")
        params["T"] = _positive_number(cfg, "T")
        init = _init_block(cfg)
        if isinstance(init, dict):
            if init.get("type") != "constant":
                raise ConfigurationError(
                    "stability starts all particles from one constant state",
                    field="init.type",
                )
            init = float(init["value"])
        params["initial_value"] = float(init)
    elif experiment == "moments":
        params["n_particles"] = _positive_int(cfg, "M")
        params["dt"] = _positive_number(cfg, "dt")
        params["T_long"] = _positive_number(cfg, "T")
        params["init"] = _init_block(cfg)
    elif experiment == "invariant":
        params["n_particles"] = _positive_int(cfg, "M")
        params["dt"] = _positive_number(cfg, "dt")
        t_list = _require(cfg, "T_list", list)
        if not t_list:
            raise ConfigurationError("T_list must be non-empty", field="T_list")
        params["T_list"] = [float(t) for t in t_list]
        init_list = _require(cfg, "init_list", list)
        params["init_list"] = [
            _init_block({"init": item}) for item in init_list
        ]
        bins = cfg.get("bins", [200, -3.0, 3.0])
        if not (isinstance(bins, list) and len(bins) == 3):
            raise ConfigurationError("bins must be [n_bins, lo, hi]", field="bins")
        params["bins"] = (int(bins[0]), float(bins[1]), float(bins[2]))
    elif experiment == "chaos":
        m_list = _require(cfg, "M_list", list)
        if not all(isinstance(m, int) and m >= 2 for m in m_list):
            raise ConfigurationError("M_list must hold integers >= 2", field="M_list")
        params["m_list"] = [int(m) for m in m_list]
        params["m_ref"] = _positive_int(cfg, "M_ref")
        params["dt"] = _positive_number(cfg, "dt")
        params["T"] = _positive_number(cfg, "T")
        params["replications"] = _positive_int(cfg, "replications")
        params["init"] = _init_block(cfg)
    elif experiment == "fournier":
        m_list = _require(cfg, "M_list", list)
        if not all(isinstance(m, int) and m >= 2 for m in m_list):
            raise ConfigurationError("M_list must hold integers >= 2", field="M_list")
        params["m_list"] = [int(m) for m in m_list]
        params["replications"] = _positive_int(cfg, "replications")
        params["q"] = float(cfg.get("q", 2.0))
        params["reference_size"] = int(cfg.get("reference_size", 2**20))
        params["init"] = cfg.get("init")
    elif experiment == "simulate":
        params["n_particles"] = _positive_int(cfg, "M")
        params["dt"] = _positive_number(cfg, "dt")
        params["T"] = _positive_number(cfg, "T")
        params["init"] = _init_block(cfg)
        scheme = cfg.get("scheme", "tem")
        if scheme not in ("tem", "em"):
            raise ConfigurationError(f"scheme must be tem or em, got {scheme!r}", field="scheme")
        params["scheme"] = scheme
        observers = cfg.get("observers", {})
        if not isinstance(observers, dict):
            raise ConfigurationError("observers must be an object", field="observers")
        params["snapshot_times"] = [float(t) for t in observers.get("snapshot_times", [])]
        params["path_particles"] = [int(p) for p in observers.get("path_particles", [])]

    return ResolvedRun(
        experiment=experiment,
        model=model,
        rule=rule,
        truncate_initial=truncate_initial,
        params=params,
        seed=seed,
        out=out,
    )


def run(cfg: Mapping, threads: int = 1) -> ExperimentReport:
    """Validate a config mapping and run the experiment it describes."""
    resolved = resolve_config(cfg)
    p = dict(resolved.params)
    seed = resolved.seed
    if resolved.experiment == "convergence":
        return convergence_experiment(
            resolved.model, resolved.rule, p["n_particles"], p["dts"], p["ref_dt"],
            p["T"], p["init"], seed,
            truncate_initial=resolved.truncate_initial, threads=threads,
        )
    if resolved.experiment == "stability":
        return stability_experiment(
            resolved.model, resolved.rule, p["n_particles"], p["dt"], p["T"],
            p["initial_value"], seed,
            truncate_initial=resolved.truncate_initial, threads=threads,
        )
    if resolved.experiment == "moments":
        return moment_bound_experiment(
            resolved.model, resolved.rule, p["n_particles"], p["dt"], p["T_long"],
            p["init"], seed,
            truncate_initial=resolved.truncate_initial, threads=threads,
        )
    if resolved.experiment == "invariant":
        return invariant_measure_experiment(
            resolved.model, resolved.rule, p["n_particles"], p["dt"], p["T_list"],
            p["init_list"], seed,
            bins=p["bins"], threads=threads, truncate_initial=resolved.truncate_initial,
        )
    if resolved.experiment == "chaos":
        return chaos_experiment(
            resolved.model, resolved.rule, p["m_list"], p["m_ref"], p["dt"], p["T"],
            p["init"], p["replications"], seed,
            threads=threads, truncate_initial=resolved.truncate_initial,
        )
    if resolved.experiment == "fournier":
        return fournier_experiment(
            p["init"], p["m_list"], p["replications"], seed,
            q=p["q"], reference_size=p["reference_size"], threads=threads,
        )
    return simulate_experiment(
        resolved.model, resolved.rule, p["n_particles"], p["dt"], p["T"],
        p["init"], seed,
        scheme=p["scheme"], snapshot_times=p["snapshot_times"],
        path_particles=p["path_particles"],
        truncate_initial=resolved.truncate_initial, threads=threads,
    )

"""Model specifications: drift/diffusion coefficients and their structure.

A :class:`ModelSpec` bundles the coefficient functions together with the
constants the numerics need: state/noise dimensions, the polynomial growth
order of the coefficients, the truncation threshold constant, and (when
known) dissipativity and contraction parameters.

Coefficients receive the current state and an :class:`EmpiricalMeasure` and
must depend on the measure only through its summary statistics (mean,
moments), so one measure pass per step serves the whole ensemble.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, UnknownModelError
from .measures import EmpiricalMeasure, W2Result, w2_assignment, w2_sorted_1d

Coefficient = Callable[[np.ndarray, EmpiricalMeasure], np.ndarray]


@dataclass(frozen=True)
class ModelSpec:
    """Coefficients and constants of one mean-field model.

    drift(x, mu) maps ``(..., d)`` states to ``(..., d)`` vectors; diffusion
    maps them to ``(..., d, m)`` matrices.  ``vectorized`` declares that the
    coefficients broadcast over a leading particle axis; otherwise the scheme
    falls back to a per-particle loop.
    """

    name: str
    dim_state: int
    dim_noise: int
    drift: Coefficient
    diffusion: Coefficient
    growth_alpha: float
    trunc_constant: float
    dissipativity: tuple[float, float] | None = None
    contraction: tuple[float, float] | None = None
    vectorized: bool = False
    summary: str = ""


def _vol32_drift(x, mu):
    x = np.asarray(x, dtype=float)
    return x * (-2.0 - np.abs(x)) + mu.mean


def _vol32_diffusion(x, mu):
    x = np.asarray(x, dtype=float)
    return (0.5 * np.abs(x) ** 1.5)[..., None]


def builtin_vol32() -> ModelSpec:
    """Mean-field 3/2 stochastic volatility model.

    drift f(x, mu) = x(-2 - |x|) + mean(mu), diffusion g(x) = |x|^{3/2} / 2.
    Cubic-order dissipativity with a zero equilibrium: f(0, d0) = g(0, d0) = 0.
    """
    return ModelSpec(
        name="vol32",
        dim_state=1,
        dim_noise=1,
        drift=_vol32_drift,
        diffusion=_vol32_diffusion,
        growth_alpha=1.0,
        trunc_constant=8.0,
        dissipativity=(3.0, 1.0),
        contraction=(3.0, 1.0),
        vectorized=True,
        summary="mean-field 3/2 stochastic volatility: f = x(-2-|x|) + mean, g = |x|^1.5/2",
    )


def _double_well_drift(x, mu):
    x = np.asarray(x, dtype=float)
    return 2.0 * x * (-1.0 - x * x) + mu.mean


def _double_well_diffusion(x, mu):
    x = np.asarray(x, dtype=float)
    return (0.5 * (1.0 - x * x))[..., None]


def builtin_double_well() -> ModelSpec:
    """Mean-field stochastic double-well dynamics.

    drift f(x, mu) = 2x(-1 - x^2) + mean(mu), diffusion g(x) = (1 - x^2) / 2.
    The diffusion does not vanish at the origin, so the model admits a
    non-degenerate invariant measure rather than a stable equilibrium.
    """
    return ModelSpec(
        name="double_well",
        dim_state=1,
        dim_noise=1,
        drift=_double_well_drift,
        diffusion=_double_well_diffusion,
        growth_alpha=2.0,
        trunc_constant=12.0,
        dissipativity=(3.5, 1.0),
        contraction=(3.0, 1.0),
        vectorized=True,
        summary="mean-field stochastic double well: f = 2x(-1-x^2) + mean, g = (1-x^2)/2",
    )


_REGISTRY: dict[str, Callable[[], ModelSpec]] = {}


def register_model(name: str, factory: Callable[[], ModelSpec], overwrite: bool = False) -> None:
    if not overwrite and name in _REGISTRY:
        raise ConfigurationError(f"model {name!r} is already registered", field="model")
    _REGISTRY[name] = factory


def get_model(name: str) -> ModelSpec:
    try:
        factory = _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise UnknownModelError(
            f"unknown model {name!r}; registered models: {known}", field="model"
        ) from None
    return factory()


def list_models() -> list[tuple[str, str]]:
    """Sorted (name, summary) pairs of all registered models."""
    return [(name, _REGISTRY[name]().summary) for name in sorted(_REGISTRY)]


register_model("vol32", builtin_vol32)
register_model("double_well", builtin_double_well)


def _coefficient_values(model: ModelSpec, x: np.ndarray, mu: EmpiricalMeasure):
    fx = np.asarray(model.drift(x, mu), dtype=float).reshape(model.dim_state)
    gx = np.asarray(model.diffusion(x, mu), dtype=float).reshape(
        model.dim_state, model.dim_noise
    )
    return fx, gx


@dataclass(frozen=True)
class MarginReport:
    """Per-probe inequality values and the worst margin after removing C."""

    values: tuple[float, ...]
    worst: float
    lam1: float
    lam2: float
    constant: float

    @property
    def consistent(self) -> bool:
        return self.worst <= 0.0


def _resolve_lams(model: ModelSpec, lams, attr: str) -> tuple[float, float]:
    if lams is None:
        lams = getattr(model, attr)
    if lams is None:
        raise ConfigurationError(
            f"model {model.name!r} declares no {attr} parameters", field=attr
        )
    lam1, lam2 = float(lams[0]), float(lams[1])
    if not lam1 > lam2 >= 0.0:
        raise ConfigurationError(
            f"{attr} parameters need lam1 > lam2 >= 0, got ({lam1}, {lam2})", field=attr
        )
    return lam1, lam2


def check_dissipativity(
    model: ModelSpec,
    probes: Iterable[tuple[np.ndarray, EmpiricalMeasure]],
    lams: tuple[float, float] | None = None,
    constant: float = 0.0,
) -> MarginReport:
    """Evaluate 2 x.f(x,mu) + |g(x,mu)|^2 + lam1 |x|^2 - lam2 mu(|.|^2) on probes.

    Reports each probe value and the maximum minus the allowed constant C; a
    non-positive worst margin certifies the drift-diffusion dissipativity
    inequality on the probed set.
    """
    lam1, lam2 = _resolve_lams(model, lams, "dissipativity")
    values = []
    for point, mu in probes:
        x = np.atleast_1d(np.asarray(point, dtype=float))
        fx, gx = _coefficient_values(model, x, mu)
        val = (
            2.0 * float(x @ fx)
            + float(np.sum(gx * gx))
            + lam1 * float(x @ x)
            - lam2 * mu.moment(2.0)
        )
        values.append(val)
    if not values:
        raise ConfigurationError("probe list is empty", field="probes")
    worst = max(values) - constant
    return MarginReport(
        values=tuple(values), worst=worst, lam1=lam1, lam2=lam2, constant=constant
    )


def check_contraction(
    model: ModelSpec,
    probe_pairs: Iterable[
        tuple[np.ndarray, EmpiricalMeasure, np.ndarray, EmpiricalMeasure]
    ],
    lams: tuple[float, float] | None = None,
) -> MarginReport:
    """Evaluate the two-point contraction inequality on probe pairs.

    Each value is 2 (x1-x2).(f(x1,mu1) - f(x2,mu2)) + |g(x1,mu1) - g(x2,mu2)|^2
    + lam1 |x1-x2|^2 - lam2 W2(mu1, mu2)^2; non-positive values certify the
    contraction inequality on the probed set.
    """
    lam1, lam2 = _resolve_lams(model, lams, "contraction")
    values = []
    for p1, mu1, p2, mu2 in probe_pairs:
        x1 = np.atleast_1d(np.asarray(p1, dtype=float))
        x2 = np.atleast_1d(np.asarray(p2, dtype=float))
        f1, g1 = _coefficient_values(model, x1, mu1)
        f2, g2 = _coefficient_values(model, x2, mu2)
        if mu1.dim == 1:
            w2: W2Result = w2_sorted_1d(mu1, mu2)
        else:
            w2 = w2_assignment(mu1, mu2)
        diff = x1 - x2
        val = (
            2.0 * float(diff @ (f1 - f2))
            + float(np.sum((g1 - g2) ** 2))
            + lam1 * float(diff @ diff)
            - lam2 * w2.value**2
        )
        values.append(val)
    if not values:
        raise ConfigurationError("probe list is empty", field="probes")
    worst = max(values)
    return MarginReport(values=tuple(values), worst=worst, lam1=lam1, lam2=lam2, constant=0.0)


def zero_equilibrium(model: ModelSpec, atol: float = 0.0) -> bool:
    """Whether f(0, delta_0) and g(0, delta_0) both vanish."""
    origin = np.zeros(model.dim_state)
    mu = EmpiricalMeasure.dirac(origin)
    fx, gx = _coefficient_values(model, origin, mu)
    return bool(np.max(np.abs(fx)) <= atol and np.max(np.abs(gx)) <= atol)

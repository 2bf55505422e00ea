"""Radial truncation of super-linearly growing coefficients.

A :class:`TruncationRule` pairs a growth envelope ``phi`` with its inverse and
a threshold schedule ``h(dt) = K * dt**-kappa``.  The induced projection maps
a state onto the centred ball of radius ``phi_inv(h(dt))``, which keeps the
one-step update of the explicit scheme under control however fast the
coefficients grow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigurationError, DegenerateGrowthError, StepSizeTooLargeError

DEFAULT_KAPPA = 1.0 / 3.0


@dataclass(frozen=True)
class TruncationRule:
    """Growth envelope phi, its inverse, and the threshold constant K."""

    phi: Callable[[float], float]
    phi_inv: Callable[[float], float]
    trunc_constant: float
    kappa: float = DEFAULT_KAPPA
    alpha: float | None = None
    growth_const: float | None = None
    description: str = field(default="", compare=False)

    def h(self, dt: float) -> float:
        """Truncation threshold K * dt**-kappa."""
        return self.trunc_constant * float(dt) ** (-self.kappa)


def polynomial_rule(
    alpha: float,
    growth_const: float,
    trunc_constant: float,
    kappa: float = DEFAULT_KAPPA,
) -> TruncationRule:
    """Rule for coefficients of polynomial growth order alpha.

    Envelope phi(u) = 2*growth_const*(1 + u**alpha), inverted in closed form.
    Construction fails fast when no step size in (0, 1] would admit a positive
    radius, i.e. when K = h(1) does not exceed phi(0) = 2*growth_const.
    """
    alpha = float(alpha)
    growth_const = float(growth_const)
    trunc_constant = float(trunc_constant)
    kappa = float(kappa)
    if alpha <= 0.0:
        raise DegenerateGrowthError(
            "alpha must be positive; alpha == 0 means the coefficients grow at most "
            "linearly and plain Euler-Maruyama applies",
            field="alpha",
        )
    if growth_const <= 0.0:
        raise ConfigurationError("growth_const must be positive", field="growth_const")
    if not 0.0 < kappa <= DEFAULT_KAPPA:
        raise ConfigurationError(
            f"kappa must lie in (0, 1/3], got {kappa}", field="kappa"
        )
    if trunc_constant <= 2.0 * growth_const:
        raise StepSizeTooLargeError(
            f"trunc_constant K={trunc_constant} must exceed phi(0)="
            f"{2.0 * growth_const} so every dt in (0, 1] yields a positive radius",
            field="trunc_constant",
        )
    two_l = 2.0 * growth_const

    def phi(u: float) -> float:
        return two_l * (1.0 + float(u) ** alpha)

    def phi_inv(v: float) -> float:
        v = float(v)
        if v <= two_l:
            raise StepSizeTooLargeError(
                f"phi_inv undefined at {v} <= phi(0) = {two_l}", field="dt"
            )
        return (v / two_l - 1.0) ** (1.0 / alpha)

    return TruncationRule(
        phi=phi,
        phi_inv=phi_inv,
        trunc_constant=trunc_constant,
        kappa=kappa,
        alpha=alpha,
        growth_const=growth_const,
        description=f"polynomial(alpha={alpha:g}, L={growth_const:g}, K={trunc_constant:g})",
    )


def rate_tuned_kappa(q: float, p: float, alpha: float) -> float:
    """Exponent kappa = q*alpha / (2*(p - q)) matching the strong rate q/2.

    Valid when the model has p-th moment bounds with p > q >= 2 and the
    resulting kappa stays inside (0, 1/3].
    """
    if not p > q >= 2.0:
        raise ConfigurationError(f"need p > q >= 2, got q={q}, p={p}", field="q")
    kappa = q * alpha / (2.0 * (p - q))
    if not 0.0 < kappa <= DEFAULT_KAPPA:
        raise ConfigurationError(
            f"rate-tuned kappa={kappa:g} outside (0, 1/3]; increase p or reduce q*alpha",
            field="kappa",
        )
    return kappa


def radius(rule: TruncationRule, dt: float) -> float:
    """Truncation radius phi_inv(h(dt)) for one step of size dt."""
    dt = float(dt)
    if not 0.0 < dt <= 1.0:
        raise ConfigurationError(f"dt must lie in (0, 1], got {dt}", field="dt")
    r = float(rule.phi_inv(rule.h(dt)))
    if not math.isfinite(r) or r <= 0.0:
        raise StepSizeTooLargeError(
            f"rule yields non-positive radius {r} at dt={dt}", field="dt"
        )
    return r


# Relative slack accepted by the inside-ball test.  It absorbs the norm
# round-off of freshly projected points, which makes the projection exactly
# idempotent, at the price of overshooting the ball by at most ~1.4e-14 * r.
_BOUNDARY_SLACK = 64.0 * np.finfo(float).eps


def project(x, r: float) -> np.ndarray:
    """Radial projection of states onto the centred ball of radius r.

    Accepts a single state vector ``(d,)`` or a batch ``(..., d)``; norms are
    taken over the last axis.  The origin maps to itself.
    """
    if r <= 0.0 or not math.isfinite(r):
        raise ConfigurationError(f"radius must be positive and finite, got {r}", field="r")
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[None]
    if x.shape[-1] == 1:
        norms = np.abs(x)
    else:
        # Scale by the largest coordinate so huge finite states do not
        # overflow to inf when squared.
        amax = np.max(np.abs(x), axis=-1, keepdims=True)
        safe_amax = np.where(amax > 0.0, amax, 1.0)
        scaled = x / safe_amax
        norms = amax * np.sqrt(np.sum(scaled * scaled, axis=-1, keepdims=True))
    inside = norms <= r * (1.0 + _BOUNDARY_SLACK)
    safe = np.where(norms > 0.0, norms, 1.0)
    return np.where(inside, x, x * (r / safe))

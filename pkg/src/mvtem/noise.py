"""Counter-addressed Brownian increments shared across step sizes.

A :class:`NoisePlan` produces the standard normal variates behind the
Brownian increments of every particle on a fine time grid.  Each fine step
index owns a disjoint counter block of a Philox bit generator, so the plan is
seekable: the variates for step n are bit-identical no matter which steps
were generated before, in which order, or on how many workers.

Coarse increments over a span of fine steps are defined as the ascending-sum
of the fine increments they cover, which is what couples runs at different
step sizes to the same Brownian path.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.random import Generator, Philox

from .errors import ConfigurationError

_STEP_TAG = 0
_INIT_TAG = 1
_KEY_SALT = 0x9E3779B97F4A7C15  # fixed second key word; distinct from user seeds


class NoisePlan:
    """Seekable standard-normal increments for M particles on a fine grid."""

    def __init__(self, seed: int, n_particles: int, dim_noise: int, fine_dt: float):
        if n_particles < 1:
            raise ConfigurationError("n_particles must be >= 1", field="M")
        if dim_noise < 1:
            raise ConfigurationError("dim_noise must be >= 1", field="dim_noise")
        if not (fine_dt > 0.0 and math.isfinite(fine_dt)):
            raise ConfigurationError(f"fine_dt must be positive, got {fine_dt}", field="dt")
        self.seed = int(seed)
        self.n_particles = int(n_particles)
        self.dim_noise = int(dim_noise)
        self.fine_dt = float(fine_dt)
        self._scale = math.sqrt(self.fine_dt)

    def _generator(self, tag: int, index: int) -> Generator:
        if index < 0:
            raise ConfigurationError(f"step index must be >= 0, got {index}", field="step")
        bg = Philox(counter=[0, 0, tag, index], key=[self.seed % 2**64, _KEY_SALT])
        return Generator(bg)

    def normals(self, fine_step: int) -> np.ndarray:
        """Standard normal variates of shape (M, m) for one fine step."""
        gen = self._generator(_STEP_TAG, int(fine_step))
        return gen.standard_normal((self.n_particles, self.dim_noise))

    def increment(self, fine_step: int) -> np.ndarray:
        """Brownian increment sqrt(fine_dt) * Z over one fine step, shape (M, m)."""
        return self._scale * self.normals(fine_step)

    def coarse_increment(self, coarse_step: int, ratio: int) -> np.ndarray:
        """Increment over [k*ratio, (k+1)*ratio) fine steps, summed ascending."""
        ratio = int(ratio)
        if ratio < 1:
            raise ConfigurationError(f"ratio must be >= 1, got {ratio}", field="ratio")
        start = int(coarse_step) * ratio
        acc = self.increment(start)
        for n in range(start + 1, start + ratio):
            acc = acc + self.increment(n)
        return acc

    def init_generator(self) -> Generator:
        """Generator reserved for drawing the initial ensemble."""
        return self._generator(_INIT_TAG, 0)

    def permuted(self, perm) -> "NoisePlan":
        """View of this plan with particle streams reordered by perm."""
        return _PermutedNoisePlan(self, perm)


class _PermutedNoisePlan(NoisePlan):
    def __init__(self, base: NoisePlan, perm):
        super().__init__(base.seed, base.n_particles, base.dim_noise, base.fine_dt)
        perm = np.asarray(perm, dtype=int)
        if sorted(perm.tolist()) != list(range(base.n_particles)):
            raise ConfigurationError(
                "perm must be a permutation of range(n_particles)", field="perm"
            )
        self._base = base
        self._perm = perm

    def normals(self, fine_step: int) -> np.ndarray:
        return self._base.normals(fine_step)[self._perm]

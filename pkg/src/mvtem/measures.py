"""Empirical measures and Wasserstein-2 distances between them.

An :class:`EmpiricalMeasure` wraps a point cloud ``(M, d)`` and exposes the
summary statistics the model coefficients are allowed to see (mean vector and
raw absolute moments).  Distances between equal-size clouds come in three
flavours:

* ``w2_sorted_1d`` -- exact optimal transport in one dimension via order
  statistics,
* ``w2_matched`` -- the index-coupling upper bound ``(1/M) sum |x_i - y_i|^2``,
* ``w2_assignment`` -- exact optimal transport in any dimension through a
  minimum-cost assignment, used as the oracle for the sorted route.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConfigurationError, DimensionMismatchError, UnsupportedSizeError

ASSIGNMENT_MAX_SIZE = 512


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise DimensionMismatchError(
            f"point cloud must be a non-empty (M, d) array, got shape {arr.shape}"
        )
    return arr


class EmpiricalMeasure:
    """Uniform measure on M points in R^d, with cached summary statistics."""

    def __init__(self, points):
        self._points = _as_points(points)
        self._mean: np.ndarray | None = None
        self._moment2: float | None = None

    @classmethod
    def dirac(cls, point) -> "EmpiricalMeasure":
        arr = np.atleast_1d(np.asarray(point, dtype=float))
        return cls(arr[None, :])

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def size(self) -> int:
        return self._points.shape[0]

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    @property
    def mean(self) -> np.ndarray:
        if self._mean is None:
            self._mean = self._points.mean(axis=0)
        return self._mean

    def moment(self, q: float) -> float:
        """Raw absolute moment (1/M) sum |x_i|^q with the Euclidean norm."""
        if q == 2.0:
            if self._moment2 is None:
                self._moment2 = float(np.mean(np.sum(self._points**2, axis=1)))
            return self._moment2
        norms = np.sqrt(np.sum(self._points**2, axis=1))
        return float(np.mean(norms**q))

    def __repr__(self) -> str:
        return f"EmpiricalMeasure(size={self.size}, dim={self.dim})"


@dataclass(frozen=True)
class W2Result:
    value: float
    method: str


def w2_to_dirac(mu: EmpiricalMeasure, point=0.0) -> float:
    """W2 distance from mu to a Dirac mass, sqrt((1/M) sum |x_i - x0|^2)."""
    x0 = np.atleast_1d(np.asarray(point, dtype=float))
    if x0.shape != (mu.dim,):
        raise DimensionMismatchError(
            f"dirac point has shape {x0.shape}, measure dimension is {mu.dim}"
        )
    return float(np.sqrt(np.mean(np.sum((mu.points - x0) ** 2, axis=1))))


def _check_pair(a: EmpiricalMeasure, b: EmpiricalMeasure) -> None:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.size != b.size:
        raise UnsupportedSizeError(
            f"W2 between unequal cloud sizes ({a.size} vs {b.size}) is unsupported"
        )


def w2_sorted_1d(a: EmpiricalMeasure, b: EmpiricalMeasure) -> W2Result:
    """Exact W2 between equal-size 1-D clouds via sorted order statistics."""
    _check_pair(a, b)
    if a.dim != 1:
        raise DimensionMismatchError(f"sorted-1d route requires dimension 1, got {a.dim}")
    xs = np.sort(a.points[:, 0])
    ys = np.sort(b.points[:, 0])
    value = float(np.sqrt(np.mean((xs - ys) ** 2)))
    return W2Result(value=value, method="sorted_1d")


def w2_matched(a: EmpiricalMeasure, b: EmpiricalMeasure) -> W2Result:
    """Index-coupling upper bound sqrt((1/M) sum |x_i - y_i|^2)."""
    _check_pair(a, b)
    value = float(np.sqrt(np.mean(np.sum((a.points - b.points) ** 2, axis=1))))
    return W2Result(value=value, method="matched")


def w2_assignment(a: EmpiricalMeasure, b: EmpiricalMeasure) -> W2Result:
    """Exact W2 via minimum-cost assignment on squared Euclidean costs.

    Quadratic memory in M, so the size is capped at ASSIGNMENT_MAX_SIZE.
    The arguments are canonicalised by byte order before solving so that
    dist(a, b) and dist(b, a) are bit-identical.
    """
    _check_pair(a, b)
    if a.size > ASSIGNMENT_MAX_SIZE:
        raise UnsupportedSizeError(
            f"assignment route supports at most {ASSIGNMENT_MAX_SIZE} points, got {a.size}"
        )
    pa, pb = a.points, b.points
    if pb.tobytes() < pa.tobytes():
        pa, pb = pb, pa
    cost = np.sum((pa[:, None, :] - pb[None, :, :]) ** 2, axis=2)
    rows, cols = linear_sum_assignment(cost)
    value = float(np.sqrt(cost[rows, cols].mean()))
    return W2Result(value=value, method="assignment")


def wq_quantile_1d(a, b, q: float = 2.0, *, sorted_inputs: bool = False) -> float:
    """Exact W_q^q between two 1-D samples of possibly different sizes.

    Integrates |F_a^{-1}(u) - F_b^{-1}(u)|^q over (0, 1), where both quantile
    functions are piecewise constant.  When one size divides the other this
    reduces to a single vectorised pass; otherwise the merged breakpoints of
    the two step functions are used.
    """
    xa = np.ravel(np.asarray(a, dtype=float))
    xb = np.ravel(np.asarray(b, dtype=float))
    if not sorted_inputs:
        xa = np.sort(xa)
        xb = np.sort(xb)
    na, nb = xa.size, xb.size
    if na == 0 or nb == 0:
        raise UnsupportedSizeError("quantile distance requires non-empty samples")
    if nb % na == 0 or na % nb == 0:
        if na % nb == 0 and nb % na != 0:
            xa, xb = xb, xa
            na, nb = nb, na
        diff = np.repeat(xa, nb // na) - xb
        if q == 2.0:
            return float(np.mean(diff * diff))
        return float(np.mean(np.abs(diff) ** q))
    cuts = np.union1d(np.arange(1, na) / na, np.arange(1, nb) / nb)
    edges = np.concatenate(([0.0], cuts, [1.0]))
    widths = np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    ia = np.minimum((mids * na).astype(np.int64), na - 1)
    ib = np.minimum((mids * nb).astype(np.int64), nb - 1)
    return float(np.sum(widths * np.abs(xa[ia] - xb[ib]) ** q))


def standard_normal_sampler(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n)


@dataclass(frozen=True)
class FournierProbeResult:
    m_list: tuple[int, ...]
    mean_wqq: tuple[float, ...]
    std_wqq: tuple[float, ...]
    slope: float
    intercept: float
    q: float
    replications: int
    reference_size: int


def fournier_rate_probe(
    m_list: Sequence[int],
    replications: int,
    seed: int,
    sampler: Callable[[np.random.Generator, int], np.ndarray] = standard_normal_sampler,
    q: float = 2.0,
    reference_size: int = 2**20,
) -> FournierProbeResult:
    """Measure the empirical decay of E[W_q^q(mu_M, mu)] in the sample size M.

    For each M the probe draws M i.i.d. 1-D samples and computes the exact
    quantile distance to a fixed high-accuracy surrogate of the target law
    (``reference_size`` i.i.d. samples, drawn once).  The fitted log-log slope
    of the replication mean against M is returned.
    """
    ms = [int(m) for m in m_list]
    if len(ms) < 2 or any(m < 2 for m in ms):
        raise ConfigurationError("m_list must contain at least two sizes >= 2", field="m_list")
    if replications < 1:
        raise ConfigurationError("replications must be >= 1", field="replications")
    if q < 1.0:
        raise ConfigurationError("q must be >= 1", field="q")
    ref_rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x5EED]))
    reference = np.sort(sampler(ref_rng, int(reference_size)))
    means, stds = [], []
    for i, m in enumerate(ms):
        vals = np.empty(replications)
        for r in range(replications):
            rng = np.random.default_rng(np.random.SeedSequence([int(seed), i, r]))
            sample = np.sort(sampler(rng, m))
            vals[r] = wq_quantile_1d(sample, reference, q=q, sorted_inputs=True)
        means.append(float(vals.mean()))
        stds.append(float(vals.std(ddof=1)) if replications > 1 else 0.0)
    coeffs = np.polyfit(np.log2(np.asarray(ms, dtype=float)), np.log2(means), 1)
    return FournierProbeResult(
        m_list=tuple(ms),
        mean_wqq=tuple(means),
        std_wqq=tuple(stds),
        slope=float(coeffs[0]),
        intercept=float(coeffs[1]),
        q=float(q),
        replications=int(replications),
        reference_size=int(reference_size),
    )

"""Exception types shared across the package.

Every error carries an optional ``field`` naming the offending input, so the
CLI can emit machine-readable error records.
"""

from __future__ import annotations


class MVTEMError(Exception):
    """Base class for all package errors."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class ConfigurationError(MVTEMError):
    """An input or configuration value is invalid."""


class UnknownModelError(ConfigurationError):
    """A model name is not present in the registry."""


class NonDyadicStepError(ConfigurationError):
    """A step size required to be a dyadic power 2**-j is not one."""


class StepSizeTooLargeError(ConfigurationError):
    """The truncation threshold h(dt) does not exceed phi(0): no positive radius."""


class DegenerateGrowthError(ConfigurationError):
    """Polynomial growth exponent alpha <= 0: truncation degenerates, use plain EM."""


class DimensionMismatchError(MVTEMError):
    """Array dimensions are inconsistent with the declared model dimensions."""


class UnsupportedSizeError(MVTEMError):
    """Operation does not support the given ensemble sizes."""


class InputDataError(MVTEMError):
    """A report file required by a consumer is missing, empty, or malformed."""


class NumericOverflowError(MVTEMError):
    """A scheme produced a non-finite state where finiteness is required."""

    def __init__(self, message: str, particle: int | None = None, step: int | None = None):
        super().__init__(message)
        self.particle = particle
        self.step = step

"""Custom errors used by fracrand."""

from __future__ import annotations

from typing import Sequence


class FracRandError(Exception):
    """Base error for fracrand."""

    def __init__(
        self,
        message: str,
        *,
        details: Sequence[str] = (),
        hints: Sequence[str] = (),
    ) -> None:
        super().__init__(message)
        self.details = tuple(detail for detail in details if detail)
        self.hints = tuple(hint for hint in hints if hint)


class ConfigError(FracRandError):
    """Raised when required configuration is missing or invalid."""


class InvalidDimensionError(FracRandError, ValueError):
    """Raised when a matrix dimension is not a positive integer."""


class ConvergenceError(FracRandError):
    """Raised when the Jacobi eigensolver exhausts its sweep budget."""

    def __init__(self, message: str, *, off_norm: float, sweeps: int) -> None:
        super().__init__(
            message,
            details=(f"off-diagonal norm {off_norm:.3e} after {sweeps} sweeps",),
        )
        self.off_norm = off_norm
        self.sweeps = sweeps


class InvalidPeriodError(FracRandError, ValueError):
    """Raised when the period parameter M is not positive."""


class InvalidSpecError(FracRandError, ValueError):
    """Raised when a kernel spec does not match the basis it is built on."""


class InvalidCompositionError(FracRandError, ValueError):
    """Raised when two kernels cannot be multiplied as powers of one transform."""


class InvalidInputError(FracRandError, ValueError):
    """Raised when a signal or image does not fit the kernel."""


class InvalidLengthError(FracRandError, ValueError):
    """Raised when a signal length is outside what an operation accepts."""


class ImageFormatError(FracRandError, ValueError):
    """Raised when a PGM stream is malformed."""

    def __init__(self, message: str, *, offset: int) -> None:
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset

"""Apply kernels to signals and images, plus the even/odd fast path."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .eigenbasis import SpectralBasis
from .errors import InvalidInputError, InvalidLengthError
from .kernels import Kernel, KernelFamily, KernelSpec, build_kernel
from .randmat import readonly

ZERO_AMPLITUDE = 1e-9

Symmetry = Literal["up_down", "left_right", "transpose"]


@dataclass(frozen=True, eq=False)
class Signal:
    samples: np.ndarray

    def __post_init__(self) -> None:
        samples = readonly(np.ravel(self.samples), np.complex128)
        if samples.size < 1:
            raise InvalidInputError("a signal needs at least one sample.")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return int(self.samples.size)


def as_signal(values: Signal | Sequence[complex] | np.ndarray) -> Signal:
    return values if isinstance(values, Signal) else Signal(np.asarray(values))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Transform output with amplitude and phase views."""

    values: np.ndarray
    spec: KernelSpec

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", readonly(self.values, np.complex128))

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def amplitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def phase(self) -> np.ndarray:
        """Principal argument in (-pi, pi]."""
        angles = np.angle(self.values)
        return np.where(angles == -np.pi, np.pi, angles)

    @property
    def phase_defined(self) -> np.ndarray:
        return self.amplitude >= ZERO_AMPLITUDE


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Real pixel grid with values in [0, 1]."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        pixels = readonly(self.pixels, np.float64)
        if pixels.ndim != 2 or min(pixels.shape) < 1:
            raise InvalidInputError(f"an image must be a non-empty 2-D grid, got {pixels.shape}.")
        if np.any(pixels < 0.0) or np.any(pixels > 1.0):
            raise InvalidInputError("image pixels must lie in [0, 1].")
        object.__setattr__(self, "pixels", pixels)

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class EvenOddParts:
    even: Signal
    odd: Signal


def apply_1d(kernel: Kernel, x: Signal | Sequence[complex] | np.ndarray) -> Spectrum:
    signal = as_signal(x)
    if len(signal) != kernel.dim:
        raise InvalidInputError(
            f"signal has {len(signal)} samples but the kernel is {kernel.dim}x{kernel.dim}."
        )
    return Spectrum(values=kernel.entries @ signal.samples, spec=kernel.spec)


def apply_2d_grid(
    kernel: Kernel,
    grid: np.ndarray,
    *,
    method: Literal["factored", "dense"] = "factored",
) -> np.ndarray:
    """R y R^t for any square (possibly complex) grid."""
    values = np.asarray(grid)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise InvalidInputError(f"the 2-D transform needs a square grid, got {values.shape}.")
    if values.shape[0] != kernel.dim:
        raise InvalidInputError(
            f"grid is {values.shape[0]}x{values.shape[1]} but the kernel is {kernel.dim}x{kernel.dim}."
        )

    if method == "dense":
        return kernel.entries @ values @ kernel.entries.T

    # R = V D V^t is complex symmetric, so R y R^t = V [(d d^t) * (V^t y V)] V^t.
    phases = kernel.diagonal.phases
    inner = kernel.vectors.T @ values @ kernel.vectors
    inner = inner * np.outer(phases, phases)
    return kernel.vectors @ inner @ kernel.vectors.T


def apply_2d(
    kernel: Kernel,
    y: GrayImage,
    *,
    method: Literal["factored", "dense"] = "factored",
) -> np.ndarray:
    if y.rows != y.cols:
        raise InvalidInputError(f"image must be square, got {y.rows}x{y.cols}.")
    return apply_2d_grid(kernel, y.pixels, method=method)


def even_odd_decompose(s: Signal | Sequence[complex] | np.ndarray) -> EvenOddParts:
    """s_e = (s + s^z) / 2 and s_o = (s - s^z) / 2.

    For odd lengths the middle sample lands entirely in the even part.
    """
    samples = as_signal(s).samples
    flipped = samples[::-1]
    return EvenOddParts(
        even=Signal((samples + flipped) / 2),
        odd=Signal((samples - flipped) / 2),
    )


def redfrnt_fast(
    basis: SpectralBasis,
    alpha: float,
    m: float,
    s: Signal | Sequence[complex] | np.ndarray,
    *,
    sine_basis: SpectralBasis | None = None,
) -> Spectrum:
    """2N or 2N+1 point reconstructed transform from two N-point kernels."""
    signal = as_signal(s)
    n = basis.n
    length = len(signal)
    if length == 2 * n:
        family = KernelFamily.REDFRNT_EVEN
    elif length == 2 * n + 1:
        family = KernelFamily.REDFRNT_ODD
    else:
        raise InvalidLengthError(
            f"the fast path for N={n} needs {2 * n} or {2 * n + 1} samples, got {length}."
        )

    cosine = build_kernel(basis, KernelSpec(KernelFamily.DFRNCT, alpha, m, n))
    sine = build_kernel(
        basis if sine_basis is None else sine_basis,
        KernelSpec(KernelFamily.DFRNST, alpha, m, n),
    )

    parts = even_odd_decompose(signal)
    even_half = cosine.entries @ parts.even.samples[:n]
    odd_half = sine.entries @ parts.odd.samples[:n]

    output = np.empty(length, dtype=np.complex128)
    output[:n] = even_half + odd_half
    output[length - n :] = (even_half - odd_half)[::-1]
    spec = KernelSpec(family, alpha, m, n)
    if family is KernelFamily.REDFRNT_ODD:
        middle_turns = np.mod(2 * n * alpha / m, 1.0)
        output[n] = signal.samples[n] * np.exp(-2j * np.pi * middle_turns)
    return Spectrum(values=output, spec=spec)


def special_phase(spec: Spectrum) -> np.ndarray:
    """Phase folded modulo pi into [-pi/2, pi/2]; NaN where amplitude is ~0."""
    phase = spec.phase
    folded = phase - np.pi * np.round(phase / np.pi)
    return np.where(spec.phase_defined, folded, np.nan)


def energy(values: Spectrum | Signal | Sequence[complex] | np.ndarray) -> float:
    if isinstance(values, Spectrum):
        data = values.values
    elif isinstance(values, Signal):
        data = values.samples
    else:
        data = np.asarray(values)
    return float(np.sum(np.abs(data) ** 2))


def mirror_defect(values: np.ndarray) -> float:
    """max |v(n) - v(L+1-n)|."""
    data = np.asarray(values)
    return float(np.max(np.abs(data - data[::-1]))) if data.size else 0.0


def phase_mirror_defect(
    phases: np.ndarray, defined: np.ndarray, *, period: float = 2 * np.pi
) -> float:
    """Largest circular distance between mirrored phases where both are defined."""
    mask = defined & defined[::-1]
    if not np.any(mask):
        return 0.0
    with np.errstate(invalid="ignore"):
        delta = np.mod(phases - phases[::-1] + period / 2, period) - period / 2
    return float(np.max(np.abs(delta[mask])))


def odd_phase_relation_defect(spectrum: Spectrum) -> float:
    """Distance of phi(n) - phi(L+1-n) from +-pi, modulo 2 pi."""
    phase = spectrum.phase
    defined = spectrum.phase_defined
    mask = defined & defined[::-1]
    if not np.any(mask):
        return 0.0
    delta = np.mod(phase - phase[::-1], 2 * np.pi) - np.pi
    return float(np.max(np.abs(delta[mask])))


def grid_symmetry_defect(grid: np.ndarray, symmetry: Symmetry) -> float:
    values = np.asarray(grid)
    if symmetry == "up_down":
        mirrored = values[::-1, :]
    elif symmetry == "left_right":
        mirrored = values[:, ::-1]
    else:
        mirrored = values.T
    return float(np.max(np.abs(values - mirrored)))


def image_symmetries(grid: np.ndarray, *, tolerance: float = 0.0) -> frozenset[Symmetry]:
    """Mirror symmetries a grid has within ``tolerance``."""
    candidates: tuple[Symmetry, ...] = ("up_down", "left_right", "transpose")
    values = np.asarray(grid)
    return frozenset(
        symmetry
        for symmetry in candidates
        if (symmetry != "transpose" or values.shape[0] == values.shape[1])
        and grid_symmetry_defect(values, symmetry) <= tolerance
    )

"""Seeded random matrices P and their symmetrization Q = (P + P^t) / 2.

The generator is SplitMix64: the state advances by the 64-bit golden
ratio constant and each output is the mixed state. A float in [0, 1) is
the top 53 output bits scaled by 2**-53. Because the mixer only depends
on the state, ``fill`` evaluates a whole block at once with numpy
uint64 arithmetic and produces the same values as repeated
``next_u64`` calls.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDimensionError

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MULTIPLIER_1 = 0xBF58476D1CE4E5B9
MIX_MULTIPLIER_2 = 0x94D049BB133111EB
MASK_64 = (1 << 64) - 1
FLOAT_SCALE = 2.0**-53
CSV_FLOAT_FORMAT = "%.17g"


def readonly(values: object, dtype: type | np.dtype | None = None) -> np.ndarray:
    """Copy ``values`` into an array that refuses in-place writes."""
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * MIX_MULTIPLIER_1) & MASK_64
    z = ((z ^ (z >> 27)) * MIX_MULTIPLIER_2) & MASK_64
    return z ^ (z >> 31)


def _mix_block(states: np.ndarray) -> np.ndarray:
    z = states
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX_MULTIPLIER_1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_MULTIPLIER_2)
    return z ^ (z >> np.uint64(31))


@dataclass
class SeededStream:
    """Single-owner SplitMix64 stream; not safe to share while emitting."""

    seed: int
    state: int = field(init=False)

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= MASK_64:
            raise ValueError("seed must fit in 64 unsigned bits.")
        self.state = self.seed

    def reseed(self, seed: int | None = None) -> None:
        if seed is not None:
            self.seed = seed
        self.__post_init__()

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK_64
        return _mix(self.state)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * FLOAT_SCALE

    def fill(self, count: int) -> np.ndarray:
        """Emit ``count`` floats in [0, 1) and advance the stream past them."""
        if count < 0:
            raise ValueError("count must be non-negative.")
        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            states = steps * np.uint64(GOLDEN_GAMMA) + np.uint64(self.state)
            words = _mix_block(states)
        self.state = (self.state + count * GOLDEN_GAMMA) & MASK_64
        return (words >> np.uint64(11)).astype(np.float64) * FLOAT_SCALE


def new_stream(seed: int) -> SeededStream:
    return SeededStream(seed)


@dataclass(frozen=True)
class RandomMatrixP:
    """Real n x n matrix with entries uniform in [0, 1), filled row-major."""

    n: int
    entries: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", readonly(self.entries, np.float64))
        if self.entries.shape != (self.n, self.n):
            raise InvalidDimensionError(
                f"expected a {self.n}x{self.n} matrix, got shape {self.entries.shape}."
            )


@dataclass(frozen=True)
class SymmetricMatrixQ:
    """Exactly symmetric real matrix derived from a RandomMatrixP."""

    n: int
    entries: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", readonly(self.entries, np.float64))
        if self.entries.shape != (self.n, self.n):
            raise InvalidDimensionError(
                f"expected a {self.n}x{self.n} matrix, got shape {self.entries.shape}."
            )

    @property
    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.entries))


def random_matrix(seed: int, n: int) -> RandomMatrixP:
    """Draw the n*n entries of P row-major from a fresh stream."""
    if n < 1:
        raise InvalidDimensionError(f"matrix dimension must be >= 1, got {n}.")
    values = new_stream(seed).fill(n * n).reshape(n, n)
    return RandomMatrixP(n=n, entries=values, seed=seed)


def symmetrize(p: RandomMatrixP) -> SymmetricMatrixQ:
    """Q = (P + P^t) / 2 with each unordered pair computed once and mirrored."""
    rows, cols = np.triu_indices(p.n)
    upper = (p.entries[rows, cols] + p.entries[cols, rows]) / 2
    q = np.empty((p.n, p.n), dtype=np.float64)
    q[rows, cols] = upper
    q[cols, rows] = upper
    return SymmetricMatrixQ(n=p.n, entries=q, seed=p.seed)


def random_complex_signal(stream: SeededStream, length: int) -> np.ndarray:
    """Complex samples with real and imaginary parts uniform in [-1, 1)."""
    values = stream.fill(2 * length) * 2.0 - 1.0
    return values[0::2] + 1j * values[1::2]

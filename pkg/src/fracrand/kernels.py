"""Complex unitary kernels R = V D^alpha V^t for the fractional random transforms."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .eigenbasis import SpectralBasis
from .errors import (
    InvalidCompositionError,
    InvalidDimensionError,
    InvalidPeriodError,
    InvalidSpecError,
)
from .randmat import readonly

UNITARITY_TOLERANCE = 1e-10
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class KernelFamily(str, Enum):
    DFRNT = "dfrnt"
    DFRNCT = "dfrnct"
    DFRNST = "dfrnst"
    REDFRNT_EVEN = "redfrnt_even"
    REDFRNT_ODD = "redfrnt_odd"

    @property
    def is_reconstructed(self) -> bool:
        return self in (KernelFamily.REDFRNT_EVEN, KernelFamily.REDFRNT_ODD)

    @property
    def parity(self) -> Parity | None:
        if self is KernelFamily.REDFRNT_EVEN:
            return Parity.EVEN
        if self is KernelFamily.REDFRNT_ODD:
            return Parity.ODD
        return None

    def dimension(self, n: int) -> int:
        if self is KernelFamily.REDFRNT_EVEN:
            return 2 * n
        if self is KernelFamily.REDFRNT_ODD:
            return 2 * n + 1
        return n

    def exponents(self, n: int) -> np.ndarray:
        """Integer exponent e_k of exp(-2i pi e_k alpha / M), k 0-based."""
        k = np.arange(self.dimension(n), dtype=np.float64)
        if self is KernelFamily.DFRNCT:
            return 2.0 * k
        if self is KernelFamily.DFRNST:
            return 2.0 * k + 1.0
        return k


class Parity(str, Enum):
    EVEN = "even_2N"
    ODD = "odd_2N_plus_1"


@dataclass(frozen=True)
class KernelSpec:
    """Family, fractional order, period and basis size of one kernel."""

    family: KernelFamily
    alpha: float
    m: float
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", KernelFamily(self.family))
        if not self.m > 0:
            raise InvalidPeriodError(f"period M must be positive, got {self.m}.")
        if self.n < 1:
            raise InvalidDimensionError(f"basis size must be >= 1, got {self.n}.")

    @property
    def dim(self) -> int:
        return self.family.dimension(self.n)

    def with_alpha(self, alpha: float) -> KernelSpec:
        return replace(self, alpha=alpha)

    def describe(self) -> str:
        return f"family={self.family.value} alpha={self.alpha!r} m={self.m!r} n={self.n}"


@dataclass(frozen=True, eq=False)
class EigenvalueDiagonal:
    dim: int
    phases: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "phases", readonly(self.phases, np.complex128))


@dataclass(frozen=True, eq=False)
class Kernel:
    """Dense kernel matrix plus the factors it was built from."""

    spec: KernelSpec
    entries: np.ndarray
    vectors: np.ndarray
    diagonal: EigenvalueDiagonal
    basis_digest: str
    basis_seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", readonly(self.entries, np.complex128))
        object.__setattr__(self, "vectors", readonly(self.vectors, np.float64))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def eigenvalue_diagonal(spec: KernelSpec) -> EigenvalueDiagonal:
    if not spec.m > 0:
        raise InvalidPeriodError(f"period M must be positive, got {spec.m}.")
    # Reducing to whole turns first keeps exp() accurate for large exponents.
    turns = np.mod(spec.family.exponents(spec.n) * spec.alpha / spec.m, 1.0)
    return EigenvalueDiagonal(dim=spec.dim, phases=np.exp(-2j * np.pi * turns))


def assemble_redfrnt_basis(
    basis: SpectralBasis,
    parity: Parity | str,
    *,
    sine_basis: SpectralBasis | None = None,
) -> SpectralBasis:
    """Interleave [c; c^z] and [s; -s^z] columns into a 2N or 2N+1 basis.

    ``sine_basis`` defaults to ``basis`` (c_n = s_n = v_n).
    """
    parity = Parity(parity)
    sines = basis if sine_basis is None else sine_basis
    if sines.n != basis.n:
        raise InvalidSpecError(
            f"cosine and sine bases differ in size ({basis.n} vs {sines.n})."
        )

    n = basis.n
    cos_vectors = basis.vectors
    sin_vectors = sines.vectors
    dim = 2 * n if parity is Parity.EVEN else 2 * n + 1
    lower = n if parity is Parity.EVEN else n + 1

    vectors = np.zeros((dim, dim), dtype=np.float64)
    vectors[:n, 0 : 2 * n : 2] = cos_vectors
    vectors[lower:, 0 : 2 * n : 2] = cos_vectors[::-1, :]
    vectors[:n, 1 : 2 * n : 2] = sin_vectors
    vectors[lower:, 1 : 2 * n : 2] = -sin_vectors[::-1, :]
    vectors *= _INV_SQRT2

    eigenvalues = np.zeros(dim, dtype=np.float64)
    eigenvalues[0 : 2 * n : 2] = basis.q_eigenvalues
    eigenvalues[1 : 2 * n : 2] = sines.q_eigenvalues
    if parity is Parity.ODD:
        vectors[n, 2 * n] = 1.0

    return SpectralBasis(
        n=dim, vectors=vectors, q_eigenvalues=eigenvalues, seed=basis.seed
    )


def column_symmetry_defect(basis: SpectralBasis) -> float:
    """Largest deviation of an assembled basis from its column parity pattern.

    Columns 0, 2, 4, ... (cosine halves and the odd-size middle column) are
    reversal-symmetric; columns 1, 3, 5, ... (sine halves) are antisymmetric.
    """
    vectors = basis.vectors
    signs = np.ones(vectors.shape[1])
    signs[1::2] = -1.0
    return float(np.max(np.abs(vectors[::-1, :] - vectors * signs)))


def _basis_digest(basis: SpectralBasis, sine_basis: SpectralBasis | None) -> str:
    if sine_basis is None or sine_basis is basis:
        return basis.digest
    return f"{basis.digest}+{sine_basis.digest}"


def build_kernel(
    basis: SpectralBasis,
    spec: KernelSpec,
    *,
    sine_basis: SpectralBasis | None = None,
) -> Kernel:
    """R = V_family D^alpha V_family^t as a dense complex matrix."""
    if basis.n != spec.n:
        raise InvalidSpecError(
            f"basis has size {basis.n} but the kernel spec asks for n={spec.n}."
        )

    if spec.family.is_reconstructed:
        assert spec.family.parity is not None
        vectors = assemble_redfrnt_basis(
            basis, spec.family.parity, sine_basis=sine_basis
        ).vectors
        digest = _basis_digest(basis, sine_basis)
    else:
        vectors = basis.vectors
        digest = basis.digest

    diagonal = eigenvalue_diagonal(spec)
    entries = (vectors * diagonal.phases[None, :]) @ vectors.T
    return Kernel(
        spec=spec,
        entries=entries,
        vectors=vectors,
        diagonal=diagonal,
        basis_digest=digest,
        basis_seed=basis.seed,
    )


def kernel_power_compose(a: Kernel, b: Kernel) -> Kernel:
    """R^alpha R^beta for two kernels of one family on one basis."""
    if a.spec.family is not b.spec.family:
        raise InvalidCompositionError(
            f"cannot compose {a.spec.family.value} with {b.spec.family.value}."
        )
    if a.basis_digest != b.basis_digest or a.dim != b.dim:
        raise InvalidCompositionError("kernels were built on different bases.")
    if a.spec.m != b.spec.m:
        raise InvalidCompositionError(
            f"kernels use different periods ({a.spec.m} vs {b.spec.m})."
        )

    return Kernel(
        spec=a.spec.with_alpha(a.spec.alpha + b.spec.alpha),
        entries=a.entries @ b.entries,
        vectors=a.vectors,
        diagonal=EigenvalueDiagonal(
            dim=a.diagonal.dim, phases=a.diagonal.phases * b.diagonal.phases
        ),
        basis_digest=a.basis_digest,
        basis_seed=a.basis_seed,
    )


def inverse_kernel(kernel: Kernel) -> Kernel:
    """(R^alpha)^* = R^-alpha."""
    return Kernel(
        spec=kernel.spec.with_alpha(-kernel.spec.alpha),
        entries=np.conj(kernel.entries).T,
        vectors=kernel.vectors,
        diagonal=EigenvalueDiagonal(
            dim=kernel.diagonal.dim, phases=np.conj(kernel.diagonal.phases)
        ),
        basis_digest=kernel.basis_digest,
        basis_seed=kernel.basis_seed,
    )


def max_abs_difference(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def unitarity_defect(kernel: Kernel) -> float:
    """max |R R^* - I|."""
    product = kernel.entries @ np.conj(kernel.entries).T
    return max_abs_difference(product, np.eye(kernel.dim))

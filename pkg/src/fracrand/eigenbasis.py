"""Orthonormal eigenbasis of the symmetric random matrix Q.

The solver is a cyclic Jacobi method whose sweep visits every index pair
once, grouped into n - 1 rounds of disjoint pairs (round-robin order).
Rotations inside a round touch disjoint rows and columns, so a round is
applied as one vectorized update. The order is fixed, which makes the
result a pure function of Q.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cache, cached_property, lru_cache
from pathlib import Path

import numpy as np

from .errors import ConvergenceError, InvalidDimensionError, InvalidSpecError
from .randmat import (
    CSV_FLOAT_FORMAT,
    SymmetricMatrixQ,
    random_matrix,
    readonly,
    symmetrize,
)

SOLVER_VERSION = "jacobi-round-robin/1"
DEFAULT_THRESHOLD = 1e-14
DEFAULT_MAX_SWEEPS = 100
ORTHONORMALITY_TOLERANCE = 1e-10
BASIS_FORMAT = "fracrand-basis"


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Columns v_1..v_N of V, ordered by descending Q-eigenvalue."""

    n: int
    vectors: np.ndarray
    q_eigenvalues: np.ndarray
    seed: int
    solver: str = SOLVER_VERSION

    def __post_init__(self) -> None:
        object.__setattr__(self, "vectors", readonly(self.vectors, np.float64))
        object.__setattr__(
            self, "q_eigenvalues", readonly(self.q_eigenvalues, np.float64)
        )
        if self.vectors.shape != (self.n, self.n):
            raise InvalidDimensionError(
                f"basis vectors must be {self.n}x{self.n}, got {self.vectors.shape}."
            )
        if self.q_eigenvalues.shape != (self.n,):
            raise InvalidDimensionError(
                f"expected {self.n} eigenvalues, got {self.q_eigenvalues.shape}."
            )

    @cached_property
    def digest(self) -> str:
        """Content fingerprint used as basis provenance."""
        return hashlib.sha256(self.vectors.tobytes()).hexdigest()[:16]


@cache
def _round_robin_rounds(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    players = list(range(n + (n % 2)))
    count = len(players)
    rounds: list[tuple[np.ndarray, np.ndarray]] = []
    for _ in range(count - 1):
        pairs = []
        for i in range(count // 2):
            first, second = players[i], players[count - 1 - i]
            if first >= n or second >= n:
                continue
            pairs.append((min(first, second), max(first, second)))
        pairs.sort()
        p_index = np.array([pair[0] for pair in pairs], dtype=np.intp)
        q_index = np.array([pair[1] for pair in pairs], dtype=np.intp)
        rounds.append((p_index, q_index))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.square(a - np.diag(np.diag(a))))))


def _rotate_round(a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray) -> None:
    apq = a[p, q]
    app = a[p, p]
    aqq = a[q, q]
    active = apq != 0.0

    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        theta = np.where(active, (aqq - app) / (2.0 * apq), 0.0)
        sign = np.where(theta >= 0.0, 1.0, -1.0)
        huge = np.abs(theta) > 1e150
        t = np.where(
            huge,
            0.5 / theta,
            sign / (np.abs(theta) + np.sqrt(theta * theta + 1.0)),
        )
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    col_p = a[:, p]
    col_q = a[:, q]
    a[:, p] = col_p * c - col_q * s
    a[:, q] = col_p * s + col_q * c

    row_p = a[p, :]
    row_q = a[q, :]
    a[p, :] = c[:, None] * row_p - s[:, None] * row_q
    a[q, :] = s[:, None] * row_p + c[:, None] * row_q

    a[p, q] = 0.0
    a[q, p] = 0.0

    vec_p = v[:, p]
    vec_q = v[:, q]
    v[:, p] = vec_p * c - vec_q * s
    v[:, q] = vec_p * s + vec_q * c


def _apply_conventions(
    eigenvalues: np.ndarray, vectors: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    # Stable sort keeps pre-sort column order for equal eigenvalues.
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    vectors = vectors[:, order].copy()

    # argmax returns the lowest index among equal magnitudes.
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.where(vectors[pivots, np.arange(vectors.shape[1])] < 0.0, -1.0, 1.0)
    vectors *= signs[None, :]
    return eigenvalues, vectors


def eigendecompose(
    q: SymmetricMatrixQ,
    *,
    threshold: float = DEFAULT_THRESHOLD,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> SpectralBasis:
    """Diagonalize Q with cyclic Jacobi sweeps and normalize the basis."""
    n = q.n
    a = np.array(q.entries, dtype=np.float64, copy=True)
    v = np.eye(n, dtype=np.float64)
    rounds = _round_robin_rounds(n)

    # Threshold is relative to ||Q||_F, floored at 1 for near-zero matrices.
    limit = threshold * max(q.frobenius_norm, 1.0)
    off_norm = _off_diagonal_norm(a)
    sweeps = 0
    while off_norm > limit:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge within {max_sweeps} sweeps.",
                off_norm=off_norm,
                sweeps=sweeps,
            )
        for p_index, q_index in rounds:
            _rotate_round(a, v, p_index, q_index)
        a = (a + a.T) / 2.0
        sweeps += 1
        off_norm = _off_diagonal_norm(a)

    eigenvalues, vectors = _apply_conventions(np.diag(a).copy(), v)
    return SpectralBasis(n=n, vectors=vectors, q_eigenvalues=eigenvalues, seed=q.seed)


@lru_cache(maxsize=32)
def basis_for_seed(seed: int, n: int) -> SpectralBasis:
    """P -> Q -> V for one (seed, n); cached because bases are immutable."""
    return eigendecompose(symmetrize(random_matrix(seed, n)))


def orthogonality_defect(basis: SpectralBasis) -> float:
    gram = basis.vectors.T @ basis.vectors
    return float(np.max(np.abs(gram - np.eye(basis.n))))


def eigen_residual(basis: SpectralBasis, q: SymmetricMatrixQ) -> float:
    """Largest ||Q v_k - lambda_k v_k||_2 over all columns."""
    residual = q.entries @ basis.vectors - basis.vectors * basis.q_eigenvalues[None, :]
    return float(np.max(np.linalg.norm(residual, axis=0)))


def reconstruction_defect(basis: SpectralBasis, q: SymmetricMatrixQ) -> float:
    rebuilt = (basis.vectors * basis.q_eigenvalues[None, :]) @ basis.vectors.T
    return float(np.max(np.abs(rebuilt - q.entries)))


def save_basis(basis: SpectralBasis, header_path: Path | str) -> Path:
    """Write the header JSON at ``header_path`` and the vectors CSV beside it."""
    header_file = Path(header_path)
    vectors_file = header_file.with_suffix(".csv")
    header_file.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(vectors_file, basis.vectors, fmt=CSV_FLOAT_FORMAT, delimiter=",")
    payload = {
        "format": BASIS_FORMAT,
        "solver": basis.solver,
        "seed": basis.seed,
        "n": basis.n,
        "vectors_file": vectors_file.name,
        "q_eigenvalues": [float(value) for value in basis.q_eigenvalues],
    }
    header_file.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return vectors_file


def load_basis(header_path: Path | str) -> SpectralBasis:
    """Rebuild a SpectralBasis from files written by ``save_basis``."""
    header_file = Path(header_path)
    try:
        payload = json.loads(header_file.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidSpecError(f"{header_file} is not a basis header: {exc}") from exc

    if not isinstance(payload, dict) or payload.get("format") != BASIS_FORMAT:
        raise InvalidSpecError(f"{header_file} is not a fracrand basis header.")

    n = payload.get("n")
    seed = payload.get("seed")
    if not isinstance(n, int) or not isinstance(seed, int):
        raise InvalidSpecError(f"{header_file} is missing integer 'n' or 'seed'.")

    vectors_file = header_file.parent / str(payload.get("vectors_file", ""))
    vectors = np.loadtxt(vectors_file, delimiter=",", ndmin=2, dtype=np.float64)
    basis = SpectralBasis(
        n=n,
        vectors=vectors,
        q_eigenvalues=np.asarray(payload.get("q_eigenvalues", []), dtype=np.float64),
        seed=seed,
        solver=str(payload.get("solver", SOLVER_VERSION)),
    )
    defect = orthogonality_defect(basis)
    if defect > ORTHONORMALITY_TOLERANCE:
        raise InvalidSpecError(
            f"{vectors_file} is not orthonormal (defect {defect:.3e})."
        )
    return basis

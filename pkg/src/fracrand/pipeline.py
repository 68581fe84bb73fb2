"""Command workflows shared by the CLI: verification, figures and scrambling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import Settings
from .eigenbasis import (
    SpectralBasis,
    basis_for_seed,
    eigen_residual,
    eigendecompose,
    load_basis,
    orthogonality_defect,
)
from .errors import InvalidInputError, InvalidLengthError, InvalidSpecError
from .kernels import (
    Kernel,
    KernelFamily,
    KernelSpec,
    Parity,
    assemble_redfrnt_basis,
    build_kernel,
    column_symmetry_defect,
    inverse_kernel,
    kernel_power_compose,
    max_abs_difference,
    unitarity_defect,
)
from .randmat import new_stream, random_complex_signal, random_matrix, symmetrize
from .signals_io import (
    FIGURE_IMAGE_PRESETS,
    ReferenceSignal,
    amplitude_image,
    make_test_signal,
    write_complex_grid_csv,
    write_pgm,
    write_spectrum_csv,
    write_svg_plot,
)
from .transform import (
    GrayImage,
    Spectrum,
    apply_1d,
    apply_2d,
    apply_2d_grid,
    energy,
    even_odd_decompose,
    grid_symmetry_defect,
    image_symmetries,
    mirror_defect,
    odd_phase_relation_defect,
    phase_mirror_defect,
    redfrnt_fast,
    special_phase,
)

KERNEL_TOLERANCE = 1e-10
ROUND_TRIP_TOLERANCE = 1e-9
SYMMETRY_TOLERANCE = 1e-8
ADDITIVITY_ORDERS = (0.3, 0.4)
PARSEVAL_SIGNALS = 100
FAST_PATH_SIGNALS = 50
FIGURE_BASIS_SIZE = 64
# Offsets the test-signal stream from the matrix stream of the same seed.
SIGNAL_STREAM_SALT = 0x5EED5EED


@dataclass(frozen=True)
class CheckResult:
    name: str
    defect: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.defect) and self.defect <= self.tolerance


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(check for check in self.checks if not check.passed)


@dataclass(frozen=True)
class FiguresResult:
    written: tuple[Path, ...]
    coincidence: dict[str, float] = field(default_factory=dict)


def resolve_basis(
    settings: Settings, n: int, *, basis_path: Path | str | None = None
) -> SpectralBasis:
    """An exported basis when one is given, otherwise the seeded pipeline."""
    if basis_path is None:
        return basis_for_seed(settings.seed, n)
    basis = load_basis(basis_path)
    if basis.n != n:
        raise InvalidSpecError(
            f"{basis_path} holds an {basis.n}-point basis but {n} points are needed."
        )
    return basis


def resolve_sine_basis(settings: Settings, n: int) -> SpectralBasis | None:
    if settings.sine_seed is None:
        return None
    return basis_for_seed(settings.sine_seed, n)


def basis_size_for(family: KernelFamily | str, length: int) -> int:
    """Basis size N whose kernel has ``length`` points."""
    family = KernelFamily(family)
    if family is KernelFamily.REDFRNT_EVEN:
        if length < 2 or length % 2:
            raise InvalidLengthError(f"{family.value} needs an even length, got {length}.")
        return length // 2
    if family is KernelFamily.REDFRNT_ODD:
        if length < 3 or length % 2 == 0:
            raise InvalidLengthError(f"{family.value} needs an odd length >= 3, got {length}.")
        return (length - 1) // 2
    if length < 1:
        raise InvalidLengthError("signal must not be empty.")
    return length


def kernel_for(
    settings: Settings,
    family: KernelFamily | str,
    n: int,
    *,
    alpha: float | None = None,
    basis_path: Path | str | None = None,
) -> Kernel:
    spec = KernelSpec(family, settings.alpha if alpha is None else alpha, settings.m, n)
    basis = resolve_basis(settings, n, basis_path=basis_path)
    sine_basis = resolve_sine_basis(settings, n) if spec.family.is_reconstructed else None
    return build_kernel(basis, spec, sine_basis=sine_basis)


def transform_signal(
    settings: Settings,
    family: KernelFamily | str,
    samples: np.ndarray,
    *,
    inverse: bool = False,
    fast: bool = False,
    basis_path: Path | str | None = None,
) -> Spectrum:
    family = KernelFamily(family)
    n = basis_size_for(family, int(np.size(samples)))
    if fast:
        if not family.is_reconstructed:
            raise InvalidSpecError("the fast path only applies to the reconstructed families.")
        alpha = -settings.alpha if inverse else settings.alpha
        return redfrnt_fast(
            resolve_basis(settings, n, basis_path=basis_path),
            alpha,
            settings.m,
            samples,
            sine_basis=resolve_sine_basis(settings, n),
        )
    kernel = kernel_for(settings, family, n, basis_path=basis_path)
    return apply_1d(inverse_kernel(kernel) if inverse else kernel, samples)


def transform_grid(
    settings: Settings,
    family: KernelFamily | str,
    grid: np.ndarray,
    *,
    inverse: bool = False,
    basis_path: Path | str | None = None,
) -> np.ndarray:
    values = np.asarray(grid)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise InvalidInputError(f"the 2-D transform needs a square grid, got {values.shape}.")
    n = basis_size_for(family, values.shape[0])
    kernel = kernel_for(settings, family, n, basis_path=basis_path)
    return apply_2d_grid(inverse_kernel(kernel) if inverse else kernel, values)


def grid_to_image(grid: np.ndarray) -> GrayImage:
    """Real part clipped into [0, 1]."""
    return GrayImage(np.clip(np.real(grid), 0.0, 1.0))


def normalized_mse(recovered: np.ndarray, reference: np.ndarray) -> float:
    reference = np.asarray(reference, dtype=np.float64)
    scale = float(np.sum(reference**2))
    error = float(np.sum((np.asarray(recovered, dtype=np.float64) - reference) ** 2))
    return error / scale if scale > 0 else error


def scramble_image(
    settings: Settings,
    image: GrayImage,
    *,
    family: KernelFamily | str = KernelFamily.DFRNT,
) -> np.ndarray:
    """Forward 2-D transform keyed by (seed, alpha); the result is complex."""
    if image.rows != image.cols:
        raise InvalidInputError(f"image must be square, got {image.rows}x{image.cols}.")
    n = basis_size_for(family, image.rows)
    return apply_2d(kernel_for(settings, family, n), image)


def unscramble_grid(
    settings: Settings,
    grid: np.ndarray,
    *,
    family: KernelFamily | str = KernelFamily.DFRNT,
) -> GrayImage:
    return grid_to_image(transform_grid(settings, family, grid, inverse=True))


def _check(name: str, defect: float, tolerance: float, override: float | None) -> CheckResult:
    return CheckResult(name=name, defect=float(defect), tolerance=tolerance if override is None else override)


def _relative_energy_error(outputs: np.ndarray, inputs: np.ndarray, axis: tuple[int, ...]) -> float:
    before = np.sum(np.abs(inputs) ** 2, axis=axis)
    after = np.sum(np.abs(outputs) ** 2, axis=axis)
    return float(np.max(np.abs(after - before) / before))


def _kernel_checks(
    settings: Settings,
    basis: SpectralBasis,
    sine_basis: SpectralBasis | None,
    inject_mismatch: float,
) -> list[CheckResult]:
    override = settings.tolerance
    n = basis.n
    m = settings.m
    alpha = settings.alpha

    def kernel(family: KernelFamily, order: float) -> Kernel:
        extra = sine_basis if family.is_reconstructed else None
        return build_kernel(basis, KernelSpec(family, order, m, n), sine_basis=extra)

    checks: list[CheckResult] = []
    first, second = ADDITIVITY_ORDERS
    for family in KernelFamily:
        dim = family.dimension(n)
        identity = np.eye(dim)
        checks.append(
            _check(f"unitarity[{family.value}]", unitarity_defect(kernel(family, alpha)), KERNEL_TOLERANCE, override)
        )

        left = kernel(family, first)
        right = kernel(family, second + inject_mismatch)
        composed = kernel_power_compose(left, right)
        checks.append(
            _check(
                f"additivity[{family.value}]",
                max_abs_difference(composed.entries, kernel(family, first + second).entries),
                KERNEL_TOLERANCE,
                override,
            )
        )
        checks.append(
            _check(
                f"commutation[{family.value}]",
                max_abs_difference(left.entries @ right.entries, right.entries @ left.entries),
                KERNEL_TOLERANCE,
                override,
            )
        )

        period = m / 2 if family is KernelFamily.DFRNCT else m
        checks.append(
            _check(
                f"periodicity[{family.value}]",
                max_abs_difference(kernel(family, alpha + period).entries, kernel(family, alpha).entries),
                KERNEL_TOLERANCE,
                override,
            )
        )
        checks.append(
            _check(f"identity_at_zero[{family.value}]", max_abs_difference(kernel(family, 0.0).entries, identity), KERNEL_TOLERANCE, override)
        )

    half = m / 2
    checks.append(
        _check(
            "half_period[dfrnct]",
            max_abs_difference(kernel(KernelFamily.DFRNCT, half).entries, np.eye(n)),
            KERNEL_TOLERANCE,
            override,
        )
    )
    checks.append(
        _check(
            "half_period[dfrnst]",
            max_abs_difference(kernel(KernelFamily.DFRNST, half).entries, -np.eye(n)),
            KERNEL_TOLERANCE,
            override,
        )
    )

    doubled = kernel(KernelFamily.DFRNT, 2 * alpha).entries
    checks.append(
        _check(
            "subset[dfrnct]",
            max_abs_difference(kernel(KernelFamily.DFRNCT, alpha).entries, doubled),
            KERNEL_TOLERANCE,
            override,
        )
    )
    shift = np.exp(-2j * np.pi * np.mod(alpha / m, 1.0))
    checks.append(
        _check(
            "subset[dfrnst]",
            max_abs_difference(kernel(KernelFamily.DFRNST, alpha).entries, shift * doubled),
            KERNEL_TOLERANCE,
            override,
        )
    )
    return checks


def _signal_checks(
    settings: Settings, basis: SpectralBasis, sine_basis: SpectralBasis | None
) -> list[CheckResult]:
    override = settings.tolerance
    n = basis.n
    stream = new_stream(settings.seed ^ SIGNAL_STREAM_SALT)

    def family_kernel(family: KernelFamily) -> Kernel:
        extra = sine_basis if family.is_reconstructed else None
        return build_kernel(basis, KernelSpec(family, settings.alpha, settings.m, n), sine_basis=extra)

    checks: list[CheckResult] = []
    for family in KernelFamily:
        family_entries = family_kernel(family).entries
        dim = family_entries.shape[0]
        signals = np.stack([random_complex_signal(stream, dim) for _ in range(PARSEVAL_SIGNALS)], axis=1)
        checks.append(
            _check(
                f"parseval_1d[{family.value}]",
                _relative_energy_error(family_entries @ signals, signals, (0,)),
                KERNEL_TOLERANCE,
                override,
            )
        )
        a, b = random_complex_signal(stream, 2)
        first, second = signals[:, 0], signals[:, 1]
        combined = family_entries @ (a * first + b * second)
        separate = a * (family_entries @ first) + b * (family_entries @ second)
        checks.append(
            _check(f"linearity[{family.value}]", max_abs_difference(combined, separate), KERNEL_TOLERANCE, override)
        )

    kernel = family_kernel(KernelFamily.DFRNT)

    image = GrayImage(stream.fill(n * n).reshape(n, n))
    factored = apply_2d(kernel, image)
    checks.append(
        _check(
            "parseval_2d[dfrnt]",
            abs(energy(factored.ravel()) - energy(image.pixels.ravel())) / energy(image.pixels.ravel()),
            ROUND_TRIP_TOLERANCE,
            override,
        )
    )
    dense = apply_2d(kernel, image, method="dense")
    checks.append(_check("factored_vs_dense_2d", max_abs_difference(factored, dense), KERNEL_TOLERANCE, override))

    for parity in Parity:
        assembled = assemble_redfrnt_basis(basis, parity, sine_basis=sine_basis)
        label = f"redfrnt_{parity.name.lower()}"
        checks.append(_check(f"orthonormality[{label}]", orthogonality_defect(assembled), KERNEL_TOLERANCE, override))
        checks.append(
            _check(f"column_symmetry[{label}]", column_symmetry_defect(assembled), KERNEL_TOLERANCE, override)
        )

    for family in (KernelFamily.REDFRNT_EVEN, KernelFamily.REDFRNT_ODD):
        dense_kernel = family_kernel(family)
        worst = 0.0
        for _ in range(FAST_PATH_SIGNALS):
            signal = random_complex_signal(stream, dense_kernel.dim)
            fast = redfrnt_fast(basis, settings.alpha, settings.m, signal, sine_basis=sine_basis)
            worst = max(worst, max_abs_difference(fast.values, dense_kernel.entries @ signal))
        checks.append(_check(f"fast_path[{family.value}]", worst, ROUND_TRIP_TOLERANCE, override))
        checks.extend(_parity_symmetry_checks(dense_kernel, random_complex_signal(stream, dense_kernel.dim), override))
    return checks


def _parity_symmetry_checks(kernel: Kernel, samples: np.ndarray, override: float | None) -> list[CheckResult]:
    """Mirror properties of the spectra of the symmetric and antisymmetric parts of ``samples``."""
    label = kernel.spec.family.value
    parts = even_odd_decompose(samples)
    even = apply_1d(kernel, parts.even)
    odd = apply_1d(kernel, parts.odd)
    return [
        _check(f"even_amplitude[{label}]", mirror_defect(even.amplitude), ROUND_TRIP_TOLERANCE, override),
        _check(f"even_phase[{label}]", phase_mirror_defect(even.phase, even.phase_defined), SYMMETRY_TOLERANCE, override),
        _check(f"odd_amplitude[{label}]", mirror_defect(odd.amplitude), ROUND_TRIP_TOLERANCE, override),
        _check(f"odd_phase_relation[{label}]", odd_phase_relation_defect(odd), SYMMETRY_TOLERANCE, override),
        _check(
            f"odd_special_phase[{label}]",
            phase_mirror_defect(special_phase(odd), odd.phase_defined, period=np.pi),
            SYMMETRY_TOLERANCE,
            override,
        ),
    ]


@dataclass(frozen=True)
class ReferenceSpectra:
    """Spectra of the two rectangle signals and of their first halves."""

    even_full: Spectrum
    even_half: Spectrum
    odd_full: Spectrum
    odd_half: Spectrum


def reference_spectra(settings: Settings, basis: SpectralBasis) -> ReferenceSpectra:
    n = basis.n
    sine_basis = resolve_sine_basis(settings, n)
    x1 = make_test_signal(ReferenceSignal.X1_RECT_EVEN, 2 * n).samples
    x2 = make_test_signal(ReferenceSignal.X2_RECT_ODD, 2 * n).samples

    def kernel(family: KernelFamily, source: SpectralBasis) -> Kernel:
        extra = sine_basis if family.is_reconstructed else None
        return build_kernel(source, KernelSpec(family, settings.alpha, settings.m, n), sine_basis=extra)

    redfrnt = kernel(KernelFamily.REDFRNT_EVEN, basis)
    sines = basis if sine_basis is None else sine_basis
    return ReferenceSpectra(
        even_full=apply_1d(redfrnt, x1),
        even_half=apply_1d(kernel(KernelFamily.DFRNCT, basis), x1[:n]),
        odd_full=apply_1d(redfrnt, x2),
        odd_half=apply_1d(kernel(KernelFamily.DFRNST, sines), x2[:n]),
    )


def coincidence_defects(spectra: ReferenceSpectra) -> dict[str, float]:
    n = len(spectra.even_half)
    return {
        "dfrnct_vs_redfrnt[x1]": max_abs_difference(spectra.even_half.amplitude, spectra.even_full.amplitude[:n]),
        "dfrnst_vs_redfrnt[x2]": max_abs_difference(spectra.odd_half.amplitude, spectra.odd_full.amplitude[:n]),
    }


def _figure_checks(settings: Settings) -> list[CheckResult]:
    override = settings.tolerance
    basis = basis_for_seed(settings.seed, FIGURE_BASIS_SIZE)
    spectra = reference_spectra(settings, basis)
    checks = [
        _check(f"coincidence[{name}]", value, ROUND_TRIP_TOLERANCE, override)
        for name, value in coincidence_defects(spectra).items()
    ]

    even, odd = spectra.even_full, spectra.odd_full
    checks.extend(
        [
            _check("mirror_amplitude[x1]", mirror_defect(even.amplitude), ROUND_TRIP_TOLERANCE, override),
            _check("mirror_phase[x1]", phase_mirror_defect(even.phase, even.phase_defined), SYMMETRY_TOLERANCE, override),
            _check("mirror_amplitude[x2]", mirror_defect(odd.amplitude), ROUND_TRIP_TOLERANCE, override),
            _check("odd_phase_relation[x2]", odd_phase_relation_defect(odd), SYMMETRY_TOLERANCE, override),
            _check(
                "mirror_special_phase[x2]",
                phase_mirror_defect(special_phase(odd), odd.phase_defined, period=np.pi),
                SYMMETRY_TOLERANCE,
                override,
            ),
        ]
    )

    kernel = build_kernel(
        basis,
        KernelSpec(KernelFamily.REDFRNT_EVEN, settings.alpha, settings.m, FIGURE_BASIS_SIZE),
        sine_basis=resolve_sine_basis(settings, FIGURE_BASIS_SIZE),
    )
    for preset in FIGURE_IMAGE_PRESETS:
        image = preset.spec.render()
        declared = sorted(preset.symmetries)
        missing = set(declared) - image_symmetries(image.pixels)
        amplitude = np.abs(apply_2d(kernel, image))
        defect = max(grid_symmetry_defect(amplitude, symmetry) for symmetry in declared)
        checks.append(
            _check(
                f"image_symmetry[{preset.name}]",
                math.inf if missing else defect,
                ROUND_TRIP_TOLERANCE,
                override,
            )
        )
    return checks


def run_verification(settings: Settings, *, inject_mismatch: float = 0.0) -> VerifyReport:
    """Run every property check for the configured seed, order and period."""
    override = settings.tolerance
    q = symmetrize(random_matrix(settings.seed, settings.n))
    basis = basis_for_seed(settings.seed, settings.n)
    sine_basis = resolve_sine_basis(settings, settings.n)

    checks = [
        _check("orthonormality[basis]", orthogonality_defect(basis), KERNEL_TOLERANCE, override),
        _check(
            "eigen_residual[relative]",
            eigen_residual(basis, q) / max(q.frobenius_norm, 1.0),
            KERNEL_TOLERANCE,
            override,
        ),
        _check(
            "determinism[basis]",
            max_abs_difference(eigendecompose(q).vectors, basis.vectors),
            0.0,
            override,
        ),
    ]
    checks.extend(_kernel_checks(settings, basis, sine_basis, inject_mismatch))
    checks.extend(_signal_checks(settings, basis, sine_basis))
    checks.extend(_figure_checks(settings))
    return VerifyReport(checks=tuple(checks))


def _spectrum_series(spectrum: Spectrum) -> tuple[list[float], list[float]]:
    phase = np.where(spectrum.phase_defined, spectrum.phase, np.nan)
    return spectrum.amplitude.tolist(), phase.tolist()


def write_figures(settings: Settings, out_dir: Path | str) -> FiguresResult:
    """Spectrum CSVs, SVG plots and PGM images for the reference signals and images."""
    target = Path(out_dir)
    basis = basis_for_seed(settings.seed, FIGURE_BASIS_SIZE)
    spectra = reference_spectra(settings, basis)
    n = FIGURE_BASIS_SIZE
    title_suffix = f"alpha={settings.alpha:g}, M={settings.m:g}"
    written: list[Path] = []

    for signal_name, full, half, half_name in (
        ("x1", spectra.even_full, spectra.even_half, "DFRNCT"),
        ("x2", spectra.odd_full, spectra.odd_half, "DFRNST"),
    ):
        written.append(write_spectrum_csv(full, target / f"{signal_name}_redfrnt.csv"))
        written.append(write_spectrum_csv(half, target / f"{signal_name}_half_{half_name.lower()}.csv"))
        full_amplitude, full_phase = _spectrum_series(full)
        half_amplitude, half_phase = _spectrum_series(half)
        written.append(
            write_svg_plot(
                [full_amplitude, half_amplitude + [math.nan] * n],
                target / f"{signal_name}_amplitude.svg",
                labels=[f"ReDFRNT {signal_name}", f"{half_name} {signal_name}'"],
                title=f"Amplitude, {title_suffix}",
                y_label="|X(n)|",
            )
        )
        written.append(
            write_svg_plot(
                [full_phase, half_phase + [math.nan] * n],
                target / f"{signal_name}_phase.svg",
                labels=[f"ReDFRNT {signal_name}", f"{half_name} {signal_name}'"],
                title=f"Phase, {title_suffix}",
                y_label="phase (rad)",
            )
        )

    odd = spectra.odd_full
    written.append(
        write_svg_plot(
            [np.where(odd.phase_defined, odd.phase, np.nan).tolist(), special_phase(odd).tolist()],
            target / "x2_special_phase.svg",
            labels=["phase", "special phase"],
            title=f"ReDFRNT x2 phase, {title_suffix}",
            y_label="rad",
        )
    )

    kernel = build_kernel(
        basis,
        KernelSpec(KernelFamily.REDFRNT_EVEN, settings.alpha, settings.m, n),
        sine_basis=resolve_sine_basis(settings, n),
    )
    for preset in FIGURE_IMAGE_PRESETS:
        image = preset.spec.render()
        written.append(write_pgm(image, target / f"image_{preset.name}_input.pgm"))
        written.append(
            write_pgm(amplitude_image(apply_2d(kernel, image)), target / f"image_{preset.name}_amplitude.pgm")
        )

    return FiguresResult(written=tuple(written), coincidence=coincidence_defects(spectra))


def write_scrambled(grid: np.ndarray, stem: Path | str, settings: Settings) -> tuple[Path, ...]:
    header = f"scrambled alpha={settings.alpha!r} m={settings.m!r}"
    real_path, imag_path = write_complex_grid_csv(grid, stem, header=header)
    preview = write_pgm(amplitude_image(grid), Path(f"{stem}.amplitude.pgm"))
    return real_path, imag_path, preview

from __future__ import annotations

import unittest

import numpy as np

from fracrand.eigenbasis import basis_for_seed
from fracrand.errors import InvalidInputError, InvalidLengthError
from fracrand.kernels import KernelFamily, KernelSpec, build_kernel, inverse_kernel
from fracrand.randmat import new_stream, random_complex_signal
from fracrand.signals_io import ReferenceSignal, make_test_signal
from fracrand.transform import (
    GrayImage,
    Signal,
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

SPEC = KernelSpec(KernelFamily.DFRNT, 0.6, 1.0, 4)


def _kernel(family: KernelFamily, alpha: float = 0.6, *, seed: int = 7, n: int = 64):
    return build_kernel(basis_for_seed(seed, n), KernelSpec(family, alpha, 1.0, n))


class ValueTypeTests(unittest.TestCase):
    def test_empty_signal_is_rejected(self) -> None:
        with self.assertRaises(InvalidInputError):
            Signal(np.array([]))

    def test_phase_lies_in_half_open_interval(self) -> None:
        spectrum = Spectrum(values=np.array([complex(-1.0, 0.0), complex(-1.0, -0.0), 1j]), spec=SPEC)
        np.testing.assert_allclose(spectrum.phase, [np.pi, np.pi, np.pi / 2])

    def test_image_pixels_must_be_in_unit_range(self) -> None:
        with self.assertRaises(InvalidInputError):
            GrayImage(np.array([[0.0, 1.5]]))


class ApplyTests(unittest.TestCase):
    def test_zero_order_returns_the_input(self) -> None:
        signal = random_complex_signal(new_stream(3), 64)
        spectrum = apply_1d(_kernel(KernelFamily.DFRNT, 0.0), signal)
        np.testing.assert_allclose(spectrum.values, signal, atol=1e-10)

    def test_inverse_order_round_trip(self) -> None:
        kernel = _kernel(KernelFamily.DFRNST)
        signal = random_complex_signal(new_stream(4), 64)
        restored = apply_1d(inverse_kernel(kernel), apply_1d(kernel, signal).values)
        np.testing.assert_allclose(restored.values, signal, atol=1e-9)

    def test_parseval_for_random_signals(self) -> None:
        stream = new_stream(11)
        for family in KernelFamily:
            kernel = _kernel(family, n=64)
            with self.subTest(family=family.value):
                for _ in range(100):
                    signal = random_complex_signal(stream, kernel.dim)
                    before = energy(signal)
                    self.assertLessEqual(abs(energy(apply_1d(kernel, signal)) - before) / before, 1e-10)

    def test_transform_is_linear_for_every_family(self) -> None:
        stream = new_stream(12)
        for family in KernelFamily:
            kernel = _kernel(family, 0.37, n=32)
            first = random_complex_signal(stream, kernel.dim)
            second = random_complex_signal(stream, kernel.dim)
            a, b = random_complex_signal(stream, 2)
            with self.subTest(family=family.value):
                combined = apply_1d(kernel, a * first + b * second).values
                separate = a * apply_1d(kernel, first).values + b * apply_1d(kernel, second).values
                np.testing.assert_allclose(combined, separate, rtol=0, atol=1e-10)

    def test_dimension_mismatch_is_rejected(self) -> None:
        with self.assertRaises(InvalidInputError):
            apply_1d(_kernel(KernelFamily.DFRNT, n=16), np.ones(8))

    def test_two_dimensional_parseval_and_round_trip(self) -> None:
        kernel = _kernel(KernelFamily.DFRNT)
        stream = new_stream(12)
        for _ in range(3):
            image = GrayImage(stream.fill(64 * 64).reshape(64, 64))
            output = apply_2d(kernel, image)
            before = energy(image.pixels.ravel())
            self.assertLessEqual(abs(energy(output.ravel()) - before) / before, 1e-9)
            restored = apply_2d_grid(inverse_kernel(kernel), output)
            np.testing.assert_allclose(restored, image.pixels, atol=1e-9)

    def test_factored_and_dense_methods_agree(self) -> None:
        kernel = _kernel(KernelFamily.REDFRNT_EVEN, n=16)
        image = GrayImage(new_stream(5).fill(32 * 32).reshape(32, 32))
        factored = apply_2d(kernel, image)
        dense = apply_2d(kernel, image, method="dense")
        np.testing.assert_allclose(factored, dense, atol=1e-10)

    def test_zero_order_image_is_unchanged(self) -> None:
        image = GrayImage(new_stream(6).fill(16 * 16).reshape(16, 16))
        output = apply_2d(_kernel(KernelFamily.DFRNCT, 0.0, n=16), image)
        np.testing.assert_allclose(output, image.pixels, atol=1e-10)

    def test_non_square_image_is_rejected(self) -> None:
        with self.assertRaises(InvalidInputError):
            apply_2d(_kernel(KernelFamily.DFRNT, n=4), GrayImage(np.zeros((4, 3))))


class EvenOddTests(unittest.TestCase):
    def test_symmetric_signal_has_no_odd_part(self) -> None:
        parts = even_odd_decompose([1, 2, 2, 1])
        np.testing.assert_array_equal(parts.even.samples, [1, 2, 2, 1])
        np.testing.assert_array_equal(parts.odd.samples, [0, 0, 0, 0])

    def test_antisymmetric_signal_has_no_even_part(self) -> None:
        parts = even_odd_decompose([1, 0, 0, -1])
        np.testing.assert_array_equal(parts.even.samples, [0, 0, 0, 0])
        np.testing.assert_array_equal(parts.odd.samples, [1, 0, 0, -1])

    def test_impulse_splits_in_half(self) -> None:
        parts = even_odd_decompose([4, 0, 0, 0])
        np.testing.assert_array_equal(parts.even.samples, [2, 0, 0, 2])
        np.testing.assert_array_equal(parts.odd.samples, [2, 0, 0, -2])

    def test_parts_reconstruct_the_input(self) -> None:
        signal = random_complex_signal(new_stream(8), 33)
        parts = even_odd_decompose(signal)
        np.testing.assert_allclose(parts.even.samples + parts.odd.samples, signal, atol=1e-12)
        self.assertLessEqual(mirror_defect(parts.even.samples), 1e-12)
        odd = parts.odd.samples
        self.assertLessEqual(float(np.max(np.abs(odd + odd[::-1]))), 1e-12)


class FastPathTests(unittest.TestCase):
    def test_fast_path_matches_dense_kernels(self) -> None:
        basis = basis_for_seed(7, 64)
        stream = new_stream(21)
        for family, length in ((KernelFamily.REDFRNT_EVEN, 128), (KernelFamily.REDFRNT_ODD, 129)):
            dense = build_kernel(basis, KernelSpec(family, 0.6, 1.0, 64))
            for _ in range(50):
                signal = random_complex_signal(stream, length)
                fast = redfrnt_fast(basis, 0.6, 1.0, signal)
                self.assertLessEqual(float(np.max(np.abs(fast.values - dense.entries @ signal))), 1e-9)
            self.assertIs(fast.spec.family, family)

    def test_fast_path_with_distinct_sine_basis(self) -> None:
        basis, sines = basis_for_seed(7, 16), basis_for_seed(8, 16)
        dense = build_kernel(
            basis, KernelSpec(KernelFamily.REDFRNT_ODD, 0.35, 2.0, 16), sine_basis=sines
        )
        signal = random_complex_signal(new_stream(22), 33)
        fast = redfrnt_fast(basis, 0.35, 2.0, signal, sine_basis=sines)
        np.testing.assert_allclose(fast.values, dense.entries @ signal, atol=1e-9)

    def test_zero_order_returns_the_input(self) -> None:
        signal = random_complex_signal(new_stream(23), 129)
        fast = redfrnt_fast(basis_for_seed(7, 64), 0.0, 1.0, signal)
        np.testing.assert_allclose(fast.values, signal, atol=1e-10)

    def test_middle_impulse_only_picks_up_a_phase(self) -> None:
        n, alpha = 8, 0.6
        impulse = np.zeros(2 * n + 1)
        impulse[n] = 1.0
        fast = redfrnt_fast(basis_for_seed(7, n), alpha, 1.0, impulse)

        expected = np.zeros(2 * n + 1, dtype=complex)
        expected[n] = np.exp(-4j * n * np.pi * alpha)
        np.testing.assert_allclose(fast.values, expected, atol=1e-12)

    def test_wrong_length_is_rejected(self) -> None:
        with self.assertRaises(InvalidLengthError):
            redfrnt_fast(basis_for_seed(7, 8), 0.6, 1.0, np.ones(15))


class PhaseTests(unittest.TestCase):
    def test_special_phase_folds_by_pi(self) -> None:
        values = np.exp(1j * np.array([0.3, 0.3 - np.pi]))
        folded = special_phase(Spectrum(values=values, spec=SPEC))
        np.testing.assert_allclose(folded, [0.3, 0.3], atol=1e-12)

    def test_special_phase_is_undefined_at_zero_amplitude(self) -> None:
        folded = special_phase(Spectrum(values=np.array([0.0, 1.0]), spec=SPEC))
        self.assertTrue(np.isnan(folded[0]))
        self.assertEqual(folded[1], 0.0)

    def test_energy(self) -> None:
        self.assertEqual(energy([1, 1j, -1]), 3.0)
        self.assertEqual(energy(make_test_signal(ReferenceSignal.X1_RECT_EVEN)), 32.0)

    def test_even_signal_spectrum_is_mirror_symmetric(self) -> None:
        kernel = _kernel(KernelFamily.REDFRNT_EVEN)
        spectrum = apply_1d(kernel, make_test_signal(ReferenceSignal.X1_RECT_EVEN))
        self.assertLessEqual(mirror_defect(spectrum.amplitude), 1e-9)
        self.assertLessEqual(phase_mirror_defect(spectrum.phase, spectrum.phase_defined), 1e-8)

    def test_odd_signal_phase_relations(self) -> None:
        kernel = _kernel(KernelFamily.REDFRNT_EVEN)
        spectrum = apply_1d(kernel, make_test_signal(ReferenceSignal.X2_RECT_ODD))
        self.assertLessEqual(mirror_defect(spectrum.amplitude), 1e-9)
        self.assertLessEqual(odd_phase_relation_defect(spectrum), 1e-8)
        self.assertLessEqual(
            phase_mirror_defect(special_phase(spectrum), spectrum.phase_defined, period=np.pi),
            1e-8,
        )

    def test_random_parity_inputs_keep_their_symmetries_at_both_lengths(self) -> None:
        stream = new_stream(21)
        for family in (KernelFamily.REDFRNT_EVEN, KernelFamily.REDFRNT_ODD):
            kernel = _kernel(family, n=32)
            parts = even_odd_decompose(random_complex_signal(stream, kernel.dim))
            even = apply_1d(kernel, parts.even)
            odd = apply_1d(kernel, parts.odd)
            with self.subTest(family=family.value):
                self.assertLessEqual(mirror_defect(even.amplitude), 1e-9)
                self.assertLessEqual(phase_mirror_defect(even.phase, even.phase_defined), 1e-8)
                self.assertLessEqual(mirror_defect(odd.amplitude), 1e-9)
                self.assertLessEqual(odd_phase_relation_defect(odd), 1e-8)
                self.assertLessEqual(
                    phase_mirror_defect(special_phase(odd), odd.phase_defined, period=np.pi), 1e-8
                )

    def test_circular_phase_distance_wraps(self) -> None:
        phases = np.array([np.pi - 1e-12, -np.pi + 1e-12])
        self.assertLess(phase_mirror_defect(phases, np.array([True, True])), 1e-11)


class ImageSymmetryTests(unittest.TestCase):
    def test_symmetry_classification(self) -> None:
        square = np.zeros((6, 6))
        square[2:4, 2:4] = 1.0
        self.assertEqual(image_symmetries(square), frozenset({"up_down", "left_right", "transpose"}))

        offset = np.zeros((6, 6))
        offset[2:4, 0:2] = 1.0
        self.assertEqual(image_symmetries(offset), frozenset({"up_down"}))
        self.assertEqual(grid_symmetry_defect(offset, "left_right"), 1.0)

    def test_rectangular_grids_never_claim_transpose(self) -> None:
        self.assertNotIn("transpose", image_symmetries(np.zeros((2, 3))))


if __name__ == "__main__":
    unittest.main()

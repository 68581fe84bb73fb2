"""Reference signals and images, plus the CSV, PGM and SVG file formats."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np
from matplotlib import rc_context
from matplotlib.figure import Figure

from .errors import ImageFormatError, InvalidInputError, InvalidLengthError
from .kernels import Kernel, KernelFamily, KernelSpec
from .randmat import CSV_FLOAT_FORMAT
from .transform import GrayImage, Signal, Spectrum, Symmetry, special_phase

DEFAULT_SIGNAL_LENGTH = 128
MIN_SIGNAL_LENGTH = 80
DEFAULT_IMAGE_SIZE = 128
SPECTRUM_COLUMNS = (
    "index",
    "real",
    "imag",
    "amplitude",
    "phase",
    "special_phase",
    "phase_defined_flag",
)
SVG_DPI = 100
SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
_WHITESPACE = b" \t\r\n\v\f"


class ReferenceSignal(str, Enum):
    X1_RECT_EVEN = "x1"
    X2_RECT_ODD = "x2"


def make_test_signal(
    signal: ReferenceSignal | str, length: int = DEFAULT_SIGNAL_LENGTH
) -> Signal:
    """Rectangle test signals, 1-based: x1 is 1 on [49, 80]; x2 is 1 on [49, 64], -1 on [65, 80]."""
    signal = ReferenceSignal(signal)
    if length < MIN_SIGNAL_LENGTH:
        raise InvalidLengthError(
            f"reference signals need at least {MIN_SIGNAL_LENGTH} samples, got {length}."
        )
    index = np.arange(1, length + 1)
    if signal is ReferenceSignal.X1_RECT_EVEN:
        samples = np.where((index >= 49) & (index <= 80), 1.0, 0.0)
    else:
        samples = np.select(
            [(index >= 49) & (index <= 64), (index >= 65) & (index <= 80)],
            [1.0, -1.0],
            default=0.0,
        )
    return Signal(samples)


@dataclass(frozen=True)
class Rectangle:
    row: int
    col: int
    height: int
    width: int
    value: float = 1.0


@dataclass(frozen=True)
class RectImageSpec:
    size: int
    rectangles: tuple[Rectangle, ...]

    def __post_init__(self) -> None:
        if self.size < 1:
            raise InvalidInputError(f"image size must be positive, got {self.size}.")
        for rect in self.rectangles:
            if rect.height < 1 or rect.width < 1:
                raise InvalidInputError(f"empty rectangle: {rect}.")
            if rect.row < 0 or rect.col < 0:
                raise InvalidInputError(f"rectangle starts outside the image: {rect}.")
            if rect.row + rect.height > self.size or rect.col + rect.width > self.size:
                raise InvalidInputError(f"rectangle exceeds a {self.size}px image: {rect}.")
            if not 0.0 <= rect.value <= 1.0:
                raise InvalidInputError(f"rectangle value must lie in [0, 1]: {rect}.")

    def render(self) -> GrayImage:
        pixels = np.zeros((self.size, self.size), dtype=np.float64)
        for rect in self.rectangles:
            pixels[rect.row : rect.row + rect.height, rect.col : rect.col + rect.width] = rect.value
        return GrayImage(pixels)


@dataclass(frozen=True)
class ImagePreset:
    name: str
    spec: RectImageSpec
    symmetries: frozenset[Symmetry]


def _centered_span(size: int, fraction: float) -> tuple[int, int]:
    length = max(1, round(size * fraction))
    if (size - length) % 2:
        length += 1
    return (size - length) // 2, length


def figure_image_presets(size: int = DEFAULT_IMAGE_SIZE) -> tuple[ImagePreset, ...]:
    """Three binary rectangle images with known mirror symmetries.

    i1 is a centered square, i2 is centered vertically only and i3 is a
    left-right mirrored pair placed above the center.
    """
    start, length = _centered_span(size, 0.25)
    square = RectImageSpec(size, (Rectangle(start, start, length, length),))

    offset = RectImageSpec(
        size, (Rectangle(start, size // 8, length, max(1, size // 4)),)
    )

    left = (3 * size) // 16
    width = max(1, size // 8)
    pair = RectImageSpec(
        size,
        (
            Rectangle(size // 8, left, max(1, size // 4), width),
            Rectangle(size // 8, size - left - width, max(1, size // 4), width),
        ),
    )
    return (
        ImagePreset("i1", square, frozenset({"up_down", "left_right", "transpose"})),
        ImagePreset("i2", offset, frozenset({"up_down"})),
        ImagePreset("i3", pair, frozenset({"left_right"})),
    )


FIGURE_IMAGE_PRESETS = figure_image_presets()


class _PgmReader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def _skip_separators(self) -> None:
        data = self.data
        while self.pos < len(data):
            byte = data[self.pos : self.pos + 1]
            if byte not in _WHITESPACE and byte != b"#":
                return
            if byte == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            else:
                self.pos += 1

    def token(self, what: str) -> tuple[bytes, int]:
        self._skip_separators()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos : self.pos + 1] not in _WHITESPACE:
            self.pos += 1
        if start == self.pos:
            raise ImageFormatError(f"missing {what}", offset=start)
        return self.data[start : self.pos], start

    def integer(self, what: str) -> int:
        raw, offset = self.token(what)
        if not raw.isdigit():
            raise ImageFormatError(f"{what} is not a decimal integer: {raw!r}", offset=offset)
        return int(raw)


def read_pgm(path: Path | str) -> GrayImage:
    """Read a P2 or P5 PGM (maxval up to 65535) scaled to [0, 1]."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P2", b"P5") or (len(data) > 2 and data[2:3] not in _WHITESPACE + b"#"):
        raise ImageFormatError(f"unknown PGM magic {data[:2]!r}", offset=0)

    reader = _PgmReader(data)
    reader.pos = 2
    width = reader.integer("width")
    height = reader.integer("height")
    maxval_offset = reader.pos
    maxval = reader.integer("maxval")
    if width < 1 or height < 1:
        raise ImageFormatError("image dimensions must be positive", offset=maxval_offset)
    if not 1 <= maxval <= 65535:
        raise ImageFormatError(f"maxval {maxval} outside 1..65535", offset=maxval_offset)

    count = width * height
    if magic == b"P5":
        # Exactly one whitespace byte separates the header from the raster.
        start = reader.pos + 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
        needed = count * dtype.itemsize
        if len(data) - start < needed:
            raise ImageFormatError(
                f"truncated payload: expected {needed} bytes, found {max(0, len(data) - start)}",
                offset=len(data),
            )
        values = np.frombuffer(data, dtype=dtype, count=count, offset=start).astype(np.int64)
    else:
        items: list[int] = []
        for _ in range(count):
            reader._skip_separators()
            if reader.pos >= len(data):
                raise ImageFormatError(
                    f"truncated payload: expected {count} samples, found {len(items)}",
                    offset=len(data),
                )
            items.append(reader.integer("sample"))
        values = np.asarray(items, dtype=np.int64)

    if np.any(values > maxval):
        raise ImageFormatError(f"sample exceeds maxval {maxval}", offset=maxval_offset)
    return GrayImage(values.reshape(height, width) / maxval)


def write_pgm(
    image: GrayImage, path: Path | str, *, maxval: int = 255, plain: bool = False
) -> Path:
    """Write a PGM; P5 (binary) by default, P2 when ``plain``."""
    if not 1 <= maxval <= 65535:
        raise InvalidInputError(f"maxval must be in 1..65535, got {maxval}.")
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    levels = np.rint(image.pixels * maxval).astype(np.int64)
    header = f"{'P2' if plain else 'P5'}\n{image.cols} {image.rows}\n{maxval}\n".encode("ascii")

    if plain:
        body = "\n".join(" ".join(str(value) for value in row) for row in levels)
        target.write_bytes(header + body.encode("ascii") + b"\n")
    else:
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
        target.write_bytes(header + levels.astype(dtype).tobytes())
    return target


def amplitude_image(grid: np.ndarray) -> GrayImage:
    """|grid| scaled so the largest amplitude maps to 1."""
    amplitude = np.abs(np.asarray(grid))
    peak = float(np.max(amplitude)) if amplitude.size else 0.0
    return GrayImage(amplitude / peak if peak > 0 else amplitude)


def write_spectrum_csv(spec: Spectrum, path: Path | str) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack(
        (
            np.arange(1, len(spec) + 1),
            spec.values.real,
            spec.values.imag,
            spec.amplitude,
            spec.phase,
            special_phase(spec),
            spec.phase_defined.astype(np.float64),
        )
    )
    fmt = ["%d"] + [CSV_FLOAT_FORMAT] * 5 + ["%d"]
    np.savetxt(
        target,
        table,
        fmt=fmt,
        delimiter=",",
        header=",".join(SPECTRUM_COLUMNS),
        comments="",
    )
    return target


def read_spectrum_csv(path: Path | str) -> np.ndarray:
    """Samples from a spectrum CSV (real/imag columns) or a 1-2 column numeric CSV."""
    source = Path(path)
    with source.open("r", encoding="utf-8") as stream:
        first_line = stream.readline().strip()

    if first_line.startswith(SPECTRUM_COLUMNS[0]):
        table = np.loadtxt(source, delimiter=",", skiprows=1, usecols=(1, 2), ndmin=2)
        return table[:, 0] + 1j * table[:, 1]

    table = np.loadtxt(source, delimiter=",", ndmin=2)
    if table.shape[1] == 1:
        return table[:, 0].astype(np.complex128)
    if table.shape[1] == 2:
        return table[:, 0] + 1j * table[:, 1]
    raise InvalidInputError(f"{source} must have one (real) or two (real, imag) columns.")


def _pair_paths(stem: Path | str) -> tuple[Path, Path]:
    text = str(stem)
    for suffix in (".real.csv", ".imag.csv"):
        if text.endswith(suffix):
            text = text[: -len(suffix)]
    return Path(f"{text}.real.csv"), Path(f"{text}.imag.csv")


def write_complex_grid_csv(
    grid: np.ndarray, stem: Path | str, *, header: str = ""
) -> tuple[Path, Path]:
    real_path, imag_path = _pair_paths(stem)
    real_path.parent.mkdir(parents=True, exist_ok=True)
    values = np.atleast_2d(np.asarray(grid, dtype=np.complex128))
    for part, target in ((values.real, real_path), (values.imag, imag_path)):
        np.savetxt(target, part, fmt=CSV_FLOAT_FORMAT, delimiter=",", header=header)
    return real_path, imag_path


def read_complex_grid_csv(stem: Path | str) -> np.ndarray:
    """Load a pair written by ``write_complex_grid_csv``; ``stem`` may name either file."""
    real_path, imag_path = _pair_paths(stem)
    real = np.loadtxt(real_path, delimiter=",", ndmin=2)
    imag = np.loadtxt(imag_path, delimiter=",", ndmin=2)
    if real.shape != imag.shape:
        raise InvalidInputError(
            f"{real_path.name} and {imag_path.name} differ in shape ({real.shape} vs {imag.shape})."
        )
    return real + 1j * imag


def write_kernel_csv(kernel: Kernel, stem: Path | str) -> tuple[Path, Path]:
    header = f"{kernel.spec.describe()} seed={kernel.basis_seed} basis={kernel.basis_digest}"
    return write_complex_grid_csv(kernel.entries, stem, header=header)


@dataclass(frozen=True, eq=False)
class KernelCsv:
    """Kernel entries read back from CSV with the provenance they were written with."""

    spec: KernelSpec
    entries: np.ndarray
    basis_seed: int
    basis_digest: str


def read_kernel_csv(stem: Path | str) -> KernelCsv:
    """Load a pair written by ``write_kernel_csv`` and parse its provenance header."""
    real_path, _ = _pair_paths(stem)
    with real_path.open(encoding="utf-8") as stream:
        first_line = stream.readline()
    fields = dict(
        item.split("=", 1) for item in first_line.lstrip("#").split() if "=" in item
    )
    try:
        spec = KernelSpec(
            family=KernelFamily(fields["family"]),
            alpha=float(fields["alpha"]),
            m=float(fields["m"]),
            n=int(fields["n"]),
        )
        seed = int(fields["seed"])
        digest = fields["basis"]
    except (KeyError, ValueError) as exc:
        raise InvalidInputError(
            f"{real_path.name} has no readable kernel header: {first_line.strip()!r}."
        ) from exc

    entries = read_complex_grid_csv(stem)
    if entries.shape != (spec.dim, spec.dim):
        raise InvalidInputError(
            f"{real_path.name} holds a {entries.shape} grid but its header describes "
            f"a {spec.dim}x{spec.dim} kernel."
        )
    return KernelCsv(spec=spec, entries=entries, basis_seed=seed, basis_digest=digest)


def write_matrix_csv(entries: np.ndarray, path: Path | str, *, header: str = "") -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(target, np.atleast_2d(entries), fmt=CSV_FLOAT_FORMAT, delimiter=",", header=header)
    return target


def write_svg_plot(
    series: Sequence[Sequence[float]],
    path: Path | str,
    *,
    labels: Sequence[str] = (),
    title: str = "",
    x_label: str = "n",
    y_label: str = "",
    width: int = 800,
    height: int = 400,
) -> Path:
    """Line plot over 1-based indices; series ``i`` is drawn with gid ``series-i``.

    NaN samples leave gaps in their line.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)

    figure = Figure(figsize=(width / SVG_DPI, height / SVG_DPI), dpi=SVG_DPI)
    axes = figure.add_subplot()
    for index, values in enumerate(series):
        data = np.asarray(values, dtype=np.float64)
        axes.plot(
            np.arange(1, data.size + 1),
            data,
            color=SERIES_COLORS[index % len(SERIES_COLORS)],
            linewidth=1.2,
            label=labels[index] if index < len(labels) else None,
            gid=f"series-{index}",
        )
    if title:
        axes.set_title(title)
    axes.set_xlabel(x_label)
    if y_label:
        axes.set_ylabel(y_label)
    axes.grid(True, linewidth=0.4, alpha=0.5)
    if labels and series:
        axes.legend(loc="best")
    figure.tight_layout()

    # Byte-stable output: no timestamp, fixed clip-path ids.
    with rc_context({"svg.fonttype": "none", "svg.hashsalt": "fracrand"}):
        figure.savefig(target, format="svg", metadata={"Date": None})
    return target

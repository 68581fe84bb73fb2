"""CLI entrypoint for fracrand."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import TextIO

from .config import Settings, load_settings
from .eigenbasis import basis_for_seed, load_basis, save_basis
from .errors import FracRandError, InvalidInputError
from .i18n import (
    available_languages,
    detect_language,
    peek_cli_language,
    set_language,
    t,
    translation_issues,
)
from .kernels import KernelFamily, KernelSpec, build_kernel
from .pipeline import (
    grid_to_image,
    resolve_sine_basis,
    run_verification,
    scramble_image,
    transform_grid,
    transform_signal,
    unscramble_grid,
    write_figures,
    write_scrambled,
)
from .randmat import random_matrix, symmetrize
from .signals_io import (
    DEFAULT_SIGNAL_LENGTH,
    ReferenceSignal,
    amplitude_image,
    make_test_signal,
    read_complex_grid_csv,
    read_pgm,
    read_spectrum_csv,
    write_complex_grid_csv,
    write_kernel_csv,
    write_matrix_csv,
    write_pgm,
    write_spectrum_csv,
)
from . import ui

FAMILY_CHOICES = [family.value for family in KernelFamily]
SIGNAL_CHOICES = [signal.value for signal in ReferenceSignal]


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", help=t("cli.help.seed"))
    common.add_argument("--alpha", type=float, help=t("cli.help.alpha"))
    common.add_argument("--m", type=float, help=t("cli.help.m"))
    common.add_argument("--n", type=int, help=t("cli.help.n"))
    common.add_argument("--tolerance", type=float, help=t("cli.help.tolerance"))
    common.add_argument("--sine-seed", help=t("cli.help.sine_seed"))
    common.add_argument("--lang", default=argparse.SUPPRESS, help=t("cli.help.lang"))
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracrand", description=t("cli.description"))
    parser.add_argument("--lang", help=t("cli.help.lang"))
    parser.add_argument(
        "--list-languages", action="store_true", help=t("cli.help.list_languages")
    )
    parser.add_argument("--check-i18n", action="store_true", help=t("cli.help.check_i18n"))

    common = _common_options()
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    matrix = commands.add_parser("matrix", parents=[common], help=t("cli.help.cmd_matrix"))
    matrix.add_argument("--out", required=True, type=Path, help=t("cli.help.out_dir"))

    basis = commands.add_parser("basis", parents=[common], help=t("cli.help.cmd_basis"))
    basis.add_argument("--out", required=True, type=Path, help=t("cli.help.out_basis"))

    kernel = commands.add_parser("kernel", parents=[common], help=t("cli.help.cmd_kernel"))
    kernel.add_argument("--family", choices=FAMILY_CHOICES, default="dfrnt", help=t("cli.help.family"))
    kernel.add_argument("--basis", type=Path, help=t("cli.help.basis"))
    kernel.add_argument("--out", required=True, type=Path, help=t("cli.help.out_stem"))

    transform = commands.add_parser(
        "transform", parents=[common], help=t("cli.help.cmd_transform")
    )
    transform.add_argument(
        "--family", choices=FAMILY_CHOICES, default="redfrnt_even", help=t("cli.help.family")
    )
    source = transform.add_mutually_exclusive_group(required=True)
    source.add_argument("--signal", choices=SIGNAL_CHOICES, help=t("cli.help.signal"))
    source.add_argument("--in", dest="input", type=Path, help=t("cli.help.input"))
    transform.add_argument(
        "--length", type=int, default=DEFAULT_SIGNAL_LENGTH, help=t("cli.help.length")
    )
    transform.add_argument("--basis", type=Path, help=t("cli.help.basis"))
    transform.add_argument("--inverse", action="store_true", help=t("cli.help.inverse"))
    transform.add_argument("--fast", action="store_true", help=t("cli.help.fast"))
    transform.add_argument("--out", required=True, type=Path, help=t("cli.help.out_transform"))

    verify = commands.add_parser("verify", parents=[common], help=t("cli.help.cmd_verify"))
    verify.add_argument(
        "--inject-mismatch", type=float, default=0.0, metavar="DELTA", help=t("cli.help.inject")
    )

    figures = commands.add_parser("figures", parents=[common], help=t("cli.help.cmd_figures"))
    figures.add_argument("--out", required=True, type=Path, help=t("cli.help.out_dir"))

    scramble = commands.add_parser("scramble", parents=[common], help=t("cli.help.cmd_scramble"))
    scramble.add_argument("--in", dest="input", required=True, type=Path, help=t("cli.help.input_pgm"))
    scramble.add_argument("--out", required=True, type=Path, help=t("cli.help.out_stem"))

    unscramble = commands.add_parser(
        "unscramble", parents=[common], help=t("cli.help.cmd_unscramble")
    )
    unscramble.add_argument("--in", dest="input", required=True, type=Path, help=t("cli.help.input_pair"))
    unscramble.add_argument("--out", required=True, type=Path, help=t("cli.help.out_pgm"))
    return parser


def _settings_from(args: argparse.Namespace) -> Settings:
    return load_settings(
        seed=args.seed,
        alpha=args.alpha,
        m=args.m,
        n=args.n,
        tolerance=args.tolerance,
        sine_seed=args.sine_seed,
    )


def _print_cli_error(exc: BaseException, *, stream: TextIO) -> None:
    print(ui.error(t("cli.error.prefix", error=exc)), file=stream)
    if not isinstance(exc, FracRandError):
        return
    for detail in exc.details:
        print(ui.warn(t("cli.error.detail", detail=detail)), file=stream)
    for hint in exc.hints:
        print(ui.info(t("cli.error.hint", hint=hint)), file=stream)


def _begin(title_key: str, settings: Settings, *, family: str | None = None) -> None:
    print(ui.rule("="))
    print(ui.section(t(title_key)))
    print(ui.render_settings(settings, family=family))


def _finish(paths: list[Path]) -> int:
    print(ui.section(t("cli.section.outputs")))
    print(ui.render_paths(paths))
    print(ui.success(t("cli.log.done")))
    print(ui.rule("="))
    return 0


def _cmd_matrix(args: argparse.Namespace, settings: Settings) -> int:
    _begin("cli.section.matrix", settings)
    print(ui.info(t("cli.log.generating_matrix", n=settings.n)))
    p = random_matrix(settings.seed, settings.n)
    q = symmetrize(p)
    header = f"seed={settings.seed} n={settings.n}"
    return _finish(
        [
            write_matrix_csv(p.entries, args.out / "p.csv", header=f"P {header}"),
            write_matrix_csv(q.entries, args.out / "q.csv", header=f"Q {header}"),
        ]
    )


def _cmd_basis(args: argparse.Namespace, settings: Settings) -> int:
    _begin("cli.section.basis", settings)
    print(ui.info(t("cli.log.diagonalizing", n=settings.n)))
    basis = basis_for_seed(settings.seed, settings.n)
    vectors_path = save_basis(basis, args.out)
    print(ui.key_value(t("cli.label.digest"), basis.digest))
    return _finish([args.out, vectors_path])


def _cmd_kernel(args: argparse.Namespace, settings: Settings) -> int:
    _begin("cli.section.kernel", settings, family=args.family)
    if args.basis is not None:
        print(ui.info(t("cli.log.loading_basis", path=args.basis)))
        basis = load_basis(args.basis)
    else:
        print(ui.info(t("cli.log.diagonalizing", n=settings.n)))
        basis = basis_for_seed(settings.seed, settings.n)
    spec = KernelSpec(args.family, settings.alpha, settings.m, basis.n)
    sine_basis = resolve_sine_basis(settings, basis.n) if spec.family.is_reconstructed else None
    kernel = build_kernel(basis, spec, sine_basis=sine_basis)
    print(ui.key_value(t("cli.label.digest"), kernel.basis_digest))
    return _finish(list(write_kernel_csv(kernel, args.out)))


def _is_grid_input(path: Path) -> bool:
    name = path.name.lower()
    return name.endswith((".pgm", ".real.csv", ".imag.csv"))


def _cmd_transform(args: argparse.Namespace, settings: Settings) -> int:
    _begin("cli.section.transform", settings, family=args.family)
    family = KernelFamily(args.family)

    if args.input is not None and _is_grid_input(args.input):
        if args.fast:
            raise InvalidInputError(t("cli.error.fast_needs_1d"))
        print(ui.info(t("cli.log.reading_input", path=args.input)))
        if args.input.name.lower().endswith(".pgm"):
            grid = read_pgm(args.input).pixels
        else:
            grid = read_complex_grid_csv(args.input)
        print(ui.info(t("cli.log.transforming_2d", rows=grid.shape[0], cols=grid.shape[1])))
        output = transform_grid(
            settings, family, grid, inverse=args.inverse, basis_path=args.basis
        )
        paths = list(write_complex_grid_csv(output, args.out))
        if args.inverse:
            paths.append(write_pgm(grid_to_image(output), Path(f"{args.out}.pgm")))
        else:
            paths.append(write_pgm(amplitude_image(output), Path(f"{args.out}.amplitude.pgm")))
        return _finish(paths)

    if args.signal is not None:
        samples = make_test_signal(args.signal, args.length).samples
    else:
        print(ui.info(t("cli.log.reading_input", path=args.input)))
        samples = read_spectrum_csv(args.input)
    print(ui.info(t("cli.log.transforming_1d", length=len(samples), fast=args.fast)))
    spectrum = transform_signal(
        settings,
        family,
        samples,
        inverse=args.inverse,
        fast=args.fast,
        basis_path=args.basis,
    )
    return _finish([write_spectrum_csv(spectrum, args.out)])


def _cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    _begin("cli.section.verify", settings)
    if args.inject_mismatch:
        print(ui.warn(t("cli.log.injecting_mismatch", delta=args.inject_mismatch)))
    print(ui.info(t("cli.log.running_checks")))
    report = run_verification(settings, inject_mismatch=args.inject_mismatch)
    print(ui.render_check_report(report))
    if report.passed:
        print(ui.success(t("cli.log.checks_passed", count=len(report.checks))))
        print(ui.rule("="))
        return 0
    for check in report.failures:
        print(ui.warn(t("cli.log.check_failed", name=check.name)))
    print(ui.error(t("cli.log.checks_failed", failed=len(report.failures), count=len(report.checks))))
    print(ui.rule("="))
    return 1


def _cmd_figures(args: argparse.Namespace, settings: Settings) -> int:
    _begin("cli.section.figures", settings)
    print(ui.info(t("cli.log.writing_figures", path=args.out)))
    result = write_figures(settings, args.out)
    for name, defect in result.coincidence.items():
        print(ui.key_value(name, f"{defect:.3e}"))
    return _finish(list(result.written))


def _cmd_scramble(args: argparse.Namespace, settings: Settings) -> int:
    _begin("cli.section.scramble", settings)
    print(ui.info(t("cli.log.reading_input", path=args.input)))
    image = read_pgm(args.input)
    grid = scramble_image(settings, image)
    return _finish(list(write_scrambled(grid, args.out, settings)))


def _cmd_unscramble(args: argparse.Namespace, settings: Settings) -> int:
    _begin("cli.section.unscramble", settings)
    print(ui.info(t("cli.log.reading_input", path=args.input)))
    image = unscramble_grid(settings, read_complex_grid_csv(args.input))
    return _finish([write_pgm(image, args.out)])


_COMMANDS = {
    "matrix": _cmd_matrix,
    "basis": _cmd_basis,
    "kernel": _cmd_kernel,
    "transform": _cmd_transform,
    "verify": _cmd_verify,
    "figures": _cmd_figures,
    "scramble": _cmd_scramble,
    "unscramble": _cmd_unscramble,
}


def run(argv: list[str] | None = None) -> int:
    raw_argv = list(sys.argv[1:] if argv is None else argv)
    set_language(detect_language(peek_cli_language(raw_argv)))

    parser = build_parser()
    args = parser.parse_args(raw_argv)
    set_language(getattr(args, "lang", None))

    if args.list_languages:
        print(ui.rule("="))
        print(ui.section(t("cli.section.supported_languages")))
        for language in available_languages():
            aliases = ", ".join(language.aliases) if language.aliases else t("ui.none")
            print(
                ui.info(
                    t(
                        "cli.log.language_entry",
                        code=language.code,
                        name=language.name,
                        aliases=aliases,
                    )
                )
            )
        print(ui.rule("="))
        return 0

    if args.check_i18n:
        issues = translation_issues()
        print(ui.rule("="))
        print(ui.section(t("cli.section.i18n_validation")))
        if not issues:
            print(ui.success(t("cli.log.i18n_no_issues")))
            print(ui.rule("="))
            return 0
        for issue in issues:
            print(ui.warn(t("cli.log.i18n_issue", issue=issue)))
        print(ui.warn(t("cli.log.i18n_issues_found", count=len(issues))))
        print(ui.rule("="))
        return 1

    if args.command is None:
        parser.print_help(sys.stderr)
        return 2

    settings = _settings_from(args)
    return _COMMANDS[args.command](args, settings)


def main() -> None:
    try:
        raise SystemExit(run())
    except (FracRandError, OSError) as exc:
        _print_cli_error(exc, stream=sys.stderr)
        raise SystemExit(2) from exc
    except KeyboardInterrupt:
        print(f"\n{t('cli.log.interrupted')}", file=sys.stderr)
        raise SystemExit(130)


if __name__ == "__main__":
    main()

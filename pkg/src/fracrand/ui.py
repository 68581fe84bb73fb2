"""Console rendering helpers."""

from __future__ import annotations

import os
import shutil
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any, Callable, Sequence

from .i18n import t

RESET = "\033[0m"
BOLD = "\033[1m"
DIM = "\033[2m"
RED = "\033[31m"
GREEN = "\033[32m"
YELLOW = "\033[33m"
BLUE = "\033[34m"
CYAN = "\033[36m"

try:
    from rich import box
    from rich.console import Console
    from rich.table import Table
    from rich.text import Text
except ImportError:
    _RICH_AVAILABLE = False
    box = Console = Table = Text = None  # type: ignore[assignment]
else:
    _RICH_AVAILABLE = True

if TYPE_CHECKING:
    from .config import Settings
    from .pipeline import VerifyReport


def use_color() -> bool:
    return sys.stdout.isatty() and os.getenv("NO_COLOR") is None


def colorize(text: str, *codes: str) -> str:
    if not use_color() or not codes:
        return text
    return "".join(codes) + text + RESET


def width(default: int = 80) -> int:
    return max(60, min(120, shutil.get_terminal_size((default, 20)).columns))


def _render(build: Callable[[], Any], fallback: Callable[[], str]) -> str:
    """Render a rich object to text, or use the plain fallback."""
    if not _RICH_AVAILABLE:
        return fallback()
    color_enabled = use_color()
    console = Console(
        width=width(),
        force_terminal=color_enabled,
        color_system="auto" if color_enabled else None,
        no_color=not color_enabled,
        soft_wrap=True,
        highlight=False,
    )
    with console.capture() as capture:
        console.print(build())
    return capture.get().rstrip("\n")


def rule(char: str = "-") -> str:
    return char * width()


def section(title: str) -> str:
    return _render(
        lambda: Text(f"[{title}]", style="bold blue"),
        lambda: colorize(f"[{title}]", BOLD, BLUE),
    )


def _status(level: str, text: str, ansi_code: str, rich_style: str) -> str:
    prefix = f"[{level}] "
    return _render(
        lambda: Text.assemble((prefix, rich_style), text),
        lambda: colorize(prefix + text, ansi_code),
    )


def info(text: str) -> str:
    return _status(t("ui.level.info"), text, DIM, "cyan")


def success(text: str) -> str:
    return _status(t("ui.level.ok"), text, GREEN, "green")


def warn(text: str) -> str:
    return _status(t("ui.level.warn"), text, YELLOW, "yellow")


def error(text: str) -> str:
    return _status(t("ui.level.error"), text, RED, "bold red")


def key_value(label: str, value: str) -> str:
    return _render(
        lambda: Text.assemble((label + ":", "bold cyan"), f" {value}"),
        lambda: f"{colorize(label + ':', BOLD, CYAN)} {value}",
    )


def _field_table(rows: Sequence[tuple[str, str]]) -> Any:
    table = Table(show_header=False, box=box.SIMPLE, pad_edge=False)
    table.add_column(t("ui.table.field"), style="bold cyan", no_wrap=True)
    table.add_column(t("ui.table.value"), style="white")
    for label, value in rows:
        table.add_row(Text(label), Text(value))
    return table


def render_settings(settings: Settings, *, family: str | None = None) -> str:
    rows = [
        (t("ui.field.seed"), str(settings.seed)),
        (t("ui.field.alpha"), f"{settings.alpha:g}"),
        (t("ui.field.period"), f"{settings.m:g}"),
        (t("ui.field.size"), str(settings.n)),
    ]
    if family is not None:
        rows.insert(0, (t("ui.field.family"), family))
    if settings.sine_seed is not None:
        rows.append((t("ui.field.sine_seed"), str(settings.sine_seed)))
    if settings.tolerance is not None:
        rows.append((t("ui.field.tolerance"), f"{settings.tolerance:.1e}"))
    return _render(
        lambda: _field_table(rows),
        lambda: "\n".join(key_value(label, value) for label, value in rows),
    )


def render_check_report(report: VerifyReport) -> str:
    """One row per check: name, measured defect, tolerance and status."""

    def status(passed: bool) -> str:
        return t("ui.check.pass") if passed else t("ui.check.fail")

    def table() -> Any:
        grid = Table(show_header=True, box=box.SIMPLE_HEAD, pad_edge=False)
        grid.add_column(t("ui.table.check"), style="white", no_wrap=True)
        grid.add_column(t("ui.table.defect"), justify="right", no_wrap=True)
        grid.add_column(t("ui.table.tolerance"), justify="right", no_wrap=True)
        grid.add_column(t("ui.table.status"), no_wrap=True)
        for check in report.checks:
            grid.add_row(
                Text(check.name),
                f"{check.defect:.3e}",
                f"{check.tolerance:.1e}",
                Text(status(check.passed), style="green" if check.passed else "bold red"),
            )
        return grid

    def plain() -> str:
        name_width = max((len(check.name) for check in report.checks), default=0)
        return "\n".join(
            f"  {check.name.ljust(name_width)}  {check.defect:.3e} <= {check.tolerance:.1e}  "
            + colorize(status(check.passed), GREEN if check.passed else RED)
            for check in report.checks
        )

    if not report.checks:
        return f"  {t('ui.none')}"
    return _render(table, plain)


def render_paths(paths: Sequence[Path]) -> str:
    if not paths:
        return f"  {t('ui.none')}"

    def table() -> Any:
        grid = Table(show_header=True, box=box.SIMPLE_HEAD, pad_edge=False)
        grid.add_column("#", justify="right", style="bold cyan", no_wrap=True)
        grid.add_column(t("ui.table.path"), style="white", overflow="fold")
        for index, path in enumerate(paths, start=1):
            grid.add_row(str(index), Text(str(path)))
        return grid

    return _render(table, lambda: "\n".join(f"  - {path}" for path in paths))

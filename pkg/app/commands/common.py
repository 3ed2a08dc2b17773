"""Опции и вывод, общие для всех команд."""
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Iterator

import click
import typer
from rich.console import Console
from rich.table import Table

from app.core.errors import GeometryError
from app.dependencies import resolve_curve
from app.geometry.curve import CurveDef
from app.io.tables import write_table
from app.schemas.report import CheckStatus, RunReport
from app.services.runs import RunResult

# stdout несёт CSV/JSON, всё человекочитаемое уходит в stderr
err_console = Console(stderr=True)

CatalogOption = Annotated[str | None, typer.Option(
    "--catalog", help="Catalog curve, name[:p1,p2,...], e.g. circular-helix:2,1.")]
SpecOption = Annotated[Path | None, typer.Option(
    "--spec", help="Curve-spec file (key = \"value\" lines).", dir_okay=False)]
DomainOption = Annotated[tuple[float, float] | None, typer.Option(
    "--domain", help="Restrict the parameter domain to LO HI.")]
SamplesOption = Annotated[int | None, typer.Option(
    "--samples", "-n", min=8, help="Number of samples (default from settings).")]
TolOption = Annotated[float | None, typer.Option(
    "--tol", min=0.0, help="Relative constancy tolerance (default 1e-6).")]
OutOption = Annotated[Path | None, typer.Option(
    "--out", "-o", help="Output file; stdout when omitted.", dir_okay=False)]
ReportOption = Annotated[Path | None, typer.Option(
    "--report", help="Write the JSON run report here.", dir_okay=False)]

STATUS_STYLE = {
    CheckStatus.PASS: "green",
    CheckStatus.FAIL: "bold red",
    CheckStatus.SKIP: "yellow",
    CheckStatus.PREMISE_NOT_MET: "cyan",
}

# пути вывода не влияют на результат и не попадают в эхо команды
_NOT_ECHOED = {"out", "report"}


def command_echo() -> str:
    ctx = click.get_current_context()
    parts = [ctx.info_name or ""]
    for key in sorted(ctx.params):
        value = ctx.params[key]
        if key in _NOT_ECHOED or value is None:
            continue
        if isinstance(value, tuple):
            value = " ".join(str(v) for v in value)
        elif hasattr(value, "value"):
            value = value.value
        parts.append(f"--{key.replace('_', '-')} {value}")
    return " ".join(parts)


def load_curve(catalog: str | None, spec: Path | None, domain: tuple[float, float] | None) -> CurveDef:
    return resolve_curve(catalog_ref=catalog, spec_path=spec, domain=domain)


@contextmanager
def handle_errors() -> Iterator[None]:
    """Переводит иерархию исключений в коды выхода 2 и 3."""
    try:
        yield
    except GeometryError as exc:
        err_console.print(f"[bold red]{type(exc).__name__}[/bold red]: {exc.detail}")
        raise typer.Exit(exc.exit_code) from None


def print_summary(report: RunReport) -> None:
    table = Table(title=report.command, title_justify="left")
    table.add_column("check")
    table.add_column("status")
    table.add_column("value", justify="right")
    table.add_column("detail", overflow="fold")
    for check in report.checks:
        value = check.value if isinstance(check.value, str) or check.value is None else f"{check.value:.6g}"
        table.add_row(check.name, f"[{STATUS_STYLE[check.status]}]{check.status.value}[/]",
                      value or "", check.detail or "")
    err_console.print(table)


def emit_table(result: RunResult, out: Path | None, report_path: Path | None) -> None:
    """CSV в --out (или stdout), JSON-отчёт в --report, сводка в stderr."""
    text = write_table(result.table, out)
    if out is None:
        typer.echo(text, nl=False)
    emit_report(result.report, report_path, to_stdout=False)


def emit_report(report: RunReport, path: Path | None, to_stdout: bool = True) -> None:
    if path is not None:
        path.write_text(report.to_json(), encoding="utf-8")
    elif to_stdout:
        typer.echo(report.to_json(), nl=False)
    print_summary(report)


def finish(report: RunReport) -> None:
    raise typer.Exit(report.exit_code)

from typing import Annotated

import typer

from app import __version__
from app.commands import analyze, bertrand, indicatrix, plot, verify
from app.core.log import setup_logging

app = typer.Typer(
    name="bertrand-lab",
    help="Frenet frames, spherical indicatrices and Bertrand curves of parametric space curves.",
    no_args_is_help=True,
    add_completion=False,
    pretty_exceptions_enable=False,
)


def _version(value: bool) -> None:
    if value:
        typer.echo(__version__)
        raise typer.Exit()


@app.callback()
def main(
        log_level: Annotated[str | None, typer.Option(
            "--log-level", help="DEBUG, INFO, WARNING or ERROR (default from settings).")] = None,
        version: Annotated[bool, typer.Option(
            "--version", callback=_version, is_eager=True, help="Print the version and exit.")] = False,
):
    """Curves are given as --catalog name[:p1,p2] or --spec FILE.

    Expressions use + - * / ^, unary minus, parentheses, the parameter,
    pi, e and sin cos tan exp log sqrt atan asin acos sinh cosh.
    Exit codes: 0 all PASS/SKIP, 1 a check FAILed, 2 bad input, 3 numeric failure.
    """
    setup_logging(log_level)


app.command("analyze")(analyze.analyze)
app.command("indicatrix")(indicatrix.indicatrix)
app.command("bertrand")(bertrand.bertrand)
app.command("verify")(verify.verify)
app.command("plot")(plot.plot)

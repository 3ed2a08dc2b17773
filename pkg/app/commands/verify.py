import math
from typing import Annotated

import typer

from app.commands.common import (CatalogOption, DomainOption, OutOption, SamplesOption, SpecOption,
                                 TolOption, command_echo, emit_report, finish, handle_errors,
                                 load_curve)
from app.dependencies import bertrand_params
from app.services.runs import run_verify

# Вариант "all" прогоняет все наборы подряд
SUITE_CHOICES = ("all", "frames", "identities", "corollaries", "example")


def verify(
        suite: Annotated[str, typer.Option(
            "--suite", help=f"One of: {', '.join(SUITE_CHOICES)}.")] = "all",
        catalog: CatalogOption = None,
        spec: SpecOption = None,
        domain: DomainOption = None,
        a: Annotated[float, typer.Option("--a", help="Scale for the corollary constructions.")] = 1.0,
        theta: Annotated[float, typer.Option("--theta", help="Angle for the corollary constructions.")] = math.pi / 4,
        samples: Annotated[int, typer.Option("--samples", "-n", min=8)] = 128,
        tol: TolOption = None,
        out: OutOption = None,
):
    """Run check suites; exit 0 when nothing FAILs.

    The JSON report goes to --out or stdout.
    """
    with handle_errors():
        curve = load_curve(catalog, spec, domain)
        params = bertrand_params(a, theta, (0.0, 0.0, 0.0), 0.0)
        result = run_verify(curve, suite, params, command_echo(), samples, tol)
        emit_report(result.report, out)
    finish(result.report)

import math
from typing import Annotated

import typer

from app.commands.common import (CatalogOption, DomainOption, OutOption, ReportOption, SamplesOption,
                                 SpecOption, TolOption, command_echo, emit_table, finish,
                                 handle_errors, load_curve)
from app.commands.indicatrix import WhichOption
from app.dependencies import bertrand_params, parse_point
from app.geometry.bertrand import Measure
from app.geometry.spherical import Indicatrix
from app.services.runs import run_bertrand


def bertrand(
        which: WhichOption = Indicatrix.T,
        catalog: CatalogOption = None,
        spec: SpecOption = None,
        domain: DomainOption = None,
        a: Annotated[float, typer.Option("--a", help="Scale a (non-zero).")] = 1.0,
        theta: Annotated[float, typer.Option("--theta", help="Angle theta in radians, 0 < theta < pi.")] = math.pi / 4,
        c: Annotated[str | None, typer.Option("--c", help="Integration constant X,Y,Z.")] = None,
        sigma0: Annotated[float, typer.Option("--sigma0", help="Base point of the integrals.")] = 0.0,
        measure: Annotated[Measure, typer.Option(
            "--measure", help="Integrate against sigma (Bertrand construction) or the source parameter.")
        ] = Measure.SIGMA,
        samples: SamplesOption = None,
        tol: TolOption = None,
        out: OutOption = None,
        report: ReportOption = None,
):
    """Bertrand curve a*int(gamma) + a*cot(theta)*int(gamma x t) + c from an indicatrix.

    CSV columns: sigma, x, y, z, kappa, tau.
    """
    with handle_errors():
        curve = load_curve(catalog, spec, domain)
        params = bertrand_params(a, theta, parse_point(c), sigma0)
        result = run_bertrand(curve, which, params, command_echo(), samples, measure, tol)
        emit_table(result, out, report)
    finish(result.report)

from typing import Annotated

import typer

from app.commands.common import (CatalogOption, DomainOption, OutOption, ReportOption, SamplesOption,
                                 SpecOption, TolOption, command_echo, emit_table, finish,
                                 handle_errors, load_curve)
from app.geometry.spherical import Indicatrix
from app.services.runs import run_indicatrix

WhichOption = Annotated[Indicatrix, typer.Option(
    "--which", case_sensitive=False,
    help="T, N, B, C (normalized Darboux) or P (the curve itself, must lie on the unit sphere).")]


def indicatrix(
        which: WhichOption = Indicatrix.T,
        catalog: CatalogOption = None,
        spec: SpecOption = None,
        domain: DomainOption = None,
        samples: SamplesOption = None,
        tol: TolOption = None,
        out: OutOption = None,
        report: ReportOption = None,
):
    """Spherical indicatrix in its arclength sigma with geodesic curvature.

    CSV columns: sigma, gx, gy, gz, kappa_g. A degenerate indicatrix (a single
    point) is reported as SKIP with an empty table.
    """
    with handle_errors():
        curve = load_curve(catalog, spec, domain)
        result = run_indicatrix(curve, which, command_echo(), samples, tol)
        emit_table(result, out, report)
    finish(result.report)

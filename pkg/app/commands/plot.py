from pathlib import Path
from typing import Annotated

import typer

from app.commands.common import (CatalogOption, DomainOption, OutOption, SamplesOption, SpecOption,
                                 command_echo, err_console, finish, handle_errors, load_curve)
from app.core.errors import SpecError
from app.geometry.spherical import Indicatrix
from app.io.svg import Projection, write_svg
from app.services.runs import plot_csv, plot_curve


def plot(
        csv: Annotated[Path | None, typer.Option(
            "--csv", help="CSV written by analyze, indicatrix or bertrand.", dir_okay=False)] = None,
        catalog: CatalogOption = None,
        spec: SpecOption = None,
        domain: DomainOption = None,
        which: Annotated[Indicatrix | None, typer.Option(
            "--which", case_sensitive=False, help="Plot this indicatrix instead of the curve.")] = None,
        projection: Annotated[Projection, typer.Option(
            "--projection", case_sensitive=False, help="xy, xz, yz or iso (along (1,1,1)).")] = Projection.ISO,
        samples: SamplesOption = None,
        out: OutOption = None,
):
    """Standalone SVG polyline of a CSV table or of a curve."""
    with handle_errors():
        if csv is not None:
            if catalog is not None or spec is not None:
                raise SpecError("give either --csv or a curve input, not both")
            result = plot_csv(csv, command_echo(), projection)
        else:
            curve = load_curve(catalog, spec, domain)
            result = plot_curve(curve, command_echo(), projection, which, samples)

    if out is None:
        typer.echo(result.svg, nl=False)
    else:
        write_svg(result.svg, out)
        err_console.print(f"wrote {out}")
    finish(result.report)

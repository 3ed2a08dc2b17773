from app.commands.common import (CatalogOption, DomainOption, OutOption, ReportOption, SamplesOption,
                                 SpecOption, TolOption, command_echo, emit_table, finish,
                                 handle_errors, load_curve)
from app.services.runs import run_analyze


def analyze(
        catalog: CatalogOption = None,
        spec: SpecOption = None,
        domain: DomainOption = None,
        samples: SamplesOption = None,
        tol: TolOption = None,
        out: OutOption = None,
        report: ReportOption = None,
):
    """Frenet apparatus along the curve and its helix classification.

    CSV columns: t, s, x, y, z, Tx..Bz, kappa, tau, psi.
    """
    with handle_errors():
        curve = load_curve(catalog, spec, domain)
        result = run_analyze(curve, command_echo(), samples, tol)
        emit_table(result, out, report)
    finish(result.report)

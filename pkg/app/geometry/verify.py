"""Наборы проверок над кривой: реперы, тождества, следствия и разобранный пример."""
import logging
import math

import numpy as np

from app.core.config import settings
from app.core.errors import (DegenerateFit, DegenerateIndicatrix, GeometryError, NumericError,
                             RankDeficient)
from app.geometry.bertrand import (BertrandParams, ConstructedCurve, Measure, bertrand_from_spherical,
                                   construct_corollary5, darboux_variation, fit_bertrand_condition)
from app.geometry.catalog import worked_example_closed_form
from app.geometry.curve import CurveDef, cross, evaluate, norm, speed
from app.geometry.frenet import (HelixKind, classify_helix, darboux_residual, frame_at,
                                 frenet_ode_residual, principal_normal_direct, slant_psi)
from app.geometry.spherical import (Indicatrix, circle_fit, indicatrix, sabban_residual,
                                    stationary_points)
from app.schemas.report import CheckRecord, CheckStatus

logger = logging.getLogger(__name__)

SUITES = ("frames", "identities", "corollaries", "example")

FRAME_TOL = 1e-9
RESIDUAL_TOL = 1e-6
RATIO_RANGE = (3.5, 4.5)
PSI_FLOOR = 1e-3


def _grid(c: CurveDef, n: int) -> list[float]:
    return [float(t) for t in np.linspace(*c.domain, n)]


def _convergence(name: str, residual, h: float) -> CheckRecord:
    """Невязка второго порядка: при вдвое меньшем h падает примерно в 4 раза."""
    coarse, fine = residual(h), residual(h / 2)
    if coarse < 1e-11:
        return CheckRecord.skipped(name, f"residual {coarse:.3g} at roundoff level")
    return CheckRecord.within(name, coarse / fine, *RATIO_RANGE)


# --- РЕПЕРЫ ---

def frames_suite(c: CurveDef, n: int, tol: float | None = None) -> list[CheckRecord]:
    records = []
    gram, handed, normal_gap, undefined = [], [], [], 0
    for t in _grid(c, n):
        try:
            f = frame_at(c, t)
            direct = principal_normal_direct(c, t)
        except NumericError:
            undefined += 1
            continue
        M = np.array([f.T, f.N, f.B])
        gram.append(float(np.max(np.abs(M @ M.T - np.eye(3)))))
        handed.append(abs(float(np.linalg.det(M)) - 1.0))
        normal_gap.append(norm(f.N - direct))

    if not gram:
        records.append(CheckRecord.skipped("frame", "Frenet frame undefined on the whole domain"))
    else:
        if undefined:
            records.append(CheckRecord.skipped("frame.undefined-points", f"{undefined} of {n} samples"))
        records.append(CheckRecord.measured("frame.orthonormality", max(gram), FRAME_TOL))
        records.append(CheckRecord.measured("frame.handedness", max(handed), FRAME_TOL))
        records.append(CheckRecord.measured("frame.normal-crosscheck", max(normal_gap), 1e-8))
        records.extend(_frenet_equations(c, n))

    for which in (Indicatrix.T, Indicatrix.N, Indicatrix.B, Indicatrix.C):
        records.extend(_sabban_checks(c, which, n))
    return records


def _frenet_equations(c: CurveDef, n: int) -> list[CheckRecord]:
    h = 2e-5 * c.length
    ode, darboux = [], []
    for t in _grid(c, min(n, 32)):
        try:
            ode.append(frenet_ode_residual(c, t, h))
            darboux.append(darboux_residual(c, t, h))
        except NumericError:
            continue
    if not ode:
        return [CheckRecord.skipped("frame.frenet-equations", "no regular sample")]

    records = [
        CheckRecord.measured("frame.frenet-residual", max(ode), RESIDUAL_TOL),
        CheckRecord.measured("frame.darboux-residual", max(darboux), RESIDUAL_TOL),
    ]
    mid = 0.5 * (c.domain[0] + c.domain[1])
    try:
        records.append(_convergence("frame.frenet-convergence",
                                    lambda step: frenet_ode_residual(c, mid, step), 2e-4 * c.length))
    except NumericError as exc:
        records.append(CheckRecord.skipped("frame.frenet-convergence", exc.detail))

    speeds = [speed(c, t) for t in _grid(c, n)]
    if max(abs(s - 1.0) for s in speeds) <= 1e-12:
        gaps = []
        for t in _grid(c, n):
            try:
                f = frame_at(c, t)
            except NumericError:
                continue
            gaps.append(abs(f.kappa - norm(evaluate(c, t).d2)))
        records.append(CheckRecord.measured("frame.unit-speed-curvature", max(gaps), 1e-10))
    else:
        records.append(CheckRecord.skipped("frame.unit-speed-curvature", "curve is not unit-speed"))
    return records


def _sabban_checks(c: CurveDef, which: Indicatrix, n: int) -> list[CheckRecord]:
    prefix = f"sabban.{which.value}"
    try:
        sc = indicatrix(c, which, n)
    except (DegenerateIndicatrix, NumericError) as exc:
        return [CheckRecord.skipped(prefix, exc.detail)]

    unit, ortho = [], []
    best_u, best_rate = None, -1.0
    for u in sc.sigma_table.grid:
        ip = sc.point(float(u))
        side = cross(ip.gamma, ip.tvec)
        M = np.array([ip.gamma, ip.tvec, side])
        unit.append(abs(norm(ip.gamma) - 1.0))
        ortho.append(max(float(np.max(np.abs(M @ M.T - np.eye(3)))), abs(float(np.linalg.det(M)) - 1.0)))
        if ip.rate > best_rate:
            best_u, best_rate = float(u), ip.rate

    records = [
        CheckRecord.measured(f"{prefix}.unit-sphere", max(unit), FRAME_TOL),
        CheckRecord.measured(f"{prefix}.orthonormality", max(ortho), 1e-8),
    ]

    lo, hi = sc.sigma_span
    h = 0.005 * (hi - lo)
    sigma = min(max(sc.sigma_table.value_at(best_u), lo + 2 * h), hi - 2 * h)
    records.append(_convergence(f"{prefix}.spherical-frenet-convergence",
                                lambda step: sabban_residual(sc, sigma, step), h))
    return records


# --- ТОЖДЕСТВА ---

def _fd(fn, u: float, h: float):
    return (fn(u - 2 * h) - 8 * fn(u - h) + 8 * fn(u + h) - fn(u + 2 * h)) / (12 * h)


def _darboux_direction(c: CurveDef, u: float):
    f = frame_at(c, u)
    return f.darboux / math.hypot(f.kappa, f.tau)


def identities_suite(c: CurveDef, n: int, tol: float | None = None) -> list[CheckRecord]:
    tol = settings.CONSTANCY_TOL if tol is None else tol
    h = settings.FD_STEP * c.length
    normal_gap, darboux_gap, direction_gap, speed_gap = [], [], [], []
    psi_samples = []

    for u in _grid(c, n):
        try:
            f = frame_at(c, u)
            psi = slant_psi(c, u)
            dN = _fd(lambda x: frame_at(c, x).N, u, h)
            dC = _fd(lambda x: _darboux_direction(c, x), u, h)
        except NumericError:
            continue
        w = math.hypot(f.kappa, f.tau)
        normal_gap.append(norm(cross(f.N, dN / norm(dN)) - f.darboux / w))
        psi_samples.append((u, f, psi, w, dC))

    if not normal_gap:
        return [CheckRecord.skipped("identity", "Frenet frame undefined on the whole domain")]
    records = [CheckRecord.measured("identity.normal-cross-derivative", max(normal_gap), RESIDUAL_TOL,
                                    "N x N'/|N'| = C")]

    psi_max = max(abs(s[2]) for s in psi_samples)
    for u, f, psi, w, dC in psi_samples:
        if abs(psi) < PSI_FLOOR:
            continue
        sign = math.copysign(1.0, psi)
        dC_unit = dC / norm(dC)
        darboux_gap.append(norm(cross(f.darboux / w, dC_unit) - sign * f.N))
        direction_gap.append(norm(dC_unit - sign * (f.kappa * f.T - f.tau * f.B) / w))
        if abs(psi) >= 0.1 * psi_max:
            speed_gap.append(abs(norm(dC) / f.speed - abs(psi) * w) / (abs(psi) * w))

    if darboux_gap:
        records.append(CheckRecord.measured("identity.darboux-cross-derivative", max(darboux_gap),
                                            RESIDUAL_TOL, "C x C'/|C'| = sign((tau/kappa)') N"))
        records.append(CheckRecord.measured("identity.darboux-derivative-direction", max(direction_gap),
                                            RESIDUAL_TOL, "C'/|C'| = sign((tau/kappa)') (kappa T - tau B)/w"))
        records.append(CheckRecord.measured("identity.darboux-derivative-norm", max(speed_gap), 1e-5,
                                            "|C'| = |psi| w"))
    else:
        records.append(CheckRecord.skipped("identity.darboux-cross-derivative",
                                           "Darboux indicatrix is constant (psi = 0)"))

    records.append(_lancret_link(c, n, tol))
    return records


def _lancret_link(c: CurveDef, n: int, tol: float) -> CheckRecord:
    name = "identity.lancret-link"
    try:
        report = classify_helix(c, n, tol)
        fit = circle_fit(indicatrix(c, Indicatrix.T, n), n)
    except (DegenerateIndicatrix, DegenerateFit, NumericError) as exc:
        return CheckRecord.skipped(name, exc.detail)
    on_circle = fit.is_circle(tol)
    status = CheckStatus.PASS if on_circle == report.is_general else CheckStatus.FAIL
    return CheckRecord(name=name, status=status, value=fit.rms_residual, tol=tol,
                       detail=f"kind={report.kind.value}, tangent indicatrix on a circle: {on_circle}")


# --- СЛЕДСТВИЯ ---

def fit_record(name: str, cc: ConstructedCurve) -> CheckRecord:
    notes = "; ".join(cc.notes)
    try:
        fit = fit_bertrand_condition(cc)
    except RankDeficient as exc:
        detail = f"rank deficient, family {exc.family[0]:.9g}*A + {exc.family[1]:.9g}*B = 1"
        return CheckRecord.measured(name, exc.residual, settings.FIT_TOL, "; ".join(filter(None, [detail, notes])))
    except DegenerateFit as exc:
        return CheckRecord(name=name, status=CheckStatus.FAIL, detail=exc.detail)
    detail = f"A={fit.A:.12g}, B={fit.B:.12g}, excluded={fit.excluded}"
    return CheckRecord.measured(name, fit.residual, settings.FIT_TOL, "; ".join(filter(None, [detail, notes])))


def circular_record(name: str, cc: ConstructedCurve, tol: float) -> CheckRecord:
    report = cc.helix_report(tol)
    spread = max(report.kappa.spread / (1 + abs(report.kappa.mean)),
                 report.tau.spread / (1 + abs(report.tau.mean)))
    status = CheckStatus.PASS if report.kind is HelixKind.CIRCULAR else CheckStatus.FAIL
    return CheckRecord(name=name, status=status, value=spread, tol=tol, detail=f"kind={report.kind.value}")


def verify_corollaries(c: CurveDef, p: BertrandParams, tol: float | None = None,
                       n: int | None = None) -> list[CheckRecord]:
    tol = settings.CONSTANCY_TOL if tol is None else tol
    n = n or settings.DEFAULT_SAMPLES
    try:
        source = classify_helix(c, n, tol)
    except NumericError as exc:
        return [CheckRecord.skipped("source.kind", exc.detail)]

    records = [CheckRecord.info("source.kind", source.kind.value)]
    general = source.kind in (HelixKind.GENERAL, HelixKind.CIRCULAR)
    slant = general or source.kind is HelixKind.SLANT
    premises = {
        Indicatrix.T: ("corollary2", general, "general helix"),
        Indicatrix.B: ("corollary3", general, "general helix"),
        Indicatrix.N: ("corollary4", slant, "slant helix"),
        Indicatrix.C: (None, False, ""),
    }

    for which, (corollary, premise, premise_text) in premises.items():
        fit_name = f"theorem.{which.value}.bertrand-fit"
        cc, reason = None, ""
        try:
            sc = indicatrix(c, which, n)
            cusps = stationary_points(sc)
            if cusps:
                reason = f"indicatrix stops at t={cusps[0]:.6g}; restrict the domain"
                records.append(CheckRecord.skipped(fit_name, reason))
            else:
                cc = bertrand_from_spherical(sc, p, n)
                records.append(fit_record(fit_name, cc))
        except GeometryError as exc:
            reason = exc.detail
            records.append(CheckRecord.skipped(fit_name, reason))

        if corollary is None:
            continue
        row = f"{corollary}.circular-helix"
        if not premise:
            records.append(CheckRecord.premise_not_met(row, f"source is not a {premise_text} (kind={source.kind.value})"))
        elif cc is None:
            records.append(CheckRecord.skipped(row, f"construction unavailable: {reason}"))
        else:
            records.append(circular_record(row, cc, tol))

    records.append(_corollary5(c, p, n, source.kind))
    return records


def _corollary5(c: CurveDef, p: BertrandParams, n: int, kind: HelixKind) -> CheckRecord:
    name = "corollary5.bertrand-fit"
    if kind is HelixKind.PLANAR:
        return CheckRecord.premise_not_met(name, "torsion vanishes identically")
    try:
        variation = darboux_variation(c, n)
    except NumericError as exc:
        return CheckRecord.skipped(name, exc.detail)
    if variation > 1e-9:
        return CheckRecord.premise_not_met(name, f"Darboux indicatrix not constant, max |C'| = {variation:.3g}")
    try:
        cc = construct_corollary5(c, p, n)
    except GeometryError as exc:
        return CheckRecord(name=name, status=CheckStatus.FAIL, detail=exc.detail)
    return fit_record(name, cc)


# --- РАЗОБРАННЫЙ ПРИМЕР ---

def _aligned_gap(a: np.ndarray, b: np.ndarray) -> float:
    """Максимальное отклонение после вычета лучшей аддитивной константы."""
    diff = a - b
    return float(np.max(np.abs(diff - diff.mean())))


def example_suite(c: CurveDef, n: int) -> list[CheckRecord]:
    if c.label != "paper-example":
        return [CheckRecord.skipped("example", "only defined for the paper-example catalog curve")]

    dense = np.linspace(*c.domain, 1000)
    records = [CheckRecord.measured("example.unit-speed",
                                    max(abs(speed(c, float(s)) - 1.0) for s in dense), 1e-12)]

    tangent_gap = 0.0
    for s in np.linspace(*c.domain, n):
        s = float(s)
        expected = np.array([math.sin(s), math.sin(s) * math.cos(s), math.cos(s) ** 2])
        tangent_gap = max(tangent_gap, norm(frame_at(c, s).T - expected))
    records.append(CheckRecord.measured("example.tangent-indicatrix", tangent_gap, 1e-9))

    # замкнутая форма проинтегрирована по s, во второй компоненте бинормаль
    # входит с обратным знаком
    half = c.with_domain(0.0, math.pi)
    sc = indicatrix(half, Indicatrix.T, 50)
    plus = bertrand_from_spherical(sc, BertrandParams(a=1.0, theta=math.pi / 4, c=(-1.0, 0.0, 0.0)),
                                   50, Measure.SOURCE)
    minus = bertrand_from_spherical(sc, BertrandParams(a=1.0, theta=3 * math.pi / 4, c=(-1.0, 0.0, 0.0)),
                                    50, Measure.SOURCE)
    closed = np.array([worked_example_closed_form(float(s)) for s in plus.sigma])
    records.append(CheckRecord.measured("example.closed-form-x", _aligned_gap(plus.points[:, 0], closed[:, 0]),
                                        RESIDUAL_TOL, "elliptic terms by quadrature"))
    records.append(CheckRecord.measured("example.closed-form-y", _aligned_gap(minus.points[:, 1], closed[:, 1]),
                                        RESIDUAL_TOL, "matches with cot(theta) = -1"))
    records.append(CheckRecord.measured("example.closed-form-z", _aligned_gap(plus.points[:, 2], closed[:, 2]),
                                        RESIDUAL_TOL))
    return records


# --- ДИСПЕТЧЕР ---

def run_suites(c: CurveDef, suite: str, p: BertrandParams, tol: float | None = None,
               n: int | None = None) -> list[CheckRecord]:
    n = n or settings.DEFAULT_SAMPLES
    names = SUITES if suite == "all" else (suite,)
    records = []
    for name in names:
        logger.info("running suite %s on %s", name, c.label)
        match name:
            case "frames":
                records += frames_suite(c, n, tol)
            case "identities":
                records += identities_suite(c, n, tol)
            case "corollaries":
                records += verify_corollaries(c, p, tol, n)
            case "example":
                records += example_suite(c, n)
            case _:
                raise ValueError(f"unknown suite '{name}'")
    return records

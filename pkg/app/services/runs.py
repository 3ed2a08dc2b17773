"""Запуск команд, общий для CLI и HTTP-роутеров.

Каждый запуск возвращает RunReport и таблицу (или текст SVG) команды.
Запись файлов и выбор кода выхода остаются за вызывающим.
"""
import hashlib
import logging
import math
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from app.core.config import settings
from app.core.errors import DegenerateIndicatrix, NumericError, SpecError
from app.geometry.bertrand import (BertrandParams, ConstructedCurve, Measure, bertrand_from_indicatrix,
                                   construct_corollary5, darboux_variation, fit_bertrand_condition)
from app.geometry.curve import CurveDef, arclength_table, evaluate
from app.geometry.frenet import frame_at, slant_psi, summarize_helix
from app.geometry.spherical import Indicatrix, circle_fit, indicatrix, sabban_at, stationary_points
from app.geometry.verify import SUITES, fit_record, run_suites
from app.io import tables
from app.io.svg import Projection, render_svg
from app.schemas.report import CheckRecord, CheckStatus, RunReport

logger = logging.getLogger(__name__)

SPEED_TOL = 1e-7
ALIGNMENT_TOL = 1e-6
COEFFICIENT_TOL = 1e-4


class RunResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    report: RunReport
    table: pd.DataFrame | None = None
    svg: str | None = None


def _samples(n: int | None) -> int:
    n = n or settings.DEFAULT_SAMPLES
    if n < 8:
        raise SpecError(f"--samples must be at least 8, got {n}")
    return n


def _nan_row(width: int) -> list[float]:
    return [math.nan] * width


# --- АНАЛИЗ ---

def run_analyze(c: CurveDef, command: str, n: int | None = None, tol: float | None = None) -> RunResult:
    n = _samples(n)
    arclength = arclength_table(c, n)
    rows, kappa, tau, psi, directions, failed = [], [], [], [], [], []
    last_error: NumericError | None = None

    for k, t in enumerate(arclength.grid):
        t = float(t)
        head = [t, float(arclength.values[k]), *evaluate(c, t).p]
        try:
            f = frame_at(c, t)
            p = slant_psi(c, t)
        except NumericError as exc:
            last_error = exc
            failed.append(t)
            rows.append(head + _nan_row(12))
            continue
        rows.append(head + [*f.T, *f.N, *f.B, f.kappa, f.tau, p])
        kappa.append(f.kappa)
        tau.append(f.tau)
        psi.append(p)
        directions.append(f.darboux / math.hypot(f.kappa, f.tau))

    if len(kappa) < 2:
        raise last_error
    if failed:
        logger.warning("%s: Frenet frame undefined at %d of %d samples", c.label, len(failed), n)

    helix = summarize_helix(kappa, tau, psi, tol, directions, failed)
    checks = [
        CheckRecord.info("analyze.length", float(arclength.values[-1]), "arclength over the domain"),
        CheckRecord.info("helix.kind", helix.kind.value),
        CheckRecord.info("helix.kappa", helix.kappa.mean, f"spread {helix.kappa.spread:.3g}"),
        CheckRecord.info("helix.tau", helix.tau.mean, f"spread {helix.tau.spread:.3g}"),
        CheckRecord.info("helix.tau-over-kappa", helix.ratio.mean, f"spread {helix.ratio.spread:.3g}"),
    ]
    if helix.psi is not None:
        checks.append(CheckRecord.info("helix.psi", helix.psi.mean, f"spread {helix.psi.spread:.3g}"))
    if helix.axis is not None:
        checks.append(CheckRecord.info("helix.axis", ", ".join(f"{x:.12g}" for x in helix.axis)))
    if failed:
        checks.append(CheckRecord.skipped("analyze.undefined-points", f"{len(failed)} of {n} samples"))

    report = RunReport(command=command, input_digest=c.digest(), checks=checks)
    return RunResult(report=report, table=tables.frame(rows, tables.ANALYZE_COLUMNS))


# --- ИНДИКАТРИСА ---

def run_indicatrix(c: CurveDef, which: Indicatrix | str, command: str, n: int | None = None,
                   tol: float | None = None) -> RunResult:
    which = Indicatrix(which)
    n = _samples(n)
    tol = settings.CONSTANCY_TOL if tol is None else tol
    prefix = f"indicatrix.{which.value}"
    empty = tables.frame([], tables.INDICATRIX_COLUMNS)

    try:
        sc = indicatrix(c, which, n)
    except DegenerateIndicatrix as exc:
        logger.warning("%s", exc.detail)
        report = RunReport(command=command, input_digest=c.digest(),
                           checks=[CheckRecord.skipped(prefix, exc.detail)])
        return RunResult(report=report, table=empty)

    rows, kappa_g = [], []
    for k, u in enumerate(sc.sigma_table.grid):
        u, sigma = float(u), float(sc.sigma_table.values[k])
        try:
            smp = sabban_at(sc, u, sigma)
        except NumericError:
            # точка возврата индикатрисы: точка известна, геодезическая кривизна нет
            rows.append([sigma, *sc.point(u).gamma, math.nan])
            continue
        rows.append([sigma, *smp.gamma, smp.kappa_g])
        kappa_g.append(smp.kappa_g)

    checks = [CheckRecord.info(f"{prefix}.length", sc.sigma_span[1], "arclength on the sphere")]
    if kappa_g:
        spread = max(kappa_g) - min(kappa_g)
        checks.append(CheckRecord.info(f"{prefix}.kappa-g", float(np.mean(kappa_g)), f"spread {spread:.3g}"))
    cusps = stationary_points(sc)
    if cusps:
        checks.append(CheckRecord.skipped(f"{prefix}.stationary-points",
                                          f"{len(cusps)} cusp(s), first at t={cusps[0]:.6g}"))
    try:
        fit = circle_fit(sc, n)
        axis = ", ".join(f"{x:.9g}" for x in fit.axis)
        checks.append(CheckRecord.info(
            f"{prefix}.circle-fit", fit.rms_residual,
            f"axis ({axis}), cos angle {fit.cos_angle:.12g}, circle: {fit.is_circle(tol)}",
        ))
    except NumericError as exc:
        checks.append(CheckRecord.skipped(f"{prefix}.circle-fit", exc.detail))

    report = RunReport(command=command, input_digest=c.digest(), checks=checks)
    return RunResult(report=report, table=tables.frame(rows, tables.INDICATRIX_COLUMNS))


# --- БЕРТРАН ---

def _construct(c: CurveDef, which: Indicatrix, p: BertrandParams, n: int, measure: Measure) -> ConstructedCurve:
    try:
        return bertrand_from_indicatrix(c, which, p, n, measure=measure)
    except DegenerateIndicatrix:
        # направление Дарбу постоянно: C-индикатриса вырождается в точку
        if which is not Indicatrix.C or darboux_variation(c, n) > 1e-9:
            raise
        logger.info("%s: Darboux indicatrix is constant, using the N-indicatrix construction", c.label)
        return construct_corollary5(c, p, n)


def _bertrand_checks(cc: ConstructedCurve, p: BertrandParams, tol: float) -> list[CheckRecord]:
    mask = cc.defined
    checks = []
    if cc.measure is Measure.SIGMA:
        checks.append(fit_record("bertrand.fit", cc))
        try:
            fit = fit_bertrand_condition(cc)
            expected = (p.a, p.a * p.cot)
            gap = max(abs(fit.A - expected[0]) / abs(expected[0]),
                      abs(fit.B - expected[1]) / max(abs(expected[1]), abs(expected[0])))
            checks.append(CheckRecord.measured(
                "bertrand.coefficients", gap, COEFFICIENT_TOL,
                f"expected A={expected[0]:.12g}, B={expected[1]:.12g}",
            ))
        except NumericError as exc:
            checks.append(CheckRecord.skipped("bertrand.coefficients", exc.detail))
        speed_gap = float(np.nanmax(np.abs(cc.speed - p.expected_speed)))
        checks.append(CheckRecord.measured("bertrand.speed", speed_gap, SPEED_TOL,
                                           f"expected |a|/sin(theta) = {p.expected_speed:.12g}"))
    else:
        checks.append(CheckRecord.skipped(
            "bertrand.fit", "source measure: positions follow the source parameter, not sigma"))

    checks.append(CheckRecord.measured("bertrand.normal-alignment",
                                       float(np.max(1.0 - cc.alignment[mask])), ALIGNMENT_TOL,
                                       "|N~ . t| = 1"))
    helix = cc.helix_report(tol)
    checks.append(CheckRecord.info("bertrand.helix-kind", helix.kind.value,
                                   f"kappa {helix.kappa.mean:.9g}, tau {helix.tau.mean:.9g}"))
    if not mask.all():
        checks.append(CheckRecord.skipped("bertrand.undefined-points",
                                          f"{int((~mask).sum())} of {len(mask)} samples are inflections"))
    checks.extend(CheckRecord.info("bertrand.note", note) for note in cc.notes)
    return checks


def run_bertrand(c: CurveDef, which: Indicatrix | str, p: BertrandParams, command: str,
                 n: int | None = None, measure: Measure | str = Measure.SIGMA,
                 tol: float | None = None) -> RunResult:
    which, measure = Indicatrix(which), Measure(measure)
    n = _samples(n)
    tol = settings.CONSTANCY_TOL if tol is None else tol

    cc = _construct(c, which, p, n, measure)
    rows = np.column_stack([cc.sigma, cc.points, cc.kappa, cc.tau])
    report = RunReport(command=command, input_digest=c.digest(), checks=_bertrand_checks(cc, p, tol))
    return RunResult(report=report, table=tables.frame(rows, tables.BERTRAND_COLUMNS))


# --- ПРОВЕРКИ ---

def run_verify(c: CurveDef, suite: str, p: BertrandParams, command: str,
               n: int | None = None, tol: float | None = None) -> RunResult:
    if suite != "all" and suite not in SUITES:
        raise SpecError(f"unknown suite '{suite}'; choose all, {', '.join(SUITES)}")
    checks = run_suites(c, suite, p, tol, _samples(n))
    return RunResult(report=RunReport(command=command, input_digest=c.digest(), checks=checks))


# --- ГРАФИК ---

def plot_curve(c: CurveDef, command: str, projection: Projection | str = Projection.ISO,
               which: Indicatrix | str | None = None, n: int | None = None) -> RunResult:
    n = _samples(n)
    if which is None:
        points = np.array([evaluate(c, float(t)).p for t in np.linspace(*c.domain, n)])
        name, title, sphere = c.label, c.label, False
    else:
        sc = indicatrix(c, which, n)
        points = np.array([sc.point(float(u)).gamma for u in sc.sigma_table.grid])
        name = f"{sc.which.value}-indicatrix"
        title, sphere = f"{name} of {c.label}", True
    return _plot(points, name, title, sphere, projection, command, c.digest())


def plot_csv(path: Path | str, command: str, projection: Projection | str = Projection.ISO) -> RunResult:
    path = Path(path)
    points, sphere = tables.read_points(path)
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    return _plot(points, path.stem, path.name, sphere, projection, command, digest)


def _plot(points: np.ndarray, name: str, title: str, sphere: bool, projection: Projection | str,
          command: str, digest: str) -> RunResult:
    svg = render_svg([(name, points)], projection, title=title, sphere=sphere)
    checks = [CheckRecord(name="plot.points", status=CheckStatus.PASS, value=float(len(points)),
                          detail=f"projection {Projection(projection).value}")]
    return RunResult(report=RunReport(command=command, input_digest=digest, checks=checks), svg=svg)

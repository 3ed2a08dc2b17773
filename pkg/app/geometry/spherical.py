"""Сферические индикатрисы, репер Саббана и поиск окружностей на сфере.

Для индикатрисы точка образа, её единичная касательная и скорость dsigma/dt
выражаются явно через данные Френе исходной кривой:

    T:  gamma = T,        t = N,                          rate = kappa
    N:  gamma = N,        t = (-kappa T + tau B) / w,     rate = w
    B:  gamma = B,        t = -sgn(tau) N,                rate = |tau|
    C:  gamma = W / w,    t = sgn(psi)(kappa T - tau B)/w, rate = |psi| w

где w = sqrt(kappa^2 + tau^2), и каждая скорость умножена на скорость исходной кривой.
"""
import enum
import logging
import math
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.core.config import settings
from app.core.errors import (DegenerateFit, DegenerateIndicatrix, InflectionPoint,
                             NonUnitInput, SingularSpeed)
from app.geometry.curve import CurveDef, Vec3, cross, det3, evaluate, norm
from app.geometry.frenet import frame_at, slant_psi
from app.geometry.numerics import CumulativeTable, QuadConfig, cumulative, invert_monotone

logger = logging.getLogger(__name__)

UNIT_INPUT_TOL = 1e-6


class Indicatrix(str, enum.Enum):
    T = "T"
    N = "N"
    B = "B"
    C = "C"
    # сама исходная кривая, уже на единичной сфере
    P = "P"


class ImagePoint(NamedTuple):
    gamma: Vec3
    tvec: Vec3
    rate: float


class SphericalCurve(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    source: CurveDef
    which: Indicatrix
    sigma_table: CumulativeTable

    @property
    def domain(self) -> tuple[float, float]:
        return self.source.domain

    @property
    def sigma_span(self) -> tuple[float, float]:
        return self.sigma_table.span

    def point(self, u: float) -> ImagePoint:
        return image_point(self.source, self.which, u)

    def parameter_at(self, sigma: float) -> float:
        return invert_monotone(self.sigma_table, sigma)


class SabbanSample(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sigma: float
    u: float
    gamma: Vec3
    tvec: Vec3
    side: Vec3
    kappa_g: float


class CircleFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    axis: tuple[float, float, float]
    cos_angle: float
    rms_residual: float

    def is_circle(self, tol: float) -> bool:
        return self.rms_residual <= tol


# --- ТОЧКИ ОБРАЗА ---

def _sign(x: float) -> float:
    return math.copysign(1.0, x)


def image_point(c: CurveDef, which: Indicatrix, u: float) -> ImagePoint:
    if which is Indicatrix.P:
        smp = evaluate(c, u)
        r = norm(smp.p)
        if abs(r - 1.0) > UNIT_INPUT_TOL:
            raise NonUnitInput(f"|gamma({u:g})| = {r:.9g} is not 1")
        sp = norm(smp.d1)
        if sp < settings.SPEED_EPS:
            raise SingularSpeed(f"spherical curve stalls at {u:g}")
        return ImagePoint(smp.p, smp.d1 / sp, sp)

    f = frame_at(c, u)
    w = math.hypot(f.kappa, f.tau)
    match which:
        case Indicatrix.T:
            return ImagePoint(f.T, f.N, f.kappa * f.speed)
        case Indicatrix.N:
            return ImagePoint(f.N, (-f.kappa * f.T + f.tau * f.B) / w, w * f.speed)
        case Indicatrix.B:
            return ImagePoint(f.B, -_sign(f.tau) * f.N, abs(f.tau) * f.speed)
        case Indicatrix.C:
            psi = slant_psi(c, u)
            tvec = _sign(psi) * (f.kappa * f.T - f.tau * f.B) / w
            return ImagePoint(f.darboux / w, tvec, abs(psi) * w * f.speed)
    raise ValueError(f"unknown indicatrix {which!r}")


def _rate(c: CurveDef, which: Indicatrix, u: float) -> float:
    if which is Indicatrix.T:
        # kappa * speed, определено и в точках распрямления
        smp = evaluate(c, u)
        sp = norm(smp.d1)
        if sp < settings.SPEED_EPS:
            raise SingularSpeed(f"speed {sp:.3g} below {settings.SPEED_EPS:g}")
        return norm(cross(smp.d1, smp.d2)) / sp ** 2
    return image_point(c, which, u).rate


def signed_rate(c: CurveDef, which: Indicatrix, u: float) -> float:
    """dsigma/dt до взятия модуля, смена знака означает точку возврата."""
    if which is Indicatrix.B:
        f = frame_at(c, u)
        return f.tau * f.speed
    if which is Indicatrix.C:
        f = frame_at(c, u)
        return slant_psi(c, u) * math.hypot(f.kappa, f.tau) * f.speed
    return _rate(c, which, u)


def stationary_points(sc: SphericalCurve) -> list[float]:
    """Параметры сетки, где индикатриса останавливается (точки возврата)."""
    grid = sc.sigma_table.grid
    rates = np.array([signed_rate(sc.source, sc.which, float(u)) for u in grid])
    hits = set(np.flatnonzero(np.abs(rates) <= settings.DEGENERATE_EPS))
    hits.update(np.flatnonzero(rates[:-1] * rates[1:] < 0))
    return [float(grid[i]) for i in sorted(hits)]


def indicatrix(c: CurveDef, which: Indicatrix | str, n: int | None = None,
               domain: tuple[float, float] | None = None,
               cfg: QuadConfig | None = None) -> SphericalCurve:
    """Сферический образ `which` кривой `c` с таблицей длины дуги sigma(t)."""
    which = Indicatrix(which)
    n = n or settings.DEFAULT_SAMPLES
    if domain is not None:
        c = c.with_domain(*domain)

    rates = []
    inflections = 0
    for u in np.linspace(*c.domain, n):
        try:
            rates.append(_rate(c, which, float(u)))
        except InflectionPoint:
            inflections += 1

    if inflections == n or not rates or max(rates) <= settings.DEGENERATE_EPS:
        raise DegenerateIndicatrix(f"{which.value}-indicatrix of '{c.label}' is a single point")
    if inflections:
        raise InflectionPoint(f"Frenet frame of '{c.label}' undefined at {inflections} of {n} samples")

    table = cumulative(lambda u: _rate(c, which, u), *c.domain, n, cfg)
    logger.info("%s-indicatrix of %s: sigma span %.9g", which.value, c.label, table.span[1])
    return SphericalCurve(source=c, which=which, sigma_table=table)


# --- РЕПЕР САББАНА ---

def tangent_derivative(sc: SphericalCurve, u: float, rate: float) -> Vec3:
    """dt/dsigma центральной разностью 4-го порядка от аналитической касательной."""
    if rate <= settings.DEGENERATE_EPS:
        raise DegenerateIndicatrix(f"stationary point of the indicatrix at {u:g}")
    h = settings.FD_STEP * sc.source.length
    t = [sc.point(u + k * h).tvec for k in (-2, -1, 1, 2)]
    dt_du = (t[0] - 8 * t[1] + 8 * t[2] - t[3]) / (12 * h)
    return dt_du / rate


def sabban_at(sc: SphericalCurve, u: float, sigma: float | None = None) -> SabbanSample:
    ip = sc.point(u)
    side = cross(ip.gamma, ip.tvec)
    kappa_g = det3(ip.gamma, ip.tvec, tangent_derivative(sc, u, ip.rate))
    if sigma is None:
        sigma = sc.sigma_table.value_at(u)
    return SabbanSample(sigma=sigma, u=u, gamma=ip.gamma, tvec=ip.tvec, side=side, kappa_g=kappa_g)


def sabban_frame(sc: SphericalCurve, sigma: float) -> SabbanSample:
    return sabban_at(sc, sc.parameter_at(sigma), sigma)


def sabban_residual(sc: SphericalCurve, sigma: float, h: float) -> float:
    """Max-норма невязки сферических уравнений Френе, разности по sigma."""
    m, o, p = (sabban_frame(sc, sigma + k * h) for k in (-1, 0, 1))
    d_gamma = (p.gamma - m.gamma) / (2 * h)
    d_t = (p.tvec - m.tvec) / (2 * h)
    d_side = (p.side - m.side) / (2 * h)
    return max(
        norm(d_gamma - o.tvec),
        norm(d_t + o.gamma - o.kappa_g * o.side),
        norm(d_side + o.kappa_g * o.tvec),
    )


# --- ОКРУЖНОСТИ НА СФЕРЕ ---

def _orient(axis: np.ndarray) -> np.ndarray:
    for i in (2, 1, 0):
        if abs(axis[i]) > 1e-12:
            return axis if axis[i] > 0 else -axis
    return axis


def fit_circle(points) -> CircleFit:
    """Плоскость u . x = cos_angle через точки сферы, u - младшая главная ось."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 4:
        raise DegenerateFit("need at least 4 points in R^3")

    centered = pts - pts.mean(axis=0)
    moment = centered.T @ centered / len(pts)
    evals, evecs = np.linalg.eigh(moment)
    if evals[2] <= 1e-24 or evals[1] <= 1e-14 * evals[2]:
        raise DegenerateFit("samples span fewer than two dimensions")

    axis = _orient(evecs[:, 0])
    proj = pts @ axis
    cos_angle = float(np.clip(proj.mean(), -1.0, 1.0))
    rms = float(np.sqrt(np.mean((proj - proj.mean()) ** 2)))
    return CircleFit(axis=tuple(float(x) for x in axis), cos_angle=cos_angle, rms_residual=rms)


def circle_fit(sc: SphericalCurve, n: int) -> CircleFit:
    if n < 4:
        raise ValueError("circle_fit needs at least 4 samples")
    return fit_circle([sc.point(float(u)).gamma for u in np.linspace(*sc.domain, n)])

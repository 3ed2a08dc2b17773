"""Кривые Бертрана, построенные по сферическим кривым.

Сферическая кривая gamma(sigma) единичной скорости с репером Саббана
(gamma, t, side) даёт кривую

    a * int gamma dsigma + a * cot(theta) * int side dsigma + c,

с главной нормалью t, кривизны которой удовлетворяют
a * kappa + a * cot(theta) * tau = 1.
"""
import enum
import logging
import math
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.config import settings
from app.core.errors import DegenerateFit, InflectionPoint, NumericError, OutOfRange, RankDeficient
from app.geometry.curve import CurveDef, Vec3, cross, norm, speed
from app.geometry.frenet import HelixReport, frame_at, frame_from_derivatives, slant_psi, summarize_helix
from app.geometry.numerics import integrate
from app.geometry.spherical import Indicatrix, SphericalCurve, indicatrix, sabban_at

logger = logging.getLogger(__name__)

Direction = Callable[[float], Vec3]

STRAIGHT_EPS = 1e-9


class Measure(str, enum.Enum):
    # интегрируем по длине дуги сферической кривой
    SIGMA = "sigma"
    # интегрируем по параметру исходной кривой
    SOURCE = "source"


class BertrandParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: float = 1.0
    theta: float = math.pi / 4
    c: tuple[float, float, float] = (0.0, 0.0, 0.0)
    sigma0: float = 0.0

    @field_validator("a")
    @classmethod
    def _nonzero(cls, v: float) -> float:
        if v == 0.0 or not math.isfinite(v):
            raise ValueError("a must be finite and non-zero")
        return v

    @field_validator("theta")
    @classmethod
    def _angle(cls, v: float) -> float:
        if not 0.0 < v < math.pi or math.sin(v) < 1e-9:
            raise ValueError("theta must lie in (0, pi) with sin(theta) >= 1e-9")
        return v

    @property
    def cot(self) -> float:
        return math.cos(self.theta) / math.sin(self.theta)

    @property
    def orthogonal(self) -> bool:
        """theta = pi/2: слагаемое партнёра обнуляется."""
        return abs(self.cot) < 1e-12

    @property
    def expected_speed(self) -> float:
        return abs(self.a) / math.sin(self.theta)


class BertrandFit(BaseModel):
    A: float
    B: float
    residual: float = Field(ge=0)
    used: int
    excluded: int


class ConstructedCurve(BaseModel):
    """Выборка построенной кривой с данными Френе.

    `sigma` - длина дуги сферической кривой для Measure.SIGMA и параметр
    исходной кривой для Measure.SOURCE. Где репер Френе построенной кривой
    не определён, стоят NaN и `defined = False`.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    params: BertrandParams
    which: Indicatrix
    measure: Measure
    sigma: np.ndarray
    u: np.ndarray
    points: np.ndarray
    kappa: np.ndarray
    kappa_signed: np.ndarray
    tau: np.ndarray
    speed: np.ndarray        # |d gamma~ / d sigma|
    param_speed: np.ndarray  # |d gamma~ / d (sigma column)|
    alignment: np.ndarray    # |N~ . t|
    kappa_g: np.ndarray
    defined: np.ndarray
    notes: list[str] = []

    def helix_report(self, tol: float | None = None) -> HelixReport:
        mask = self.defined
        kappa, tau = self.kappa[mask], self.tau[mask]
        ratio = tau / kappa
        psi = None
        if mask.sum() >= 3:
            d_ratio = np.gradient(ratio, self.sigma[mask]) / self.param_speed[mask]
            psi = kappa ** 2 / (kappa ** 2 + tau ** 2) ** 1.5 * d_ratio
        return summarize_helix(kappa, tau, psi, tol, failed=self.sigma[~mask].tolist())


# --- СБОРКА ---

def _fd_derivatives(direction: Direction, u: float, length: float) -> tuple[Vec3, Vec3, Vec3]:
    """d1 точно, d2 и d3 центральными разностями 4-го порядка от подынтегральной функции.

    d2 берёт короткий шаблон FD_STEP, его ошибка доминирует в tau у точек распрямления.
    """
    f0 = direction(u)
    h1 = settings.FD_STEP * length
    h2 = settings.CONSTRUCT_STEP * length
    a = [direction(u + k * h1) for k in (-2, -1, 1, 2)]
    b = [direction(u + k * h2) for k in (-2, -1, 1, 2)]
    d2 = (a[0] - 8 * a[1] + 8 * a[2] - a[3]) / (12 * h1)
    d3 = (-b[0] + 16 * b[1] - 30 * f0 + 16 * b[2] - b[3]) / (12 * h2 * h2)
    return f0, d2, d3


def _assemble(sc: SphericalCurve, integrand: Direction, p: BertrandParams, n: int,
              measure: Measure, label: str, *, tangent: Direction | None = None,
              drift: Vec3 | None = None) -> ConstructedCurve:
    """Интегрирует `integrand` (d gamma~/du) на выходной сетке и снимает данные Френе.

    `tangent` заменяет подынтегральную функцию для данных Френе, когда в
    положениях есть добавка a*cot(theta)*(sigma - sigma0)*drift.
    """
    if n < 8:
        raise ValueError("a construction needs at least 8 samples")
    table = sc.sigma_table
    lo, hi = sc.domain

    if measure is Measure.SIGMA:
        s_lo, s_hi = table.span
        sigma = np.linspace(s_lo, s_hi, n)
        u = np.array([sc.parameter_at(float(s)) for s in sigma])
        u[0], u[-1] = lo, hi
        u0 = sc.parameter_at(p.sigma0)
    else:
        u = np.linspace(lo, hi, n)
        sigma = u.copy()
        if not lo <= p.sigma0 <= hi:
            raise OutOfRange(f"sigma0={p.sigma0!r} outside the source domain {sc.domain}")
        u0 = p.sigma0

    cfg = table.cfg
    partial_sums = np.zeros((n, 3))
    for k in range(1, n):
        partial_sums[k] = partial_sums[k - 1] + integrate(integrand, float(u[k - 1]), float(u[k]), cfg)
    j = min(max(int(np.searchsorted(u, u0, side="right")) - 1, 0), n - 1)
    offset = partial_sums[j] + integrate(integrand, float(u[j]), u0, cfg)

    points = np.asarray(p.c) + partial_sums - offset
    if drift is not None:
        points = points + p.a * p.cot * np.outer(sigma - p.sigma0, drift)

    frenet_source = tangent or integrand
    sin_t, cos_t = math.sin(p.theta), math.cos(p.theta)

    def straight(kappa_g: float) -> bool:
        # ожидаемая кривизна sin(theta) * (sin(theta) - kappa_g * cos(theta)) / a обнуляется
        return measure is Measure.SIGMA and abs(sin_t * (sin_t - kappa_g * cos_t)) <= STRAIGHT_EPS

    cols = {name: np.full(n, np.nan) for name in
            ("kappa", "kappa_signed", "tau", "speed", "param_speed", "alignment", "kappa_g")}
    defined = np.zeros(n, dtype=bool)
    for k in range(n):
        uk = float(u[k])
        d1, d2, d3 = _fd_derivatives(frenet_source, uk, sc.source.length)
        src = sabban_at(sc, uk, float(sigma[k]))
        rate = sc.point(uk).rate
        sigma_speed = norm(d1) / rate if rate > 0 else np.nan
        cols["speed"][k] = sigma_speed
        cols["param_speed"][k] = sigma_speed if measure is Measure.SIGMA else norm(d1)
        cols["kappa_g"][k] = src.kappa_g
        if straight(src.kappa_g):
            continue
        try:
            f = frame_from_derivatives(d1, d2, d3)
        except NumericError:
            continue
        defined[k] = True
        cols["kappa"][k] = f.kappa
        cols["tau"][k] = f.tau
        dot = float(np.dot(f.N, src.tvec))
        cols["kappa_signed"][k] = math.copysign(f.kappa, dot)
        cols["alignment"][k] = abs(dot)

    if not defined.any():
        raise InflectionPoint(f"{label}: constructed curve is straight (cot(theta) * kappa_g = 1)")
    if not defined.all():
        logger.warning("%s: Frenet frame undefined at %d of %d samples", label, int((~defined).sum()), n)

    notes = []
    if p.orthogonal:
        notes.append("theta = pi/2: partner term vanishes, Bertrand only in the plane-curve sense")
    logger.info("constructed %s from the %s-indicatrix with %d samples", label, sc.which.value, n)
    return ConstructedCurve(
        label=label, params=p, which=sc.which, measure=measure, sigma=sigma, u=u,
        points=points, defined=defined, notes=notes, **cols,
    )


# --- ПОСТРОЕНИЯ ---

def _source_weight(sc: SphericalCurve, u: float, measure: Measure) -> float:
    if measure is Measure.SIGMA or sc.which is Indicatrix.P:
        return sc.point(u).rate
    return speed(sc.source, u)


def construct_bertrand(sc: SphericalCurve, p: BertrandParams, n: int | None = None,
                       measure: Measure | str = Measure.SIGMA) -> ConstructedCurve:
    """Общее построение по реперу Саббана любой сферической кривой."""
    measure = Measure(measure)
    n = n or settings.DEFAULT_SAMPLES

    def integrand(u: float) -> Vec3:
        ip = sc.point(u)
        side = cross(ip.gamma, ip.tvec)
        return p.a * _source_weight(sc, u, measure) * (ip.gamma + p.cot * side)

    label = f"bertrand[{sc.which.value}]({sc.source.label})"
    return _assemble(sc, integrand, p, n, measure, label)


def _frenet_integrand(c: CurveDef, which: Indicatrix, measure: Measure) -> Callable[[float], tuple[Vec3, Vec3]]:
    """Подынтегральные функции (положение, партнёр) по длине дуги исходной кривой.

    T: kappa T, kappa B
    B: |tau| B, tau T
    N: w N, tau T + kappa B
    C: |psi| (tau T + kappa B), psi w N
    Деление обеих на скорость индикатрисы даёт их по мере исходной кривой.
    """
    def terms(u: float) -> tuple[Vec3, Vec3]:
        f = frame_at(c, u)
        w = math.hypot(f.kappa, f.tau)
        match which:
            case Indicatrix.T:
                pos, partner, rate = f.kappa * f.T, f.kappa * f.B, f.kappa
            case Indicatrix.B:
                pos, partner, rate = abs(f.tau) * f.B, f.tau * f.T, abs(f.tau)
            case Indicatrix.N:
                pos, partner, rate = w * f.N, f.darboux, w
            case Indicatrix.C:
                psi = slant_psi(c, u)
                pos, partner, rate = abs(psi) * f.darboux, psi * w * f.N, abs(psi) * w
            case _:
                raise ValueError(f"no Frenet integrand for {which!r}")
        if measure is Measure.SOURCE:
            return pos / rate, partner / rate
        return f.speed * pos, f.speed * partner

    return terms


def bertrand_from_spherical(sc: SphericalCurve, p: BertrandParams, n: int | None = None,
                            measure: Measure | str = Measure.SIGMA) -> ConstructedCurve:
    """Построение по индикатрисе через данные Френе исходной кривой."""
    if sc.which is Indicatrix.P:
        return construct_bertrand(sc, p, n, measure)
    measure = Measure(measure)
    n = n or settings.DEFAULT_SAMPLES
    terms = _frenet_integrand(sc.source, sc.which, measure)

    def integrand(u: float) -> Vec3:
        pos, partner = terms(u)
        return p.a * (pos + p.cot * partner)

    label = f"bertrand[{sc.which.value}]({sc.source.label})"
    return _assemble(sc, integrand, p, n, measure, label)


def bertrand_from_indicatrix(c: CurveDef, which: Indicatrix | str, p: BertrandParams,
                             n: int | None = None, domain: tuple[float, float] | None = None,
                             measure: Measure | str = Measure.SIGMA) -> ConstructedCurve:
    n = n or settings.DEFAULT_SAMPLES
    return bertrand_from_spherical(indicatrix(c, which, n, domain), p, n, measure)


def darboux_variation(c: CurveDef, n: int) -> float:
    """max |dC/ds| = |psi| * w по n точкам."""
    worst = 0.0
    for u in np.linspace(*c.domain, n):
        f = frame_at(c, float(u))
        worst = max(worst, abs(slant_psi(c, float(u))) * math.hypot(f.kappa, f.tau))
    return worst


def construct_corollary5(c: CurveDef, p: BertrandParams, n: int | None = None,
                         domain: tuple[float, float] | None = None) -> ConstructedCurve:
    """a * int N dsigma + a * cot(theta) * (sigma - sigma0) * C + c при постоянном C.

    C - нормированное среднее направление Дарбу по выборке.
    """
    n = n or settings.DEFAULT_SAMPLES
    sc = indicatrix(c, Indicatrix.N, n, domain)
    src = sc.source

    directions = []
    for u in np.linspace(*src.domain, n):
        f = frame_at(src, float(u))
        directions.append(f.darboux / math.hypot(f.kappa, f.tau))
    mean = np.mean(directions, axis=0)
    darboux = mean / norm(mean)

    def along_normal(u: float) -> Vec3:
        ip = sc.point(u)
        return p.a * ip.rate * ip.gamma

    def tangent(u: float) -> Vec3:
        ip = sc.point(u)
        return p.a * ip.rate * (ip.gamma + p.cot * darboux)

    label = f"bertrand[N, constant C]({c.label})"
    cc = _assemble(sc, along_normal, p, n, Measure.SIGMA, label,
                   tangent=tangent, drift=darboux)
    return cc.model_copy(update={"notes": cc.notes + ["constant C enters as a*cot(theta)*(sigma - sigma0)*C"]})


# --- УСЛОВИЕ БЕРТРАНА ---

def fit_bertrand_condition(cc: ConstructedCurve, min_kappa: float | None = None) -> BertrandFit:
    """A, B по МНК из A*kappa + B*tau = 1 на пригодных точках.

    Знак kappa задаёт ориентация N~ относительно касательной исходной кривой,
    и точки по обе стороны от распрямления подчиняются одному соотношению.
    """
    min_kappa = settings.FIT_MIN_KAPPA if min_kappa is None else min_kappa
    mask = cc.defined & (np.nan_to_num(cc.kappa) >= min_kappa)
    used = int(mask.sum())
    excluded = len(mask) - used
    if used < 3:
        raise DegenerateFit(f"{cc.label}: {used} usable samples, need at least 3")
    if excluded:
        logger.warning("%s: %d samples near inflections left out of the fit", cc.label, excluded)

    M = np.column_stack([cc.kappa_signed[mask], cc.tau[mask]])
    rhs = np.ones(used)
    scales = np.linalg.norm(M, axis=0)
    safe = np.where(scales > 0, scales, 1.0)
    Ms = M / safe
    sv = np.linalg.svd(Ms, compute_uv=False)

    if sv[-1] < 1e-8 * sv[0] or np.any(scales == 0):
        solution, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        residual = float(np.max(np.abs(M @ solution - rhs)))
        family = (float(M[:, 0].mean()), float(M[:, 1].mean()))
        raise RankDeficient(
            f"{cc.label}: kappa and tau samples are collinear; "
            f"solutions form the family {family[0]:.9g}*A + {family[1]:.9g}*B = 1",
            solution=(float(solution[0]), float(solution[1])), residual=residual, family=family,
        )

    # нормальные уравнения системы с масштабированными столбцами
    x = np.linalg.solve(Ms.T @ Ms, Ms.T @ rhs) / safe
    residual = float(np.max(np.abs(M @ x - rhs)))
    return BertrandFit(A=float(x[0]), B=float(x[1]), residual=residual, used=used, excluded=excluded)

"""Репер Френе, вектор Дарбу, функция наклонной винтовой линии и классификация."""
import enum
import logging
import math
from typing import NamedTuple, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.core.config import settings
from app.core.errors import InflectionPoint, NumericError, SingularSpeed
from app.geometry.curve import CurveDef, Vec3, cross, det3, evaluate, norm, speed
from app.geometry.numerics import CumulativeTable, integrate

logger = logging.getLogger(__name__)


class Frame(NamedTuple):
    T: Vec3
    N: Vec3
    B: Vec3
    kappa: float
    tau: float
    speed: float

    @property
    def darboux(self) -> Vec3:
        return self.tau * self.T + self.kappa * self.B


class FrenetSample(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t: float
    s: float
    T: Vec3
    N: Vec3
    B: Vec3
    kappa: float
    tau: float
    W: Vec3


class HelixKind(str, enum.Enum):
    PLANAR = "planar"
    CIRCULAR = "circular"
    GENERAL = "general"
    SLANT = "slant"
    NONE = "none"


class Stats(BaseModel):
    mean: float
    spread: float

    @classmethod
    def of(cls, values) -> "Stats":
        arr = np.asarray(values, dtype=float)
        return cls(mean=float(arr.mean()), spread=float(arr.max() - arr.min()))

    def constant(self, tol: float) -> bool:
        return self.spread <= tol * (1.0 + abs(self.mean))


class HelixReport(BaseModel):
    kind: HelixKind
    samples: int
    kappa: Stats
    tau: Stats
    ratio: Stats  # tau / kappa
    psi: Stats | None = None
    axis: tuple[float, float, float] | None = None
    failed: list[float] = []

    @property
    def is_general(self) -> bool:
        """Обобщённая винтовая линия в широком смысле: плоские кривые дают случай pi/2."""
        return self.kind in (HelixKind.GENERAL, HelixKind.CIRCULAR, HelixKind.PLANAR)


# --- РЕПЕР ---

def frame_from_derivatives(d1: Vec3, d2: Vec3, d3: Vec3) -> Frame:
    sp = norm(d1)
    if sp < settings.SPEED_EPS:
        raise SingularSpeed(f"speed {sp:.3g} below {settings.SPEED_EPS:g}")
    c = cross(d1, d2)
    cn = norm(c)
    if cn < settings.INFLECTION_EPS:
        raise InflectionPoint(f"|r' x r''| = {cn:.3g}, Frenet frame undefined")

    T = d1 / sp
    B = c / cn
    N = cross(B, T)
    kappa = cn / sp ** 3
    tau = det3(d1, d2, d3) / cn ** 2
    return Frame(T, N, B, kappa, tau, sp)


def frame_at(c: CurveDef, t: float) -> Frame:
    smp = evaluate(c, t)
    return frame_from_derivatives(smp.d1, smp.d2, smp.d3)


def frenet_apparatus(c: CurveDef, t: float, arclength: CumulativeTable | None = None) -> FrenetSample:
    f = frame_at(c, t)
    if arclength is not None:
        s = arclength.value_at(t)
    else:
        s = integrate(lambda x: speed(c, x), c.domain[0], t)
    return FrenetSample(t=t, s=s, T=f.T, N=f.N, B=f.B, kappa=f.kappa, tau=f.tau, W=f.darboux)


def principal_normal_direct(c: CurveDef, t: float) -> Vec3:
    """N из нормальной составляющей r'', B x T для сверки."""
    smp = evaluate(c, t)
    T = smp.d1 / norm(smp.d1)
    normal = smp.d2 - np.dot(smp.d2, T) * T
    n = norm(normal)
    if n < settings.INFLECTION_EPS:
        raise InflectionPoint("r'' is tangential, principal normal undefined")
    return normal / n


# --- НЕВЯЗКИ ---

def _central(c: CurveDef, t: float, h: float) -> tuple[Frame, Frame, Frame]:
    return frame_at(c, t - h), frame_at(c, t), frame_at(c, t + h)


def frenet_ode_residual(c: CurveDef, t: float, h: float) -> float:
    """Max-норма невязки уравнений Френе-Серре, производные центральными разностями."""
    fm, f0, fp = _central(c, t, h)
    ds = 2 * h * f0.speed
    dT = (fp.T - fm.T) / ds
    dN = (fp.N - fm.N) / ds
    dB = (fp.B - fm.B) / ds
    return max(
        norm(dT - f0.kappa * f0.N),
        norm(dN + f0.kappa * f0.T - f0.tau * f0.B),
        norm(dB + f0.tau * f0.N),
    )


def darboux_residual(c: CurveDef, t: float, h: float) -> float:
    fm, f0, fp = _central(c, t, h)
    ds = 2 * h * f0.speed
    w = f0.darboux
    return max(
        norm((fp.T - fm.T) / ds - cross(w, f0.T)),
        norm((fp.N - fm.N) / ds - cross(w, f0.N)),
        norm((fp.B - fm.B) / ds - cross(w, f0.B)),
    )


# --- ФУНКЦИЯ НАКЛОННОЙ ВИНТОВОЙ ЛИНИИ ---

def torsion_ratio(c: CurveDef, t: float) -> float:
    f = frame_at(c, t)
    return f.tau / f.kappa


def slant_psi(c: CurveDef, t: float, step: float | None = None) -> float:
    """psi = kappa^2 / (kappa^2 + tau^2)^(3/2) * d(tau/kappa)/ds.

    Производная по длине дуги - центральная разность 4-го порядка по t,
    делённая на скорость. `step` задан долей длины области.
    """
    h = (step or settings.PSI_STEP) * c.length
    f = frame_at(c, t)
    g = [torsion_ratio(c, t + k * h) for k in (-2, -1, 1, 2)]
    dg_dt = (g[0] - 8 * g[1] + 8 * g[2] - g[3]) / (12 * h)
    w2 = f.kappa ** 2 + f.tau ** 2
    return f.kappa ** 2 / w2 ** 1.5 * dg_dt / f.speed


# --- КЛАССИФИКАЦИЯ ---

def _axis(directions: Sequence[Vec3]) -> tuple[float, float, float] | None:
    if not directions:
        return None
    mean = np.mean(np.asarray(directions), axis=0)
    n = norm(mean)
    if n == 0.0:
        return None
    return tuple(float(x) for x in mean / n)


def summarize_helix(kappa, tau, psi=None, tol: float | None = None,
                    directions: Sequence[Vec3] = (), failed: Sequence[float] = ()) -> HelixReport:
    """Классификация по выборке кривизн.

    Порядок проверок: плоская, круговая, обобщённая (tau/kappa постоянно),
    наклонная (psi постоянна), никакая. Разброс сравниваем с tol * (1 + |mean|).
    """
    tol = settings.CONSTANCY_TOL if tol is None else tol
    kappa = np.asarray(kappa, dtype=float)
    tau = np.asarray(tau, dtype=float)
    k_stats, t_stats = Stats.of(kappa), Stats.of(tau)
    r_stats = Stats.of(tau / kappa)
    p_stats = Stats.of(psi) if psi is not None and len(psi) else None

    if float(np.max(np.abs(tau))) <= tol:
        kind = HelixKind.PLANAR
    elif k_stats.constant(tol) and t_stats.constant(tol):
        kind = HelixKind.CIRCULAR
    elif r_stats.constant(tol):
        kind = HelixKind.GENERAL
    elif p_stats is not None and p_stats.constant(tol):
        kind = HelixKind.SLANT
    else:
        kind = HelixKind.NONE

    axis = _axis(directions) if kind in (HelixKind.GENERAL, HelixKind.CIRCULAR) else None
    return HelixReport(
        kind=kind, samples=len(kappa), kappa=k_stats, tau=t_stats, ratio=r_stats,
        psi=p_stats, axis=axis, failed=list(failed),
    )


def classify_helix(c: CurveDef, n: int, tol: float | None = None) -> HelixReport:
    if n < 8:
        raise ValueError("classify_helix needs at least 8 samples")

    kappa, tau, psi, directions, failed = [], [], [], [], []
    last_error: NumericError | None = None
    for t in np.linspace(*c.domain, n):
        t = float(t)
        try:
            f = frame_at(c, t)
            p = slant_psi(c, t)
        except NumericError as exc:
            failed.append(t)
            last_error = exc
            continue
        kappa.append(f.kappa)
        tau.append(f.tau)
        psi.append(p)
        directions.append(f.darboux / math.hypot(f.kappa, f.tau))

    if failed:
        logger.warning("%s: frame undefined at %d of %d samples", c.label, len(failed), n)
    if len(kappa) < 2:
        raise last_error

    return summarize_helix(kappa, tau, psi, tol, directions, failed)

"""Квадратура, накопительные таблицы и обращение монотонных табличных функций.

Все интегралы по элементу длины дуги идут через `integrate`, любая замена
переменной между параметром кривой и длиной дуги идёт через
`CumulativeTable` и `invert_monotone`.
"""
import logging
import math
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import settings
from app.core.errors import DepthExceeded, NonFinite, OutOfRange

logger = logging.getLogger(__name__)

Integrand = Callable[[float], "float | np.ndarray"]

_EPS = np.finfo(float).eps


class QuadConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default_factory=lambda: settings.QUAD_ABS_TOL, gt=0)
    rel_tol: float = Field(default_factory=lambda: settings.QUAD_REL_TOL, gt=0)
    max_depth: int = Field(default_factory=lambda: settings.QUAD_MAX_DEPTH, ge=1)
    # обязательные деления пополам до приёма оценки
    min_depth: int = Field(default_factory=lambda: settings.QUAD_MIN_DEPTH, ge=0)


class CumulativeTable(BaseModel):
    """Табулированная F(x) = F(grid[0]) + интеграл `integrand` от grid[0] до x."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: np.ndarray
    values: np.ndarray
    integrand: Callable[[float], float] | None = None
    cfg: QuadConfig = Field(default_factory=QuadConfig)

    @field_validator("grid", "values", mode="before")
    @classmethod
    def _as_readonly(cls, v):
        arr = np.array(v, dtype=float)
        if arr.ndim != 1:
            raise ValueError("table columns must be one-dimensional")
        arr.flags.writeable = False
        return arr

    @model_validator(mode="after")
    def _check_shape(self):
        if len(self.grid) < 2 or len(self.grid) != len(self.values):
            raise ValueError("grid and values need the same length, at least 2")
        if not np.all(np.diff(self.grid) > 0):
            raise ValueError("grid must be strictly increasing")
        return self

    @classmethod
    def from_values(cls, grid, values) -> "CumulativeTable":
        """Таблица без подынтегральной функции, между узлами F линейна."""
        return cls(grid=grid, values=values)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.values[0]), float(self.values[-1])

    def _bracket(self, x: float) -> int:
        i = int(np.searchsorted(self.grid, x, side="right")) - 1
        return min(max(i, 0), len(self.grid) - 2)

    def value_at(self, x: float) -> float:
        i = self._bracket(x)
        if self.integrand is None:
            x0, x1 = self.grid[i], self.grid[i + 1]
            w = (x - x0) / (x1 - x0)
            return float((1 - w) * self.values[i] + w * self.values[i + 1])
        return float(self.values[i] + integrate(self.integrand, float(self.grid[i]), x, self.cfg))


# --- КВАДРАТУРА ---

def _sample(f: Integrand, x: float) -> np.ndarray:
    y = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(y)):
        raise NonFinite(f"integrand is not finite at x={x!r}")
    return y


def _simpson(a, b, fa, fm, fb):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _refine(f, a, b, fa, fm, fb, whole, tol, depth, cfg: QuadConfig):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = _sample(f, lm), _sample(f, rm)
    left = _simpson(a, m, fa, flm, fm)
    right = _simpson(m, b, fm, frm, fb)
    delta = left + right - whole

    err = float(np.max(np.abs(delta)))
    floor = 64 * _EPS * float(np.max(np.abs(left + right)))
    if depth >= cfg.min_depth and (err <= max(15.0 * tol, floor) or not a < lm < m < rm < b):
        return left + right + delta / 15.0
    if depth >= cfg.max_depth:
        raise DepthExceeded(f"no convergence on [{a!r}, {b!r}] after {depth} bisections")

    return (_refine(f, a, m, fa, flm, fm, left, tol / 2, depth + 1, cfg)
            + _refine(f, m, b, fm, frm, fb, right, tol / 2, depth + 1, cfg))


def integrate(f: Integrand, a: float, b: float, cfg: QuadConfig | None = None):
    """Адаптивная квадратура Симпсона с поправкой Ричардсона.

    `f` возвращает скаляр или вектор numpy, для векторов локальная ошибка
    меряется в max-норме и результат тоже вектор. При `a > b` интеграл
    берётся с обратным знаком.
    """
    cfg = cfg or QuadConfig()
    if b < a:
        return -integrate(f, b, a, cfg)

    fa = _sample(f, a)
    if a == b:
        zero = np.zeros_like(fa)
        return float(zero) if zero.ndim == 0 else zero

    m = 0.5 * (a + b)
    fm, fb = _sample(f, m), _sample(f, b)
    whole = _simpson(a, b, fa, fm, fb)
    tol = cfg.abs_tol + cfg.rel_tol * float(np.max(np.abs(whole)))

    result = _refine(f, a, b, fa, fm, fb, whole, tol, 0, cfg)
    return float(result) if np.ndim(result) == 0 else result


def cumulative(f: Callable[[float], float], a: float, b: float, n: int,
               cfg: QuadConfig | None = None) -> CumulativeTable:
    if n < 2:
        raise ValueError("a cumulative table needs at least 2 nodes")
    cfg = cfg or QuadConfig()

    grid = np.linspace(a, b, n)
    values = np.zeros(n)
    for i in range(1, n):
        values[i] = values[i - 1] + integrate(f, float(grid[i - 1]), float(grid[i]), cfg)

    logger.debug("cumulative table on [%g, %g] with %d nodes, total %.12g", a, b, n, values[-1])
    return CumulativeTable(grid=grid, values=values, integrand=f, cfg=cfg)


# --- ОБРАЩЕНИЕ ---

def invert_monotone(table: CumulativeTable, target: float) -> float:
    """Решает F(x) = target для неубывающей табличной F.

    Отрезок берём из таблицы и уточняем шагами Ньютона с подынтегральной
    функцией в роли производной. Где она обнуляется, шаг секущей. Шаг за
    пределы отрезка заменяем делением пополам.
    """
    lo, hi = table.span
    tol = 1e-10 * (1.0 + abs(target))
    if not lo - tol <= target <= hi + tol:
        raise OutOfRange(f"target {target!r} outside table span [{lo!r}, {hi!r}]")

    values, grid = table.values, table.grid
    i = int(np.searchsorted(values, target, side="right")) - 1
    i = min(max(i, 0), len(grid) - 2)
    x_lo, x_hi = float(grid[i]), float(grid[i + 1])
    v_lo, v_hi = float(values[i]), float(values[i + 1])

    if abs(target - v_lo) <= tol:
        return x_lo
    if abs(target - v_hi) <= tol:
        return x_hi
    if v_hi == v_lo:
        return x_lo

    x = x_lo + (target - v_lo) / (v_hi - v_lo) * (x_hi - x_lo)
    f = table.integrand
    if f is None:
        return x

    base = x_lo

    def residual(z: float) -> float:
        # отрезок сдвигается, база интегрирования остаётся в узле сетки
        return v_lo + integrate(f, base, z, table.cfg) - target

    prev: tuple[float, float] | None = None
    for _ in range(100):
        r = residual(x)
        if abs(r) <= tol:
            return x
        if r < 0:
            x_lo = x
        else:
            x_hi = x
        if x_hi - x_lo <= 4 * _EPS * max(abs(x_lo), abs(x_hi), 1.0):
            return x

        slope = float(f(x))
        if slope > 0 and math.isfinite(slope):
            step = x - r / slope
        elif prev is not None and prev[1] != r:
            step = x - r * (x - prev[0]) / (r - prev[1])
        else:
            step = math.nan
        prev = (x, r)

        x = step if x_lo < step < x_hi else 0.5 * (x_lo + x_hi)

    logger.warning("inversion of %g stopped at iteration limit", target)
    return x

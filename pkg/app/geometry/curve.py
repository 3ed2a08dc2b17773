import hashlib
import math
from functools import partial

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from app.core.config import settings
from app.core.errors import OutOfRange, SpecError
from app.geometry.expr import Expression, format_number, free_variables, parse, to_text
from app.geometry.jet import eval_jet
from app.geometry.numerics import CumulativeTable, QuadConfig, cumulative

# Vec3 - массив numpy формы (3,)
Vec3 = np.ndarray


# --- ВЕКТОРНЫЕ ПОМОЩНИКИ ---

def vec(x: float, y: float, z: float) -> Vec3:
    return np.array([x, y, z], dtype=float)


def cross(a: Vec3, b: Vec3) -> Vec3:
    # np.cross заметно дорог на одиночных векторах
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def norm(a: Vec3) -> float:
    return math.sqrt(float(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]))


def det3(a: Vec3, b: Vec3, c: Vec3) -> float:
    return float(np.dot(a, cross(b, c)))


# --- ОПРЕДЕЛЕНИЕ КРИВОЙ ---

class CurveDef(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    param: str = "t"
    components: tuple[Expression, Expression, Expression]
    domain: tuple[float, float]

    @field_validator("domain")
    @classmethod
    def _check_domain(cls, v):
        lo, hi = v
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
            raise SpecError(f"domain [{lo}, {hi}] must be finite with lo < hi")
        return v

    @model_validator(mode="after")
    def _one_parameter(self):
        names = set().union(*(free_variables(e) for e in self.components))
        stray = names - {self.param}
        if stray:
            raise SpecError(f"components use {sorted(stray)} but the parameter is '{self.param}'")
        return self

    @classmethod
    def from_strings(cls, label: str, x: str, y: str, z: str,
                     domain: tuple[float, float], param: str = "t") -> "CurveDef":
        return cls(
            label=label,
            param=param,
            components=tuple(parse(text, variable=param) for text in (x, y, z)),
            domain=domain,
        )

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    @property
    def padded_domain(self) -> tuple[float, float]:
        pad = settings.DOMAIN_PADDING * self.length
        return self.domain[0] - pad, self.domain[1] + pad

    def with_domain(self, lo: float, hi: float) -> "CurveDef":
        return CurveDef(label=self.label, param=self.param, components=self.components, domain=(lo, hi))

    def canonical_text(self) -> str:
        x, y, z = (to_text(e) for e in self.components)
        lo, hi = self.domain
        return "\n".join([
            f'name = "{self.label}"',
            f'param = "{self.param}"',
            f'x = "{x}"',
            f'y = "{y}"',
            f'z = "{z}"',
            f"domain = {format_number(lo)} {format_number(hi)}",
        ]) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()


class CurveSample(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t: float
    p: Vec3
    d1: Vec3
    d2: Vec3
    d3: Vec3


# --- ВЫЧИСЛЕНИЕ ---

def evaluate(c: CurveDef, t: float) -> CurveSample:
    lo, hi = c.padded_domain
    if not lo <= t <= hi:
        raise OutOfRange(f"t={t!r} outside the domain of '{c.label}' {c.domain}")

    jets = [eval_jet(e, t) for e in c.components]
    return CurveSample.model_construct(
        t=float(t),
        p=np.array([j.v for j in jets]),
        d1=np.array([j.d1 for j in jets]),
        d2=np.array([j.d2 for j in jets]),
        d3=np.array([j.d3 for j in jets]),
    )


def speed(c: CurveDef, t: float) -> float:
    return norm(evaluate(c, t).d1)


def arclength_table(c: CurveDef, n: int, cfg: QuadConfig | None = None) -> CumulativeTable:
    lo, hi = c.domain
    return cumulative(partial(speed, c), lo, hi, n, cfg)

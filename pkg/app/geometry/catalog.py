"""Встроенные кривые по имени, например ``circular-helix:2,1``."""
import math
from typing import Callable, NamedTuple

import numpy as np

from app.core.errors import ArityError, UnknownCurve
from app.geometry.curve import CurveDef
from app.geometry.expr import format_number
from app.geometry.numerics import QuadConfig, integrate

TWO_PI = 2 * math.pi


class CatalogEntry(NamedTuple):
    build: Callable[..., CurveDef]
    defaults: tuple[float, ...]
    summary: str


def _num(x: float) -> str:
    text = format_number(x)
    return f"({text})" if x < 0 else text


def _worked_example() -> CurveDef:
    return CurveDef.from_strings(
        "paper-example", "-cos(s)", "sin(s)^2/2", "sin(2*s)/4 + s/2", (0.0, TWO_PI), param="s",
    )


def _worked_example_doubled() -> CurveDef:
    return CurveDef.from_strings(
        "helix-reparam", "-cos(2*u)", "sin(2*u)^2/2", "sin(4*u)/4 + u", (0.0, math.pi), param="u",
    )


def _circular_helix(a: float, b: float) -> CurveDef:
    return CurveDef.from_strings(
        f"circular-helix({format_number(a)},{format_number(b)})",
        f"{_num(a)}*cos(t)", f"{_num(a)}*sin(t)", f"{_num(b)}*t", (0.0, TWO_PI),
    )


def _circle(r: float) -> CurveDef:
    return CurveDef.from_strings(
        f"circle({format_number(r)})", f"{_num(r)}*cos(t)", f"{_num(r)}*sin(t)", "0", (0.0, TWO_PI),
    )


def _line() -> CurveDef:
    return CurveDef.from_strings("line", "t", "0", "0", (0.0, 10.0))


def _perturbed_helix(eps: float) -> CurveDef:
    return CurveDef.from_strings(
        f"perturbed-helix({format_number(eps)})",
        "cos(t)", "sin(t)", f"t/2 + {_num(eps)}*sin(2*t)", (0.0, TWO_PI),
    )


def _spherical_wave(amp: float) -> CurveDef:
    r = f"sqrt(1 + ({_num(amp)}*sin(3*t))^2)"
    return CurveDef.from_strings(
        f"spherical-wave({format_number(amp)})",
        f"cos(t)/{r}", f"sin(t)/{r}", f"{_num(amp)}*sin(3*t)/{r}", (0.0, TWO_PI),
    )


CATALOG: dict[str, CatalogEntry] = {
    "paper-example": CatalogEntry(_worked_example, (), "unit-speed worked example, s in [0, 2pi]"),
    "helix-reparam": CatalogEntry(_worked_example_doubled, (), "worked example traced at double speed"),
    "circular-helix": CatalogEntry(_circular_helix, (1.0, 1.0), "(a cos t, a sin t, b t)"),
    "circle": CatalogEntry(_circle, (1.0,), "(r cos t, r sin t, 0)"),
    "line": CatalogEntry(_line, (), "(t, 0, 0) on [0, 10]"),
    "perturbed-helix": CatalogEntry(_perturbed_helix, (0.1,), "(cos t, sin t, t/2 + eps sin 2t)"),
    "spherical-wave": CatalogEntry(_spherical_wave, (0.05,), "unit-norm latitude wave of amplitude amp"),
}


def catalog(name: str, params: tuple[float, ...] | list[float] = ()) -> CurveDef:
    entry = CATALOG.get(name)
    if entry is None:
        raise UnknownCurve(f"unknown catalog curve '{name}'; known: {', '.join(sorted(CATALOG))}")
    values = tuple(float(p) for p in params) or entry.defaults
    if len(values) != len(entry.defaults):
        raise ArityError(f"'{name}' takes {len(entry.defaults)} parameters, got {len(values)}")
    return entry.build(*values)


def parse_catalog_ref(ref: str) -> tuple[str, tuple[float, ...]]:
    """Делит ``name[:p1,p2,...]`` на имя и параметры."""
    name, _, rest = ref.partition(":")
    if not rest.strip():
        return name.strip(), ()
    try:
        return name.strip(), tuple(float(p) for p in rest.split(","))
    except ValueError:
        raise ArityError(f"catalog parameters must be numbers: '{rest}'") from None


# --- ЗАМКНУТАЯ ФОРМА КРИВОЙ БЕРТРАНА ДЛЯ РАЗОБРАННОГО ПРИМЕРА ---

def _elliptic_e(s: float, cfg: QuadConfig) -> float:
    return integrate(lambda x: math.sqrt(1 - 0.5 * math.sin(x) ** 2), 0.0, s, cfg)


def _elliptic_f(s: float, cfg: QuadConfig) -> float:
    return integrate(lambda x: 1 / math.sqrt(1 - 0.5 * math.sin(x) ** 2), 0.0, s, cfg)


def worked_example_closed_form(s: float, cfg: QuadConfig | None = None) -> np.ndarray:
    """Опубликованная замкнутая форма кривой Бертрана разобранного примера в точке s.

    Компонента 1 содержит неполные эллиптические интегралы с модулем 1/2,
    их считаем квадратурой.
    """
    cfg = cfg or QuadConfig()
    k = math.sqrt(3 + math.cos(2 * s))
    e_int = _elliptic_e(s, cfg)
    f_int = _elliptic_f(s, cfg)
    root2 = math.sqrt(2)

    x = -math.cos(s) + (-f_int / 2 + (-4 * e_int + 3 * f_int) / 2) / root2
    y = (-2 * math.atan(root2 * math.sin(s) / k) - math.cos(2 * s) / 4
         + k * math.sin(s) / (2 * root2))
    z = (s / 2 - math.cos(s) * k / (2 * root2)
         + 1.5 * math.log(root2 * math.cos(s) + k) + math.sin(2 * s) / 4)
    return np.array([x, y, z])

"""Самостоятельные SVG-графики трёхмерных точек в параллельной проекции."""
import enum
import math
import re
from pathlib import Path

import numpy as np
from jinja2 import Environment, FileSystemLoader, select_autoescape

TEMPLATES = Path(__file__).parent / "templates"
WIDTH = 800
MARGIN = 0.05
COLORS = ("#1f4e9c", "#c0392b", "#27ae60", "#8e44ad")

_env = Environment(
    loader=FileSystemLoader(TEMPLATES),
    autoescape=select_autoescape(enabled_extensions=("svg.j2",)),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


class Projection(str, enum.Enum):
    XY = "xy"
    XZ = "xz"
    YZ = "yz"
    ISO = "iso"


# экранные оси (вправо, вверх) для каждой проекции, iso смотрит вдоль (1,1,1)/sqrt(3)
_BASES = {
    Projection.XY: ((1, 0, 0), (0, 1, 0)),
    Projection.XZ: ((1, 0, 0), (0, 0, 1)),
    Projection.YZ: ((0, 1, 0), (0, 0, 1)),
    Projection.ISO: ((-1 / math.sqrt(2), 1 / math.sqrt(2), 0),
                     (-1 / math.sqrt(6), -1 / math.sqrt(6), 2 / math.sqrt(6))),
}


def project(points: np.ndarray, projection: Projection | str) -> np.ndarray:
    """(n, 3) -> (n, 2) экранные координаты, y направлен вверх."""
    right, up = _BASES[Projection(projection)]
    pts = np.asarray(points, dtype=float)
    return np.column_stack([pts @ np.array(right), pts @ np.array(up)])


_ID_CHARS = re.compile(r"[^A-Za-z0-9_.-]+")


def element_id(label: str, taken: set[str]) -> str:
    """Уникальный допустимый в XML id элемента из метки кривой: circle(2) -> circle-2."""
    slug = _ID_CHARS.sub("-", label).strip("-.") or "curve"
    if not slug[0].isalpha():
        slug = f"curve-{slug}"
    candidate, k = slug, 2
    while candidate in taken:
        candidate, k = f"{slug}-{k}", k + 1
    taken.add(candidate)
    return candidate


def _fmt(v: float) -> str:
    return f"{v:.6f}".rstrip("0").rstrip(".") if v != 0 else "0"


def render_svg(curves: list[tuple[str, np.ndarray]], projection: Projection | str = Projection.ISO,
               title: str = "", sphere: bool = False) -> str:
    """Текст SVG: по polyline на пару (name, points), контур единичной сферы при `sphere`."""
    projected = [(name, project(pts, projection)) for name, pts in curves]
    screen = [np.column_stack([xy[:, 0], -xy[:, 1]]) for _, xy in projected]
    if any(not np.all(np.isfinite(s)) for s in screen):
        raise ValueError("cannot plot non-finite coordinates")

    everything = np.vstack(screen + ([np.array([[-1.0, -1.0], [1.0, 1.0]])] if sphere else []))
    lo, hi = everything.min(axis=0), everything.max(axis=0)
    size = np.where(hi - lo > 0, hi - lo, 1.0)
    pad = MARGIN * size
    x0, y0 = lo - pad
    w, h = size + 2 * pad
    scale = max(w, h)

    axes = []
    if x0 <= 0 <= x0 + w:
        axes.append({"x1": 0, "y1": _fmt(y0), "x2": 0, "y2": _fmt(y0 + h)})
    if y0 <= 0 <= y0 + h:
        axes.append({"x1": _fmt(x0), "y1": 0, "x2": _fmt(x0 + w), "y2": 0})

    taken = {"axes", "unit-sphere"}
    template = _env.get_template("plot.svg.j2")
    return template.render(
        title=title,
        width=WIDTH,
        height=max(1, round(WIDTH * h / w)),
        view_box=" ".join(_fmt(v) for v in (x0, y0, w, h)),
        stroke=_fmt(0.004 * scale),
        thin=_fmt(0.0015 * scale),
        font_size=_fmt(0.035 * scale),
        title_x=_fmt(x0 + pad[0] * 0.5),
        title_y=_fmt(y0 + 0.045 * scale),
        axes=axes,
        sphere=sphere,
        curves=[
            {
                "id": element_id(name, taken),
                "color": COLORS[i % len(COLORS)],
                "points": " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts),
            }
            for i, ((name, _), pts) in enumerate(zip(projected, screen))
        ],
    )


def write_svg(text: str, out: Path | str) -> None:
    Path(out).write_text(text, encoding="utf-8")

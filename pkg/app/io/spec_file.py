"""Файлы спецификации кривой.

    # комментарий
    name = "helix"
    param = "t"
    x = "cos(t)"
    y = "sin(t)"
    z = "t/2"
    domain = 0 2*pi

Выражения в кавычках, обе границы области - константные выражения
без пробелов.
"""
import re
from pathlib import Path

from app.core.errors import SpecError, SpecFileError
from app.geometry.curve import CurveDef
from app.geometry.expr import free_variables, parse
from app.geometry.jet import eval_jet

_LINE = re.compile(r'^\s*(?P<key>[A-Za-z_]\w*)\s*=\s*(?P<value>.*)$')
_QUOTED = re.compile(r'^"(?P<text>[^"]*)"\s*(?:#.*)?$')
_QUOTED_KEYS = ("name", "param", "x", "y", "z")


def _constant(text: str, line: int) -> float:
    try:
        node = parse(text)
    except SpecError as exc:
        raise SpecFileError(f"domain bound '{text}': {exc.detail}", line) from exc
    if free_variables(node):
        raise SpecFileError(f"domain bound '{text}' must be constant", line)
    return eval_jet(node, 0.0).v


def parse_curve_spec(text: str, default_name: str = "curve") -> CurveDef:
    fields: dict[str, tuple[str, int]] = {}
    domain: tuple[float, float] | None = None
    last = 0

    for number, raw in enumerate(text.splitlines(), start=1):
        last = number
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        m = _LINE.match(raw)
        if m is None:
            raise SpecFileError("expected 'key = value'", number)
        key, value = m.group("key"), m.group("value").strip()
        if key in fields or (key == "domain" and domain is not None):
            raise SpecFileError(f"duplicate key '{key}'", number)

        if key == "domain":
            bounds = value.split("#", 1)[0].split()
            if len(bounds) != 2:
                raise SpecFileError("domain needs exactly two bounds", number)
            domain = (_constant(bounds[0], number), _constant(bounds[1], number))
        elif key in _QUOTED_KEYS:
            q = _QUOTED.match(value)
            if q is None:
                raise SpecFileError(f"value of '{key}' must be double-quoted", number)
            fields[key] = (q.group("text"), number)
        else:
            raise SpecFileError(f"unknown key '{key}'", number)

    for key in ("x", "y", "z"):
        if key not in fields:
            raise SpecFileError(f"missing key '{key}'", last + 1)
    if domain is None:
        raise SpecFileError("missing key 'domain'", last + 1)

    param = fields.get("param", ("t", 0))[0]
    components = []
    for key in ("x", "y", "z"):
        expr_text, number = fields[key]
        try:
            components.append(parse(expr_text, variable=param))
        except SpecError as exc:
            raise SpecFileError(f"{key}: {exc.detail}", number) from exc

    try:
        return CurveDef(
            label=fields.get("name", (default_name, 0))[0],
            param=param,
            components=tuple(components),
            domain=domain,
        )
    except SpecError as exc:
        raise SpecFileError(exc.detail, fields.get("name", ("", last))[1] or last) from exc


def read_curve_spec(path: Path | str) -> CurveDef:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read curve spec '{path}': {exc.strerror}") from exc
    return parse_curve_spec(text, default_name=path.stem)

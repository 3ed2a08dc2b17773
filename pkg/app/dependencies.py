from pathlib import Path

from pydantic import ValidationError

from app.core.errors import SpecError
from app.geometry.bertrand import BertrandParams
from app.geometry.catalog import catalog, parse_catalog_ref
from app.geometry.curve import CurveDef
from app.io.spec_file import parse_curve_spec, read_curve_spec


def resolve_curve(
        catalog_ref: str | None = None,
        spec_path: Path | str | None = None,
        spec_text: str | None = None,
        domain: tuple[float, float] | None = None,
) -> CurveDef:
    # Ровно один источник кривой: каталог, файл или текст спецификации
    given = [x for x in (catalog_ref, spec_path, spec_text) if x is not None]
    if len(given) != 1:
        raise SpecError("give exactly one curve input: --catalog name[:p1,p2] or --spec FILE")

    if catalog_ref is not None:
        curve = catalog(*parse_catalog_ref(catalog_ref))
    elif spec_path is not None:
        curve = read_curve_spec(spec_path)
    else:
        curve = parse_curve_spec(spec_text)

    if domain is not None:
        curve = curve.with_domain(*domain)
    return curve


def parse_point(text: str | None) -> tuple[float, float, float]:
    """'X,Y,Z' -> (x, y, z), пустая строка означает начало координат."""
    if not text:
        return 0.0, 0.0, 0.0
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise SpecError(f"expected X,Y,Z numbers, got '{text}'") from None
    if len(values) != 3:
        raise SpecError(f"expected three coordinates, got {len(values)}")
    return values


def bertrand_params(a: float, theta: float, c: tuple[float, float, float], sigma0: float) -> BertrandParams:
    try:
        return BertrandParams(a=a, theta=theta, c=c, sigma0=sigma0)
    except ValidationError as exc:
        # Сообщение pydantic без служебных ссылок на документацию
        raise SpecError("; ".join(err["msg"] for err in exc.errors())) from None

"""Раскладка CSV для вывода команд."""
import io
from pathlib import Path

import numpy as np
import pandas as pd

from app.core.errors import SpecError

ANALYZE_COLUMNS = ["t", "s", "x", "y", "z", "Tx", "Ty", "Tz", "Nx", "Ny", "Nz",
                   "Bx", "By", "Bz", "kappa", "tau", "psi"]
INDICATRIX_COLUMNS = ["sigma", "gx", "gy", "gz", "kappa_g"]
BERTRAND_COLUMNS = ["sigma", "x", "y", "z", "kappa", "tau"]

# тройки столбцов, которые plot принимает за координаты
POINT_COLUMNS = (("x", "y", "z"), ("gx", "gy", "gz"))

FLOAT_FORMAT = "%.17g"


def frame(rows: list[list[float]] | np.ndarray, columns: list[str]) -> pd.DataFrame:
    data = np.asarray(rows, dtype=float).reshape(-1, len(columns))
    return pd.DataFrame(data, columns=columns)


def to_csv(df: pd.DataFrame) -> str:
    buf = io.StringIO()
    df.to_csv(buf, index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")
    return buf.getvalue()


def write_table(df: pd.DataFrame, out: Path | str | None) -> str:
    """Пишет CSV в `out` и возвращает текст для эха."""
    text = to_csv(df)
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text


def read_points(path: Path | str) -> tuple[np.ndarray, bool]:
    """Координаты из CSV, записанного этой утилитой.

    Возвращает точки формы (n, 3) и признак точек на сфере.
    """
    try:
        df = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise SpecError(f"malformed CSV '{path}': {exc}") from exc

    for columns in POINT_COLUMNS:
        if set(columns) <= set(df.columns):
            try:
                points = df[list(columns)].to_numpy(dtype=float)
            except ValueError as exc:
                raise SpecError(f"malformed CSV '{path}': non-numeric coordinates") from exc
            points = points[np.all(np.isfinite(points), axis=1)]
            if len(points) < 2:
                raise SpecError(f"malformed CSV '{path}': fewer than two finite rows")
            return points, columns[0] == "gx"

    raise SpecError(f"malformed CSV '{path}': needs columns x,y,z or gx,gy,gz")

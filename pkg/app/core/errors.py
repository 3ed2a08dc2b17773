"""Иерархия исключений.

Каждая ошибка знает код выхода CLI и HTTP-статус ответа API.
"""


class GeometryError(Exception):
    exit_code = 3
    status_code = 422

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# --- ОШИБКИ ВХОДА И СПЕЦИФИКАЦИИ (exit 2) ---

class SpecError(GeometryError):
    exit_code = 2
    status_code = 400


class ExprSyntaxError(SpecError):
    def __init__(self, detail: str, offset: int):
        super().__init__(f"{detail} (at byte {offset})")
        self.offset = offset


class UnknownIdentifier(SpecError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier '{name}' (at byte {offset})")
        self.name = name
        self.offset = offset


class ArityError(SpecError):
    pass


class UnknownCurve(SpecError):
    pass


class SpecFileError(SpecError):
    def __init__(self, detail: str, line: int):
        super().__init__(f"line {line}: {detail}")
        self.line = line


# --- ЧИСЛЕННЫЕ ОШИБКИ (exit 3) ---

class NumericError(GeometryError):
    pass


class NonFinite(NumericError):
    pass


class DepthExceeded(NumericError):
    pass


class OutOfRange(NumericError):
    pass


class DomainError(NumericError):
    def __init__(self, detail: str, node: str):
        super().__init__(f"{detail} in '{node}'")
        self.node = node


class SingularSpeed(NumericError):
    pass


class InflectionPoint(NumericError):
    pass


class DegenerateIndicatrix(NumericError):
    pass


class DegenerateFit(NumericError):
    pass


class NonUnitInput(NumericError):
    pass


class RankDeficient(NumericError):
    """Выборка (kappa, tau) не определяет A и B однозначно.

    `solution` - решение МНК с минимальной нормой, `family` - пара (k, t)
    однопараметрического семейства k*A + t*B = 1.
    """

    def __init__(self, detail: str, solution: tuple[float, float], residual: float,
                 family: tuple[float, float]):
        super().__init__(detail)
        self.solution = solution
        self.residual = residual
        self.family = family

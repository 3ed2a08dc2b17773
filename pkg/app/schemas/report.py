import enum

from pydantic import BaseModel, Field

from app import __version__


class CheckStatus(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIP = "SKIP"
    PREMISE_NOT_MET = "PREMISE-NOT-MET"


# Одна проверка = одна строка отчёта
class CheckRecord(BaseModel):
    name: str
    status: CheckStatus
    value: float | str | None = None
    tol: float | None = None
    detail: str | None = None

    @classmethod
    def measured(cls, name: str, value: float, tol: float, detail: str | None = None) -> "CheckRecord":
        """PASS, если value <= tol."""
        status = CheckStatus.PASS if value <= tol else CheckStatus.FAIL
        return cls(name=name, status=status, value=value, tol=tol, detail=detail)

    @classmethod
    def within(cls, name: str, value: float, lo: float, hi: float, detail: str | None = None) -> "CheckRecord":
        status = CheckStatus.PASS if lo <= value <= hi else CheckStatus.FAIL
        return cls(name=name, status=status, value=value, detail=detail or f"expected in [{lo:g}, {hi:g}]")

    @classmethod
    def skipped(cls, name: str, reason: str) -> "CheckRecord":
        return cls(name=name, status=CheckStatus.SKIP, detail=reason)

    @classmethod
    def premise_not_met(cls, name: str, reason: str) -> "CheckRecord":
        return cls(name=name, status=CheckStatus.PREMISE_NOT_MET, detail=reason)

    @classmethod
    def info(cls, name: str, value: float | str, detail: str | None = None) -> "CheckRecord":
        return cls(name=name, status=CheckStatus.PASS, value=value, detail=detail)


# Плоский JSON-отчёт: удобно сравнивать diff'ом в регрессионных тестах
class RunReport(BaseModel):
    version: str = __version__
    command: str
    input_digest: str | None = None
    checks: list[CheckRecord] = Field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(c.status is CheckStatus.FAIL for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True) + "\n"

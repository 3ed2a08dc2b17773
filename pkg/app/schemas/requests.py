import math

from pydantic import BaseModel, Field, model_validator

from app.geometry.bertrand import Measure
from app.geometry.spherical import Indicatrix


class CurveInput(BaseModel):
    # Кривая из каталога ("circular-helix:2,1") либо текст спецификации
    catalog: str | None = None
    spec: str | None = Field(None, description="Curve-spec text, same format as --spec files")
    domain: tuple[float, float] | None = None
    samples: int | None = Field(None, ge=8, le=20000)
    tol: float | None = Field(None, gt=0)

    @model_validator(mode="after")
    def exactly_one_source(self):
        if (self.catalog is None) == (self.spec is None):
            raise ValueError("give exactly one of the fields: catalog or spec")
        return self


class IndicatrixRequest(CurveInput):
    which: Indicatrix = Indicatrix.T


class BertrandRequest(IndicatrixRequest):
    a: float = 1.0
    theta: float = math.pi / 4
    c: tuple[float, float, float] = (0.0, 0.0, 0.0)
    sigma0: float = 0.0
    measure: Measure = Measure.SIGMA


class VerifyRequest(CurveInput):
    suite: str = "all"
    a: float = 1.0
    theta: float = math.pi / 4
    samples: int | None = Field(128, ge=8, le=20000)


class CatalogItem(BaseModel):
    name: str
    params: int
    defaults: list[float]
    summary: str

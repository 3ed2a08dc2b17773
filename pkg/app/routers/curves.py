import math

from fastapi import APIRouter

from app.dependencies import bertrand_params, resolve_curve
from app.geometry.catalog import CATALOG
from app.schemas.requests import BertrandRequest, CatalogItem, CurveInput, IndicatrixRequest, VerifyRequest
from app.services.runs import RunResult, run_analyze, run_bertrand, run_indicatrix, run_verify

router = APIRouter(prefix="/curves", tags=["Curves"])


def _curve(body: CurveInput):
    return resolve_curve(catalog_ref=body.catalog, spec_text=body.spec, domain=body.domain)


def _finite(value: float) -> float | None:
    # JSON не умеет NaN, неопределённые точки отдаём как null
    return value if math.isfinite(value) else None


def _response(result: RunResult) -> dict:
    payload = {"report": result.report.model_dump(mode="json", exclude_none=True)}
    if result.table is not None:
        payload["columns"] = list(result.table.columns)
        payload["rows"] = [[_finite(float(v)) for v in row] for row in result.table.itertuples(index=False)]
    return payload


@router.get("/catalog", response_model=list[CatalogItem])
async def list_catalog():
    return [
        CatalogItem(name=name, params=len(entry.defaults), defaults=list(entry.defaults), summary=entry.summary)
        for name, entry in sorted(CATALOG.items())
    ]


# --- ВЫЧИСЛЕНИЯ ---
# Синхронные обработчики: FastAPI выполняет их в пуле потоков, счёт не блокирует event loop

@router.post("/analyze")
def analyze(body: CurveInput):
    return _response(run_analyze(_curve(body), "analyze", body.samples, body.tol))


@router.post("/indicatrix")
def indicatrix(body: IndicatrixRequest):
    result = run_indicatrix(_curve(body), body.which, f"indicatrix --which {body.which.value}",
                            body.samples, body.tol)
    return _response(result)


@router.post("/bertrand")
def bertrand(body: BertrandRequest):
    params = bertrand_params(body.a, body.theta, body.c, body.sigma0)
    result = run_bertrand(_curve(body), body.which, params, f"bertrand --which {body.which.value}",
                          body.samples, body.measure, body.tol)
    return _response(result)


@router.post("/verify")
def verify(body: VerifyRequest):
    params = bertrand_params(body.a, body.theta, (0.0, 0.0, 0.0), 0.0)
    result = run_verify(_curve(body), body.suite, params, f"verify --suite {body.suite}",
                        body.samples, body.tol)
    return _response(result)

import os

import uvicorn
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from app import __version__
from app.core.errors import GeometryError
from app.core.log import setup_logging
from app.routers import curves

setup_logging()

app = FastAPI(title="Bertrand Curve Lab", version=__version__)

app.include_router(curves.router)


@app.exception_handler(GeometryError)
async def geometry_error_handler(request: Request, exc: GeometryError):
    # Ошибки входа -> 400, численные -> 422
    return JSONResponse(
        status_code=exc.status_code,
        content={"detail": exc.detail, "error": type(exc).__name__},
    )


@app.get("/")
async def root():
    return {
        "status": "ok",
        "message": "Bertrand Curve Lab is running",
        "version": __version__,
    }


if __name__ == "__main__":
    port = int(os.environ.get("PORT", 8000))
    uvicorn.run("app.main:app", host="0.0.0.0", port=port)

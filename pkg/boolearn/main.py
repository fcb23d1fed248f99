"""FastAPI application entry point."""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from boolearn import __version__
from boolearn.api.routes import bench_router, eval_router, learn_router
from boolearn.core.config import configure_logging, get_settings
from boolearn.core.errors import BoolearnError

configure_logging()
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager."""
    settings = get_settings()
    logger.info(
        "Starting boolearn API (budget %d, %d worker threads)", settings.budget, settings.threads
    )
    yield
    logger.info("Shutting down application...")


app = FastAPI(
    title="boolearn API",
    description="Learn Boolean functions from PLA care sets and compile them to AIGs",
    version=__version__,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(bench_router)
app.include_router(eval_router)
app.include_router(learn_router)


@app.exception_handler(BoolearnError)
async def boolearn_error_handler(request: Request, exc: BoolearnError) -> JSONResponse:
    """Return library errors as JSON with their status code."""
    logger.warning("%s on %s: %s", type(exc).__name__, request.url.path, exc.detail)
    return JSONResponse(status_code=exc.status_code, content={"detail": exc.detail})


@app.get("/")
async def root():
    """Root endpoint returning API status."""
    return {"message": "boolearn API is running"}


@app.get("/health")
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy"}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("boolearn.main:app", host="0.0.0.0", port=8000, reload=True)

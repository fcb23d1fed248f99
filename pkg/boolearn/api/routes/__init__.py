"""API routes package."""

from boolearn.api.routes.bench_routes import router as bench_router
from boolearn.api.routes.eval_routes import router as eval_router
from boolearn.api.routes.learn_routes import router as learn_router

__all__ = ["bench_router", "eval_router", "learn_router"]

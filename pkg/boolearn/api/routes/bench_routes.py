"""Benchmark generation API routes."""

from fastapi import APIRouter, Body, Depends

from boolearn.controllers.bench_controller import BenchController
from boolearn.schemas.bench import BenchmarkSpec, BenchmarkSplits

router = APIRouter(prefix="/api/bench", tags=["Benchmarks"])


def get_bench_controller() -> BenchController:
    """Dependency to get BenchController instance."""
    return BenchController()


@router.post("/", response_model=BenchmarkSplits)
def generate_benchmark(
    spec: BenchmarkSpec = Body(...),
    controller: BenchController = Depends(get_bench_controller),
) -> BenchmarkSplits:
    """Sample train, validation and test PLAs for a benchmark family."""
    return controller.generate(spec)

"""Pydantic schemas for reports, scores and traces."""

from typing import Optional

from pydantic import BaseModel, Field


class EvolutionRecord(BaseModel):
    """One generation of a CGP run."""

    generation: int
    fitness: float = Field(..., ge=0.0, le=1.0, description="Incumbent accuracy on the batch")
    phenotype_size: int = Field(..., ge=0)
    mutation_rate: float


class CandidateReport(BaseModel):
    """Outcome of one portfolio candidate."""

    model_kind: str
    train_acc: float = Field(..., ge=0.0, le=1.0)
    valid_acc: float = Field(..., ge=0.0, le=1.0)
    and_nodes: int = Field(..., ge=0)
    levels: int = Field(..., ge=0)
    approximated: bool = False
    compiled_nodes: int = Field(..., ge=0, description="AND nodes before approximation")


class ModelReport(BaseModel):
    """Report of the selected model for one benchmark."""

    benchmark: str = ""
    model_kind: str
    train_acc: float = Field(..., ge=0.0, le=1.0)
    valid_acc: float = Field(..., ge=0.0, le=1.0)
    test_acc: Optional[float] = Field(None, ge=0.0, le=1.0)
    and_nodes: int = Field(..., ge=0)
    levels: int = Field(..., ge=0)
    budget: int = Field(..., ge=0)
    seed: int
    params_digest: str = Field(..., description="sha256 prefix of the portfolio configuration")
    retrained: bool = Field(False, description="Winner retrained on train + valid")
    retrained_valid_acc: Optional[float] = Field(
        None, ge=0.0, le=1.0, description="Validation accuracy of the retrained circuit"
    )
    wall_time: Optional[float] = Field(None, description="Seconds, written only when timing is on")

    @property
    def overfit(self) -> Optional[float]:
        return None if self.test_acc is None else self.valid_acc - self.test_acc


class ParetoPoint(BaseModel):
    accuracy: float
    nodes: int
    benchmark: str = ""


class SuiteScore(BaseModel):
    """Suite-level means and the accuracy/size frontier."""

    benchmarks: int
    mean_test_acc: float
    mean_nodes: float
    mean_levels: float
    mean_overfit: float
    pareto_points: list[ParetoPoint] = Field(default_factory=list)

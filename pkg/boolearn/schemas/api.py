"""Pydantic schemas for HTTP request and response bodies."""

from typing import List, Optional

from pydantic import BaseModel, Field

from boolearn.schemas.portfolio import PortfolioConfig
from boolearn.schemas.report import CandidateReport, ModelReport


class EvalRequest(BaseModel):
    """Schema for evaluating a circuit on a care set."""

    aag: str = Field(..., description="AIGER ASCII text of the circuit")
    pla: str = Field(..., description="PLA text of the labelled samples")


class EvalResponse(BaseModel):
    accuracy: float = Field(..., description="Fraction of rows the circuit reproduces")
    and_nodes: int = Field(..., description="Reachable AND nodes")
    levels: int = Field(..., description="Logic depth")


class LearnRequest(BaseModel):
    """Schema for a portfolio run over PLA texts."""

    train: str = Field(..., description="Training PLA text")
    valid: str = Field(..., description="Validation PLA text")
    test: Optional[str] = Field(None, description="Optional test PLA text")
    name: str = Field("", description="Benchmark name recorded in the report")
    config: PortfolioConfig = Field(default_factory=PortfolioConfig)


class LearnResponse(BaseModel):
    aag: str = Field(..., description="AIGER ASCII text of the selected circuit")
    report: ModelReport
    candidates: List[CandidateReport] = Field(..., description="Every candidate in model order")

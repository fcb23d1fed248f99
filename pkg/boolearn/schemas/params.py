"""Pydantic schemas for learner hyper-parameters."""

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator


class DtParams(BaseModel):
    """Decision-tree induction parameters."""

    max_depth: Optional[int] = Field(None, ge=0, description="Depth limit, None for unlimited")
    min_samples: int = Field(1, ge=1, description="Stop splitting below this many samples (N)")
    fdecomp_threshold: float = Field(
        0.1, ge=0.0, description="Gain (bits) below which decomposition splits are tried"
    )
    fdecomp_rule: Literal["last", "most_support"] = Field(
        "last", description="How to choose among features passing the decomposition test"
    )
    fringe_iterations: int = Field(8, ge=0, description="Maximum fringe retraining rounds")
    fringe_feature_limit: int = Field(64, ge=0, description="Maximum composite features")
    seed: int = Field(0, description="Seed recorded with the model")


class RfParams(BaseModel):
    """Random-forest parameters."""

    n_trees: int = Field(17, ge=1, description="Number of trees (odd)")
    max_depth: int = Field(8, ge=0, description="Depth limit for every tree")
    feature_fraction: float = Field(0.5, gt=0.0, le=1.0, description="Share of inputs per tree")
    seed: int = 0

    @field_validator("n_trees")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("n_trees must be odd")
        return value


class LutParams(BaseModel):
    """Topology of a layered LUT network."""

    k: int = Field(4, ge=1, le=16, description="Inputs per LUT")
    layers: int = Field(4, ge=1, description="Number of LUT layers")
    luts_per_layer: int = Field(64, ge=1, description="LUTs in every layer but the last")
    scheme: Literal["random", "unique_random"] = "random"
    seed: int = 0


class LutSearchParams(BaseModel):
    """Beam-style growth of LUT network parameters while validation accuracy improves."""

    start: LutParams = Field(default_factory=lambda: LutParams(layers=2, luts_per_layer=32))
    max_k: int = Field(6, ge=1, le=16)
    max_layers: int = Field(8, ge=1)
    max_luts_per_layer: int = Field(1024, ge=1)
    max_steps: int = Field(6, ge=0)


class CgpParams(BaseModel):
    """(1+lambda) evolution strategy over CGP genomes."""

    generations: int = Field(2000, ge=1)
    offspring: int = Field(4, ge=1, description="Children per generation (lambda)")
    batch_size: int = Field(1024, ge=1, description="Rows per fitness batch")
    change_each: int = Field(50, ge=1, description="Generations before a new batch is drawn")
    mutation_rate: float = Field(0.02, gt=0.0, le=1.0, description="Initial per-field rate")
    window: int = Field(20, ge=1, description="Generations per 1/5th-rule adjustment")
    adapt_factor: float = Field(1.5, gt=1.0)
    min_rate: float = Field(1e-4, gt=0.0)
    max_rate: float = Field(0.5, le=1.0)
    size_factor: float = Field(2.0, ge=1.0, description="Genome columns per bootstrapped AIG node")
    random_columns: int = Field(500, ge=1, description="Genome columns for random initialization")
    bootstrap_gate: float = Field(0.55, ge=0.0, le=1.0)
    bootstrap_share: float = Field(
        0.5, gt=0.0, le=1.0, description="Training share used when bootstrapped"
    )
    seed: int = 0


class ApproxParams(BaseModel):
    """Budget-driven constant replacement."""

    patterns: int = Field(4096, ge=1)
    level_exclusion: int = Field(5, ge=0)

"""Pydantic schema for the portfolio harness configuration."""

import hashlib
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from boolearn.core.config import get_settings
from boolearn.schemas.params import (
    ApproxParams,
    CgpParams,
    DtParams,
    LutSearchParams,
    RfParams,
)

MODEL_GROUPS = ("sym", "espresso", "dt", "fringe", "rf", "lutnet", "cgp")
DEFAULT_MODELS = ["sym", "espresso", "dt", "fringe", "rf", "lutnet"]


class PortfolioConfig(BaseModel):
    """Which candidates to train and how to pick the winner."""

    models: list[str] = Field(
        default_factory=lambda: list(DEFAULT_MODELS),
        description="Candidate groups; 'dt' trains the unlimited and the depth-8 tree",
    )
    budget: int = Field(default_factory=lambda: get_settings().budget, ge=0)
    seed: int = 0
    dt: DtParams = Field(default_factory=DtParams)
    dt_preset_depth: int = Field(8, ge=1, description="Depth of the fixed-depth tree candidate")
    dt_sop: bool = Field(False, description="Also compile the plain tree as a minimized SOP")
    rf: RfParams = Field(default_factory=lambda: RfParams(max_depth=8))
    rf_tree_counts: Optional[list[int]] = Field(
        None, description="Forest sizes to train, one candidate each; None trains rf.n_trees"
    )
    lut_search: LutSearchParams = Field(default_factory=LutSearchParams)
    cgp: CgpParams = Field(default_factory=CgpParams)
    approx: ApproxParams = Field(default_factory=ApproxParams)
    sym_min_support: Optional[int] = Field(None, ge=1)
    validation_gate: float = Field(0.70, ge=0.0, le=1.0)
    resplit: Literal["none", "holdout80", "fold3"] = "none"

    @field_validator("models")
    @classmethod
    def _known_models(cls, value: list[str]) -> list[str]:
        unknown = sorted(set(value) - set(MODEL_GROUPS))
        if unknown:
            raise ValueError(f"unknown model groups: {', '.join(unknown)}")
        return value

    @field_validator("rf_tree_counts")
    @classmethod
    def _odd_counts(cls, value: Optional[list[int]]) -> Optional[list[int]]:
        if value is None:
            return value
        if not value or any(n < 1 or n % 2 == 0 for n in value):
            raise ValueError("rf_tree_counts must be a non-empty list of positive odd counts")
        return value

    def forest_sizes(self) -> list[int]:
        """Tree counts of the forest candidates."""
        return self.rf_tree_counts or [self.rf.n_trees]

    def digest(self) -> str:
        """Stable 12-character fingerprint of the configuration."""
        return hashlib.sha256(self.model_dump_json().encode()).hexdigest()[:12]

"""Pydantic schemas for generated benchmarks and suite manifests."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from boolearn.schemas.portfolio import PortfolioConfig

DEFAULT_SAMPLES = 6400


class Family(str, Enum):
    ADDER_MSB = "adder_msb"
    ADDER_MSB2 = "adder_msb2"
    COMPARATOR = "comparator"
    MULTIPLIER_MSB = "multiplier_msb"
    MULTIPLIER_MID = "multiplier_mid"
    PARITY = "parity"
    SYMMETRIC = "symmetric"

    @property
    def two_words(self) -> bool:
        return self not in (Family.PARITY, Family.SYMMETRIC)


class BenchmarkSpec(BaseModel):
    """One benchmark function and how its splits are sampled."""

    family: Family
    k: int = Field(..., ge=1, description="Word width (arithmetic) or number of inputs")
    seed: int = 0
    samples_per_split: int = Field(DEFAULT_SAMPLES, ge=1)
    signature: Optional[str] = Field(None, description="Output per popcount, symmetric only")

    @model_validator(mode="after")
    def _check_signature(self) -> "BenchmarkSpec":
        if self.family == Family.SYMMETRIC:
            sig = self.signature or ""
            if len(sig) != self.k + 1 or set(sig) - {"0", "1"}:
                raise ValueError(f"symmetric signature must be {self.k + 1} bits, got '{sig}'")
        elif self.signature is not None:
            raise ValueError("signature is only valid for the symmetric family")
        return self

    @property
    def num_inputs(self) -> int:
        return 2 * self.k if self.family.two_words else self.k

    @property
    def name(self) -> str:
        if self.family == Family.SYMMETRIC:
            return f"symmetric:sig={self.signature}"
        return f"{self.family.value}:k={self.k}"


class BenchmarkSplits(BaseModel):
    """PLA texts of the three sampled splits."""

    name: str
    num_inputs: int
    train: str
    valid: str
    test: str


class SuiteEntry(BaseModel):
    """Either a generated benchmark (``benchmark``) or three PLA paths."""

    name: Optional[str] = None
    benchmark: Optional[str] = Field(None, description="Preset or 'family:k=K' name")
    seed: int = 0
    samples_per_split: int = Field(DEFAULT_SAMPLES, ge=1)
    train: Optional[str] = None
    valid: Optional[str] = None
    test: Optional[str] = None

    @model_validator(mode="after")
    def _check_source(self) -> "SuiteEntry":
        files = (self.train, self.valid)
        if self.benchmark is None and None in files:
            raise ValueError("entry needs 'benchmark' or 'train' and 'valid' paths")
        if self.benchmark is not None and any(f is not None for f in (*files, self.test)):
            raise ValueError("entry cannot have both 'benchmark' and PLA paths")
        return self

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.benchmark:
            return self.benchmark.replace(":", "_").replace("=", "")
        return self.train.rsplit("/", 1)[-1].rsplit(".", 1)[0]


class SuiteManifest(BaseModel):
    benchmarks: list[SuiteEntry] = Field(..., min_length=1)
    config: PortfolioConfig = Field(default_factory=PortfolioConfig)

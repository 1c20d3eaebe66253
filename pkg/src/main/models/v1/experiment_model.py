import os
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from src.main.constants import LpFamily, OutputFormat
from src.main.constants.error_messages import (K_MUST_BE_POSITIVE, LAMBDA_OUT_OF_RANGE, EMPTY_GRID_ERROR,
                                               COPIES_OUT_OF_RANGE)
from src.main.utils.output_utils import rows_to_csv

ALLOWED_COPIES = (1, 2, 3)


class ExperimentConfigModel(BaseModel):
    command: str = Field(..., description="Subcommand name")
    first: Optional[str] = Field(None, description="First channel: inline spec or JSON file path")
    second: Optional[str] = Field(None, description="Second channel: inline spec or JSON file path")
    lam: float = Field(0.5, description="Prior of the first channel")
    k: int = Field(1, description="Schmidt rank of the injected entangled state")
    k_max: Optional[int] = Field(None, description="Upper end of the k scan")
    eq_tol: Optional[float] = Field(None, gt=0, description="Tolerance band for the entanglement cost")
    with_dual: bool = Field(False, description="Also solve the dual program")
    lp_family: Optional[LpFamily] = Field(None, description="Reduced LP family")
    d: Optional[int] = Field(None, ge=1, description="Local dimension (pp, swap)")
    d_a: Optional[int] = Field(None, ge=1, description="Alice's dimension (bipartite)")
    d_b: Optional[int] = Field(None, ge=1, description="Bob's dimension (bipartite)")
    p: Optional[float] = Field(None, ge=0, le=1, description="Noise of the first channel")
    q: Optional[float] = Field(None, ge=0, le=1, description="Noise of the second channel")
    first_lo: Optional[str] = Field(None, description="Lower endpoint of the first composite set")
    first_hi: Optional[str] = Field(None, description="Upper endpoint of the first composite set")
    second_lo: Optional[str] = Field(None, description="Lower endpoint of the second composite set")
    second_hi: Optional[str] = Field(None, description="Upper endpoint of the second composite set")
    gamma_grid: Optional[List[float]] = Field(None, description="Amplitude-damping grid")
    copies: int = Field(1, description="Parallel uses of each channel in the damping scan")
    output_format: Optional[OutputFormat] = Field(None, description="json or csv; each command has its own default")
    out: Optional[str] = Field(None, description="Output file; stdout when absent")
    workers: Optional[int] = Field(None, ge=1, description="Worker processes")

    @field_validator("lam")
    @classmethod
    def _prior_in_open_interval(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError(f"{LAMBDA_OUT_OF_RANGE}: {value}")
        return value

    @field_validator("k", "k_max")
    @classmethod
    def _positive_k(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError(K_MUST_BE_POSITIVE)
        return value

    @field_validator("copies")
    @classmethod
    def _supported_copies(cls, value: int) -> int:
        if value not in ALLOWED_COPIES:
            raise ValueError(f"{COPIES_OUT_OF_RANGE}: {value}")
        return value

    @field_validator("gamma_grid")
    @classmethod
    def _nonempty_grid(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is not None:
            if not value:
                raise ValueError(EMPTY_GRID_ERROR)
            if any(not 0.0 <= g <= 1.0 for g in value):
                raise ValueError(f"gamma values must lie in [0, 1]: {value}")
        return value

    @model_validator(mode="after")
    def _referenced_files_exist(self) -> "ExperimentConfigModel":
        for name in ("first", "second", "first_lo", "first_hi", "second_lo", "second_hi"):
            value = getattr(self, name)
            if value and value.endswith(".json") and not os.path.isfile(value):
                raise ValueError(f"Spec file not found: {value}")
        return self


class DampingRowModel(BaseModel):
    gamma: float = Field(..., description="Amplitude-damping parameter of the first channel")
    p_global: float = Field(..., description="Global optimum")
    p_k1: float = Field(..., description="PPT success probability without entanglement")
    p_k2: float = Field(..., description="PPT success probability with one ebit")


class DampingReportModel(BaseModel):
    copies: int = Field(..., description="Parallel uses of each channel")
    lam: float = Field(..., description="Prior of the first channel")
    rows: List[DampingRowModel] = Field(default_factory=list, description="One row per grid point, in grid order")

    def to_csv(self) -> str:
        return rows_to_csv(("gamma", "P_global", "P_k1", "P_k2"),
                           ((r.gamma, r.p_global, r.p_k1, r.p_k2) for r in self.rows))

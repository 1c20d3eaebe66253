from typing import Any, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.main.config.config_loader import get_config_value
from src.main.constants import DefaultSolverConfig, SolveStatus


class SolverOptionsModel(BaseModel):
    backend: str = Field(DefaultSolverConfig.BACKEND, description="Registered solver backend name")
    method: str = Field(DefaultSolverConfig.METHOD, description="Solver used by the backend, e.g. CLARABEL")
    feas_tol: float = Field(DefaultSolverConfig.FEAS_TOL, gt=0, description="Primal/dual feasibility tolerance")
    gap_tol: float = Field(DefaultSolverConfig.GAP_TOL, gt=0, description="Duality gap tolerance")
    max_iter: int = Field(DefaultSolverConfig.MAX_ITER, ge=1, description="Iteration cap")
    residual_tol: float = Field(DefaultSolverConfig.RESIDUAL_TOL, gt=0,
                                description="Largest recomputed primal residual accepted as optimal")
    verbose: bool = Field(False, description="Let the backend print its own progress")

    @classmethod
    def from_config(cls, **overrides: Any) -> "SolverOptionsModel":
        values = {
            "backend": get_config_value('solver', 'backend', default=DefaultSolverConfig.BACKEND),
            "method": get_config_value('solver', 'method', default=DefaultSolverConfig.METHOD),
            "feas_tol": get_config_value('solver', 'feas_tol', default=DefaultSolverConfig.FEAS_TOL),
            "gap_tol": get_config_value('solver', 'gap_tol', default=DefaultSolverConfig.GAP_TOL),
            "max_iter": get_config_value('solver', 'max_iter', default=DefaultSolverConfig.MAX_ITER),
            "residual_tol": get_config_value('solver', 'residual_tol', default=DefaultSolverConfig.RESIDUAL_TOL),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class BackendResultModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: SolveStatus = Field(..., description="Status mapped onto the conic-builder vocabulary")
    raw_status: str = Field("", description="Status string reported by the backend")
    inaccurate: bool = Field(False, description="Backend flagged its optimum as inaccurate")
    value: Optional[float] = Field(None, description="Objective value reported by the backend")
    x: Optional[np.ndarray] = Field(None, description="Primal assignment of the real parameters")
    duals: List[Any] = Field(default_factory=list, description="Dual values of the PSD blocks")
    solve_seconds: float = Field(0.0, description="Wall time spent in the backend")
    message: str = Field("", description="Diagnostics on failure")

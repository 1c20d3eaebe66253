from typing import List, Optional

from pydantic import BaseModel, Field

from src.main.utils.output_utils import rows_to_csv


class KPointModel(BaseModel):
    k: int = Field(..., ge=1, description="Schmidt rank of the injected maximally entangled state")
    value: float = Field(..., description="PPT k-injectable success probability")
    gap: float = Field(..., description="global_value - value")


class CostReportModel(BaseModel):
    global_value: float = Field(..., description="Globally optimal success probability")
    dual_global_value: float = Field(..., description="Diamond-norm dual value used as a cross-check")
    per_k: List[KPointModel] = Field(default_factory=list, description="Scanned k values in increasing order")
    cost_bits: Optional[float] = Field(None, description="log2 of the smallest k closing the gap, if found")
    k_star: Optional[int] = Field(None, description="Smallest k with gap <= eq_tol")
    k_max_used: int = Field(..., ge=1, description="Largest k the scan was allowed to reach")
    eq_tol: float = Field(..., gt=0, description="Tolerance band deciding equality with the global value")
    monotone: bool = Field(True, description="Per-k values nondecreasing within 2 * eq_tol")

    def to_csv(self) -> str:
        return rows_to_csv(("k", "value", "gap"), ((p.k, p.value, p.gap) for p in self.per_k))

from typing import List

from pydantic import BaseModel, Field


class RegisterModel(BaseModel):
    label: str = Field(..., description="Register label, unique within a system")
    dim: int = Field(..., ge=1, description="Register dimension")


class LabeledMatrixModel(BaseModel):
    registers: List[RegisterModel] = Field(..., description="Ordered registers spanning the row/column space")
    re: List[List[float]] = Field(..., description="Row-major real part")
    im: List[List[float]] = Field(..., description="Row-major imaginary part")

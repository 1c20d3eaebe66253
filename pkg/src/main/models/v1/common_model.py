from typing import Any, Optional

from pydantic import BaseModel, Field


class ResponseModel(BaseModel):
    success: bool = Field(True, description="Indicates if the command succeeded")
    data: Any = Field(None, description="Holds the command result")
    error: Optional[dict] = Field(None, description="Contains error details if any")

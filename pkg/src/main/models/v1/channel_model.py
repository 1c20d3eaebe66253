import json
import os
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError, model_validator

from src.main.constants import ChannelFamily
from src.main.constants.error_messages import SPEC_PARSE_ERROR, INLINE_FAMILY_ERROR
from src.main.exceptions import ValidationException
from src.main.models.v1.labeled_matrix_model import LabeledMatrixModel

FILE_ONLY_FAMILIES = (ChannelFamily.CLASSICAL, ChannelFamily.EXPLICIT_CHOI, ChannelFamily.PARALLEL)


def _scalar(text: str) -> Any:
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


class ChannelSpecModel(BaseModel):
    family: ChannelFamily = Field(..., description="Channel family name")
    params: Dict[str, Any] = Field(default_factory=dict, description="Family-specific parameters or payload")
    choi: Optional[LabeledMatrixModel] = Field(None, description="Explicit Choi operator (explicit_choi only)")
    ownership: Optional[Dict[str, str]] = Field(None, description="Register label to alice/bob")
    of: Optional[List["ChannelSpecModel"]] = Field(None, description="Components of a parallel composition")
    copies: int = Field(1, ge=1, description="Repetitions of the 'of' list in a parallel composition")

    @model_validator(mode="before")
    @classmethod
    def _collect_explicit_payload(cls, data: Any) -> Any:
        # explicit_choi files carry registers/re/im at the top level
        if isinstance(data, dict) and "registers" in data and "choi" not in data:
            data = dict(data)
            data["choi"] = {key: data.pop(key) for key in ("registers", "re", "im") if key in data}
        if isinstance(data, dict) and data.get("ownership"):
            data["ownership"] = {label: str(owner).lower() for label, owner in data["ownership"].items()}
        return data

    @classmethod
    def parse_inline(cls, text: str) -> "ChannelSpecModel":
        """Parse `family:key=val,key=val`."""
        family_text, _, rest = text.strip().partition(":")
        try:
            family = ChannelFamily(family_text.strip())
        except ValueError:
            raise ValidationException(f"{SPEC_PARSE_ERROR}: unknown family {family_text!r} in {text!r}")
        if family in FILE_ONLY_FAMILIES:
            raise ValidationException(f"{INLINE_FAMILY_ERROR}: {family.value}")
        params: Dict[str, Any] = {}
        for item in filter(None, (part.strip() for part in rest.split(","))):
            key, sep, value = item.partition("=")
            if not sep or not key.strip() or not value.strip():
                raise ValidationException(f"{SPEC_PARSE_ERROR}: malformed item {item!r} in {text!r}")
            params[key.strip()] = _scalar(value.strip())
        return cls(family=family, params=params)

    @classmethod
    def from_file(cls, path: str) -> "ChannelSpecModel":
        try:
            with open(path, "r", encoding="utf-8") as handle:
                return cls.model_validate(json.load(handle))
        except (OSError, json.JSONDecodeError, ValidationError) as e:
            raise ValidationException(f"{SPEC_PARSE_ERROR}: {path}: {e}") from e

    @classmethod
    def resolve(cls, text: str) -> "ChannelSpecModel":
        """A path to an existing JSON file wins over the inline grammar."""
        if os.path.isfile(text):
            return cls.from_file(text)
        try:
            return cls.parse_inline(text)
        except ValidationError as e:
            raise ValidationException(f"{SPEC_PARSE_ERROR}: {text!r}: {e}") from e

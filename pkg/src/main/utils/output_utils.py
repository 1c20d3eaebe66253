from typing import Any, Iterable, Optional, Sequence

import pandas as pd

from src.main.config.config_loader import get_config_value
from src.main.constants import DefaultOutputConfig


def significant_digits() -> int:
    return int(get_config_value('output', 'significant_digits', default=DefaultOutputConfig.SIGNIFICANT_DIGITS))


def format_number(value: Any, digits: Optional[int] = None) -> str:
    """Fixed significant-digit rendering; ints, None and strings pass through."""
    if value is None:
        return ""
    if isinstance(value, bool) or isinstance(value, int) or isinstance(value, str):
        return str(value)
    return f"{float(value):.{digits or significant_digits()}g}"


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    table = pd.DataFrame([[format_number(cell) for cell in row] for row in rows], columns=list(header))
    return table.to_csv(index=False, lineterminator="\n")


def round_floats(data: Any, digits: Optional[int] = None) -> Any:
    """Recursively re-render floats at the configured significant digits for JSON output."""
    if isinstance(data, bool):
        return data
    if isinstance(data, float):
        return float(format_number(data, digits))
    if isinstance(data, dict):
        return {key: round_floats(value, digits) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [round_floats(value, digits) for value in data]
    return data


def write_output(text: str, out: Optional[str] = None) -> None:
    """Print to stdout, or write to a file when a path is given."""
    if out:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text.rstrip("\n"))

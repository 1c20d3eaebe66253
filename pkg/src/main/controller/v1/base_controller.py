import functools
import sys
from dataclasses import dataclass
from typing import Callable, Optional

from pydantic import ValidationError

from src.main.config.logger import get_logger
from src.main.constants import COMMON_ERROR_UNEXPECTED_ERROR, ExitCode, OutputFormat
from src.main.constants.error_messages import SPEC_PARSE_ERROR
from src.main.exceptions import CustomException, ValidationException
from src.main.models.v1 import ExperimentConfigModel, ResponseModel
from src.main.models.v1.channel_model import ChannelSpecModel
from src.main.services.v1.channel_service import ChoiOperator, build_channel
from src.main.utils.output_utils import round_floats, rows_to_csv, write_output

logger = get_logger(__name__)


@dataclass
class CommandResult:
    exit_code: int
    text: str = ""


def resolve_channel(text: Optional[str], flag: str) -> ChoiOperator:
    if not text:
        raise ValidationException(f"{SPEC_PARSE_ERROR}: missing {flag}")
    return build_channel(ChannelSpecModel.resolve(text))


def render(config: ExperimentConfigModel, data: dict, default: OutputFormat = OutputFormat.JSON,
           csv_text: Optional[str] = None) -> str:
    """Single-line JSON envelope, or CSV when requested."""
    output_format = config.output_format or default
    if output_format == OutputFormat.CSV:
        if csv_text is not None:
            return csv_text
        scalars = {key: value for key, value in data.items() if not isinstance(value, (dict, list))}
        return rows_to_csv(tuple(scalars), [tuple(scalars.values())])
    return ResponseModel(success=True, data=round_floats(data)).model_dump_json()


def command_handler(action: str) -> Callable:
    """Run a command, write its output and map failures onto exit codes."""
    def decorator(func: Callable[[ExperimentConfigModel], str]) -> Callable[[ExperimentConfigModel], CommandResult]:
        @functools.wraps(func)
        def wrapper(config: ExperimentConfigModel) -> CommandResult:
            try:
                text = func(config)
                write_output(text, config.out)
                return CommandResult(ExitCode.OK, text)
            except CustomException as customException:
                logger.error(f"{action} failed: {customException.detail}")
                print(f"error: {customException.detail}", file=sys.stderr)
                return CommandResult(int(customException.exit_code))
            except ValidationError as validationError:
                logger.error(f"{action} received invalid input: {validationError}")
                print(f"error: {validationError}", file=sys.stderr)
                return CommandResult(ExitCode.PARSE_ERROR)
            except Exception as generalException:
                logger.error(f"{COMMON_ERROR_UNEXPECTED_ERROR}: {str(generalException)}", exc_info=True)
                print(f"error: {COMMON_ERROR_UNEXPECTED_ERROR}: {generalException}", file=sys.stderr)
                return CommandResult(ExitCode.UNEXPECTED)
        return wrapper
    return decorator

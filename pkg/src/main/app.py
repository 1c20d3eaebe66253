"""
Command-line front end: parse channel specs, run one computation and print
its result as single-line JSON or CSV.
"""
import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from src.main.config import COMMANDS
from src.main.config.logger import LoggerConfig, get_logger
from src.main.constants import ExitCode, LpFamily, OutputFormat
from src.main.controller.v1 import (CommandResult, composite_command, damping_command, entcost_command,
                                    global_command, lp_command, psucc_command)
from src.main.models.v1 import ExperimentConfigModel

logger = get_logger(__name__)

HANDLERS: Dict[str, Callable[[ExperimentConfigModel], CommandResult]] = {
    COMMANDS.global_value: global_command,
    COMMANDS.psucc: psucc_command,
    COMMANDS.entcost: entcost_command,
    COMMANDS.lp: lp_command,
    COMMANDS.composite: composite_command,
    COMMANDS.damping: damping_command,
}


class _ExitingParser(argparse.ArgumentParser):
    """Parse errors leave with the parse-error exit code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(int(ExitCode.PARSE_ERROR))


def _grid(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text}")


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat],
                        help="Output format (json for scalars, csv for tables by default)")
    common.add_argument("--out", help="Write the result to this file instead of stdout")
    common.add_argument("--workers", type=int, help="Worker processes for scans and grids")
    common.add_argument("--verbose", action="store_true", help="Log solver progress to stderr")
    common.add_argument("--lambda", dest="lam", type=float, default=0.5, help="Prior of the first channel")
    return common


def _channel_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", dest="first", help="First channel: family:key=val,... or a JSON file")
    parser.add_argument("--b", dest="second", help="Second channel: family:key=val,... or a JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = _ExitingParser(prog="channel-disc",
                            description="Bipartite channel discrimination with PPT k-injectable testers")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ExitingParser)
    common = _common_flags()

    global_parser = commands.add_parser(COMMANDS.global_value, parents=[common],
                                        help="Globally optimal success probability")
    _channel_flags(global_parser)

    psucc = commands.add_parser(COMMANDS.psucc, parents=[common], help="PPT k-injectable success probability")
    _channel_flags(psucc)
    psucc.add_argument("--k", type=int, default=1, help="Schmidt rank of the injected entangled state")
    psucc.add_argument("--dual", dest="with_dual", action="store_true", help="Also solve the dual program")

    entcost = commands.add_parser(COMMANDS.entcost, parents=[common], help="One-shot PPT entanglement cost")
    _channel_flags(entcost)
    entcost.add_argument("--eq-tol", type=float, help="Tolerance band for reaching the global value")
    entcost.add_argument("--k-max", type=int, help="Stop the scan at this k")

    lp = commands.add_parser(COMMANDS.lp, parents=[common], help="Symmetry-reduced linear program")
    lp.add_argument("--family", dest="lp_family", required=True, choices=[f.value for f in LpFamily])
    lp.add_argument("--d", type=int, help="Local dimension (pp, swap)")
    lp.add_argument("--d-a", type=int, help="Alice's dimension (bipartite)")
    lp.add_argument("--d-b", type=int, help="Bob's dimension (bipartite)")
    lp.add_argument("--p", type=float, help="Noise of the first channel")
    lp.add_argument("--q", type=float, help="Noise of the second channel")
    lp.add_argument("--k", type=int, default=1)

    composite = commands.add_parser(COMMANDS.composite, parents=[common],
                                    help="Worst case over two sets of channels")
    _channel_flags(composite)
    composite.add_argument("--a-lo", dest="first_lo", help="Segment start of the first set")
    composite.add_argument("--a-hi", dest="first_hi", help="Segment end of the first set")
    composite.add_argument("--b-lo", dest="second_lo", help="Segment start of the second set")
    composite.add_argument("--b-hi", dest="second_hi", help="Segment end of the second set")
    composite.add_argument("--k", type=int, default=1)

    damping = commands.add_parser(COMMANDS.damping, parents=[common],
                                  help="Amplitude damping AD(gamma) against AD(1 - gamma)")
    damping.add_argument("--gamma", dest="gamma_grid", type=_grid, help="Comma-separated gamma values")
    damping.add_argument("--copies", type=int, default=1, help="Parallel uses of each channel (1, 2 or 3)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return int(exit_request.code or 0)

    arguments = vars(args)
    if arguments.pop("verbose", False):
        LoggerConfig.set_level(logging.INFO)
    try:
        config = ExperimentConfigModel(**{key: value for key, value in arguments.items() if value is not None})
    except ValidationError as validationError:
        messages = "; ".join(error["msg"] for error in validationError.errors())
        logger.error(f"Invalid arguments for {args.command}: {messages}")
        print(f"error: {messages}", file=sys.stderr)
        return int(ExitCode.PARSE_ERROR)
    return int(HANDLERS[config.command](config).exit_code)

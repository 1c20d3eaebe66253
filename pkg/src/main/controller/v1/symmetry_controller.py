from src.main.config import COMMANDS
from src.main.constants import LpFamily
from src.main.constants.error_messages import SPEC_PARSE_ERROR
from src.main.controller.v1.base_controller import command_handler, render
from src.main.exceptions import ValidationException
from src.main.models.v1 import ExperimentConfigModel, SolverOptionsModel
from src.main.services.v1.symmetry_service import (ReducedLPSolution, lp_bipartite_depol, lp_depol_swap,
                                                   lp_pp_depol)


def _required(config: ExperimentConfigModel, *names: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(config, name) is None]
    if missing:
        raise ValidationException(f"{SPEC_PARSE_ERROR}: lp --family {config.lp_family.value} needs {', '.join(missing)}")


def _solve(config: ExperimentConfigModel) -> ReducedLPSolution:
    options = SolverOptionsModel.from_config()
    if config.lp_family is None:
        raise ValidationException(f"{SPEC_PARSE_ERROR}: missing --family")
    if config.lp_family == LpFamily.BIPARTITE:
        _required(config, "d_a", "d_b", "p", "q")
        return lp_bipartite_depol(config.d_a, config.d_b, config.p, config.q, config.k, config.lam, options)
    _required(config, "d", "p", "q")
    if config.lp_family == LpFamily.PP:
        return lp_pp_depol(config.d, config.p, config.q, config.k, config.lam, options)
    return lp_depol_swap(config.d, config.p, config.q, config.k, config.lam, options)


@command_handler(COMMANDS.lp)
def lp_command(config: ExperimentConfigModel) -> str:
    solution = _solve(config)
    return render(config, {"value": solution.value, "family": config.lp_family.value, "k": config.k,
                           "assignment": solution.assignment})

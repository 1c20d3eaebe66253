"""
Amplitude damping AD(gamma) against AD(1 - gamma) over parallel uses: global
optimum next to PPT testers without entanglement and with one ebit.
"""
import concurrent.futures
from typing import Optional, Sequence, Tuple

from src.main.config.config_loader import get_config_value
from src.main.config.logger import get_logger, create_log_context
from src.main.constants import DefaultExperimentConfig
from src.main.constants.error_messages import COPIES_OUT_OF_RANGE, EMPTY_GRID_ERROR
from src.main.exceptions import ValidationException
from src.main.models.v1.experiment_model import ALLOWED_COPIES, DampingReportModel, DampingRowModel
from src.main.models.v1.solver_model import SolverOptionsModel
from src.main.services.v1.channel_service import ChannelEnsemble, ChoiOperator, amplitude_damping, parallel_compose
from src.main.services.v1.cost_service import configured_workers
from src.main.services.v1.discrimination_service import DiscriminationInstance, psucc_global, psucc_ppt_k

logger = get_logger(__name__)


def damping_pair(gamma: float, copies: int) -> Tuple[ChoiOperator, ChoiOperator]:
    first, second = amplitude_damping(gamma), amplitude_damping(1.0 - gamma)
    if copies == 1:
        return first, second
    return parallel_compose([first] * copies), parallel_compose([second] * copies)


def _damping_row(task: Tuple[float, int, float, Optional[SolverOptionsModel]]) -> DampingRowModel:
    gamma, copies, lam, options = task
    first, second = damping_pair(gamma, copies)
    p_global = psucc_global(ChannelEnsemble.binary(first, second, lam), options).value
    inst = DiscriminationInstance.binary(first, second, lam)
    p_k1 = psucc_ppt_k(inst, options).value
    p_k2 = psucc_ppt_k(inst.with_k(2), options).value
    return DampingRowModel(gamma=gamma, p_global=p_global, p_k1=p_k1, p_k2=p_k2)


def damping_scan(gamma_grid: Optional[Sequence[float]] = None, copies: int = 1, lam: Optional[float] = None,
                 workers: Optional[int] = None, options: Optional[SolverOptionsModel] = None) -> DampingReportModel:
    if copies not in ALLOWED_COPIES:
        raise ValidationException(f"{COPIES_OUT_OF_RANGE}: {copies}")
    grid = list(gamma_grid if gamma_grid is not None else
                get_config_value('experiment', 'gamma_grid', default=list(DefaultExperimentConfig.GAMMA_GRID)))
    if not grid:
        raise ValidationException(EMPTY_GRID_ERROR)
    lam = float(lam if lam is not None else get_config_value('experiment', 'lambda',
                                                             default=DefaultExperimentConfig.LAMBDA))
    workers = configured_workers(workers)
    options = options or SolverOptionsModel.from_config()
    logger.info(f"Damping experiment: {len(grid)} points, copies={copies}, workers={workers}",
                extra=create_log_context(action="damping_scan", location=f"{__name__}.damping_scan"))

    tasks = [(float(g), copies, lam, options) for g in grid]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(_damping_row, tasks))
    else:
        rows = [_damping_row(task) for task in tasks]
    return DampingReportModel(copies=copies, lam=lam, rows=rows)

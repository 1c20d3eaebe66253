"""
One-shot PPT entanglement cost: the smallest k whose k-injectable PPT success
probability reaches the global optimum, reported as log2 k.
"""
import concurrent.futures
import math
from typing import List, Optional, Sequence, Tuple

from src.main.config.config_loader import get_config_value
from src.main.config.logger import get_logger, create_log_context
from src.main.constants import DefaultCostConfig
from src.main.constants.error_messages import DUALITY_MISMATCH_ERROR, NO_K_FOUND_ERROR, K_MUST_BE_POSITIVE
from src.main.constants.info_messages import SCAN_STARTED, SCAN_FINISHED, MONOTONICITY_DRIFT
from src.main.exceptions import InvariantViolationException, ValidationException
from src.main.models.v1.cost_model import CostReportModel, KPointModel
from src.main.models.v1.solver_model import SolverOptionsModel
from src.main.services.v1.channel_service import ChannelEnsemble, ChoiOperator
from src.main.services.v1.discrimination_service import (DiscriminationInstance, add_ppt_primal, check_prior,
                                                         diamond_dual, schmidt_rank_bound, psucc_global, psucc_ppt_k,
                                                         require_optimal, weighted_difference)
from src.main.utils.conic_utils import ConicProgram, solve

logger = get_logger(__name__)


def configured_workers(workers: Optional[int] = None) -> int:
    return max(1, int(workers if workers is not None else get_config_value('parallel', 'workers', default=1)))


def global_benchmark(first: ChoiOperator, second: ChoiOperator, lam: float,
                     options: Optional[SolverOptionsModel] = None) -> Tuple[float, float]:
    """Global value and its diamond dual; raises when they disagree."""
    check_prior(lam)
    value = psucc_global(ChannelEnsemble.binary(first, second, lam), options).value
    dual = diamond_dual(first, second, lam, options)
    tol = float(get_config_value('cost', 'duality_tol', default=DefaultCostConfig.DUALITY_TOL))
    if abs(value - dual) > tol:
        logger.error(f"{DUALITY_MISMATCH_ERROR}: primal {value:.9g}, dual {dual:.9g}",
                     extra=create_log_context(action="global_benchmark", location=f"{__name__}.global_benchmark"))
        raise InvariantViolationException(DUALITY_MISMATCH_ERROR,
                                          diagnostics={"global_value": value, "dual_value": dual, "tol": tol})
    return value, dual


def _ppt_value(task: Tuple[ChoiOperator, ChoiOperator, float, int, Optional[SolverOptionsModel]]) -> float:
    first, second, lam, k, options = task
    return psucc_ppt_k(DiscriminationInstance.binary(first, second, lam, k), options).value


def scan_ppt_k(first: ChoiOperator, second: ChoiOperator, lam: float, ks: Sequence[int],
               workers: Optional[int] = None, options: Optional[SolverOptionsModel] = None,
               target: Optional[float] = None, eq_tol: Optional[float] = None) -> List[Tuple[int, float]]:
    """PPT values for ks in the given order.

    Batches of `workers` k values run concurrently. When a target is given the
    scan stops at the first k, in order, whose value is within eq_tol of it.
    """
    if any(int(k) < 1 for k in ks):
        raise ValidationException(K_MUST_BE_POSITIVE)
    workers = configured_workers(workers)
    options = options or SolverOptionsModel.from_config()
    eq_tol = float(eq_tol if eq_tol is not None else get_config_value('cost', 'eq_tol', default=DefaultCostConfig.EQ_TOL))
    context = create_log_context(action="scan_ppt_k", location=f"{__name__}.scan_ppt_k")
    logger.info(f"{SCAN_STARTED}: {len(ks)} values, {workers} workers", extra=context)

    results: List[Tuple[int, float]] = []
    executor = concurrent.futures.ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for start in range(0, len(ks), workers):
            batch = [int(k) for k in ks[start:start + workers]]
            tasks = [(first, second, lam, k, options) for k in batch]
            values = list(executor.map(_ppt_value, tasks)) if executor else [_ppt_value(t) for t in tasks]
            for k, value in zip(batch, values):
                results.append((k, value))
                if target is not None and target - value <= eq_tol:
                    logger.info(f"{SCAN_FINISHED}: reached target at k={k}", extra=context)
                    return results
    finally:
        if executor:
            executor.shutdown()
    logger.info(f"{SCAN_FINISHED}: {len(results)} values", extra=context)
    return results


def ent_cost_ppt(first: ChoiOperator, second: ChoiOperator, lam: float, eq_tol: Optional[float] = None,
                 k_max: Optional[int] = None, workers: Optional[int] = None,
                 options: Optional[SolverOptionsModel] = None) -> CostReportModel:
    eq_tol = float(eq_tol if eq_tol is not None else get_config_value('cost', 'eq_tol', default=DefaultCostConfig.EQ_TOL))
    if k_max is not None and int(k_max) < 1:
        raise ValidationException(K_MUST_BE_POSITIVE)
    global_value, dual_value = global_benchmark(first, second, lam, options)
    bound = schmidt_rank_bound(first)
    limit = bound if k_max is None else min(int(k_max), bound)

    scanned = scan_ppt_k(first, second, lam, list(range(1, limit + 1)), workers, options,
                         target=global_value, eq_tol=eq_tol)
    per_k = [KPointModel(k=k, value=value, gap=global_value - value) for k, value in scanned]
    k_star = next((p.k for p in per_k if p.gap <= eq_tol), None)

    monotone = all(b.value >= a.value - 2 * eq_tol for a, b in zip(per_k, per_k[1:]))
    if not monotone:
        logger.warning(f"{MONOTONICITY_DRIFT}: {[(p.k, p.value) for p in per_k]}",
                       extra=create_log_context(action="ent_cost_ppt", location=f"{__name__}.ent_cost_ppt"))

    if k_star is None and limit == bound:
        logger.error(f"{NO_K_FOUND_ERROR}: bound {bound}",
                     extra=create_log_context(action="ent_cost_ppt", location=f"{__name__}.ent_cost_ppt"))
        raise InvariantViolationException(f"{NO_K_FOUND_ERROR} ({bound})",
                                          diagnostics={"global_value": global_value,
                                                       "per_k": [p.model_dump() for p in per_k]})
    return CostReportModel(
        global_value=global_value,
        dual_global_value=dual_value,
        per_k=per_k,
        cost_bits=math.log2(k_star) if k_star is not None else None,
        k_star=k_star,
        k_max_used=limit,
        eq_tol=eq_tol,
        monotone=monotone,
    )


def gap_at_k(first: ChoiOperator, second: ChoiOperator, lam: float, k: int,
             global_value: Optional[float] = None, options: Optional[SolverOptionsModel] = None) -> float:
    """|psucc_ppt_k - global value|."""
    if global_value is None:
        global_value = psucc_global(ChannelEnsemble.binary(first, second, lam), options).value
    value = psucc_ppt_k(DiscriminationInstance.binary(first, second, lam, k), options).value
    return abs(value - global_value)


def gap_at_k_min_t(first: ChoiOperator, second: ChoiOperator, lam: float, k: int, global_value: float,
                   options: Optional[SolverOptionsModel] = None) -> float:
    """min t with -t <= 1 - lam + tr(W delta) - global_value <= t over k-injectable PPT testers."""
    if int(k) < 1:
        raise ValidationException(K_MUST_BE_POSITIVE)
    check_prior(lam)
    program = ConicProgram(f"gap_k{k}")
    primal = add_ppt_primal(program, first, int(k), weighted_difference(first, second, lam), lam)
    t = program.scalar("t")
    offset = primal.objective - float(global_value)
    program.add_psd(t - offset, "gap_upper")
    program.add_psd(t + offset, "gap_lower")
    program.minimize(t)
    return require_optimal(solve(program, options), program).value

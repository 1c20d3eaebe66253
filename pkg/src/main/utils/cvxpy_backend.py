"""
cvxpy adapter for the real standard form produced by conic_utils.real_embed.

Each call builds a fresh cvxpy Problem, so independent solves can run in
separate worker processes.
"""
import time
from typing import Any, Dict

import cvxpy as cp
import numpy as np

from src.main.config.logger import get_logger, create_log_context
from src.main.constants import Sense, SolveStatus
from src.main.models.v1.solver_model import SolverOptionsModel, BackendResultModel

logger = get_logger(__name__)

STATUS_MAP = {
    cp.OPTIMAL: (SolveStatus.OPTIMAL, False),
    cp.OPTIMAL_INACCURATE: (SolveStatus.OPTIMAL, True),
    cp.INFEASIBLE: (SolveStatus.INFEASIBLE, False),
    cp.INFEASIBLE_INACCURATE: (SolveStatus.INFEASIBLE, True),
    cp.UNBOUNDED: (SolveStatus.UNBOUNDED, False),
    cp.UNBOUNDED_INACCURATE: (SolveStatus.UNBOUNDED, True),
}


def solver_arguments(options: SolverOptionsModel) -> Dict[str, Any]:
    """Translate tolerances and the iteration cap into solver-specific keywords."""
    method = options.method.upper()
    if method == "CLARABEL":
        return {"tol_gap_abs": options.gap_tol, "tol_gap_rel": options.gap_tol,
                "tol_feas": options.feas_tol, "max_iter": options.max_iter}
    if method == "SCS":
        return {"eps_abs": options.feas_tol, "eps_rel": options.gap_tol, "max_iters": options.max_iter}
    if method == "CVXOPT":
        return {"abstol": options.gap_tol, "reltol": options.gap_tol, "feastol": options.feas_tol,
                "max_iters": options.max_iter}
    return {}


class CvxpyBackend:
    name = "cvxpy"

    def solve(self, form, options: SolverOptionsModel) -> BackendResultModel:
        x = cp.Variable(form.n_params)
        constraints = []
        if form.eq_matrix.shape[0]:
            constraints.append(form.eq_matrix @ x + form.eq_offset == 0)
        if form.nonneg_matrix.shape[0]:
            constraints.append(form.nonneg_matrix @ x + form.nonneg_offset >= 0)
        psd_constraints = []
        for block in form.psd_blocks:
            # symmetric for every x by construction of the embedding
            z = cp.reshape(block.matrix @ x + block.offset, (block.size, block.size), order="C")
            psd_constraints.append(z >> 0)
        constraints.extend(psd_constraints)

        objective = form.objective @ x + form.objective_offset
        problem = cp.Problem(cp.Maximize(objective) if form.sense == Sense.MAX else cp.Minimize(objective),
                             constraints)

        start = time.perf_counter()
        try:
            problem.solve(solver=options.method.upper(), verbose=options.verbose, **solver_arguments(options))
        except (cp.error.SolverError, ValueError) as e:
            logger.error(f"cvxpy failed with {options.method}: {e}",
                         extra=create_log_context(action="solve", location=f"{__name__}.CvxpyBackend.solve"))
            return BackendResultModel(status=SolveStatus.NUMERICAL_TROUBLE, raw_status="solver_error",
                                      message=str(e), solve_seconds=time.perf_counter() - start)
        elapsed = time.perf_counter() - start

        status, inaccurate = STATUS_MAP.get(problem.status, (SolveStatus.NUMERICAL_TROUBLE, True))
        primal = None if x.value is None else np.asarray(x.value, dtype=float)
        if status == SolveStatus.OPTIMAL and primal is None:
            status = SolveStatus.NUMERICAL_TROUBLE
        return BackendResultModel(
            status=status,
            raw_status=str(problem.status),
            inaccurate=inaccurate,
            value=None if problem.value is None else float(problem.value),
            x=primal if status == SolveStatus.OPTIMAL else None,
            duals=[c.dual_value for c in psd_constraints] if status == SolveStatus.OPTIMAL else [],
            solve_seconds=elapsed,
        )

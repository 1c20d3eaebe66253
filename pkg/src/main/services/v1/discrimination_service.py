"""
Discrimination programs over testers.

Every program is assembled on a ConicProgram and solved through the configured
backend. The binary PPT programs use the reduced tester form with variables
W, Q on (A0, B0, A1, B1) and probe states rho, sigma on (A0, B0); the partial
transpose is taken on every register Bob owns.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.main.config.logger import get_logger, create_log_context
from src.main.constants import CanonicalRegisters
from src.main.constants.error_messages import (K_MUST_BE_POSITIVE, LAMBDA_OUT_OF_RANGE, NOT_BINARY_ENSEMBLE_ERROR,
                                               SOLVER_FAILURE_ERROR, DIMENSION_MISMATCH_ERROR)
from src.main.exceptions import ValidationException, SolverException
from src.main.models.v1.solver_model import SolverOptionsModel
from src.main.services.v1.channel_service import ChannelEnsemble, ChoiOperator
from src.main.utils.conic_utils import ConicProgram, HermitianVar, LinearExpr, Solution, solve
from src.main.utils.tensor_utils import (LabeledMatrix, hermitian_eigenvalues, identity, kron,
                                         partial_transpose)

logger = get_logger(__name__)

R = CanonicalRegisters


@dataclass(frozen=True)
class DiscriminationInstance:
    ensemble: ChannelEnsemble
    k: int = 1

    def __post_init__(self):
        if int(self.k) < 1:
            raise ValidationException(K_MUST_BE_POSITIVE)

    @classmethod
    def binary(cls, first: ChoiOperator, second: ChoiOperator, lam: float, k: int = 1) -> "DiscriminationInstance":
        check_prior(lam)
        return cls(ChannelEnsemble.binary(first, second, lam), int(k))

    @property
    def lam(self) -> float:
        return self.ensemble.probabilities[0]

    @property
    def pair(self) -> Tuple[ChoiOperator, ChoiOperator]:
        if len(self.ensemble) != 2:
            raise ValidationException(f"{NOT_BINARY_ENSEMBLE_ERROR}: got {len(self.ensemble)}")
        first, second = self.ensemble.chois
        return first, second

    def with_k(self, k: int) -> "DiscriminationInstance":
        return DiscriminationInstance(self.ensemble, k)


@dataclass
class GlobalSolution:
    value: float
    testers: List[LabeledMatrix]
    rho: LabeledMatrix


@dataclass
class TesterSolution:
    value: float
    W: LabeledMatrix
    Q: LabeledMatrix
    rho: LabeledMatrix
    sigma: LabeledMatrix
    k: int
    dual_value: Optional[float] = None
    max_primal_residual: float = 0.0


@dataclass(frozen=True)
class TesterLayout:
    """Register roles shared by every tester program built from one Choi operator."""
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    bob: Tuple[str, ...]
    bob_inputs: Tuple[str, ...]

    @classmethod
    def of(cls, choi: ChoiOperator) -> "TesterLayout":
        bob = choi.bob_labels
        return cls(tuple(choi.input_labels), tuple(choi.output_labels), bob,
                   tuple(label for label in bob if label in choi.input_labels))


@dataclass
class PptPrimal:
    W: HermitianVar
    Q: HermitianVar
    rho: HermitianVar
    sigma: HermitianVar
    objective: LinearExpr


def check_prior(lam: float) -> None:
    if not 0.0 < lam < 1.0:
        raise ValidationException(f"{LAMBDA_OUT_OF_RANGE}: {lam}")


def weighted_difference(first: ChoiOperator, second: ChoiOperator, lam: float) -> LabeledMatrix:
    """lam J_N - (1 - lam) J_M."""
    return first.matrix * lam - second.matrix * (1.0 - lam)


def require_optimal(solution: Solution, program: ConicProgram) -> Solution:
    if not solution.ok:
        logger.error(f"{SOLVER_FAILURE_ERROR}: {program.name} ended {solution.status.value}",
                     extra=create_log_context(action="solve", location=f"{__name__}.require_optimal"))
        raise SolverException(f"{SOLVER_FAILURE_ERROR}: {program.name} ended {solution.status.value}",
                              status=solution.status.value,
                              diagnostics={"backend_status": solution.backend_status,
                                           "max_primal_residual": solution.max_primal_residual})
    return solution


def _scaled_identity(scalar: HermitianVar, choi: ChoiOperator) -> LinearExpr:
    return scalar.kron(identity(choi.input_system))


# Global benchmark

def psucc_global(ensemble: ChannelEnsemble, options: Optional[SolverOptionsModel] = None) -> GlobalSolution:
    """max sum_j p_j tr(T_j J_j) over testers T_j >= 0, sum_j T_j = rho (x) 1, tr rho = 1."""
    reference = ensemble.chois[0]
    program = ConicProgram(f"global_{len(ensemble)}")
    rho = program.hermitian("rho", reference.input_system)
    testers = [program.hermitian(f"T{j}", reference.matrix.system) for j in range(len(ensemble))]

    program.add_psd(rho, "rho_psd")
    program.add_zero(rho.trace() - 1.0, "rho_trace")
    total = testers[0].expr()
    for j, tester in enumerate(testers):
        program.add_psd(tester, f"T{j}_psd")
        if j:
            total = total + tester
    program.add_zero(total - rho.kron(identity(reference.output_system)), "tester_normalization")

    objective = LinearExpr.scalar(0.0)
    for (p, choi), tester in zip(ensemble.items, testers):
        objective = objective + tester.inner(choi.matrix) * p
    program.maximize(objective)

    solution = require_optimal(solve(program, options), program)
    return GlobalSolution(solution.value, [solution[t.name] for t in testers], solution["rho"])


def diamond_dual(first: ChoiOperator, second: ChoiOperator, lam: float,
                 options: Optional[SolverOptionsModel] = None) -> float:
    """min 1 - lam + alpha with C >= 0, C >= lam J_N - (1 - lam) J_M, alpha 1 >= tr_out C."""
    check_prior(lam)
    delta = weighted_difference(first, second, lam)
    program = ConicProgram("diamond_dual")
    c = program.hermitian("C", first.matrix.system)
    alpha = program.scalar("alpha")
    program.add_psd(c, "C_psd")
    program.add_psd(c - delta, "C_dominates")
    program.add_psd(_scaled_identity(alpha, first) - c.partial_trace(first.output_labels), "alpha_bound")
    program.minimize(alpha + (1.0 - lam))
    return require_optimal(solve(program, options), program).value


# PPT k-injectable testers

def add_ppt_primal(program: ConicProgram, choi: ChoiOperator, k: int, delta: LabeledMatrix, lam: float) -> PptPrimal:
    """Reduced-form tester constraints; objective 1 - lam + tr(W delta)."""
    layout = TesterLayout.of(choi)
    system = choi.matrix.system
    outputs_identity = identity(choi.output_system)

    w = program.hermitian("W", system)
    q = program.hermitian("Q", system)
    rho = program.hermitian("rho", choi.input_system)
    sigma = program.hermitian("sigma", choi.input_system)

    for name, var, state in (("W", w, rho), ("Q", q, sigma)):
        program.add_psd(var, f"{name}_psd")
        program.add_psd(state.kron(outputs_identity) - var, f"{name}_below_state")
    for name, state in (("rho", rho), ("sigma", sigma)):
        program.add_psd(state, f"{name}_psd")
        program.add_zero(state.trace() - 1.0, f"{name}_trace")

    wt = w.partial_transpose(layout.bob)
    qt = q.partial_transpose(layout.bob)
    program.add_psd(wt - qt * (1 - k), "W_lower_sandwich")
    program.add_psd(qt * (1 + k) - wt, "W_upper_sandwich")

    x = rho.partial_transpose(layout.bob_inputs).kron(outputs_identity) - wt
    y = sigma.partial_transpose(layout.bob_inputs).kron(outputs_identity) - qt
    program.add_psd(x - y * (1 - k), "complement_lower_sandwich")
    program.add_psd(y * (1 + k) - x, "complement_upper_sandwich")

    return PptPrimal(w, q, rho, sigma, w.inner(delta) + (1.0 - lam))


def add_ppt_dual(program: ConicProgram, choi: ChoiOperator, k: int, delta) -> LinearExpr:
    """Dual constraints of the reduced form; returns alpha + beta.

    delta is a constant LabeledMatrix or a LinearExpr in further program
    variables (composite sets).
    """
    layout = TesterLayout.of(choi)
    system = choi.matrix.system
    names = ("C", "D", "E", "G", "H", "K")
    c, d, e, g, h, kk = (program.hermitian(name, system) for name in names)
    alpha = program.scalar("alpha")
    beta = program.scalar("beta")
    for var in (c, d, e, g, h, kk):
        program.add_psd(var, f"{var.name}_psd")

    def pt(var: HermitianVar) -> LinearExpr:
        return var.partial_transpose(layout.bob)

    def marginal(expr: LinearExpr) -> LinearExpr:
        return expr.partial_trace(layout.outputs)

    def pt_inputs(var: HermitianVar) -> LinearExpr:
        return var.partial_transpose(layout.bob_inputs)

    g_minus_k = pt(g) - pt(kk)
    h_minus_e = pt(h) - pt(e)
    program.add_psd(h_minus_e + g_minus_k + c - delta, "W_stationarity")
    program.add_psd(d - g_minus_k * (1 + k) - h_minus_e * (1 - k), "Q_stationarity")
    program.add_psd(_scaled_identity(alpha, choi) - marginal(c + pt_inputs(h) - pt_inputs(kk)), "rho_stationarity")
    program.add_psd(_scaled_identity(beta, choi) - marginal(d + pt_inputs(h) * (k - 1) + pt_inputs(kk) * (k + 1)),
                    "sigma_stationarity")
    return alpha + beta


def psucc_ppt_k(inst: DiscriminationInstance, options: Optional[SolverOptionsModel] = None,
                with_dual: bool = False) -> TesterSolution:
    first, second = inst.pair
    check_prior(inst.lam)
    program = ConicProgram(f"ppt_k{inst.k}")
    primal = add_ppt_primal(program, first, inst.k, weighted_difference(first, second, inst.lam), inst.lam)
    program.maximize(primal.objective)
    solution = require_optimal(solve(program, options), program)

    result = TesterSolution(value=solution.value, W=solution["W"], Q=solution["Q"], rho=solution["rho"],
                            sigma=solution["sigma"], k=inst.k, max_primal_residual=solution.max_primal_residual)
    if with_dual:
        result.dual_value = psucc_ppt_k_dual(inst, options)
    logger.info(f"PPT k={inst.k} lambda={inst.lam:.6g} value={result.value:.9g}"
                + (f" dual={result.dual_value:.9g}" if with_dual else ""),
                extra=create_log_context(action="psucc_ppt_k", location=f"{__name__}.psucc_ppt_k"))
    return result


def psucc_ppt_k_dual(inst: DiscriminationInstance, options: Optional[SolverOptionsModel] = None) -> float:
    first, second = inst.pair
    check_prior(inst.lam)
    program = ConicProgram(f"ppt_k{inst.k}_dual")
    multipliers = add_ppt_dual(program, first, inst.k, weighted_difference(first, second, inst.lam))
    program.minimize(multipliers + (1.0 - inst.lam))
    return require_optimal(solve(program, options), program).value


def psucc_ppt_k_four_operator(inst: DiscriminationInstance, options: Optional[SolverOptionsModel] = None) -> float:
    """Four-operator tester form: one W and one Q per outcome, no probe states."""
    first, second = inst.pair
    check_prior(inst.lam)
    layout = TesterLayout.of(first)
    system = first.matrix.system
    d_out = first.d_out
    outputs_identity = identity(first.output_system)
    program = ConicProgram(f"ppt_k{inst.k}_four_operator")

    ws = [program.hermitian(f"W{j}", system) for j in range(2)]
    qs = [program.hermitian(f"Q{j}", system) for j in range(2)]
    for var in ws + qs:
        program.add_psd(var, f"{var.name}_psd")
    for name, (a, b) in (("W", ws), ("Q", qs)):
        total = a + b
        program.add_zero(total.trace() - float(d_out), f"{name}_trace")
        program.add_zero(total - total.partial_trace(layout.outputs).kron(outputs_identity) * (1.0 / d_out),
                         f"{name}_no_signalling")
    for j in range(2):
        wt = ws[j].partial_transpose(layout.bob)
        qt = qs[j].partial_transpose(layout.bob)
        program.add_psd(wt - qt * (1 - inst.k), f"sandwich_lower_{j}")
        program.add_psd(qt * (1 + inst.k) - wt, f"sandwich_upper_{j}")

    program.maximize(ws[0].inner(first.matrix) * inst.lam + ws[1].inner(second.matrix) * (1.0 - inst.lam))
    return require_optimal(solve(program, options), program).value


def psucc_ppt_k_states(rho: LabeledMatrix, sigma: LabeledMatrix, lam: float, k: int,
                       bob_labels: Sequence[str] = (R.B1,),
                       options: Optional[SolverOptionsModel] = None) -> float:
    """Two-state discrimination with k-injectable PPT measurements."""
    if int(k) < 1:
        raise ValidationException(K_MUST_BE_POSITIVE)
    check_prior(lam)
    if rho.system != sigma.system:
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: {rho.system} vs {sigma.system}")
    program = ConicProgram(f"states_ppt_k{k}")
    ws = [program.hermitian(f"W{j}", rho.system) for j in range(2)]
    qs = [program.hermitian(f"Q{j}", rho.system) for j in range(2)]
    for var in ws + qs:
        program.add_psd(var, f"{var.name}_psd")
    program.add_zero(ws[0] + ws[1] - identity(rho.system), "W_completeness")
    program.add_zero(qs[0] + qs[1] - identity(rho.system), "Q_completeness")
    for j in range(2):
        wt = ws[j].partial_transpose(bob_labels)
        qt = qs[j].partial_transpose(bob_labels)
        program.add_psd(wt - qt * (1 - k), f"sandwich_lower_{j}")
        program.add_psd(qt * (1 + k) - wt, f"sandwich_upper_{j}")
    program.maximize(ws[0].inner(rho) * lam + ws[1].inner(sigma) * (1.0 - lam))
    return require_optimal(solve(program, options), program).value


# Certificates and bounds

def _psd_violation(m: LabeledMatrix) -> float:
    return float(max(0.0, -hermitian_eigenvalues(m, tol=np.inf)[0]))


def check_tester_feasibility(choi: ChoiOperator, solution: TesterSolution) -> Dict[str, float]:
    """Residuals of the reduced-form constraints, recomputed from the returned operators."""
    layout = TesterLayout.of(choi)
    k = solution.k
    outputs_identity = identity(choi.output_system)
    w, q, rho, sigma = solution.W, solution.Q, solution.rho, solution.sigma
    wt = partial_transpose(w, layout.bob)
    qt = partial_transpose(q, layout.bob)
    x = kron(partial_transpose(rho, layout.bob_inputs), outputs_identity) - wt
    y = kron(partial_transpose(sigma, layout.bob_inputs), outputs_identity) - qt
    checks = {
        "W_psd": w,
        "Q_psd": q,
        "W_below_state": kron(rho, outputs_identity) - w,
        "Q_below_state": kron(sigma, outputs_identity) - q,
        "W_lower_sandwich": wt - qt * (1 - k),
        "W_upper_sandwich": qt * (1 + k) - wt,
        "complement_lower_sandwich": x - y * (1 - k),
        "complement_upper_sandwich": y * (1 + k) - x,
        "rho_psd": rho,
        "sigma_psd": sigma,
    }
    residuals = {name: _psd_violation(m) for name, m in checks.items()}
    residuals["rho_trace"] = abs(rho.trace() - 1.0)
    residuals["sigma_trace"] = abs(sigma.trace() - 1.0)
    return residuals


def schmidt_rank_bound(choi: ChoiOperator) -> int:
    """Schmidt rank at which PPT testers reach the global optimum."""
    return 2 * choi.d_in ** 2 * choi.d_out - 1


def werner_holevo_upper_bound(d: int, k: int, lam: float) -> float:
    """Dual-certified bound on the Werner-Holevo pair below k = d."""
    check_prior(lam)
    if k >= d:
        return 1.0
    if lam > (d + 1) / (2 * d):
        raise ValidationException(f"{LAMBDA_OUT_OF_RANGE}: bound needs lambda <= {(d + 1) / (2 * d):.6g}")
    return 1.0 - lam + lam * (k + 1) / (d + 1)


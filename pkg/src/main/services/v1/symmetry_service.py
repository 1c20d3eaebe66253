"""
Symmetry reductions of the tester programs.

Covariant channel pairs admit optimal testers in the commutant of the
symmetry group, so W and Q collapse to a handful of eigenvalues. The reduced
programs here are scalar LPs over those eigenvalues, solved through the same
conic path as the full programs with 1 x 1 blocks.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.main.config.config_loader import get_config_value
from src.main.config.logger import get_logger, create_log_context
from src.main.constants import CanonicalRegisters, CommutantName, DefaultToleranceConfig
from src.main.constants.error_messages import (DIMENSION_MISMATCH_ERROR, NOT_DIAGONAL_ERROR, K_MUST_BE_POSITIVE,
                                               NOISE_OUT_OF_RANGE_ERROR)
from src.main.exceptions import ValidationException
from src.main.models.v1.solver_model import SolverOptionsModel
from src.main.services.v1.channel_service import ChoiOperator, canonical_system
from src.main.services.v1.discrimination_service import require_optimal, check_prior
from src.main.utils.conic_utils import ConicProgram, LinearExpr, solve
from src.main.utils.tensor_utils import (LabeledMatrix, RegisterSystem, basis_projector, identity, kron,
                                         max_entangled, permute_registers)

logger = get_logger(__name__)

R = CanonicalRegisters

COMMUTANT_TOL = 1e-10


# Twirling and commutant bases

def twirl_finite(x: LabeledMatrix, gammas: Sequence[np.ndarray]) -> LabeledMatrix:
    """Average of G X G^dagger over a finite list of unitaries."""
    if not gammas:
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: no unitaries to average over")
    total = np.zeros_like(x.entries, dtype=complex)
    for gamma in gammas:
        gamma = np.asarray(gamma, dtype=complex)
        if gamma.shape != x.entries.shape:
            raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: unitary {gamma.shape} vs {x.entries.shape}")
        total += gamma @ x.entries @ gamma.conj().T
    return LabeledMatrix(x.system, total / len(gammas), x.hermitian_hint)


@dataclass(frozen=True, eq=False)
class CommutantBasis:
    name: CommutantName
    projectors: Tuple[LabeledMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "projectors", tuple(self.projectors))
        system = self.system
        if any(p.system != system for p in self.projectors):
            raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: projectors live on different registers")
        total = sum((p.entries for p in self.projectors), np.zeros((system.total_dim,) * 2))
        if np.max(np.abs(total - np.eye(system.total_dim))) > COMMUTANT_TOL:
            raise ValidationException(f"{self.name.value}: projectors do not sum to the identity")
        for i, a in enumerate(self.projectors):
            for j, b in enumerate(self.projectors):
                expected = a.entries if i == j else 0.0
                if np.max(np.abs(a.entries @ b.entries - expected)) > COMMUTANT_TOL:
                    raise ValidationException(f"{self.name.value}: projectors {i} and {j} are not orthogonal")

    @property
    def system(self) -> RegisterSystem:
        return self.projectors[0].system

    @property
    def traces(self) -> List[float]:
        return [float(p.trace().real) for p in self.projectors]

    def __len__(self) -> int:
        return len(self.projectors)


def _four_projectors(first: LabeledMatrix, second: LabeledMatrix) -> Tuple[LabeledMatrix, ...]:
    """Phi (x) Phi', Phi (x) (1 - Phi'), (1 - Phi) (x) Phi', (1 - Phi) (x) (1 - Phi') in canonical order."""
    complement_first = identity(first.system) - first
    complement_second = identity(second.system) - second
    pairs = ((first, second), (first, complement_second), (complement_first, second),
             (complement_first, complement_second))
    return tuple(permute_registers(kron(a, b), R.ORDER) for a, b in pairs)


def isotropic_pair(d_a: int, d_b: int) -> CommutantBasis:
    """Commutant of conj(U) (x) conj(V) (x) U (x) V on (A0, B0, A1, B1)."""
    return CommutantBasis(CommutantName.ISOTROPIC_PAIR,
                          _four_projectors(max_entangled(d_a, (R.A0, R.A1)), max_entangled(d_b, (R.B0, R.B1))))


def cross_isotropic_pair(d: int) -> CommutantBasis:
    """Commutant of conj(U) (x) conj(V) (x) V (x) U, built on Phi_{A0 B1} and Phi_{B0 A1}."""
    return CommutantBasis(CommutantName.CROSS_ISOTROPIC_PAIR,
                          _four_projectors(max_entangled(d, (R.A0, R.B1)), max_entangled(d, (R.B0, R.A1))))


def single_isotropic(d: int) -> CommutantBasis:
    """{Phi, 1 - Phi} for point-to-point channels A0 -> B1."""
    system = canonical_system(d, 1, 1, d)
    phi = LabeledMatrix(system, max_entangled(d, (R.A0, R.B1)).entries, hermitian_hint=True)
    return CommutantBasis(CommutantName.SINGLE_ISOTROPIC, (phi, identity(system) - phi))


def diagonal(system: RegisterSystem) -> CommutantBasis:
    return CommutantBasis(CommutantName.DIAGONAL,
                          tuple(basis_projector(system, i) for i in range(system.total_dim)))


def commutant_project(x: LabeledMatrix, basis: CommutantBasis) -> List[float]:
    """Coefficients c_i = tr(P_i X) / tr(P_i) of the orthogonal projection onto the span."""
    if x.system != basis.system:
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: {x.system} vs {basis.system}")
    return [float(np.real(np.sum(p.entries.T * x.entries))) / tr
            for p, tr in zip(basis.projectors, basis.traces)]


def reconstruct(coeffs: Sequence[float], basis: CommutantBasis) -> LabeledMatrix:
    if len(coeffs) != len(basis):
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: {len(coeffs)} coefficients for {len(basis)} projectors")
    total = np.zeros((basis.system.total_dim,) * 2, dtype=complex)
    for c, p in zip(coeffs, basis.projectors):
        total += c * p.entries
    return LabeledMatrix(basis.system, total, hermitian_hint=True)


# Scalar linear programs

@dataclass(frozen=True)
class LinearRow:
    """sum_v coeffs[v] * v + constant."""
    coeffs: Mapping[str, float] = field(default_factory=dict)
    constant: float = 0.0

    @classmethod
    def var(cls, name: str) -> "LinearRow":
        return cls({name: 1.0})

    def __add__(self, other) -> "LinearRow":
        if isinstance(other, (int, float)):
            return LinearRow(dict(self.coeffs), self.constant + other)
        coeffs = dict(self.coeffs)
        for name, c in other.coeffs.items():
            coeffs[name] = coeffs.get(name, 0.0) + c
        return LinearRow(coeffs, self.constant + other.constant)

    __radd__ = __add__

    def __mul__(self, scalar: float) -> "LinearRow":
        return LinearRow({name: c * scalar for name, c in self.coeffs.items()}, self.constant * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "LinearRow":
        return self * -1.0

    def __sub__(self, other) -> "LinearRow":
        return self + (-other)

    def __rsub__(self, other) -> "LinearRow":
        return (-self) + other

    def evaluate(self, assignment: Mapping[str, float]) -> float:
        return self.constant + sum(c * assignment[name] for name, c in self.coeffs.items())


@dataclass
class ReducedLP:
    name: str
    variables: List[str]
    objective: LinearRow
    inequalities: List[Tuple[str, LinearRow]] = field(default_factory=list)
    equalities: List[Tuple[str, LinearRow]] = field(default_factory=list)

    def require_nonneg(self, name: str, row: LinearRow) -> None:
        self.inequalities.append((name, row))

    def require_zero(self, name: str, row: LinearRow) -> None:
        self.equalities.append((name, row))

    def bound(self, variable: str, lower: float, upper: float) -> None:
        self.require_nonneg(f"{variable}_lower", LinearRow.var(variable) - lower)
        self.require_nonneg(f"{variable}_upper", upper - LinearRow.var(variable))


@dataclass
class ReducedLPSolution:
    value: float
    assignment: Dict[str, float]

    def __getitem__(self, name: str) -> float:
        return self.assignment[name]


def solve_reduced_lp(lp: ReducedLP, options: Optional[SolverOptionsModel] = None) -> ReducedLPSolution:
    """Maximize the objective; every variable becomes a 1 x 1 block."""
    program = ConicProgram(lp.name)
    scalars = {name: program.scalar(name) for name in lp.variables}

    def expr(row: LinearRow) -> LinearExpr:
        total = LinearExpr.scalar(row.constant)
        for name, c in row.coeffs.items():
            total = total + scalars[name] * float(c)
        return total

    for name, row in lp.inequalities:
        program.add_psd(expr(row), name)
    for name, row in lp.equalities:
        program.add_zero(expr(row), name)
    program.maximize(expr(lp.objective))
    solution = require_optimal(solve(program, options), program)
    assignment = {name: float(np.real(solution[name].entries[0, 0])) for name in lp.variables}
    return ReducedLPSolution(solution.value, assignment)


def _add_eigen_sandwich(lp: ReducedLP, tester: Mapping[str, LinearRow], helper: Mapping[str, LinearRow],
                        bound: float, k: int) -> None:
    """Per eigenspace e of the transposed operators:
    (1-k) mu_e <= lambda_e <= (1+k) mu_e and the same for b - lambda_e against b - mu_e.
    """
    for e, lam_e in tester.items():
        mu_e = helper[e]
        complement_lam = bound - lam_e
        complement_mu = bound - mu_e
        lp.require_nonneg(f"{e}_lower", lam_e - (1 - k) * mu_e)
        lp.require_nonneg(f"{e}_upper", (1 + k) * mu_e - lam_e)
        lp.require_nonneg(f"{e}_complement_lower", complement_lam - (1 - k) * complement_mu)
        lp.require_nonneg(f"{e}_complement_upper", (1 + k) * complement_mu - complement_lam)


def _check_lp_inputs(p: float, q: float, k: int, lam: float) -> None:
    for name, value in (("p", p), ("q", q)):
        if not 0.0 <= value <= 1.0:
            raise ValidationException(f"{NOISE_OUT_OF_RANGE_ERROR}: {name}={value}")
    if int(k) < 1:
        raise ValidationException(K_MUST_BE_POSITIVE)
    check_prior(lam)


def _isotropic_weights(dim: int, p: float, q: float, lam: float) -> Tuple[float, float]:
    """tr(P lam J^p - P (1-lam) J^q) for P = Phi and per unit trace of 1 - Phi.

    J^p = dim (1-p) Phi + (p/dim) 1 for isotropic Choi operators on dim^2.
    """
    first = lam * ((1 - p) * dim + p / dim) - (1 - lam) * ((1 - q) * dim + q / dim)
    per_trace = (lam * p - (1 - lam) * q) / dim
    return first, per_trace


def _solve_logged(lp: ReducedLP, options: Optional[SolverOptionsModel]) -> ReducedLPSolution:
    solution = solve_reduced_lp(lp, options)
    logger.info(f"{lp.name}: value={solution.value:.9g} {solution.assignment}",
                extra=create_log_context(action="reduced_lp", location=f"{__name__}.{lp.name}"))
    return solution


def lp_bipartite_depol(d_a: int, d_b: int, p: float, q: float, k: int, lam: float = 0.5,
                       options: Optional[SolverOptionsModel] = None) -> ReducedLPSolution:
    """W = x P1 + y (1 - P1), Q = u P1 + v (1 - P1). Bob's transpose leaves both unchanged."""
    _check_lp_inputs(p, q, k, lam)
    dim = d_a * d_b
    bound = 1.0 / dim
    first, per_trace = _isotropic_weights(dim, p, q, lam)
    rest = (dim * dim - 1) * per_trace
    x, y, u, v = (LinearRow.var(name) for name in ("x", "y", "u", "v"))
    lp = ReducedLP("lp_bipartite_depol", ["x", "y", "u", "v"], first * x + rest * y + (1 - lam))
    for name in lp.variables:
        lp.bound(name, 0.0, bound)
    _add_eigen_sandwich(lp, {"P1": x, "rest": y}, {"P1": u, "rest": v}, bound, k)
    return _solve_logged(lp, options)


def lp_bipartite_depol_full(d_a: int, d_b: int, p: float, q: float, k: int, lam: float = 0.5,
                            options: Optional[SolverOptionsModel] = None) -> ReducedLPSolution:
    """One eigenvalue per projector of the isotropic pair basis."""
    _check_lp_inputs(p, q, k, lam)
    dim = d_a * d_b
    bound = 1.0 / dim
    first, per_trace = _isotropic_weights(dim, p, q, lam)
    traces = (1, d_b ** 2 - 1, d_a ** 2 - 1, (d_a ** 2 - 1) * (d_b ** 2 - 1))
    ws = [LinearRow.var(f"w{i}") for i in range(1, 5)]
    qs = [LinearRow.var(f"q{i}") for i in range(1, 5)]
    objective = first * ws[0] + sum((tr * per_trace * w for tr, w in zip(traces[1:], ws[1:])), LinearRow())
    lp = ReducedLP("lp_bipartite_depol_full", [f"w{i}" for i in range(1, 5)] + [f"q{i}" for i in range(1, 5)],
                   objective + (1 - lam))
    for name in lp.variables:
        lp.bound(name, 0.0, bound)
    _add_eigen_sandwich(lp, {f"P{i}": w for i, w in enumerate(ws, 1)},
                        {f"P{i}": qq for i, qq in enumerate(qs, 1)}, bound, k)
    return _solve_logged(lp, options)


def lp_pp_depol(d: int, p: float, q: float, k: int, lam: float = 0.5,
                options: Optional[SolverOptionsModel] = None) -> ReducedLPSolution:
    """W = x Phi + y (1 - Phi); W^T_B has eigenvalues y +- (x - y)/d on the flip eigenspaces."""
    _check_lp_inputs(p, q, k, lam)
    bound = 1.0 / d
    first, per_trace = _isotropic_weights(d, p, q, lam)
    rest = (d * d - 1) * per_trace
    x, y, u, v = (LinearRow.var(name) for name in ("x", "y", "u", "v"))
    lp = ReducedLP("lp_pp_depol", ["x", "y", "u", "v"], first * x + rest * y + (1 - lam))
    for name in lp.variables:
        lp.bound(name, 0.0, bound)

    def flip_eigenvalues(a: LinearRow, b: LinearRow) -> Dict[str, LinearRow]:
        return {"plus": b + (a - b) * (1.0 / d), "minus": b - (a - b) * (1.0 / d)}

    _add_eigen_sandwich(lp, flip_eigenvalues(x, y), flip_eigenvalues(u, v), bound, k)
    return _solve_logged(lp, options)


def swap_eigenvalue_forms(d: int) -> Dict[Tuple[int, int], np.ndarray]:
    """Coefficients of (w1, w2, w3, w4) in the eigenvalue of W^T_B on the (s1, s2) flip eigenspace.

    s1 is the eigenvalue of the flip on (A0, B1), s2 the one on (B0, A1).
    """
    if d < 2:
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: depolarized SWAP needs d >= 2, got {d}")
    forms = {}
    for s1 in (1, -1):
        for s2 in (1, -1):
            cross = s1 * s2 / d ** 2
            forms[(s1, s2)] = np.array([cross, s1 / d - cross, s2 / d - cross, 1 - s1 / d - s2 / d + cross])
    return forms


def lp_depol_swap(d: int, p: float, q: float, k: int, lam: float = 0.5,
                  options: Optional[SolverOptionsModel] = None) -> ReducedLPSolution:
    _check_lp_inputs(p, q, k, lam)
    forms = swap_eigenvalue_forms(d)
    bound = 1.0 / d ** 2
    first, per_trace = _isotropic_weights(d * d, p, q, lam)
    traces = (1, d * d - 1, d * d - 1, (d * d - 1) ** 2)
    w_names = [f"w{i}" for i in range(1, 5)]
    q_names = [f"q{i}" for i in range(1, 5)]
    objective = first * LinearRow.var("w1") + sum(
        (tr * per_trace * LinearRow.var(name) for tr, name in zip(traces[1:], w_names[1:])), LinearRow())
    lp = ReducedLP("lp_depol_swap", w_names + q_names, objective + (1 - lam))
    for name in lp.variables:
        lp.bound(name, 0.0, bound)

    def eigenvalues(names: List[str]) -> Dict[str, LinearRow]:
        return {f"s{s1:+d}{s2:+d}": LinearRow(dict(zip(names, coeffs.tolist())))
                for (s1, s2), coeffs in forms.items()}

    _add_eigen_sandwich(lp, eigenvalues(w_names), eigenvalues(q_names), bound, k)
    return _solve_logged(lp, options)


def _diagonal_entries(choi: ChoiOperator) -> np.ndarray:
    entries = np.asarray(choi.matrix.entries)
    tol = float(get_config_value('tolerances', 'diagonal', default=DefaultToleranceConfig.DIAGONAL_TOL))
    off = entries - np.diag(np.diag(entries))
    if np.max(np.abs(off), initial=0.0) > tol:
        raise ValidationException(NOT_DIAGONAL_ERROR)
    return np.real(np.diag(entries))


def psucc_classical_diag(first: ChoiOperator, second: ChoiOperator, lam: float,
                         options: Optional[SolverOptionsModel] = None) -> ReducedLPSolution:
    """Tester restricted to diagonal W <= r (x) 1 with r a probability vector on the inputs."""
    check_prior(lam)
    if first.matrix.system != second.matrix.system:
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: {first.matrix.system} vs {second.matrix.system}")
    delta = lam * _diagonal_entries(first) - (1 - lam) * _diagonal_entries(second)
    d_in, d_out = first.d_in, first.d_out
    r_names = [f"r{x}" for x in range(d_in)]
    w_names = [f"w{x}_{y}" for x in range(d_in) for y in range(d_out)]
    objective = sum((float(delta[i]) * LinearRow.var(name) for i, name in enumerate(w_names)), LinearRow())
    lp = ReducedLP("classical_diag", r_names + w_names, objective + (1 - lam))
    for x in range(d_in):
        lp.require_nonneg(f"r{x}_nonneg", LinearRow.var(f"r{x}"))
        for y in range(d_out):
            w = LinearRow.var(f"w{x}_{y}")
            lp.require_nonneg(f"w{x}_{y}_nonneg", w)
            lp.require_nonneg(f"w{x}_{y}_below", LinearRow.var(f"r{x}") - w)
    lp.require_zero("r_normalized", sum((LinearRow.var(name) for name in r_names), LinearRow()) - 1.0)
    return _solve_logged(lp, options)

"""
Worst-case discrimination between two sets of channels.

A set is an affine family J(theta) = J_base + sum_i theta_i J_i with theta in
a box or a simplex. The worst-case PPT success probability is the minimum of
the tester dual over the dual variables and both members jointly.
"""
import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.main.config.logger import get_logger, create_log_context
from src.main.constants import ParamDomain
from src.main.constants.error_messages import (EMPTY_PARAMETER_SET_ERROR, INCOMPATIBLE_CHANNELS_ERROR,
                                               K_MUST_BE_POSITIVE)
from src.main.exceptions import ValidationException
from src.main.models.v1.solver_model import SolverOptionsModel
from src.main.services.v1.channel_service import ChoiOperator
from src.main.services.v1.discrimination_service import require_optimal, add_ppt_dual, check_prior
from src.main.utils.conic_utils import ConicProgram, HermitianVar, LinearExpr, solve
from src.main.utils.tensor_utils import LabeledMatrix, zeros

logger = get_logger(__name__)

MAX_BOX_VERTICES = 4096


@dataclass(frozen=True, eq=False)
class ParamChannelSet:
    reference: ChoiOperator
    base: LabeledMatrix
    directions: Tuple[LabeledMatrix, ...] = ()
    domain: ParamDomain = ParamDomain.BOX
    bounds: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "directions", tuple(self.directions))
        object.__setattr__(self, "bounds", tuple((float(lo), float(hi)) for lo, hi in self.bounds))
        system = self.reference.matrix.system
        if self.base.system != system or any(d.system != system for d in self.directions):
            raise ValidationException(f"{INCOMPATIBLE_CHANNELS_ERROR}: set members live on different registers")
        if self.domain == ParamDomain.BOX:
            if len(self.bounds) != len(self.directions):
                raise ValidationException(f"{EMPTY_PARAMETER_SET_ERROR}: one (lo, hi) pair per direction")
            if any(lo > hi for lo, hi in self.bounds):
                raise ValidationException(f"{EMPTY_PARAMETER_SET_ERROR}: bounds {self.bounds}")
        elif not self.directions:
            raise ValidationException(f"{EMPTY_PARAMETER_SET_ERROR}: simplex without vertices")
        for theta in self.vertices():
            self.member(theta)

    @classmethod
    def singleton(cls, choi: ChoiOperator) -> "ParamChannelSet":
        return cls(choi, choi.matrix)

    @classmethod
    def segment(cls, start: ChoiOperator, end: ChoiOperator) -> "ParamChannelSet":
        """Every convex combination of two channels, e.g. a noise interval of an affine family."""
        return cls(start, start.matrix, (end.matrix - start.matrix,), ParamDomain.BOX, ((0.0, 1.0),))

    @classmethod
    def box(cls, base: ChoiOperator, directions: Sequence[LabeledMatrix],
            bounds: Sequence[Tuple[float, float]]) -> "ParamChannelSet":
        return cls(base, base.matrix, tuple(directions), ParamDomain.BOX, tuple(bounds))

    @classmethod
    def hull(cls, chois: Sequence[ChoiOperator]) -> "ParamChannelSet":
        if not chois:
            raise ValidationException(f"{EMPTY_PARAMETER_SET_ERROR}: empty hull")
        reference = chois[0]
        return cls(reference, zeros(reference.matrix.system), tuple(c.matrix for c in chois), ParamDomain.SIMPLEX)

    @property
    def n_params(self) -> int:
        return len(self.directions)

    def vertices(self) -> List[Tuple[float, ...]]:
        if self.domain == ParamDomain.SIMPLEX:
            return [tuple(float(i == j) for j in range(self.n_params)) for i in range(self.n_params)]
        if 2 ** self.n_params > MAX_BOX_VERTICES:
            raise ValidationException(f"Box with {self.n_params} directions has too many vertices to check")
        return [tuple(corner) for corner in itertools.product(*self.bounds)]

    def matrix_at(self, theta: Sequence[float]) -> LabeledMatrix:
        total = self.base
        for coeff, direction in zip(theta, self.directions):
            total = total + direction * float(coeff)
        return total

    def member(self, theta: Sequence[float]) -> ChoiOperator:
        """The channel at theta; raises when it is not CPTP."""
        return ChoiOperator(LabeledMatrix(self.base.system, self.matrix_at(theta).entries, hermitian_hint=True),
                            self.reference.input_labels, self.reference.output_labels,
                            dict(self.reference.ownership))

    def add_to(self, program: ConicProgram, prefix: str) -> Tuple[LinearExpr, List[HermitianVar]]:
        """Declare theta on the program with its domain constraints; return J(theta)."""
        thetas = [program.scalar(f"{prefix}_theta{i}") for i in range(self.n_params)]
        expr = LinearExpr.const(self.base)
        for theta, direction in zip(thetas, self.directions):
            expr = expr + theta.kron(direction)
        if self.domain == ParamDomain.BOX:
            for theta, (lo, hi) in zip(thetas, self.bounds):
                program.add_psd(theta - lo, f"{theta.name}_lower")
                program.add_psd(hi - theta, f"{theta.name}_upper")
        else:
            total = LinearExpr.scalar(0.0)
            for theta in thetas:
                program.add_psd(theta, f"{theta.name}_nonneg")
                total = total + theta
            program.add_zero(total - 1.0, f"{prefix}_simplex")
        return expr, thetas


@dataclass
class CompositeSolution:
    value: float
    first_params: List[float] = field(default_factory=list)
    second_params: List[float] = field(default_factory=list)

    @property
    def params(self) -> Dict[str, List[float]]:
        return {"first": self.first_params, "second": self.second_params}


def composite_psucc(first: ParamChannelSet, second: ParamChannelSet, lam: float, k: int,
                    options: Optional[SolverOptionsModel] = None) -> CompositeSolution:
    if int(k) < 1:
        raise ValidationException(K_MUST_BE_POSITIVE)
    check_prior(lam)
    if first.reference.matrix.system != second.reference.matrix.system or \
            first.reference.ownership != second.reference.ownership:
        raise ValidationException(INCOMPATIBLE_CHANNELS_ERROR)

    program = ConicProgram(f"composite_k{k}")
    j_first, first_thetas = first.add_to(program, "first")
    j_second, second_thetas = second.add_to(program, "second")
    delta = j_first * lam - j_second * (1.0 - lam)
    multipliers = add_ppt_dual(program, first.reference, int(k), delta)
    program.minimize(multipliers + (1.0 - lam))
    solution = require_optimal(solve(program, options), program)

    def params(thetas: List[HermitianVar]) -> List[float]:
        return [float(np.real(solution[t.name].entries[0, 0])) for t in thetas]

    result = CompositeSolution(solution.value, params(first_thetas), params(second_thetas))
    logger.info(f"Composite k={k} lambda={lam:.6g} value={result.value:.9g} worst case {result.params}",
                extra=create_log_context(action="composite_psucc", location=f"{__name__}.composite_psucc"))
    return result

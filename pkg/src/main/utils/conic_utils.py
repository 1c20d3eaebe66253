"""
Conic programs over Hermitian matrix variables.

A program is assembled from HermitianVar objects combined into LinearExpr
values through partial transposes, partial traces, Kronecker products with
constants, register permutations and scaling. Constraints are either PSD
(expr >= 0 in the Loewner order) or Zero. real_embed lowers the program to a
real standard form in which each complex n x n PSD constraint becomes the
2n x 2n block [[Re, -Im], [Im, Re]]; a backend solves that form and solve()
maps the answer back to complex assignments.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Protocol, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from src.main.config.logger import get_logger, create_log_context
from src.main.constants import ConstraintKind, Sense, SolveStatus
from src.main.constants.error_messages import DIMENSION_MISMATCH_ERROR
from src.main.constants.info_messages import PROGRAM_SOLVED, INACCURATE_SOLUTION_ACCEPTED
from src.main.exceptions import ValidationException
from src.main.models.v1.solver_model import SolverOptionsModel, BackendResultModel
from src.main.utils.tensor_utils import (LabeledMatrix, RegisterSystem, kron, partial_trace, partial_transpose,
                                         permute_registers, partial_transpose_array, permute_array,
                                         split_for_trace)

logger = get_logger(__name__)

Number = Union[int, float, complex]

_var_ids = itertools.count()


# Transforms

class Transform:
    """A Hermiticity-preserving linear map between register systems."""

    def output_system(self, system: RegisterSystem) -> RegisterSystem:
        raise NotImplementedError

    def apply(self, m: LabeledMatrix) -> LabeledMatrix:
        raise NotImplementedError

    def sparse_map(self, system: RegisterSystem) -> sp.csr_matrix:
        """Matrix acting on the row-major vectorization of an operator on `system`."""
        raise NotImplementedError


def _index_matrix(n: int) -> np.ndarray:
    return np.arange(n * n).reshape(n, n)


def _gather_map(sources: np.ndarray, n_in: int) -> sp.csr_matrix:
    n_out = sources.size
    return sp.csr_matrix((np.ones(n_out), (np.arange(n_out), sources.ravel())), shape=(n_out, n_in * n_in))


@dataclass(frozen=True)
class PartialTransposeOp(Transform):
    labels: Tuple[str, ...]

    def output_system(self, system):
        system.positions(self.labels)
        return system

    def apply(self, m):
        return partial_transpose(m, self.labels)

    def sparse_map(self, system):
        n = system.total_dim
        moved = partial_transpose_array(_index_matrix(n), system.dims, system.positions(self.labels))
        return _gather_map(moved, n)


@dataclass(frozen=True)
class PermuteOp(Transform):
    order: Tuple[str, ...]

    def output_system(self, system):
        return RegisterSystem(tuple(system.registers[system.position(label)] for label in self.order))

    def apply(self, m):
        return permute_registers(m, self.order)

    def sparse_map(self, system):
        n = system.total_dim
        perm = [system.position(label) for label in self.order]
        return _gather_map(permute_array(_index_matrix(n), system.dims, perm), n)


@dataclass(frozen=True)
class PartialTraceOp(Transform):
    labels: Tuple[str, ...]

    def output_system(self, system):
        return system.without(self.labels)

    def apply(self, m):
        return partial_trace(m, self.labels)

    def sparse_map(self, system):
        n = system.total_dim
        split = split_for_trace(_index_matrix(n), system.dims, system.positions(self.labels))
        d_kept, d_traced = split.shape[0], split.shape[2]
        sources = np.diagonal(split, axis1=2, axis2=3).reshape(-1)
        rows = np.repeat(np.arange(d_kept * d_kept), d_traced)
        return sp.csr_matrix((np.ones(sources.size), (rows, sources)), shape=(d_kept * d_kept, n * n))


@dataclass(frozen=True, eq=False)
class KronOp(Transform):
    constant: LabeledMatrix
    left: bool = False

    def output_system(self, system):
        return self.constant.system.concat(system) if self.left else system.concat(self.constant.system)

    def apply(self, m):
        return kron(self.constant, m) if self.left else kron(m, self.constant)

    def sparse_map(self, system):
        self.output_system(system)
        n, m = system.total_dim, self.constant.dim
        c = self.constant.entries
        a, b = np.nonzero(c)
        i, j = np.divmod(np.arange(n * n), n)
        i, j = i[:, None], j[:, None]
        if self.left:
            rows = (a[None, :] * n + i) * (m * n) + (b[None, :] * n + j)
        else:
            rows = (i * m + a[None, :]) * (n * m) + (j * m + b[None, :])
        cols = np.broadcast_to(np.arange(n * n)[:, None], rows.shape)
        data = np.broadcast_to(c[a, b][None, :], rows.shape)
        return sp.csr_matrix((data.ravel(), (rows.ravel(), cols.ravel())), shape=(n * n * m * m, n * n))


@dataclass(frozen=True, eq=False)
class TraceAgainstOp(Transform):
    """X -> tr(C X) as a 1 x 1 operator on the empty system."""
    constant: LabeledMatrix

    def output_system(self, system):
        if system != self.constant.system:
            raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: {system} vs {self.constant.system}")
        return RegisterSystem()

    def apply(self, m):
        self.output_system(m.system)
        value = np.sum(self.constant.entries.T * m.entries)
        return LabeledMatrix(RegisterSystem(), [[value]])

    def sparse_map(self, system):
        self.output_system(system)
        return sp.csr_matrix(self.constant.entries.T.reshape(1, -1))


# Variables and expressions

@dataclass(frozen=True, eq=False)
class HermitianVar:
    name: str
    system: RegisterSystem
    id: int = field(default_factory=lambda: next(_var_ids))

    __array_ufunc__ = None

    @property
    def size(self) -> int:
        return self.system.total_dim

    def expr(self) -> "LinearExpr":
        return LinearExpr.of(self)

    def partial_transpose(self, labels: Iterable[str]) -> "LinearExpr":
        return self.expr().partial_transpose(labels)

    def partial_trace(self, labels: Iterable[str]) -> "LinearExpr":
        return self.expr().partial_trace(labels)

    def kron(self, constant: LabeledMatrix, left: bool = False) -> "LinearExpr":
        return self.expr().kron(constant, left)

    def permute(self, order: Sequence[str]) -> "LinearExpr":
        return self.expr().permute(order)

    def trace(self) -> "LinearExpr":
        return self.expr().trace()

    def inner(self, constant: LabeledMatrix) -> "LinearExpr":
        return self.expr().inner(constant)

    def __add__(self, other):
        return self.expr() + other

    def __radd__(self, other):
        return self.expr() + other

    def __sub__(self, other):
        return self.expr() - other

    def __rsub__(self, other):
        return LinearExpr.coerce(other, self.system) - self.expr()

    def __neg__(self):
        return -self.expr()

    def __mul__(self, scalar: Number):
        return self.expr() * scalar

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"HermitianVar({self.name}, {self.system})"


@dataclass(frozen=True)
class Term:
    coeff: complex
    var: HermitianVar
    ops: Tuple[Transform, ...] = ()


class LinearExpr:
    """Affine expression: constant + sum of coeff * ops(var)."""

    __array_ufunc__ = None

    def __init__(self, system: RegisterSystem, terms: Sequence[Term] = (), constant: Optional[LabeledMatrix] = None):
        if constant is not None and constant.system != system:
            raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: constant on {constant.system}, expr on {system}")
        self.system = system
        self.terms = tuple(terms)
        self.constant = constant

    @classmethod
    def of(cls, var: HermitianVar) -> "LinearExpr":
        return cls(var.system, (Term(1.0, var),))

    @classmethod
    def const(cls, m: LabeledMatrix) -> "LinearExpr":
        return cls(m.system, (), m)

    @classmethod
    def scalar(cls, value: Number) -> "LinearExpr":
        return cls.const(LabeledMatrix(RegisterSystem(), [[value]]))

    @classmethod
    def coerce(cls, value, system: RegisterSystem) -> "LinearExpr":
        if isinstance(value, LinearExpr):
            return value
        if isinstance(value, HermitianVar):
            return value.expr()
        if isinstance(value, LabeledMatrix):
            return cls.const(value)
        if isinstance(value, (int, float, complex, np.number)):
            if system.total_dim != 1:
                raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: scalar added to operator on {system}")
            return cls.const(LabeledMatrix(system, [[value]]))
        raise TypeError(f"Cannot use {type(value).__name__} in a linear expression")

    @property
    def is_scalar(self) -> bool:
        return self.system.total_dim == 1

    def variables(self) -> List[HermitianVar]:
        seen: Dict[int, HermitianVar] = {}
        for term in self.terms:
            seen.setdefault(term.var.id, term.var)
        return list(seen.values())

    def _map(self, op: Transform) -> "LinearExpr":
        system = op.output_system(self.system)
        terms = [Term(t.coeff, t.var, t.ops + (op,)) for t in self.terms]
        constant = op.apply(self.constant) if self.constant is not None else None
        return LinearExpr(system, terms, constant)

    def partial_transpose(self, labels: Iterable[str]) -> "LinearExpr":
        return self._map(PartialTransposeOp(tuple(labels)))

    def partial_trace(self, labels: Iterable[str]) -> "LinearExpr":
        return self._map(PartialTraceOp(tuple(labels)))

    def kron(self, constant: LabeledMatrix, left: bool = False) -> "LinearExpr":
        return self._map(KronOp(constant, left))

    def permute(self, order: Sequence[str]) -> "LinearExpr":
        return self._map(PermuteOp(tuple(order)))

    def trace(self) -> "LinearExpr":
        return self.partial_trace(self.system.labels)

    def inner(self, constant: LabeledMatrix) -> "LinearExpr":
        return self._map(TraceAgainstOp(constant))

    def __add__(self, other) -> "LinearExpr":
        other = LinearExpr.coerce(other, self.system)
        if other.system != self.system:
            raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: {self.system} vs {other.system}")
        if self.constant is None:
            constant = other.constant
        elif other.constant is None:
            constant = self.constant
        else:
            constant = self.constant + other.constant
        return LinearExpr(self.system, self.terms + other.terms, constant)

    __radd__ = __add__

    def __neg__(self) -> "LinearExpr":
        return self * -1.0

    def __sub__(self, other) -> "LinearExpr":
        return self + (-LinearExpr.coerce(other, self.system))

    def __rsub__(self, other) -> "LinearExpr":
        return LinearExpr.coerce(other, self.system) + (-self)

    def __mul__(self, scalar: Number) -> "LinearExpr":
        if not isinstance(scalar, (int, float, complex, np.number)):
            return NotImplemented
        terms = [Term(t.coeff * scalar, t.var, t.ops) for t in self.terms]
        constant = self.constant * scalar if self.constant is not None else None
        return LinearExpr(self.system, terms, constant)

    __rmul__ = __mul__

    def evaluate(self, assignments: Mapping[HermitianVar, LabeledMatrix]) -> LabeledMatrix:
        n = self.system.total_dim
        total = np.zeros((n, n), dtype=complex) if self.constant is None else np.array(self.constant.entries)
        for term in self.terms:
            value = assignments[term.var]
            for op in term.ops:
                value = op.apply(value)
            total = total + term.coeff * value.entries
        return LabeledMatrix(self.system, total)

    def __repr__(self) -> str:
        return f"LinearExpr(system={self.system}, terms={len(self.terms)})"


# Programs

@dataclass
class Constraint:
    name: str
    kind: ConstraintKind
    expr: LinearExpr


class ConicProgram:

    def __init__(self, name: str = "program"):
        self.name = name
        self.variables: List[HermitianVar] = []
        self.constraints: List[Constraint] = []
        self.objective: Optional[LinearExpr] = None
        self.sense: Sense = Sense.MAX

    def hermitian(self, name: str, system: RegisterSystem) -> HermitianVar:
        if any(v.name == name for v in self.variables):
            raise ValidationException(f"Variable {name!r} already declared in {self.name}")
        var = HermitianVar(name, system)
        self.variables.append(var)
        return var

    def scalar(self, name: str) -> HermitianVar:
        return self.hermitian(name, RegisterSystem())

    def _check(self, expr: LinearExpr) -> None:
        owned = {v.id for v in self.variables}
        for var in expr.variables():
            if var.id not in owned:
                raise ValidationException(f"Variable {var.name!r} does not belong to program {self.name}")

    def _add(self, expr, kind: ConstraintKind, name: Optional[str]) -> Constraint:
        expr = LinearExpr.coerce(expr, RegisterSystem())
        self._check(expr)
        constraint = Constraint(name or f"c{len(self.constraints)}", kind, expr)
        self.constraints.append(constraint)
        return constraint

    def add_psd(self, expr, name: Optional[str] = None) -> Constraint:
        return self._add(expr, ConstraintKind.PSD, name)

    def add_zero(self, expr, name: Optional[str] = None) -> Constraint:
        return self._add(expr, ConstraintKind.ZERO, name)

    def add_leq(self, lower, upper, name: Optional[str] = None) -> Constraint:
        """lower <= upper in the Loewner order, stored as PSD(upper - lower)."""
        upper = LinearExpr.coerce(upper, RegisterSystem())
        return self.add_psd(upper - lower, name)

    def _set_objective(self, expr, sense: Sense) -> None:
        expr = LinearExpr.coerce(expr, RegisterSystem())
        if not expr.is_scalar:
            raise ValidationException(f"Objective must be scalar, got system {expr.system}")
        self._check(expr)
        self.objective = expr
        self.sense = sense

    def maximize(self, expr) -> None:
        self._set_objective(expr, Sense.MAX)

    def minimize(self, expr) -> None:
        self._set_objective(expr, Sense.MIN)

    def describe(self) -> str:
        """Plain-text listing of sizes, constraint kinds and the objective."""
        lines = [f"program {self.name}", f"sense {self.sense.value}"]
        for var in self.variables:
            lines.append(f"var {var.name} {var.system} size {var.size}")
        for c in self.constraints:
            lines.append(f"constraint {c.name} {c.kind.value} size {c.expr.system.total_dim} "
                         f"terms {len(c.expr.terms)} system {c.expr.system}")
        if self.objective is not None:
            lines.append(f"objective terms {len(self.objective.terms)}")
        return "\n".join(lines)


# Real embedding

def embed_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    return np.block([[h.real, -h.imag], [h.imag, h.real]])


def unembed_hermitian(z: np.ndarray) -> np.ndarray:
    n = z.shape[0] // 2
    top_left, top_right = z[:n, :n], z[:n, n:]
    bottom_left, bottom_right = z[n:, :n], z[n:, n:]
    return (top_left + bottom_right) / 2 + 1j * (bottom_left - top_right) / 2


@lru_cache(maxsize=64)
def _hermitian_parametrization(n: int) -> sp.csr_matrix:
    """vec(X) = P @ params with params = (diag, Re upper, Im upper)."""
    iu, ju = np.triu_indices(n, 1)
    t = iu.size
    diag = np.arange(n)
    upper = np.arange(t)
    rows = np.concatenate([diag * n + diag, iu * n + ju, ju * n + iu, iu * n + ju, ju * n + iu])
    cols = np.concatenate([diag, n + upper, n + upper, n + t + upper, n + t + upper])
    data = np.concatenate([np.ones(n), np.ones(t), np.ones(t), 1j * np.ones(t), -1j * np.ones(t)])
    return sp.csr_matrix((data, (rows, cols)), shape=(n * n, n * n))


def _hermitian_params(x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    iu, ju = np.triu_indices(n, 1)
    return np.concatenate([np.diag(x).real, x[iu, ju].real, x[iu, ju].imag])


@lru_cache(maxsize=64)
def _embedding_maps(m: int) -> Tuple[sp.csr_matrix, sp.csr_matrix]:
    """Maps from vec(Re Y), vec(Im Y) to vec of the 2m x 2m real block."""
    i, j = np.divmod(np.arange(m * m), m)
    src = np.arange(m * m)
    size = 2 * m
    re_rows = np.concatenate([i * size + j, (m + i) * size + (m + j)])
    re_map = sp.csr_matrix((np.ones(2 * m * m), (re_rows, np.concatenate([src, src]))), shape=(size * size, m * m))
    im_rows = np.concatenate([(m + i) * size + j, i * size + (m + j)])
    im_data = np.concatenate([np.ones(m * m), -np.ones(m * m)])
    im_map = sp.csr_matrix((im_data, (im_rows, np.concatenate([src, src]))), shape=(size * size, m * m))
    return re_map, im_map


@dataclass
class PsdBlock:
    name: str
    size: int
    matrix: sp.csr_matrix
    offset: np.ndarray

    def value(self, x: np.ndarray) -> np.ndarray:
        return (self.matrix @ x + self.offset).reshape(self.size, self.size)


@dataclass
class RealConicForm:
    """max/min c.x + c0 s.t. A_eq x + b_eq = 0, A_nn x + b_nn >= 0, each block(x) PSD."""
    n_params: int
    sense: Sense
    objective: np.ndarray
    objective_offset: float
    eq_matrix: sp.csr_matrix
    eq_offset: np.ndarray
    nonneg_matrix: sp.csr_matrix
    nonneg_offset: np.ndarray
    psd_blocks: List[PsdBlock]

    def describe(self) -> str:
        sizes = ", ".join(str(b.size) for b in self.psd_blocks) or "none"
        return (f"params {self.n_params}\nsense {self.sense.value}\neq rows {self.eq_matrix.shape[0]}\n"
                f"nonneg rows {self.nonneg_matrix.shape[0]}\npsd blocks [{sizes}]")


@dataclass
class EmbeddedProgram:
    program: ConicProgram
    form: RealConicForm
    slices: Dict[int, slice]

    def recover(self, x: np.ndarray) -> Dict[HermitianVar, LabeledMatrix]:
        assignments = {}
        for var in self.program.variables:
            n = var.size
            vec = _hermitian_parametrization(n) @ np.asarray(x[self.slices[var.id]], dtype=float)
            assignments[var] = LabeledMatrix(var.system, vec.reshape(n, n), hermitian_hint=True)
        return assignments

    def params_of(self, assignments: Mapping[HermitianVar, LabeledMatrix]) -> np.ndarray:
        x = np.zeros(self.form.n_params)
        for var in self.program.variables:
            x[self.slices[var.id]] = _hermitian_params(np.asarray(assignments[var].entries))
        return x


def _linear_map(expr: LinearExpr, slices: Dict[int, slice], n_params: int) -> sp.csr_matrix:
    """Complex matrix taking the real parameter vector to vec(expr - constant)."""
    n_out = expr.system.total_dim ** 2
    rows, cols, data = [], [], []
    for term in expr.terms:
        system = term.var.system
        chain = sp.identity(system.total_dim ** 2, dtype=complex, format="csr")
        for op in term.ops:
            chain = op.sparse_map(system) @ chain
            system = op.output_system(system)
        block = ((term.coeff * chain) @ _hermitian_parametrization(term.var.size)).tocoo()
        rows.append(block.row)
        cols.append(block.col + slices[term.var.id].start)
        data.append(block.data)
    if not rows:
        return sp.csr_matrix((n_out, n_params), dtype=complex)
    # duplicate (row, col) pairs from repeated variables are summed
    return sp.csr_matrix((np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
                         shape=(n_out, n_params), dtype=complex)


def _constant_vector(expr: LinearExpr) -> np.ndarray:
    n = expr.system.total_dim
    if expr.constant is None:
        return np.zeros(n * n, dtype=complex)
    return np.asarray(expr.constant.entries).reshape(-1)


def real_embed(program: ConicProgram) -> EmbeddedProgram:
    if program.objective is None:
        raise ValidationException(f"Program {program.name} has no objective")
    slices: Dict[int, slice] = {}
    offset = 0
    for var in program.variables:
        slices[var.id] = slice(offset, offset + var.size ** 2)
        offset += var.size ** 2
    n_params = offset

    eq_rows, eq_offsets, nn_rows, nn_offsets, blocks = [], [], [], [], []
    for c in program.constraints:
        m = c.expr.system.total_dim
        a = _linear_map(c.expr, slices, n_params)
        b = _constant_vector(c.expr)
        if c.kind == ConstraintKind.ZERO:
            iu, ju = np.triu_indices(m)
            su, sv = np.triu_indices(m, 1)
            eq_rows += [a.real[iu * m + ju], a.imag[su * m + sv]]
            eq_offsets += [b.real[iu * m + ju], b.imag[su * m + sv]]
        elif m == 1:
            # a 1x1 Hermitian block is real; its embedding y*I2 is PSD iff y >= 0
            nn_rows.append(a.real)
            nn_offsets.append(b.real)
        else:
            re_map, im_map = _embedding_maps(m)
            matrix = (re_map @ a.real + im_map @ a.imag).tocsr()
            blocks.append(PsdBlock(c.name, 2 * m, matrix, re_map @ b.real + im_map @ b.imag))

    objective = _linear_map(program.objective, slices, n_params)
    form = RealConicForm(
        n_params=n_params,
        sense=program.sense,
        objective=np.asarray(objective.real.todense()).reshape(-1),
        objective_offset=float(_constant_vector(program.objective).real[0]),
        eq_matrix=sp.vstack(eq_rows, format="csr") if eq_rows else sp.csr_matrix((0, n_params)),
        eq_offset=np.concatenate(eq_offsets) if eq_offsets else np.zeros(0),
        nonneg_matrix=sp.vstack(nn_rows, format="csr") if nn_rows else sp.csr_matrix((0, n_params)),
        nonneg_offset=np.concatenate(nn_offsets) if nn_offsets else np.zeros(0),
        psd_blocks=blocks,
    )
    return EmbeddedProgram(program, form, slices)


# Backends

class SolverBackend(Protocol):
    name: str

    def solve(self, form: RealConicForm, options: SolverOptionsModel) -> BackendResultModel:
        ...


def get_backend(name: str) -> SolverBackend:
    if name == "cvxpy":
        from src.main.utils.cvxpy_backend import CvxpyBackend
        return CvxpyBackend()
    raise ValidationException(f"Unknown solver backend {name!r}")


# Solving

@dataclass
class Solution:
    status: SolveStatus
    value: float
    assignments: Dict[str, LabeledMatrix]
    max_primal_residual: float
    constraint_residuals: Dict[str, float] = field(default_factory=dict)
    complementarity: Dict[str, float] = field(default_factory=dict)
    backend_status: str = ""
    solve_seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == SolveStatus.OPTIMAL

    def __getitem__(self, name: str) -> LabeledMatrix:
        return self.assignments[name]


def constraint_residual(constraint: Constraint, assignments: Mapping[HermitianVar, LabeledMatrix]) -> float:
    value = np.asarray(constraint.expr.evaluate(assignments).entries)
    if constraint.kind == ConstraintKind.ZERO:
        return float(np.max(np.abs(value), initial=0.0))
    smallest = np.linalg.eigvalsh((value + value.conj().T) / 2)[0]
    return float(max(0.0, -smallest))


def psd_complementarity(form: RealConicForm, result: BackendResultModel) -> Dict[str, float]:
    """|tr(Z Y)| per PSD block at the returned primal and dual; zero at a joint optimum."""
    if result.x is None:
        return {}
    return {block.name: abs(float(np.trace(block.value(result.x) @ np.asarray(dual, dtype=float)))) / 2
            for block, dual in zip(form.psd_blocks, result.duals) if dual is not None}


def constraint_residuals(program: ConicProgram,
                         assignments: Mapping[HermitianVar, LabeledMatrix]) -> Dict[str, float]:
    return {c.name: constraint_residual(c, assignments) for c in program.constraints}


def solve(program: ConicProgram, options: Optional[SolverOptionsModel] = None) -> Solution:
    options = options or SolverOptionsModel.from_config()
    start = time.perf_counter()
    embedded = real_embed(program)
    result = get_backend(options.backend).solve(embedded.form, options)
    context = create_log_context(action="solve", location=f"{__name__}.solve")

    if result.x is None:
        logger.warning(f"{program.name}: backend returned {result.raw_status} {result.message}", extra=context)
        return Solution(status=result.status if result.status != SolveStatus.OPTIMAL
                        else SolveStatus.NUMERICAL_TROUBLE,
                        value=float("nan"), assignments={}, max_primal_residual=float("inf"),
                        backend_status=result.raw_status, solve_seconds=time.perf_counter() - start)

    by_var = embedded.recover(result.x)
    residuals = constraint_residuals(program, by_var)
    worst = max(residuals.values(), default=0.0)
    complementarity = psd_complementarity(embedded.form, result)
    value = float(program.objective.evaluate(by_var).entries[0, 0].real)

    status = result.status
    if status == SolveStatus.OPTIMAL and worst > options.residual_tol:
        logger.warning(f"{program.name}: residual {worst:.3e} above {options.residual_tol:.1e} "
                       f"(backend status {result.raw_status})", extra=context)
        status = SolveStatus.NUMERICAL_TROUBLE
    elif status == SolveStatus.OPTIMAL and result.inaccurate:
        logger.warning(f"{program.name}: {INACCURATE_SOLUTION_ACCEPTED} ({worst:.3e})", extra=context)

    elapsed = time.perf_counter() - start
    logger.info(f"{PROGRAM_SOLVED}: {program.name} status={status.value} value={value:.9g} "
                f"params={embedded.form.n_params} blocks={len(embedded.form.psd_blocks)} "
                f"complementarity={max(complementarity.values(), default=0.0):.1e} "
                f"seconds={elapsed:.2f}", extra=context)
    return Solution(
        status=status,
        value=value,
        assignments={var.name: m for var, m in by_var.items()},
        max_primal_residual=worst,
        constraint_residuals=residuals,
        complementarity=complementarity,
        backend_status=result.raw_status,
        solve_seconds=elapsed,
    )

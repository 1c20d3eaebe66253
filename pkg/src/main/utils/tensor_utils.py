"""
Dense complex matrices over named, ordered tensor-product registers.

Operators on channel spaces are stored in the canonical order (A0, B0, A1, B1);
any other order is reached with permute_registers. Partial transposes are taken
in the computational basis of each register.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import unitary_group

from src.main.constants import DefaultToleranceConfig
from src.main.constants.error_messages import (DUPLICATE_LABEL_ERROR, UNKNOWN_LABEL_ERROR,
                                               NOT_A_PERMUTATION_ERROR, DIMENSION_MISMATCH_ERROR,
                                               NON_HERMITIAN_ERROR)
from src.main.exceptions import ValidationException
from src.main.models.v1.labeled_matrix_model import LabeledMatrixModel, RegisterModel

RandomState = Union[None, int, np.random.Generator]


@dataclass(frozen=True)
class Register:
    label: str
    dim: int

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: register {self.label} has dim {self.dim}")


@dataclass(frozen=True)
class RegisterSystem:
    registers: Tuple[Register, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "registers", tuple(self.registers))
        labels = [r.label for r in self.registers]
        if len(set(labels)) != len(labels):
            raise ValidationException(f"{DUPLICATE_LABEL_ERROR}: {labels}")

    @classmethod
    def of(cls, *pairs: Tuple[str, int]) -> "RegisterSystem":
        return cls(tuple(Register(label, int(dim)) for label, dim in pairs))

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(r.label for r in self.registers)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(r.dim for r in self.registers)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.registers else 1

    def position(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationException(f"{UNKNOWN_LABEL_ERROR}: {label!r} not in {list(self.labels)}") from None

    def positions(self, labels: Iterable[str]) -> List[int]:
        return sorted({self.position(label) for label in labels})

    def dim_of(self, labels: Iterable[str]) -> int:
        return int(np.prod([self.registers[p].dim for p in self.positions(labels)], dtype=np.int64))

    def restrict(self, labels: Iterable[str]) -> "RegisterSystem":
        """Subsystem on the given labels, kept in this system's order."""
        return RegisterSystem(tuple(self.registers[p] for p in self.positions(labels)))

    def without(self, labels: Iterable[str]) -> "RegisterSystem":
        dropped = set(self.positions(labels))
        return RegisterSystem(tuple(r for i, r in enumerate(self.registers) if i not in dropped))

    def concat(self, other: "RegisterSystem") -> "RegisterSystem":
        return RegisterSystem(self.registers + other.registers)

    def __str__(self) -> str:
        return "(" + ", ".join(f"{r.label}:{r.dim}" for r in self.registers) + ")"


@dataclass(frozen=True, eq=False)
class LabeledMatrix:
    system: RegisterSystem
    entries: np.ndarray
    hermitian_hint: bool = False

    # numpy scalars defer to our reflected operators
    __array_ufunc__ = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        n = self.system.total_dim
        if entries.shape != (n, n):
            raise ValidationException(
                f"{DIMENSION_MISMATCH_ERROR}: entries {entries.shape} for system {self.system} of dim {n}")
        if self.hermitian_hint:
            entries = _symmetrize(entries, DefaultToleranceConfig.HERMITIAN_TOL)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.system.total_dim

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.system.labels

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.system.dims

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def dagger(self) -> "LabeledMatrix":
        return LabeledMatrix(self.system, self.entries.conj().T, self.hermitian_hint)

    def is_hermitian(self, tol: float = DefaultToleranceConfig.HERMITIAN_TOL) -> bool:
        return float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0)) <= tol

    def allclose(self, other: "LabeledMatrix", atol: float = 1e-10) -> bool:
        return self.system == other.system and np.allclose(self.entries, other.entries, atol=atol, rtol=0.0)

    def _same_system(self, other: "LabeledMatrix") -> None:
        if self.system != other.system:
            raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: {self.system} vs {other.system}")

    def __add__(self, other: "LabeledMatrix") -> "LabeledMatrix":
        if not isinstance(other, LabeledMatrix):
            return NotImplemented
        self._same_system(other)
        return LabeledMatrix(self.system, self.entries + other.entries,
                             self.hermitian_hint and other.hermitian_hint)

    def __sub__(self, other: "LabeledMatrix") -> "LabeledMatrix":
        if not isinstance(other, LabeledMatrix):
            return NotImplemented
        self._same_system(other)
        return LabeledMatrix(self.system, self.entries - other.entries,
                             self.hermitian_hint and other.hermitian_hint)

    def __neg__(self) -> "LabeledMatrix":
        return LabeledMatrix(self.system, -self.entries, self.hermitian_hint)

    def __mul__(self, scalar: complex) -> "LabeledMatrix":
        if not isinstance(scalar, (int, float, complex, np.number)):
            return NotImplemented
        real = np.isreal(scalar)
        return LabeledMatrix(self.system, scalar * self.entries, self.hermitian_hint and bool(real))

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "LabeledMatrix":
        return self * (1.0 / scalar)

    def __matmul__(self, other: "LabeledMatrix") -> "LabeledMatrix":
        if not isinstance(other, LabeledMatrix):
            return NotImplemented
        self._same_system(other)
        return LabeledMatrix(self.system, self.entries @ other.entries)

    def __repr__(self) -> str:
        return f"LabeledMatrix(system={self.system}, hermitian_hint={self.hermitian_hint})"


def _symmetrize(entries: np.ndarray, tol: float) -> np.ndarray:
    skew = float(np.max(np.abs(entries - entries.conj().T), initial=0.0))
    if skew > tol:
        raise ValidationException(f"{NON_HERMITIAN_ERROR}: max |M - M^dagger| = {skew:.3e}")
    return (entries + entries.conj().T) / 2


# Array-level primitives. They accept any dtype so index arrays can be pushed
# through them when assembling sparse linear maps.

def partial_transpose_array(arr: np.ndarray, dims: Sequence[int], positions: Sequence[int]) -> np.ndarray:
    n = len(dims)
    axes = list(range(2 * n))
    for p in positions:
        axes[p], axes[n + p] = axes[n + p], axes[p]
    return arr.reshape(tuple(dims) * 2).transpose(axes).reshape(arr.shape)


def permute_array(arr: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    n = len(dims)
    axes = list(perm) + [n + p for p in perm]
    return arr.reshape(tuple(dims) * 2).transpose(axes).reshape(arr.shape)


def split_for_trace(arr: np.ndarray, dims: Sequence[int], positions: Sequence[int]) -> np.ndarray:
    """Reshape to (kept, kept, traced, traced) so the trace runs over the last two axes."""
    n = len(dims)
    kept = [i for i in range(n) if i not in positions]
    traced = list(positions)
    axes = kept + [n + i for i in kept] + traced + [n + i for i in traced]
    d_kept = int(np.prod([dims[i] for i in kept], dtype=np.int64))
    d_traced = int(np.prod([dims[i] for i in traced], dtype=np.int64))
    return arr.reshape(tuple(dims) * 2).transpose(axes).reshape(d_kept, d_kept, d_traced, d_traced)


# Tensor-core operations

def kron(a: LabeledMatrix, b: LabeledMatrix) -> LabeledMatrix:
    system = a.system.concat(b.system)
    return LabeledMatrix(system, np.kron(a.entries, b.entries), a.hermitian_hint and b.hermitian_hint)


def kron_all(matrices: Sequence[LabeledMatrix]) -> LabeledMatrix:
    result = matrices[0]
    for m in matrices[1:]:
        result = kron(result, m)
    return result


def partial_trace(m: LabeledMatrix, traced_labels: Iterable[str]) -> LabeledMatrix:
    positions = m.system.positions(traced_labels)
    split = split_for_trace(m.entries, m.dims, positions)
    reduced = np.trace(split, axis1=2, axis2=3)
    return LabeledMatrix(m.system.without(m.system.labels[p] for p in positions), reduced, m.hermitian_hint)


def partial_transpose(m: LabeledMatrix, transposed_labels: Iterable[str]) -> LabeledMatrix:
    positions = m.system.positions(transposed_labels)
    return LabeledMatrix(m.system, partial_transpose_array(m.entries, m.dims, positions), m.hermitian_hint)


def permute_registers(m: LabeledMatrix, new_order: Sequence[str]) -> LabeledMatrix:
    new_order = list(new_order)
    if sorted(new_order) != sorted(m.labels) or len(new_order) != len(m.labels):
        raise ValidationException(f"{NOT_A_PERMUTATION_ERROR}: {new_order} vs {list(m.labels)}")
    perm = [m.system.position(label) for label in new_order]
    system = RegisterSystem(tuple(m.system.registers[p] for p in perm))
    return LabeledMatrix(system, permute_array(m.entries, m.dims, perm), m.hermitian_hint)


def hermitian_eigenvalues(m: LabeledMatrix, tol: float = DefaultToleranceConfig.HERMITIAN_TOL) -> np.ndarray:
    return np.linalg.eigvalsh(_symmetrize(np.asarray(m.entries), tol))


def is_psd(m: LabeledMatrix, tol: float = DefaultToleranceConfig.CHOI_TOL) -> bool:
    return bool(hermitian_eigenvalues(m)[0] >= -tol)


def max_entangled(k: int, labels: Tuple[str, str] = ("A", "B")) -> LabeledMatrix:
    """Phi_k = |Phi><Phi| with |Phi> = sum_i |ii> / sqrt(k)."""
    if k < 1:
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: Schmidt rank must be >= 1, got {k}")
    vec = np.eye(k).reshape(k * k) / np.sqrt(k)
    return LabeledMatrix(RegisterSystem.of((labels[0], k), (labels[1], k)), np.outer(vec, vec.conj()),
                         hermitian_hint=True)


def swap_operator(d: int, labels: Tuple[str, str] = ("A", "B")) -> LabeledMatrix:
    if d < 1:
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: dimension must be >= 1, got {d}")
    flip = np.eye(d * d).reshape(d, d, d, d).transpose(1, 0, 2, 3).reshape(d * d, d * d)
    return LabeledMatrix(RegisterSystem.of((labels[0], d), (labels[1], d)), flip, hermitian_hint=True)


def identity(system: RegisterSystem) -> LabeledMatrix:
    return LabeledMatrix(system, np.eye(system.total_dim), hermitian_hint=True)


def zeros(system: RegisterSystem) -> LabeledMatrix:
    n = system.total_dim
    return LabeledMatrix(system, np.zeros((n, n)), hermitian_hint=True)


def ket(system: RegisterSystem, index: int) -> np.ndarray:
    vec = np.zeros(system.total_dim, dtype=complex)
    vec[index] = 1.0
    return vec


def basis_projector(system: RegisterSystem, index: int) -> LabeledMatrix:
    vec = ket(system, index)
    return LabeledMatrix(system, np.outer(vec, vec), hermitian_hint=True)


def pure_state(system: RegisterSystem, vector: np.ndarray) -> LabeledMatrix:
    vec = np.asarray(vector, dtype=complex).reshape(-1)
    return LabeledMatrix(system, np.outer(vec, vec.conj()), hermitian_hint=True)


def relabel(m: LabeledMatrix, mapping: Dict[str, str]) -> LabeledMatrix:
    system = RegisterSystem(tuple(Register(mapping.get(r.label, r.label), r.dim) for r in m.system.registers))
    return LabeledMatrix(system, m.entries, m.hermitian_hint)


def merge_registers(m: LabeledMatrix, groups: Sequence[Tuple[str, Sequence[str]]]) -> LabeledMatrix:
    """Fuse each group of registers into one register whose dim is the product.

    Groups must cover every label exactly once; registers are brought into
    group order first, then relabelled.
    """
    order = [label for _, members in groups for label in members]
    ordered = permute_registers(m, order)
    merged = RegisterSystem.of(*[(name, m.system.dim_of(members) if members else 1) for name, members in groups])
    return LabeledMatrix(merged, ordered.entries, m.hermitian_hint)


def conjugate_by(m: LabeledMatrix, unitary: np.ndarray) -> LabeledMatrix:
    unitary = np.asarray(unitary, dtype=complex)
    if unitary.shape != m.entries.shape:
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: unitary {unitary.shape} vs {m.entries.shape}")
    return LabeledMatrix(m.system, unitary @ m.entries @ unitary.conj().T, m.hermitian_hint)


def max_abs(m: LabeledMatrix) -> float:
    return float(np.max(np.abs(m.entries), initial=0.0))


# Serialization

def to_model(m: LabeledMatrix) -> LabeledMatrixModel:
    return LabeledMatrixModel(
        registers=[RegisterModel(label=r.label, dim=r.dim) for r in m.system.registers],
        re=m.entries.real.tolist(),
        im=m.entries.imag.tolist(),
    )


def from_model(model: LabeledMatrixModel, hermitian_hint: bool = False) -> LabeledMatrix:
    system = RegisterSystem.of(*[(r.label, r.dim) for r in model.registers])
    n = system.total_dim
    re = np.asarray(model.re, dtype=float).reshape(n, n)
    im = np.asarray(model.im, dtype=float).reshape(n, n)
    return LabeledMatrix(system, re + 1j * im, hermitian_hint)


def to_json(m: LabeledMatrix) -> str:
    # json uses repr for floats, which round-trips float64 exactly
    return json.dumps(to_model(m).model_dump())


def from_json(text: str) -> LabeledMatrix:
    return from_model(LabeledMatrixModel.model_validate(json.loads(text)))


# Seeded random generators for property tests

def _rng(seed: RandomState) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_unitary(d: int, seed: RandomState = None) -> np.ndarray:
    rng = _rng(seed)
    if d == 1:
        return np.array([[np.exp(2j * np.pi * rng.random())]])
    return unitary_group.rvs(d, random_state=rng)


def random_density(system: RegisterSystem, seed: RandomState = None, rank: Optional[int] = None) -> LabeledMatrix:
    rng = _rng(seed)
    n = system.total_dim
    g = rng.normal(size=(n, rank or n)) + 1j * rng.normal(size=(n, rank or n))
    rho = g @ g.conj().T
    return LabeledMatrix(system, rho / np.trace(rho).real, hermitian_hint=True)


def random_pure(system: RegisterSystem, seed: RandomState = None) -> LabeledMatrix:
    rng = _rng(seed)
    n = system.total_dim
    vec = rng.normal(size=n) + 1j * rng.normal(size=n)
    return pure_state(system, vec / np.linalg.norm(vec))


def random_hermitian(system: RegisterSystem, seed: RandomState = None) -> LabeledMatrix:
    rng = _rng(seed)
    n = system.total_dim
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return LabeledMatrix(system, (g + g.conj().T) / 2, hermitian_hint=True)

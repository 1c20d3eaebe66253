"""
Choi operators for bipartite channels A0 B0 -> A1 B1.

Choi operators are unnormalized, J = sum_jk |j><k| (x) N(|j><k|), with trace
equal to the input dimension, and are stored in the canonical register order
(A0, B0, A1, B1). Point-to-point channels A -> B use dim-1 registers B0 and A1;
broadcast channels A0 -> A1 B1 use a dim-1 B0.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.main.config.config_loader import get_config_value
from src.main.config.logger import get_logger, create_log_context
from src.main.constants import (CanonicalRegisters, ChannelFamily, CovarianceMode, DefaultToleranceConfig, Party)
from src.main.constants.error_messages import (NOT_TRACE_PRESERVING_ERROR, INVALID_CHOI_ERROR,
                                               NOISE_OUT_OF_RANGE_ERROR, WERNER_HOLEVO_DIMENSION_ERROR,
                                               NOT_STOCHASTIC_ERROR, INVALID_ENSEMBLE_ERROR,
                                               INCOMPATIBLE_CHANNELS_ERROR, DIMENSION_MISMATCH_ERROR,
                                               SPEC_PARSE_ERROR)
from src.main.exceptions import ValidationException
from src.main.models.v1.channel_model import ChannelSpecModel
from src.main.utils.tensor_utils import (LabeledMatrix, RegisterSystem, hermitian_eigenvalues, identity, kron,
                                         kron_all, max_entangled, merge_registers, partial_trace,
                                         permute_registers, relabel, swap_operator,
                                         from_model, max_abs)

logger = get_logger(__name__)

R = CanonicalRegisters

DEFAULT_OWNERSHIP: Dict[str, Party] = {R.A0: Party.ALICE, R.A1: Party.ALICE, R.B0: Party.BOB, R.B1: Party.BOB}


def _tolerance(key: str, default: float) -> float:
    return float(get_config_value('tolerances', key, default=default))


def canonical_system(d_a0: int, d_b0: int, d_a1: int, d_b1: int) -> RegisterSystem:
    return RegisterSystem.of((R.A0, d_a0), (R.B0, d_b0), (R.A1, d_a1), (R.B1, d_b1))


@dataclass(frozen=True)
class ChoiInvariantReport:
    min_eigenvalue: float
    marginal_deviation: float
    trace_deviation: float

    def holds(self, tol: float) -> bool:
        return self.min_eigenvalue >= -tol and self.marginal_deviation <= tol and self.trace_deviation <= tol


@dataclass(frozen=True)
class ChoiOperator:
    matrix: LabeledMatrix
    input_labels: Tuple[str, ...] = R.INPUTS
    output_labels: Tuple[str, ...] = R.OUTPUTS
    ownership: Dict[str, Party] = field(default_factory=lambda: dict(DEFAULT_OWNERSHIP))

    def __post_init__(self):
        if self.matrix.labels != R.ORDER:
            raise ValidationException(f"{INVALID_CHOI_ERROR}: registers {self.matrix.labels}, expected {R.ORDER}")
        report = validate_choi(self.matrix)
        tol = _tolerance('choi', DefaultToleranceConfig.CHOI_TOL)
        if not report.holds(tol):
            raise ValidationException(f"{INVALID_CHOI_ERROR}: {report}")

    @property
    def dims(self) -> Dict[str, int]:
        return dict(zip(self.matrix.labels, self.matrix.dims))

    @property
    def d_in(self) -> int:
        return self.matrix.system.dim_of(self.input_labels)

    @property
    def d_out(self) -> int:
        return self.matrix.system.dim_of(self.output_labels)

    @property
    def input_system(self) -> RegisterSystem:
        return self.matrix.system.restrict(self.input_labels)

    @property
    def output_system(self) -> RegisterSystem:
        return self.matrix.system.restrict(self.output_labels)

    @property
    def bob_labels(self) -> Tuple[str, ...]:
        return tuple(label for label in self.matrix.labels if self.ownership[label] == Party.BOB)

    def compatible_with(self, other: "ChoiOperator") -> bool:
        return self.matrix.system == other.matrix.system and self.ownership == other.ownership


def validate_choi(m: LabeledMatrix) -> ChoiInvariantReport:
    """Residuals of the Choi invariants: PSD, tr_out J = 1_in, tr J = d_in."""
    system = m.system
    inputs = system.restrict(R.INPUTS)
    eigenvalues = hermitian_eigenvalues(m, tol=_tolerance('hermitian', DefaultToleranceConfig.HERMITIAN_TOL))
    marginal = partial_trace(m, R.OUTPUTS)
    return ChoiInvariantReport(
        min_eigenvalue=float(eigenvalues[0]),
        marginal_deviation=max_abs(marginal - identity(inputs)),
        trace_deviation=abs(m.trace() - inputs.total_dim),
    )


def _choi(entries: np.ndarray, d_a0: int, d_b0: int, d_a1: int, d_b1: int) -> ChoiOperator:
    return ChoiOperator(LabeledMatrix(canonical_system(d_a0, d_b0, d_a1, d_b1), entries, hermitian_hint=True))


def _check_noise(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValidationException(f"{NOISE_OUT_OF_RANGE_ERROR}: {name}={value}")


def choi_from_kraus(kraus: Sequence[np.ndarray], input_dims: Tuple[int, int],
                    output_dims: Tuple[int, int]) -> ChoiOperator:
    """J = sum_K (1 (x) K) |Omega><Omega| (1 (x) K)^dagger with |Omega> = sum_j |jj>."""
    d_in = input_dims[0] * input_dims[1]
    d_out = output_dims[0] * output_dims[1]
    ops = [np.asarray(k, dtype=complex) for k in kraus]
    for k in ops:
        if k.shape != (d_out, d_in):
            raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: Kraus operator {k.shape}, "
                                      f"expected {(d_out, d_in)}")
    completeness = sum(k.conj().T @ k for k in ops)
    deviation = float(np.max(np.abs(completeness - np.eye(d_in))))
    if deviation > _tolerance('kraus', DefaultToleranceConfig.KRAUS_TOL):
        raise ValidationException(f"{NOT_TRACE_PRESERVING_ERROR}: max deviation {deviation:.3e}")
    omega = np.eye(d_in).reshape(d_in * d_in)
    j = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for k in ops:
        vec = np.kron(np.eye(d_in), k) @ omega
        j += np.outer(vec, vec.conj())
    return _choi(j, input_dims[0], input_dims[1], output_dims[0], output_dims[1])


def identity_channel(d: int) -> ChoiOperator:
    return choi_from_kraus([np.eye(d)], (d, 1), (1, d))


def depolarizing_bipartite(d_a: int, d_b: int, p: float) -> ChoiOperator:
    _check_noise("p", p)
    phi = kron(max_entangled(d_a, (R.A0, R.A1)), max_entangled(d_b, (R.B0, R.B1)))
    phi = permute_registers(phi, R.ORDER)
    d = d_a * d_b
    j = d * (1 - p) * phi.entries + p * np.eye(d * d) / d
    return _choi(j, d_a, d_b, d_a, d_b)


def depolarizing_pp(d: int, p: float) -> ChoiOperator:
    _check_noise("p", p)
    phi = max_entangled(d, (R.A0, R.B1))
    j = d * (1 - p) * phi.entries + p * np.eye(d * d) / d
    return _choi(j, d, 1, 1, d)


def depolarized_swap(d: int, p: float) -> ChoiOperator:
    """(1-p) F X F + p tr(X) 1/d^2: Alice's input reaches Bob and vice versa."""
    _check_noise("p", p)
    phi = kron(max_entangled(d, (R.A0, R.B1)), max_entangled(d, (R.B0, R.A1)))
    phi = permute_registers(phi, R.ORDER)
    j = (1 - p) * d * d * phi.entries + p * np.eye(d ** 4) / (d * d)
    return _choi(j, d, d, d, d)


def werner_holevo(d: int, index: int) -> ChoiOperator:
    """J0 = (1 + F)/(d + 1), J1 = (1 - F)/(d - 1) on (A0, B1)."""
    if index not in (0, 1):
        raise ValidationException(f"{SPEC_PARSE_ERROR}: Werner-Holevo index must be 0 or 1, got {index}")
    if index == 1 and d < 2:
        raise ValidationException(WERNER_HOLEVO_DIMENSION_ERROR)
    flip = swap_operator(d, (R.A0, R.B1)).entries
    sign = 1 if index == 0 else -1
    j = (np.eye(d * d) + sign * flip) / (d + sign)
    return _choi(j, d, 1, 1, d)


def amplitude_damping(gamma: float) -> ChoiOperator:
    _check_noise("gamma", gamma)
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1 - gamma)]])
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]])
    return choi_from_kraus([k0, k1], (2, 1), (1, 2))


def replacer(state: np.ndarray, input_dims: Tuple[int, int] = (1, 1),
             output_dims: Optional[Tuple[int, int]] = None) -> ChoiOperator:
    """N(X) = tr(X) state; the output defaults to Bob's register B1."""
    state = np.asarray(state, dtype=complex)
    output_dims = output_dims or (1, state.shape[0])
    if state.shape != (output_dims[0] * output_dims[1],) * 2:
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: state {state.shape} for outputs {output_dims}")
    j = np.kron(np.eye(input_dims[0] * input_dims[1]), state)
    return _choi(j, input_dims[0], input_dims[1], output_dims[0], output_dims[1])


def classical_channel(stochastic: np.ndarray, input_dims: Optional[Tuple[int, int]] = None,
                      output_dims: Optional[Tuple[int, int]] = None) -> ChoiOperator:
    """Diagonal Choi from a column-stochastic matrix S[y, x] = P(y | x) over product alphabets."""
    s = np.asarray(stochastic, dtype=float)
    n_out, n_in = s.shape
    tol = _tolerance('probability', DefaultToleranceConfig.PROBABILITY_TOL)
    if np.any(s < -tol) or np.max(np.abs(s.sum(axis=0) - 1.0)) > max(tol, 1e-9):
        raise ValidationException(NOT_STOCHASTIC_ERROR)
    input_dims = input_dims or (n_in, 1)
    output_dims = output_dims or (1, n_out)
    if input_dims[0] * input_dims[1] != n_in or output_dims[0] * output_dims[1] != n_out:
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: stochastic {s.shape} vs {input_dims}->{output_dims}")
    # row index of the Choi is x * n_out + y
    j = np.diag(s.T.reshape(-1)).astype(complex)
    return _choi(j, input_dims[0], input_dims[1], output_dims[0], output_dims[1])


def explicit_choi(matrix: LabeledMatrix, ownership: Optional[Dict[str, Party]] = None) -> ChoiOperator:
    matrix = permute_registers(matrix, R.ORDER) if set(matrix.labels) == set(R.ORDER) else matrix
    return ChoiOperator(LabeledMatrix(matrix.system, matrix.entries, hermitian_hint=True),
                        ownership=dict(ownership or DEFAULT_OWNERSHIP))


def link_product(j1: LabeledMatrix, j2: LabeledMatrix, shared_labels: Sequence[str]) -> LabeledMatrix:
    """tr_S[(J1^{T_S} (x) 1)(1 (x) J2)], on J1's remaining registers followed by J2's."""
    shared = list(shared_labels)
    for label in shared:
        d1 = j1.system.registers[j1.system.position(label)].dim
        d2 = j2.system.registers[j2.system.position(label)].dim
        if d1 != d2:
            raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: shared register {label} has dims {d1} and {d2}")
    rest1 = [label for label in j1.labels if label not in shared]
    rest2 = [label for label in j2.labels if label not in shared]
    d_x = j1.system.dim_of(rest1)
    d_y = j2.system.dim_of(rest2)
    d_s = j1.system.dim_of(shared)
    a = permute_registers(j1, rest1 + shared).entries.reshape(d_x, d_s, d_x, d_s)
    b = permute_registers(j2, shared + rest2).entries.reshape(d_s, d_y, d_s, d_y)
    # result[x y, x' y'] = sum_{s, s'} J1[x s', x' s] J2[s' y, s y']
    out = np.einsum('abcd,bedf->aecf', a, b).reshape(d_x * d_y, d_x * d_y)
    system = j1.system.restrict(rest1).concat(j2.system.restrict(rest2))
    return LabeledMatrix(system, out)


def apply_channel(choi: ChoiOperator, state: LabeledMatrix) -> LabeledMatrix:
    """N(rho) as J ★ rho over the input registers; rho lives on (A0, B0)."""
    return link_product(state, choi.matrix, list(choi.input_labels))


def parallel_compose(chois: Sequence[ChoiOperator]) -> ChoiOperator:
    """Tensor product of channels with Alice's and Bob's registers merged per role."""
    if not chois:
        raise ValidationException(f"{INCOMPATIBLE_CHANNELS_ERROR}: nothing to compose")
    ownership = chois[0].ownership
    if any(c.ownership != ownership for c in chois):
        raise ValidationException(INCOMPATIBLE_CHANNELS_ERROR)
    tagged = [relabel(c.matrix, {label: f"{label}_{i}" for label in R.ORDER}) for i, c in enumerate(chois)]
    product = kron_all(tagged)
    groups = [(label, [f"{label}_{i}" for i in range(len(chois))]) for label in R.ORDER]
    merged = merge_registers(product, groups)
    return ChoiOperator(LabeledMatrix(merged.system, merged.entries, hermitian_hint=True),
                        ownership=dict(ownership))


def covariance_unitary(u: np.ndarray, v: np.ndarray, mode: CovarianceMode) -> np.ndarray:
    """Gamma = conj(U) (x) conj(V) (x) U (x) V, or with U and V swapped on the outputs."""
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    outputs = (u, v) if mode == CovarianceMode.COVARIANT else (v, u)
    return _kron_arrays([u.conj(), v.conj(), outputs[0], outputs[1]])


def _kron_arrays(arrays: Sequence[np.ndarray]) -> np.ndarray:
    result = np.eye(1)
    for a in arrays:
        result = np.kron(result, a)
    return result


def verify_covariance(choi: ChoiOperator, pairs: Sequence[Tuple[np.ndarray, np.ndarray]],
                      mode: CovarianceMode = CovarianceMode.COVARIANT) -> float:
    dims = choi.dims
    if mode == CovarianceMode.COVARIANT:
        ok = dims[R.A0] == dims[R.A1] and dims[R.B0] == dims[R.B1]
    else:
        ok = dims[R.A0] == dims[R.B1] and dims[R.B0] == dims[R.A1]
    if not ok:
        raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: {dims} not compatible with {mode.value} check")
    j = np.asarray(choi.matrix.entries)
    deviation = 0.0
    for u, v in pairs:
        if np.shape(u) != (dims[R.A0],) * 2 or np.shape(v) != (dims[R.B0],) * 2:
            raise ValidationException(f"{DIMENSION_MISMATCH_ERROR}: unitaries {np.shape(u)}, {np.shape(v)}")
        gamma = covariance_unitary(u, v, mode)
        deviation = max(deviation, float(np.max(np.abs(gamma @ j @ gamma.conj().T - j))))
    return deviation


@dataclass(frozen=True)
class ChannelEnsemble:
    items: Tuple[Tuple[float, ChoiOperator], ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        probs = np.array([p for p, _ in self.items], dtype=float)
        tol = _tolerance('probability', DefaultToleranceConfig.PROBABILITY_TOL)
        if not self.items or np.any(probs < 0) or abs(probs.sum() - 1.0) > tol:
            raise ValidationException(f"{INVALID_ENSEMBLE_ERROR}: {probs.tolist()}")
        first = self.items[0][1]
        if any(not first.compatible_with(c) for _, c in self.items[1:]):
            raise ValidationException(INCOMPATIBLE_CHANNELS_ERROR)

    @classmethod
    def binary(cls, first: ChoiOperator, second: ChoiOperator, lam: float) -> "ChannelEnsemble":
        return cls(((lam, first), (1.0 - lam, second)))

    @property
    def probabilities(self) -> List[float]:
        return [p for p, _ in self.items]

    @property
    def chois(self) -> List[ChoiOperator]:
        return [c for _, c in self.items]

    def __len__(self) -> int:
        return len(self.items)


# Construction from channel spec models

def _param(spec: ChannelSpecModel, name: str, cast=float):
    if name not in spec.params:
        raise ValidationException(f"{SPEC_PARSE_ERROR}: {spec.family.value} requires parameter {name!r}")
    try:
        return cast(spec.params[name])
    except (TypeError, ValueError) as e:
        raise ValidationException(f"{SPEC_PARSE_ERROR}: {name}={spec.params[name]!r} ({e})") from e


def _replacer_from_spec(spec: ChannelSpecModel) -> ChoiOperator:
    in_dims = (int(spec.params.get("in_dim", 1)), int(spec.params.get("in_dim_b", 1)))
    if "state_re" in spec.params:
        re = np.asarray(spec.params["state_re"], dtype=float)
        im = np.asarray(spec.params.get("state_im", np.zeros_like(re)), dtype=float)
        return replacer(re + 1j * im, input_dims=in_dims)
    dim = _param(spec, "dim", int)
    index = int(spec.params.get("index", 0))
    if not 0 <= index < dim:
        raise ValidationException(f"{SPEC_PARSE_ERROR}: index {index} outside dim {dim}")
    state = np.zeros((dim, dim))
    state[index, index] = 1.0
    return replacer(state, input_dims=in_dims)


def build_channel(spec: ChannelSpecModel) -> ChoiOperator:
    family = spec.family
    logger.debug(f"Building {family.value} channel",
                 extra=create_log_context(action="build_channel", location=f"{__name__}.build_channel"))
    if family == ChannelFamily.DEPOL_BIPARTITE:
        return depolarizing_bipartite(_param(spec, "d_A", int), _param(spec, "d_B", int), _param(spec, "p"))
    if family == ChannelFamily.DEPOL_PP:
        return depolarizing_pp(_param(spec, "d", int), _param(spec, "p"))
    if family == ChannelFamily.DEPOL_SWAP:
        return depolarized_swap(_param(spec, "d", int), _param(spec, "p"))
    if family == ChannelFamily.WERNER_HOLEVO_0:
        return werner_holevo(_param(spec, "d", int), 0)
    if family == ChannelFamily.WERNER_HOLEVO_1:
        return werner_holevo(_param(spec, "d", int), 1)
    if family == ChannelFamily.AMPLITUDE_DAMPING:
        return amplitude_damping(_param(spec, "gamma"))
    if family == ChannelFamily.REPLACER:
        return _replacer_from_spec(spec)
    if family == ChannelFamily.CLASSICAL:
        matrix = np.asarray(_param(spec, "matrix", list), dtype=float)
        in_dims = tuple(spec.params["in_dims"]) if "in_dims" in spec.params else None
        out_dims = tuple(spec.params["out_dims"]) if "out_dims" in spec.params else None
        return classical_channel(matrix, in_dims, out_dims)
    if family == ChannelFamily.EXPLICIT_CHOI:
        if spec.choi is None:
            raise ValidationException(f"{SPEC_PARSE_ERROR}: explicit_choi requires registers, re and im")
        ownership = {label: Party(owner) for label, owner in (spec.ownership or {}).items()} or None
        return explicit_choi(from_model(spec.choi), ownership)
    if family == ChannelFamily.PARALLEL:
        if not spec.of:
            raise ValidationException(f"{SPEC_PARSE_ERROR}: parallel requires a nonempty 'of' list")
        parts = [build_channel(s) for s in spec.of] * spec.copies
        return parallel_compose(parts)
    raise ValidationException(f"{SPEC_PARSE_ERROR}: unsupported family {family}")

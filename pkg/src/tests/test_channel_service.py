import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.main.constants import ChannelFamily, CovarianceMode, Party
from src.main.exceptions import ValidationException
from src.main.models.v1 import ChannelSpecModel
from src.main.services.v1.channel_service import (ChannelEnsemble, ChoiOperator, amplitude_damping, apply_channel,
                                                  build_channel, canonical_system, choi_from_kraus,
                                                  classical_channel, depolarized_swap, depolarizing_bipartite,
                                                  depolarizing_pp, identity_channel, link_product,
                                                  parallel_compose, replacer, validate_choi, verify_covariance,
                                                  werner_holevo)
from src.main.utils.tensor_utils import (LabeledMatrix, RegisterSystem, max_entangled, permute_registers,
                                         random_density, random_hermitian, random_unitary, swap_operator,
                                         to_model)


def _state(dim: int, rng) -> LabeledMatrix:
    return random_density(RegisterSystem.of(("A0", dim), ("B0", 1)), rng)


@pytest.mark.parametrize("choi", [
    identity_channel(3),
    depolarizing_bipartite(2, 2, 0.3),
    depolarizing_pp(3, 0.7),
    depolarized_swap(2, 0.4),
    werner_holevo(3, 0),
    werner_holevo(3, 1),
    amplitude_damping(0.25),
    replacer(np.diag([0.5, 0.5])),
    classical_channel(np.array([[0.9, 0.2], [0.1, 0.8]])),
], ids=["identity", "bipartite", "pp", "swap", "wh0", "wh1", "ad", "replacer", "classical"])
def test_constructors_satisfy_choi_invariants(choi):
    report = validate_choi(choi.matrix)
    assert report.holds(1e-10)
    assert choi.matrix.trace().real == pytest.approx(choi.d_in)
    assert choi.matrix.labels == ("A0", "B0", "A1", "B1")


def test_identity_choi_is_unnormalized_maximally_entangled():
    d = 3
    phi = max_entangled(d).entries * d
    assert_allclose(identity_channel(d).matrix.entries, phi, atol=1e-12)


def test_point_to_point_dims():
    choi = depolarizing_pp(2, 0.5)
    assert choi.dims == {"A0": 2, "B0": 1, "A1": 1, "B1": 2}
    assert choi.bob_labels == ("B0", "B1")
    assert choi.d_in == 2 and choi.d_out == 2


def test_identity_channel_leaves_states_alone(rng):
    rho = _state(3, rng)
    out = apply_channel(identity_channel(3), rho)
    assert out.labels == ("A1", "B1")
    assert_allclose(out.entries, rho.entries, atol=1e-12)


def test_fully_depolarizing_outputs_maximally_mixed(rng):
    out = apply_channel(depolarizing_pp(3, 1.0), _state(3, rng))
    assert_allclose(out.entries, np.eye(3) / 3, atol=1e-12)


def test_amplitude_damping_extremes(rng):
    rho = _state(2, rng)
    reset = apply_channel(amplitude_damping(1.0), rho)
    assert_allclose(reset.entries, np.diag([1.0, 0.0]), atol=1e-12)
    kept = apply_channel(amplitude_damping(0.0), rho)
    assert_allclose(kept.entries, rho.entries, atol=1e-12)


def test_apply_channel_matches_kraus_action(rng):
    u = random_unitary(2, rng)
    choi = choi_from_kraus([u], (2, 1), (1, 2))
    rho = _state(2, rng)
    assert_allclose(apply_channel(choi, rho).entries, u @ rho.entries @ u.conj().T, atol=1e-12)


def test_link_product_composes_channels(rng):
    u, v = random_unitary(2, rng), random_unitary(2, rng)
    first = choi_from_kraus([u], (2, 1), (1, 2)).matrix
    second = choi_from_kraus([v], (2, 1), (1, 2)).matrix
    # feed the first channel's output register into the second channel's input
    first_out = LabeledMatrix(RegisterSystem.of(("X", 2), ("Y", 1), ("Z", 1), ("S", 2)), first.entries)
    second_in = LabeledMatrix(RegisterSystem.of(("S", 2), ("Q", 1), ("R", 1), ("T", 2)), second.entries)
    composed = link_product(first_out, second_in, ["S"])
    expected = choi_from_kraus([v @ u], (2, 1), (1, 2)).matrix
    assert composed.labels == ("X", "Y", "Z", "Q", "R", "T")
    assert_allclose(composed.entries, expected.entries, atol=1e-12)


def _random_kraus(d_in: int, d_out: int, rng):
    count = max(int(rng.integers(1, 4)), -(-d_in // d_out))
    isometry = random_unitary(d_out * count, rng)[:, :d_in]
    return [isometry[i * d_out:(i + 1) * d_out] for i in range(count)]


def test_link_product_matches_kraus_action_on_random_pairs(rng):
    for _ in range(50):
        d_in, d_out = (int(d) for d in rng.integers(1, 4, size=2))
        kraus = _random_kraus(d_in, d_out, rng)
        choi = choi_from_kraus(kraus, (d_in, 1), (1, d_out))
        rho = _state(d_in, rng)
        expected = sum(k @ rho.entries @ k.conj().T for k in kraus)
        assert_allclose(apply_channel(choi, rho).entries, expected, atol=1e-10)


def _random_operator(rng, *registers):
    return random_hermitian(RegisterSystem.of(*registers), rng)


def test_link_product_is_commutative(rng):
    for _ in range(50):
        da, db, dc = (int(d) for d in rng.integers(1, 4, size=3))
        first = _random_operator(rng, ("X", da), ("S", db))
        second = _random_operator(rng, ("S", db), ("Y", dc))
        forward = link_product(first, second, ["S"])
        backward = permute_registers(link_product(second, first, ["S"]), ["X", "Y"])
        assert_allclose(forward.entries, backward.entries, atol=1e-10)


def test_link_product_is_associative(rng):
    for _ in range(50):
        da, db, dc, de = (int(d) for d in rng.integers(1, 4, size=4))
        first = _random_operator(rng, ("X", da), ("S", db))
        second = _random_operator(rng, ("S", db), ("T", dc))
        third = _random_operator(rng, ("T", dc), ("Y", de))
        left = link_product(link_product(first, second, ["S"]), third, ["T"])
        right = link_product(first, link_product(second, third, ["T"]), ["S"])
        assert left.labels == right.labels == ("X", "Y")
        assert_allclose(left.entries, right.entries, atol=1e-10)


def test_link_product_rejects_mismatched_shared_dims():
    a = LabeledMatrix(RegisterSystem.of(("S", 2)), np.eye(2))
    b = LabeledMatrix(RegisterSystem.of(("S", 3)), np.eye(3))
    with pytest.raises(ValidationException):
        link_product(a, b, ["S"])


def test_choi_from_kraus_rejects_non_trace_preserving():
    with pytest.raises(ValidationException, match="trace preserving"):
        choi_from_kraus([np.eye(2) * 0.5], (2, 1), (1, 2))


def test_choi_operator_rejects_wrong_marginal():
    bad = LabeledMatrix(canonical_system(2, 1, 1, 2), np.eye(4) * 0.3)
    with pytest.raises(ValidationException, match="Choi invariants"):
        ChoiOperator(bad)


def test_noise_out_of_range():
    with pytest.raises(ValidationException):
        depolarizing_pp(2, 1.5)


@pytest.mark.parametrize("d", [2, 3])
def test_werner_holevo_pair_differs_by_the_flip(d):
    flip = swap_operator(d).entries
    combined = (d + 1) * werner_holevo(d, 0).matrix.entries - (d - 1) * werner_holevo(d, 1).matrix.entries
    assert_allclose(combined, 2 * flip, atol=1e-12)


def test_werner_holevo_validation():
    with pytest.raises(ValidationException):
        werner_holevo(1, 1)
    with pytest.raises(ValidationException):
        werner_holevo(2, 2)


def test_classical_channel_rejects_non_stochastic():
    with pytest.raises(ValidationException):
        classical_channel(np.array([[0.5, 0.5], [0.2, 0.2]]))


def test_parallel_compose_merges_registers(rng):
    first, second = amplitude_damping(0.1), amplitude_damping(0.3)
    joint = parallel_compose([first, second])
    assert joint.dims == {"A0": 4, "B0": 1, "A1": 1, "B1": 4}
    a = random_density(RegisterSystem.of(("A0", 2), ("B0", 1)), rng)
    b = random_density(RegisterSystem.of(("A0", 2), ("B0", 1)), rng)
    product_in = LabeledMatrix(RegisterSystem.of(("A0", 4), ("B0", 1)), np.kron(a.entries, b.entries))
    expected = np.kron(apply_channel(first, a).entries, apply_channel(second, b).entries)
    assert_allclose(apply_channel(joint, product_in).entries, expected, atol=1e-12)


def test_covariance_of_depolarizing_families(rng):
    pairs = [(random_unitary(2, rng), random_unitary(2, rng)) for _ in range(3)]
    assert verify_covariance(depolarizing_bipartite(2, 2, 0.4), pairs) < 1e-10
    assert verify_covariance(depolarized_swap(2, 0.4), pairs, CovarianceMode.CROSS_COVARIANT) < 1e-10
    assert verify_covariance(depolarized_swap(2, 0.4), pairs) > 1e-3


def test_covariance_rejects_incompatible_dims(rng):
    with pytest.raises(ValidationException):
        verify_covariance(depolarizing_pp(2, 0.5), [(np.eye(2), np.eye(1))], CovarianceMode.COVARIANT)


def test_ensemble_validation():
    first, second = depolarizing_pp(2, 0.9), depolarizing_pp(2, 0.1)
    assert ChannelEnsemble.binary(first, second, 0.3).probabilities == [0.3, pytest.approx(0.7)]
    with pytest.raises(ValidationException):
        ChannelEnsemble(((0.6, first), (0.6, second)))
    with pytest.raises(ValidationException):
        ChannelEnsemble.binary(first, depolarizing_pp(3, 0.1), 0.5)


def test_inline_spec_builds_channel():
    choi = build_channel(ChannelSpecModel.parse_inline("depol_bipartite:d_A=2,d_B=2,p=0.25"))
    assert_allclose(choi.matrix.entries, depolarizing_bipartite(2, 2, 0.25).matrix.entries)
    assert ChannelSpecModel.parse_inline("werner_holevo_1:d=3").params == {"d": 3}


@pytest.mark.parametrize("text", ["nope:d=2", "classical:matrix=1", "depol_pp:d", "depol_pp:=2"])
def test_inline_spec_errors(text):
    with pytest.raises(ValidationException):
        ChannelSpecModel.parse_inline(text)


def test_missing_parameter_is_reported():
    with pytest.raises(ValidationException, match="requires parameter 'p'"):
        build_channel(ChannelSpecModel.parse_inline("depol_pp:d=2"))


def test_classical_spec_file(tmp_path):
    path = tmp_path / "classical.json"
    path.write_text(json.dumps({"family": "classical", "params": {"matrix": [[0.9, 0.2], [0.1, 0.8]]}}))
    choi = build_channel(ChannelSpecModel.resolve(str(path)))
    assert_allclose(np.diag(choi.matrix.entries).real, [0.9, 0.1, 0.2, 0.8])


def test_explicit_choi_spec_file(tmp_path):
    model = to_model(depolarizing_pp(2, 0.5).matrix).model_dump()
    path = tmp_path / "explicit.json"
    path.write_text(json.dumps({"family": "explicit_choi", **model,
                                "ownership": {"A0": "Alice", "B0": "bob", "A1": "alice", "B1": "BOB"}}))
    choi = build_channel(ChannelSpecModel.resolve(str(path)))
    assert choi.ownership["B1"] == Party.BOB
    assert_allclose(choi.matrix.entries, depolarizing_pp(2, 0.5).matrix.entries, atol=1e-12)


def test_parallel_spec_file(tmp_path):
    path = tmp_path / "parallel.json"
    path.write_text(json.dumps({"family": "parallel", "of": [{"family": "amplitude_damping",
                                                              "params": {"gamma": 0.2}}], "copies": 2}))
    spec = ChannelSpecModel.resolve(str(path))
    assert spec.family == ChannelFamily.PARALLEL
    assert build_channel(spec).d_in == 4


def test_unreadable_spec_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ValidationException):
        ChannelSpecModel.resolve(str(path))

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.main.exceptions import ValidationException
from src.main.utils.tensor_utils import (LabeledMatrix, RegisterSystem, from_json, hermitian_eigenvalues, identity,
                                         is_psd, kron, max_entangled, merge_registers, partial_trace,
                                         partial_transpose, permute_registers, random_density, random_hermitian,
                                         random_pure, random_unitary, relabel, swap_operator, to_json, conjugate_by)


def test_register_system_rejects_duplicate_labels():
    with pytest.raises(ValidationException):
        RegisterSystem.of(("A", 2), ("A", 3))


def test_labeled_matrix_rejects_wrong_shape():
    with pytest.raises(ValidationException):
        LabeledMatrix(RegisterSystem.of(("A", 2), ("B", 2)), np.eye(3))


def test_hermitian_hint_rejects_skew_input():
    skew = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(ValidationException):
        LabeledMatrix(RegisterSystem.of(("A", 2)), skew, hermitian_hint=True)


def test_unknown_label_is_reported():
    m = identity(RegisterSystem.of(("A", 2)))
    with pytest.raises(ValidationException, match="Unknown register label"):
        partial_trace(m, ["Z"])


def test_partial_trace_of_maximally_entangled_is_maximally_mixed():
    phi = max_entangled(3)
    assert_allclose(partial_trace(phi, ["B"]).entries, np.eye(3) / 3, atol=1e-12)
    assert partial_trace(phi, ["B"]).labels == ("A",)


def test_partial_trace_of_product_keeps_factor(rng):
    a = random_density(RegisterSystem.of(("A", 2)), rng)
    b = random_density(RegisterSystem.of(("B", 3)), rng)
    assert_allclose(partial_trace(kron(a, b), ["A"]).entries, b.entries, atol=1e-12)
    assert_allclose(partial_trace(kron(a, b), ["B"]).entries, a.entries, atol=1e-12)


def test_partial_transpose_of_maximally_entangled_is_swap_over_d():
    d = 3
    pt = partial_transpose(max_entangled(d), ["B"])
    assert_allclose(pt.entries, swap_operator(d).entries / d, atol=1e-12)
    eigenvalues = hermitian_eigenvalues(pt)
    assert eigenvalues[0] == pytest.approx(-1 / d)
    assert not is_psd(pt)


def test_partial_transpose_is_an_involution(rng):
    m = random_hermitian(RegisterSystem.of(("A", 2), ("B", 3), ("C", 2)), rng)
    twice = partial_transpose(partial_transpose(m, ["B", "C"]), ["C", "B"])
    assert_allclose(twice.entries, m.entries, atol=1e-12)


@pytest.mark.parametrize("d_a, d_b", [(2, 2), (2, 3), (3, 3)])
def test_partial_transpose_of_pure_state_has_bounded_spectrum(d_a, d_b, rng):
    system = RegisterSystem.of(("A", d_a), ("B", d_b))
    for _ in range(20):
        spectrum = hermitian_eigenvalues(partial_transpose(random_pure(system, rng), ["B"]))
        assert spectrum.min() >= -0.5 - 1e-12
        assert spectrum.max() <= 1.0 + 1e-12


def test_partial_transpose_commutes_with_partial_trace_on_other_registers(rng):
    system = RegisterSystem.of(("A", 2), ("B", 3), ("C", 2))
    for _ in range(20):
        m = random_hermitian(system, rng)
        for transposed, traced in [(["B"], ["C"]), (["A", "C"], ["B"]), (["C"], ["A", "B"])]:
            left = partial_trace(partial_transpose(m, transposed), traced)
            right = partial_transpose(partial_trace(m, traced), transposed)
            assert left.labels == right.labels
            assert_allclose(left.entries, right.entries, atol=1e-12)


def test_full_transpose_matches_numpy(rng):
    m = random_hermitian(RegisterSystem.of(("A", 2), ("B", 2)), rng)
    assert_allclose(partial_transpose(m, ["A", "B"]).entries, m.entries.T, atol=1e-12)


def test_permute_registers_moves_tensor_factors(rng):
    a = random_density(RegisterSystem.of(("A", 2)), rng)
    b = random_density(RegisterSystem.of(("B", 3)), rng)
    swapped = permute_registers(kron(a, b), ["B", "A"])
    assert swapped.labels == ("B", "A")
    assert_allclose(swapped.entries, np.kron(b.entries, a.entries), atol=1e-12)


def test_permute_registers_rejects_non_permutation():
    with pytest.raises(ValidationException):
        permute_registers(max_entangled(2), ["A", "A"])


def test_merge_registers_multiplies_dimensions():
    m = identity(RegisterSystem.of(("A_0", 2), ("B_0", 3), ("A_1", 2)))
    merged = merge_registers(m, [("A", ["A_0", "A_1"]), ("B", ["B_0"])])
    assert merged.dims == (4, 3)
    assert merged.trace() == pytest.approx(12)


def test_relabel_keeps_entries():
    phi = max_entangled(2)
    renamed = relabel(phi, {"A": "X"})
    assert renamed.labels == ("X", "B")
    assert_allclose(renamed.entries, phi.entries)


def test_conjugate_by_preserves_spectrum(rng):
    rho = random_density(RegisterSystem.of(("A", 3)), rng)
    u = random_unitary(3, rng)
    assert_allclose(hermitian_eigenvalues(conjugate_by(rho, u)), hermitian_eigenvalues(rho), atol=1e-12)


def test_random_density_is_a_state(rng):
    rho = random_density(RegisterSystem.of(("A", 2), ("B", 2)), rng)
    assert rho.trace() == pytest.approx(1.0)
    assert is_psd(rho)


def test_json_form_is_exact(rng):
    m = random_hermitian(RegisterSystem.of(("A", 2), ("B", 2)), rng)
    restored = from_json(to_json(m))
    assert restored.labels == m.labels
    assert np.array_equal(restored.entries, m.entries)


def test_arithmetic_requires_same_system():
    with pytest.raises(ValidationException):
        identity(RegisterSystem.of(("A", 2))) + identity(RegisterSystem.of(("B", 2)))

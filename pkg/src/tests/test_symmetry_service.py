import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.main.constants import CommutantName, CovarianceMode
from src.main.exceptions import ValidationException
from src.main.services.v1.channel_service import (ChannelEnsemble, classical_channel, covariance_unitary,
                                                  depolarized_swap, depolarizing_bipartite, depolarizing_pp)
from src.main.services.v1.discrimination_service import DiscriminationInstance, psucc_global, psucc_ppt_k
from src.main.services.v1.symmetry_service import (CommutantBasis, LinearRow, ReducedLP, commutant_project,
                                                   cross_isotropic_pair, diagonal, isotropic_pair, lp_bipartite_depol,
                                                   lp_bipartite_depol_full, lp_depol_swap, lp_pp_depol,
                                                   psucc_classical_diag, reconstruct, single_isotropic,
                                                   solve_reduced_lp, swap_eigenvalue_forms, twirl_finite)
from src.main.utils.tensor_utils import (RegisterSystem, hermitian_eigenvalues, identity, partial_transpose,
                                         random_unitary)

TOL = 1e-6


def test_commutant_bases_are_complete_and_orthogonal():
    assert isotropic_pair(2, 3).traces == pytest.approx([1, 8, 3, 24])
    assert cross_isotropic_pair(2).traces == pytest.approx([1, 3, 3, 9])
    assert single_isotropic(3).traces == pytest.approx([1, 8])
    assert len(diagonal(RegisterSystem.of(("A", 2), ("B", 2)))) == 4


def test_commutant_basis_rejects_overlapping_projectors():
    system = RegisterSystem.of(("A", 2))
    with pytest.raises(ValidationException):
        CommutantBasis(CommutantName.DIAGONAL, (identity(system), identity(system)))
    with pytest.raises(ValidationException):
        CommutantBasis(CommutantName.DIAGONAL, (identity(system) * 0.5, identity(system) * 0.5))


@pytest.mark.parametrize("choi, basis", [
    (depolarizing_bipartite(2, 2, 0.3), isotropic_pair(2, 2)),
    (depolarized_swap(2, 0.6), cross_isotropic_pair(2)),
    (depolarizing_pp(3, 0.2), single_isotropic(3)),
], ids=["bipartite", "swap", "pp"])
def test_covariant_choi_lies_in_its_commutant(choi, basis):
    restored = reconstruct(commutant_project(choi.matrix, basis), basis)
    assert_allclose(restored.entries, choi.matrix.entries, atol=1e-12)


def test_twirl_leaves_covariant_operators_fixed(rng):
    choi = depolarizing_bipartite(2, 2, 0.4)
    gammas = [covariance_unitary(random_unitary(2, rng), random_unitary(2, rng), CovarianceMode.COVARIANT)
              for _ in range(4)]
    assert_allclose(twirl_finite(choi.matrix, gammas).entries, choi.matrix.entries, atol=1e-12)


def test_twirl_needs_unitaries():
    with pytest.raises(ValidationException):
        twirl_finite(depolarizing_pp(2, 0.5).matrix, [])


def test_reduced_lp_solver():
    x, y = LinearRow.var("x"), LinearRow.var("y")
    lp = ReducedLP("toy", ["x", "y"], 2 * x + y)
    lp.bound("x", 0.0, 1.0)
    lp.bound("y", 0.0, 5.0)
    lp.require_nonneg("budget", 3.0 - x - y)
    solution = solve_reduced_lp(lp)
    assert solution.value == pytest.approx(4.0, abs=TOL)
    assert solution["x"] == pytest.approx(1.0, abs=1e-5)
    assert (x + y).evaluate(solution.assignment) == pytest.approx(3.0, abs=1e-5)


@pytest.mark.parametrize("k, expected", [(1, 0.7), (2, 0.8), (3, 0.8)])
def test_point_to_point_lp_closed_form(k, expected, options):
    assert lp_pp_depol(2, 0.9, 0.1, k, options=options).value == pytest.approx(expected, abs=TOL)


def test_bipartite_lp_closed_form(options):
    assert lp_bipartite_depol(2, 2, 0.9, 0.1, 1, options=options).value == pytest.approx(0.875, abs=TOL)


def test_swap_lp_closed_form(options):
    assert lp_depol_swap(2, 0.9, 0.1, 2, options=options).value == pytest.approx(0.875, abs=TOL)
    assert lp_depol_swap(2, 0.9, 0.1, 1, options=options).value <= 0.8 + TOL


def test_bipartite_lp_forms_agree(rng, options):
    for _ in range(3):
        p, q, lam = rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0.2, 0.8)
        k = int(rng.integers(1, 4))
        compact = lp_bipartite_depol(2, 3, p, q, k, lam, options).value
        full = lp_bipartite_depol_full(2, 3, p, q, k, lam, options).value
        assert full == pytest.approx(compact, abs=TOL)


def _random_tuples(rng, count):
    return [(rng.uniform(0, 1), rng.uniform(0, 1), int(rng.integers(1, 4)), rng.uniform(0.2, 0.8))
            for _ in range(count)]


@pytest.mark.parametrize("d", [2, 3])
def test_point_to_point_lp_matches_full_program(d, rng, options):
    for p, q, k, lam in _random_tuples(rng, 5):
        inst = DiscriminationInstance.binary(depolarizing_pp(d, p), depolarizing_pp(d, q), lam, k)
        full = psucc_ppt_k(inst, options).value
        assert lp_pp_depol(d, p, q, k, lam, options).value == pytest.approx(full, abs=TOL)


def test_bipartite_lp_matches_full_program(rng, options):
    for p, q, k, lam in _random_tuples(rng, 5):
        inst = DiscriminationInstance.binary(depolarizing_bipartite(2, 2, p), depolarizing_bipartite(2, 2, q), lam, k)
        full = psucc_ppt_k(inst, options).value
        assert lp_bipartite_depol(2, 2, p, q, k, lam, options).value == pytest.approx(full, abs=TOL)


def test_swap_lp_matches_full_program(rng, options):
    for p, q, k, lam in _random_tuples(rng, 5):
        inst = DiscriminationInstance.binary(depolarized_swap(2, p), depolarized_swap(2, q), lam, k)
        full = psucc_ppt_k(inst, options).value
        assert lp_depol_swap(2, p, q, k, lam, options).value == pytest.approx(full, abs=TOL)


@pytest.mark.parametrize("d", [2, 3])
def test_swap_eigenvalue_forms_match_partial_transpose(d, rng):
    basis = cross_isotropic_pair(d)
    w = rng.uniform(0, 1, size=4)
    transposed = partial_transpose(reconstruct(w, basis), ("B0", "B1"))
    sym, anti = d * (d + 1) // 2, d * (d - 1) // 2
    multiplicity = {1: sym, -1: anti}
    expected = np.concatenate([np.full(multiplicity[s1] * multiplicity[s2], coeffs @ w)
                               for (s1, s2), coeffs in swap_eigenvalue_forms(d).items()])
    assert_allclose(hermitian_eigenvalues(transposed), np.sort(expected), atol=1e-10)


def test_classical_lp_matches_global_program(options):
    first = classical_channel(np.array([[0.9, 0.3, 0.0], [0.1, 0.7, 0.5], [0.0, 0.0, 0.5]]))
    second = classical_channel(np.array([[0.2, 0.3, 0.1], [0.5, 0.3, 0.1], [0.3, 0.4, 0.8]]))
    lp_value = psucc_classical_diag(first, second, 0.4, options).value
    global_value = psucc_global(ChannelEnsemble.binary(first, second, 0.4), options).value
    assert lp_value == pytest.approx(global_value, abs=TOL)


def test_classical_lp_requires_diagonal_choi(pp_pair):
    with pytest.raises(ValidationException, match="not diagonal"):
        psucc_classical_diag(*pp_pair, 0.5)


def test_lp_input_validation(options):
    with pytest.raises(ValidationException):
        lp_pp_depol(2, 1.2, 0.1, 1, options=options)
    with pytest.raises(ValidationException, match="k must be ≥ 1"):
        lp_bipartite_depol(2, 2, 0.9, 0.1, 0, options=options)
    with pytest.raises(ValidationException):
        swap_eigenvalue_forms(1)

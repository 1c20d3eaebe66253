import numpy as np
import pytest

from src.main.exceptions import ValidationException
from src.main.services.v1.channel_service import (ChannelEnsemble, amplitude_damping, choi_from_kraus,
                                                  depolarizing_bipartite, depolarizing_pp, replacer, werner_holevo)
from src.main.services.v1.discrimination_service import (DiscriminationInstance, check_tester_feasibility,
                                                         diamond_dual, psucc_global, psucc_ppt_k,
                                                         psucc_ppt_k_dual, psucc_ppt_k_four_operator,
                                                         psucc_ppt_k_states, schmidt_rank_bound,
                                                         werner_holevo_upper_bound)
from src.main.utils.tensor_utils import (RegisterSystem, basis_projector, identity, max_entangled, random_unitary,
                                         relabel)

TOL = 1e-6


def pp_closed_form(d: int, p: float, q: float, k: int) -> float:
    if k == 1:
        return 0.5 + (p - q) * (d - 1) / (2 * d)
    return 0.5 + (p - q) * (d * d - 1) / (2 * d * d)


def test_global_value_for_point_to_point_depolarizing(pp_pair, options):
    first, second = pp_pair
    assert psucc_global(ChannelEnsemble.binary(first, second, 0.5), options).value == pytest.approx(0.8, abs=TOL)


def test_identical_channels_give_the_larger_prior(options):
    choi = depolarizing_pp(2, 0.4)
    assert psucc_global(ChannelEnsemble.binary(choi, choi, 0.5), options).value == pytest.approx(0.5, abs=TOL)
    assert psucc_global(ChannelEnsemble.binary(choi, choi, 0.7), options).value == pytest.approx(0.7, abs=TOL)
    inst = DiscriminationInstance.binary(choi, choi, 0.5, 1)
    assert psucc_ppt_k(inst, options).value == pytest.approx(0.5, abs=TOL)


def test_global_tester_is_normalized(pp_pair, options):
    first, second = pp_pair
    solution = psucc_global(ChannelEnsemble.binary(first, second, 0.5), options)
    assert solution.rho.trace().real == pytest.approx(1.0, abs=TOL)
    total = solution.testers[0] + solution.testers[1]
    assert total.trace().real == pytest.approx(first.d_out, abs=1e-5)


def test_global_value_for_three_channels(options):
    chois = [depolarizing_pp(2, p) for p in (0.0, 0.5, 1.0)]
    ensemble = ChannelEnsemble(tuple((1 / 3, c) for c in chois))
    value = psucc_global(ensemble, options).value
    assert 1 / 3 < value < 1.0


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("p, q", [(0.9, 0.1), (1.0, 0.5), (0.6, 0.2)])
@pytest.mark.parametrize("k", [1, 2])
def test_point_to_point_closed_form(d, p, q, k, options):
    inst = DiscriminationInstance.binary(depolarizing_pp(d, p), depolarizing_pp(d, q), 0.5, k)
    assert psucc_ppt_k(inst, options).value == pytest.approx(pp_closed_form(d, p, q, k), abs=TOL)


def test_bipartite_depolarizing_needs_no_entanglement(options):
    first, second = depolarizing_bipartite(2, 2, 0.9), depolarizing_bipartite(2, 2, 0.1)
    inst = DiscriminationInstance.binary(first, second, 0.5, 1)
    assert psucc_ppt_k(inst, options).value == pytest.approx(0.875, abs=TOL)
    assert psucc_global(inst.ensemble, options).value == pytest.approx(0.875, abs=TOL)


def test_werner_holevo_values(options):
    d = 2
    first, second = werner_holevo(d, 0), werner_holevo(d, 1)
    inst = DiscriminationInstance.binary(first, second, 0.5, 1)
    assert psucc_ppt_k(inst, options).value <= werner_holevo_upper_bound(d, 1, 0.5) + TOL
    assert psucc_ppt_k(inst.with_k(d), options).value == pytest.approx(1.0, abs=TOL)
    assert psucc_global(inst.ensemble, options).value == pytest.approx(1.0, abs=TOL)


def test_werner_holevo_bound_domain():
    assert werner_holevo_upper_bound(3, 3, 0.5) == 1.0
    assert werner_holevo_upper_bound(3, 2, 0.5) == pytest.approx(0.875)
    with pytest.raises(ValidationException):
        werner_holevo_upper_bound(3, 1, 0.9)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_strong_duality_for_tester_program(pp_pair, k, options):
    inst = DiscriminationInstance.binary(*pp_pair, 0.4, k)
    primal = psucc_ppt_k(inst, options, with_dual=True)
    assert primal.dual_value == pytest.approx(primal.value, abs=TOL)
    assert psucc_ppt_k_dual(inst, options) == pytest.approx(primal.value, abs=TOL)


def test_strong_duality_for_global_program(options):
    first, second = amplitude_damping(0.2), amplitude_damping(0.7)
    global_value = psucc_global(ChannelEnsemble.binary(first, second, 0.6), options).value
    assert diamond_dual(first, second, 0.6, options) == pytest.approx(global_value, abs=TOL)


def test_four_operator_form_matches_reduced_form(pp_pair, options):
    for k in (1, 2):
        inst = DiscriminationInstance.binary(*pp_pair, 0.5, k)
        assert psucc_ppt_k_four_operator(inst, options) == pytest.approx(psucc_ppt_k(inst, options).value, abs=TOL)


def _random_qubit_channel(rng):
    isometry = random_unitary(4, rng)[:, :2]
    return choi_from_kraus([isometry[:2], isometry[2:]], (2, 1), (1, 2))


def test_values_increase_with_k_between_prior_and_global(rng, options):
    for _ in range(10):
        first, second = _random_qubit_channel(rng), _random_qubit_channel(rng)
        lam = float(rng.uniform(0.2, 0.8))
        inst = DiscriminationInstance.binary(first, second, lam, 1)
        values = [psucc_ppt_k(inst.with_k(k), options).value for k in (1, 2, 3)]
        global_value = psucc_global(inst.ensemble, options).value
        assert max(lam, 1 - lam) - TOL <= values[0]
        assert values[0] <= values[1] + TOL
        assert values[1] <= values[2] + TOL
        assert values[2] <= global_value + TOL


def test_tester_value_reaches_global_at_the_schmidt_rank_bound(options):
    first, second = amplitude_damping(0.2), amplitude_damping(0.7)
    inst = DiscriminationInstance.binary(first, second, 0.5, schmidt_rank_bound(first))
    assert inst.k == 15
    global_value = psucc_global(inst.ensemble, options).value
    assert psucc_ppt_k(inst, options).value == pytest.approx(global_value, abs=TOL)


def test_returned_tester_is_feasible(pp_pair, options):
    first, _ = pp_pair
    solution = psucc_ppt_k(DiscriminationInstance.binary(*pp_pair, 0.5, 2), options)
    residuals = check_tester_feasibility(first, solution)
    assert max(residuals.values()) <= 1e-6


def test_states_with_one_ebit_separate_bell_state_from_its_complement(options):
    system = RegisterSystem.of(("A1", 2), ("B1", 2))
    phi = relabel(max_entangled(2), {"A": "A1", "B": "B1"})
    complement = (identity(system) - phi) * (1 / 3)
    assert psucc_ppt_k_states(phi, complement, 0.5, 2, options=options) == pytest.approx(1.0, abs=TOL)
    assert psucc_ppt_k_states(phi, complement, 0.5, 1, options=options) < 1.0 - 1e-3


def test_states_that_are_orthogonal_products(options):
    system = RegisterSystem.of(("A1", 2), ("B1", 2))
    value = psucc_ppt_k_states(basis_projector(system, 0), basis_projector(system, 3), 0.5, 1, options=options)
    assert value == pytest.approx(1.0, abs=TOL)


def test_schmidt_rank_bound():
    assert schmidt_rank_bound(depolarizing_pp(2, 0.5)) == 15
    assert schmidt_rank_bound(depolarizing_bipartite(2, 2, 0.5)) == 2 * 16 * 4 - 1


def test_invalid_inputs(pp_pair):
    with pytest.raises(ValidationException, match="k must be ≥ 1"):
        DiscriminationInstance.binary(*pp_pair, 0.5, 0)
    with pytest.raises(ValidationException):
        DiscriminationInstance.binary(*pp_pair, 1.0, 1)
    with pytest.raises(ValidationException):
        diamond_dual(*pp_pair, 0.0)


def test_pair_requires_two_channels():
    chois = [depolarizing_pp(2, p) for p in (0.1, 0.2, 0.3)]
    inst = DiscriminationInstance(ChannelEnsemble(tuple((1 / 3, c) for c in chois)), 1)
    with pytest.raises(ValidationException):
        _ = inst.pair


def test_prior_is_the_first_probability(pp_pair):
    assert DiscriminationInstance.binary(*pp_pair, 0.3).lam == pytest.approx(0.3)
    assert np.isclose(sum(DiscriminationInstance.binary(*pp_pair, 0.3).ensemble.probabilities), 1.0)


def test_replacers_to_orthogonal_states_are_perfectly_distinguishable(options):
    first, second = replacer(np.diag([1.0, 0.0])), replacer(np.diag([0.0, 1.0]))
    inst = DiscriminationInstance.binary(first, second, 0.5, 1)
    assert psucc_ppt_k(inst, options).value == pytest.approx(1.0, abs=TOL)


@pytest.mark.parametrize("k", [1, 2])
def test_replacers_reduce_to_state_discrimination(k, options):
    system = RegisterSystem.of(("A1", 2), ("B1", 2))
    phi = relabel(max_entangled(2), {"A": "A1", "B": "B1"})
    complement = (identity(system) - phi) * (1 / 3)
    first = replacer(phi.entries, output_dims=(2, 2))
    second = replacer(complement.entries, output_dims=(2, 2))
    channel_value = psucc_ppt_k(DiscriminationInstance.binary(first, second, 0.5, k), options).value
    state_value = psucc_ppt_k_states(phi, complement, 0.5, k, options=options)
    assert channel_value == pytest.approx(state_value, abs=TOL)

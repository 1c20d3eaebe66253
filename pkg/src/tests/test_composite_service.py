import pytest

from src.main.constants import ParamDomain
from src.main.exceptions import ValidationException
from src.main.services.v1.channel_service import amplitude_damping, depolarizing_bipartite, depolarizing_pp
from src.main.services.v1.composite_service import ParamChannelSet, composite_psucc
from src.main.services.v1.discrimination_service import DiscriminationInstance, psucc_ppt_k
from src.main.services.v1.symmetry_service import lp_bipartite_depol

TOL = 1e-6


def test_singletons_reduce_to_the_tester_program(pp_pair, options):
    first, second = pp_pair
    solution = composite_psucc(ParamChannelSet.singleton(first), ParamChannelSet.singleton(second), 0.5, 2, options)
    expected = psucc_ppt_k(DiscriminationInstance.binary(first, second, 0.5, 2), options).value
    assert solution.value == pytest.approx(expected, abs=TOL)
    assert solution.params == {"first": [], "second": []}


def test_segments_pick_the_closest_pair(options):
    first = ParamChannelSet.segment(depolarizing_pp(2, 0.8), depolarizing_pp(2, 0.9))
    second = ParamChannelSet.segment(depolarizing_pp(2, 0.1), depolarizing_pp(2, 0.2))
    solution = composite_psucc(first, second, 0.5, 1, options)
    # p = 0.8 against q = 0.2 without entanglement
    assert solution.value == pytest.approx(0.5 + 0.6 / 4, abs=TOL)
    assert solution.first_params[0] == pytest.approx(0.0, abs=1e-4)
    assert solution.second_params[0] == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize("p_range, q_range, k", [
    ((0.8, 1.0), (0.0, 0.2), 1),
    ((0.6, 0.9), (0.1, 0.3), 2),
])
def test_bipartite_depolarizing_intervals_match_the_gap_lp(p_range, q_range, k, options):
    first = ParamChannelSet.segment(*(depolarizing_bipartite(2, 2, p) for p in p_range))
    second = ParamChannelSet.segment(*(depolarizing_bipartite(2, 2, q) for q in q_range))
    worst = composite_psucc(first, second, 0.5, k, options).value
    # only the smallest noise gap between the sets matters
    gap = min(p_range) - max(q_range)
    assert worst == pytest.approx(lp_bipartite_depol(2, 2, gap, 0.0, k, 0.5, options).value, abs=TOL)


def test_hull_worst_case_is_no_better_than_any_member(options):
    members = [amplitude_damping(0.1), amplitude_damping(0.2)]
    hull = ParamChannelSet.hull(members)
    assert hull.domain == ParamDomain.SIMPLEX
    other = ParamChannelSet.singleton(amplitude_damping(0.8))
    worst = composite_psucc(hull, other, 0.5, 1, options)
    for member in members:
        single = psucc_ppt_k(DiscriminationInstance.binary(member, amplitude_damping(0.8), 0.5, 1), options).value
        assert worst.value <= single + TOL
    assert sum(worst.first_params) == pytest.approx(1.0, abs=1e-6)


def test_member_at_parameters(pp_pair):
    first, second = pp_pair
    segment = ParamChannelSet.segment(first, second)
    midpoint = segment.member((0.5,))
    assert midpoint.matrix.allclose(depolarizing_pp(2, 0.5).matrix)


def test_box_outside_cptp_is_rejected(pp_pair):
    first, second = pp_pair
    direction = second.matrix - first.matrix
    with pytest.raises(ValidationException):
        ParamChannelSet.box(first, [direction], [(0.0, 3.0)])


def test_empty_sets_are_rejected(pp_pair):
    first, _ = pp_pair
    with pytest.raises(ValidationException):
        ParamChannelSet.hull([])
    with pytest.raises(ValidationException):
        ParamChannelSet.box(first, [first.matrix], [(1.0, 0.0)])


def test_sets_must_share_registers(options):
    with pytest.raises(ValidationException):
        composite_psucc(ParamChannelSet.singleton(depolarizing_pp(2, 0.5)),
                        ParamChannelSet.singleton(depolarizing_pp(3, 0.5)), 0.5, 1, options)

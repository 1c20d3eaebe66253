import pytest
from pydantic import ValidationError as PydanticValidationError

from src.main.exceptions import ValidationException
from src.main.models.v1 import ExperimentConfigModel
from src.main.services.v1.experiment_service import damping_pair, damping_scan

TOL = 1e-5


def test_damping_pair_dims():
    first, second = damping_pair(0.1, 2)
    assert first.dims == {"A0": 4, "B0": 1, "A1": 1, "B1": 4}
    assert first.compatible_with(second)


def test_undamped_against_reset_is_perfect(options):
    row = damping_scan([0.0], 1, 0.5, 1, options).rows[0]
    assert row.p_global == pytest.approx(1.0, abs=TOL)
    assert row.p_k1 == pytest.approx(1.0, abs=TOL)
    assert row.p_k2 == pytest.approx(1.0, abs=TOL)


def test_single_use_needs_no_entanglement(options):
    row = damping_scan([0.1], 1, 0.5, 1, options).rows[0]
    assert row.p_k1 == pytest.approx(row.p_global, abs=TOL)


def test_two_uses_need_one_ebit(options):
    row = damping_scan([0.1], 2, 0.5, 1, options).rows[0]
    assert row.p_global - row.p_k1 > 1e-4
    assert row.p_k2 == pytest.approx(row.p_global, abs=TOL)


@pytest.mark.slow
def test_three_uses_need_no_entanglement(options):
    row = damping_scan([0.1], 3, 0.5, 1, options).rows[0]
    assert row.p_k1 == pytest.approx(row.p_global, abs=TOL)


@pytest.mark.slow
def test_default_grid_two_uses(options):
    report = damping_scan(copies=2, options=options)
    assert len(report.rows) == 11
    for row in report.rows:
        assert row.p_k2 == pytest.approx(row.p_global, abs=TOL)
        if 0.02 <= row.gamma <= 0.18:
            assert row.p_global - row.p_k1 > 1e-4


def test_rows_follow_grid_order_in_worker_pool(options):
    grid = [0.2, 0.0, 0.1]
    report = damping_scan(grid, 1, 0.5, 2, options)
    assert [row.gamma for row in report.rows] == grid
    assert report.to_csv().splitlines()[0] == "gamma,P_global,P_k1,P_k2"


def test_invalid_experiment_inputs(options):
    with pytest.raises(ValidationException):
        damping_scan([0.1], 4, 0.5, 1, options)
    with pytest.raises(ValidationException):
        damping_scan([], 1, 0.5, 1, options)


@pytest.mark.parametrize("overrides", [
    {"lam": 1.0},
    {"k": 0},
    {"copies": 4},
    {"gamma_grid": []},
    {"gamma_grid": [0.1, 1.5]},
    {"first": "missing_channel.json"},
])
def test_experiment_config_rejects(overrides):
    with pytest.raises(PydanticValidationError):
        ExperimentConfigModel(command="damping", **overrides)


def test_experiment_config_defaults():
    config = ExperimentConfigModel(command="damping")
    assert (config.lam, config.k, config.copies, config.output_format) == (0.5, 1, 1, None)

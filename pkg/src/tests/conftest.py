import numpy as np
import pytest

from src.main.config.config_loader import get_config
from src.main.models.v1 import SolverOptionsModel
from src.main.services.v1.channel_service import depolarizing_pp


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240521)


@pytest.fixture
def options() -> SolverOptionsModel:
    return SolverOptionsModel.from_config()


@pytest.fixture
def pp_pair():
    """Point-to-point depolarizing channels at d = 2 with p = 0.9 and q = 0.1."""
    return depolarizing_pp(2, 0.9), depolarizing_pp(2, 0.1)


@pytest.fixture(autouse=True)
def clean_overrides():
    yield
    get_config().clear_all_overrides()

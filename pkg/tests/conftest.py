import numpy as np
import pytest

from sqstates.ermakov import ErmakovParameters


def draw_params(rng, *, squeeze=(0.45, 2.1), alpha_max=1.2, disp_max=1.6,
                phases=True) -> ErmakovParameters:
    """Random but physically moderate initial data (beta0 > 0 canonical)."""
    return ErmakovParameters(
        alpha=rng.uniform(-alpha_max, alpha_max),
        beta=rng.uniform(*squeeze),
        gamma=rng.uniform(-1.0, 1.0) if phases else 0.0,
        delta=rng.uniform(-disp_max, disp_max),
        epsilon=rng.uniform(-disp_max, disp_max),
        kappa=rng.uniform(-1.0, 1.0) if phases else 0.0,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

import numpy as np
import pytest

from cblsim import SystemParams, drift_diffusion


def random_params(rng: np.random.Generator) -> SystemParams:
    return SystemParams(
        A=float(rng.uniform(0.0, 15.0)),
        kappa=float(rng.uniform(0.05, 1.0)),
        eta=float(rng.uniform(-1.0, 1.0)),
        omega=float(rng.uniform(0.0, 2.0)),
        N=float(rng.uniform(0.0, 2.0)),
    )


def random_below_threshold(rng: np.random.Generator) -> SystemParams:
    while True:
        params = random_params(rng)
        if drift_diffusion(params).below_threshold:
            return params


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1701)

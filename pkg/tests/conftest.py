import time

import numpy as np
import pytest

import fvshock as fv

# wall-clock seconds of expensive shared stages, keyed by fixture name, so
# acceptance criteria with runtime bounds can account for shared work honestly
STAGE_TIMES: dict[str, float] = {}


@pytest.fixture(scope="session")
def aligned_case_100():
    return fv.get_case("aligned-oblique-shock", 100, 100)


@pytest.fixture(scope="session")
def aligned_first_order_100(aligned_case_100):
    """Converged (to its roundoff floor) first-order solution, 100x100 grid.

    cfl = 0.15 so the stage can seed the starved-mask stress run directly;
    the converged first-order solution itself is step-size independent.
    """
    config = fv.RunConfig(mode="steady", limiting="first_order", cfl=0.15)
    t0 = time.perf_counter()
    stage = fv.run_first_order(config, aligned_case_100)
    STAGE_TIMES["aligned_first_order_100"] = time.perf_counter() - t0
    return stage


def random_admissible_states(rng: np.random.Generator, n: int) -> np.ndarray:
    """Conserved states drawn from a well-separated admissible primitive box."""
    rho = rng.uniform(0.1, 10.0, n)
    u = rng.uniform(-5.0, 5.0, n)
    v = rng.uniform(-5.0, 5.0, n)
    p = rng.uniform(0.1, 10.0, n)
    w = np.stack([rho, u, v, p], axis=-1)
    return fv.conserved_from_primitive(w, fv.GasModel())

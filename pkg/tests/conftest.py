import functools

import numpy as np
import pytest
from hypothesis import strategies as st

from mixedgn import GridSpec, Params, SolverConfig, petviashvili_solve

REF_PARAMS = Params(3, 0.5, 4.0)


@st.composite
def admissible_params(draw, max_dim=8):
    N = draw(st.integers(3, max_dim))
    s = draw(st.floats(0.05, 0.95))
    lo, hi = 2 * N / (N - 2 * s), 2 * N / (N - 2)
    frac = draw(st.floats(0.02, 0.98))
    return Params(N, s, lo + frac * (hi - lo))


def positive(lo=1e-3, hi=1e3):
    return st.floats(lo, hi)


def random_params(rng: np.random.Generator, max_dim=8) -> Params:
    N = int(rng.integers(3, max_dim + 1))
    s = float(rng.uniform(0.05, 0.95))
    lo, hi = 2 * N / (N - 2 * s), 2 * N / (N - 2)
    return Params(N, s, lo + rng.uniform(0.02, 0.98) * (hi - lo))


@functools.lru_cache(maxsize=None)
def reference_solve(n: int, half_width: float = 12.0):
    """Default solve at N=3, s=1/2, p=4 on an n^3 grid; cached for the whole session."""
    return petviashvili_solve(REF_PARAMS, GridSpec(n, half_width), SolverConfig())


@pytest.fixture(scope="session")
def ground_state_64():
    return reference_solve(64)

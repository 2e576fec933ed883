"""Shared strategies and corpora for the test suite."""

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lorentzlab import PiecewiseFn
from lorentzlab.sampling import random_decreasing, random_step

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

_widths = st.floats(1e-3, 1e3, allow_nan=False, allow_infinity=False)
_levels = st.floats(0.0, 1e4, allow_nan=False, allow_infinity=False)


@st.composite
def step_functions(draw, max_cells: int = 6) -> PiecewiseFn:
    """Arbitrary nonnegative step functions with bounded support."""
    n = draw(st.integers(1, max_cells))
    widths = draw(st.lists(_widths, min_size=n, max_size=n))
    values = draw(st.lists(_levels, min_size=n, max_size=n))
    if not any(v > 0.0 for v in values):
        values[-1] = 1.0
    return PiecewiseFn(np.cumsum(widths), values)


@st.composite
def decreasing_functions(draw, max_cells: int = 6) -> PiecewiseFn:
    """Nonincreasing step functions (same cells, levels sorted downward)."""
    f = draw(step_functions(max_cells=max_cells))
    return PiecewiseFn(f.breakpoints, np.sort(f.values)[::-1])


def step_corpus(n: int, seed: int) -> list[PiecewiseFn]:
    rng = np.random.default_rng(seed)
    return [random_step(rng) for _ in range(n)]


def decreasing_corpus(n: int, seed: int) -> list[PiecewiseFn]:
    rng = np.random.default_rng(seed)
    return [random_decreasing(rng) for _ in range(n)]

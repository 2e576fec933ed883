"""Seeded generators for test corpora: random step functions on (0, infinity).

All generators take a numpy Generator so corpora are reproducible; values and
support endpoints are log-uniform to exercise wide dynamic ranges.
"""

from __future__ import annotations

import numpy as np

from .funcs import PiecewiseFn, indicator

__all__ = [
    "random_decreasing",
    "random_step",
    "indicator_sweep",
]


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size=None):
    return lo * (hi / lo) ** rng.random(size)


def random_decreasing(
    rng: np.random.Generator,
    max_blocks: int = 12,
    t_range: tuple[float, float] = (1e-3, 1e3),
    v_range: tuple[float, float] = (1e-2, 1e2),
) -> PiecewiseFn:
    """A random nonincreasing step function with bounded support.

    Block widths and levels are log-uniform; occasional level ties keep the
    nonstrict cases exercised.
    """
    k = int(rng.integers(1, max_blocks + 1))
    t_max = _log_uniform(rng, *t_range)
    cuts = np.sort(_log_uniform(rng, t_max * 1e-3, t_max, k - 1)) if k > 1 else np.empty(0)
    bps = np.unique(np.concatenate([cuts, [t_max]]))
    levels = np.sort(_log_uniform(rng, *v_range, size=len(bps)))[::-1]
    if len(levels) > 1 and rng.random() < 0.3:
        j = int(rng.integers(0, len(levels) - 1))
        levels[j + 1] = levels[j]
    return PiecewiseFn(bps, levels, right_value=0.0)


def random_step(
    rng: np.random.Generator,
    max_blocks: int = 16,
    t_range: tuple[float, float] = (1e-3, 1e3),
    v_range: tuple[float, float] = (1e-2, 1e2),
    zero_prob: float = 0.25,
) -> PiecewiseFn:
    """A random nonnegative step function (no monotonicity), with zero cells
    and value ties mixed in."""
    k = int(rng.integers(1, max_blocks + 1))
    t_max = _log_uniform(rng, *t_range)
    cuts = np.sort(_log_uniform(rng, t_max * 1e-3, t_max, k - 1)) if k > 1 else np.empty(0)
    bps = np.unique(np.concatenate([cuts, [t_max]]))
    vals = _log_uniform(rng, *v_range, size=len(bps))
    zero = rng.random(len(bps)) < zero_prob
    vals[zero] = 0.0
    if len(vals) > 1 and rng.random() < 0.3:
        j = int(rng.integers(0, len(vals) - 1))
        vals[j + 1] = vals[j]
    if not np.any(vals > 0.0):
        vals[int(rng.integers(0, len(vals)))] = float(_log_uniform(rng, *v_range))
    return PiecewiseFn(bps, vals, right_value=0.0)


def indicator_sweep(
    n: int = 20, a_range: tuple[float, float] = (1e-3, 1e3)
) -> list[PiecewiseFn]:
    """The family chi_(0, a] along a geometric ladder of endpoints a."""
    endpoints = np.geomspace(a_range[0], a_range[1], n)
    return [indicator(0.0, float(a)) for a in endpoints]

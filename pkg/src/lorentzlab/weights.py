"""Weights on (0, infinity): symbolic power / power-log kinds and tabulated.

Every kind exposes pointwise evaluation w(t), an exact cumulative
W(a, b) = integral_a^b w decoupled from any grid, per-interval sups (for
weighted essential suprema), pointwise powers (symbolic kinds are closed
under them), and limits at 0+ and infinity. A cumulative-from-zero query on
a weight that is not locally integrable at the origin raises
NonIntegrableNearZero; divergence at infinity reports +inf.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
import numpy as np

from .errors import ConfigError, InvertedInterval, NonIntegrableNearZero
from .funcs import PiecewiseFn, integrate, pointwise_merge

__all__ = [
    "Weight",
    "Power",
    "PowerLog",
    "Tabulated",
    "weight_from_json",
    "power_integral",
    "product_cumulative",
    "ess_sup_weighted",
    "WeightProfile",
]

_INF = math.inf


def power_integral(alpha: float, lo: float, hi: float) -> float:
    """integral_lo^hi t^alpha dt with extended-real conventions."""
    if lo > hi:
        raise InvertedInterval(f"power_integral over ({lo}, {hi}]")
    if lo < 0:
        raise ValueError("bounds must be >= 0")
    if lo == hi:
        return 0.0
    ap1 = alpha + 1.0
    if lo == 0.0 and ap1 <= 0.0:
        raise NonIntegrableNearZero(f"t^{alpha} is not integrable near 0")
    if hi == _INF:
        if ap1 >= 0.0:
            return _INF
        return -(lo ** ap1) / ap1
    if ap1 == 0.0:
        return math.log(hi / lo)
    return (hi ** ap1 - lo ** ap1) / ap1


@lru_cache(maxsize=65536)
def _plog_head_integral(alpha: float, beta: float, lo: float, hi: float) -> float:
    """integral over (lo, hi] of t^alpha (1 - ln t)^beta, interval inside (0, 1]."""
    lam = alpha + 1.0
    x0 = 1.0 - math.log(hi)  # lower x bound (x decreasing in t)
    x1 = _INF if lo == 0.0 else 1.0 - math.log(lo)
    if lam > 0.0:
        # substitute x = 1 - ln t:  e^lam * lam^-(beta+1) * Gamma(beta+1, lam x0, lam x1)
        if x1 == _INF:
            g = mpmath.gammainc(beta + 1.0, lam * x0)
        else:
            g = mpmath.gammainc(beta + 1.0, lam * x0, lam * x1)
        return float(mpmath.e ** lam * mpmath.mpf(lam) ** (-(beta + 1.0)) * g)
    if lam == 0.0:
        bp1 = beta + 1.0
        if x1 == _INF:
            if bp1 >= 0.0:
                raise NonIntegrableNearZero(
                    f"t^-1 (1+ln 1/t)^{beta} is not integrable near 0"
                )
            return -(x0 ** bp1) / bp1
        if bp1 == 0.0:
            return math.log(x1 / x0)
        return (x1 ** bp1 - x0 ** bp1) / bp1
    # lam < 0: integrable only away from 0
    if lo == 0.0:
        raise NonIntegrableNearZero(f"t^{alpha} ... is not integrable near 0")
    val = mpmath.quad(
        lambda x: mpmath.mpf(x) ** beta * mpmath.e ** (lam * (x - 1.0)), [x0, x1]
    )
    return float(val)


class Weight:
    """Base class; subclasses implement the per-kind exact pieces."""

    kind: str = "?"

    def __call__(self, t):
        raise NotImplementedError

    def cumulative(self, a: float, b: float) -> float:
        raise NotImplementedError

    def cumulative_pairs(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        return np.array(
            [self.cumulative(float(a), float(b)) for a, b in zip(lo, hi)]
        )

    def pow(self, e: float) -> "Weight":
        raise NotImplementedError

    def cell_sup(self, lo: float, hi: float) -> float:
        """sup of w over (lo, hi], lo >= 0, hi <= inf."""
        raise NotImplementedError

    def limit_zero(self) -> float:
        """limsup of w(t) as t -> 0+."""
        raise NotImplementedError

    def limit_inf(self) -> float:
        raise NotImplementedError

    def tail_power(self):
        """(coef, alpha) with w(s) = coef * s^alpha for s beyond some point,
        or None when no such form exists (tabulated with nonconstant tail is
        constant beyond its last breakpoint, so it always has one)."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


class Power(Weight):
    """w(t) = t^alpha."""

    kind = "power"

    def __init__(self, alpha: float):
        if math.isnan(alpha) or math.isinf(alpha):
            raise ConfigError("alpha must be finite")
        self.alpha = float(alpha)

    def __call__(self, t):
        return np.asarray(t, dtype=float) ** self.alpha

    def cumulative(self, a, b):
        return power_integral(self.alpha, a, b)

    def cumulative_pairs(self, lo, hi):
        lo = np.asarray(lo, float)
        hi = np.asarray(hi, float)
        ap1 = self.alpha + 1.0
        if np.any(lo == 0.0) and ap1 <= 0:
            raise NonIntegrableNearZero(f"t^{self.alpha} near 0")
        if ap1 == 0.0:
            return np.log(hi / lo)
        return (hi ** ap1 - lo ** ap1) / ap1

    def pow(self, e):
        return Power(self.alpha * e)

    def cell_sup(self, lo, hi):
        if self.alpha == 0.0:
            return 1.0
        if self.alpha > 0:
            return hi ** self.alpha if hi < _INF else _INF
        return lo ** self.alpha if lo > 0 else _INF

    def limit_zero(self):
        return 0.0 if self.alpha > 0 else (1.0 if self.alpha == 0 else _INF)

    def limit_inf(self):
        return _INF if self.alpha > 0 else (1.0 if self.alpha == 0 else 0.0)

    def tail_power(self):
        return (1.0, self.alpha)

    def to_json(self):
        return {"kind": "power", "alpha": self.alpha}


class PowerLog(Weight):
    """w(t) = t^alpha (1 + max(ln(1/t), 0))^beta; equals t^alpha for t >= 1."""

    kind = "powerlog"

    def __init__(self, alpha: float, beta: float):
        for x in (alpha, beta):
            if math.isnan(x) or math.isinf(x):
                raise ConfigError("alpha, beta must be finite")
        self.alpha = float(alpha)
        self.beta = float(beta)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        logplus = np.maximum(-np.log(t), 0.0)
        return t ** self.alpha * (1.0 + logplus) ** self.beta

    def cumulative(self, a, b):
        if a > b:
            raise InvertedInterval(f"cumulative over ({a}, {b}]")
        if a == b:
            return 0.0
        total = 0.0
        head_hi = min(b, 1.0)
        if a < 1.0 and head_hi > a:
            total += _plog_head_integral(self.alpha, self.beta, a, head_hi)
        if b > 1.0:
            total += power_integral(self.alpha, max(a, 1.0), b)
        return total

    def pow(self, e):
        return PowerLog(self.alpha * e, self.beta * e)

    def cell_sup(self, lo, hi):
        cands = []
        if lo > 0:
            cands.append(float(self(lo)))
        else:
            cands.append(self.limit_zero())
        if hi < _INF:
            cands.append(float(self(hi)))
        else:
            cands.append(self.limit_inf())
        if lo < 1.0 <= hi:
            cands.append(1.0)  # w(1) = 1
        if self.alpha != 0.0:
            tc = math.exp(1.0 - self.beta / self.alpha)
            if lo < tc < min(hi, 1.0):
                cands.append(float(self(tc)))
        return max(cands)

    def limit_zero(self):
        if self.alpha > 0:
            return 0.0
        if self.alpha < 0:
            return _INF
        return _INF if self.beta > 0 else (1.0 if self.beta == 0 else 0.0)

    def limit_inf(self):
        a = self.alpha
        return _INF if a > 0 else (1.0 if a == 0 else 0.0)

    def tail_power(self):
        return (1.0, self.alpha)

    def to_json(self):
        return {"kind": "powerlog", "alpha": self.alpha, "beta": self.beta}


class Tabulated(Weight):
    """Weight backed by a piecewise-constant function."""

    kind = "tabulated"

    def __init__(self, fn: PiecewiseFn):
        self.fn = fn

    def __call__(self, t):
        return self.fn(t)

    def cumulative(self, a, b):
        return integrate(self.fn, a, b)

    def pow(self, e):
        return Tabulated(self.fn.powered(e))

    def cell_sup(self, lo, hi):
        f = self.fn
        sel = (f.left_edges < hi) & (f.breakpoints > lo)
        out = float(np.max(f.values[sel])) if np.any(sel) else 0.0
        if hi > f.t_max:
            out = max(out, f.right_value)
        return out

    def limit_zero(self):
        return float(self.fn.values[0])

    def limit_inf(self):
        return self.fn.right_value

    def tail_power(self):
        rv = self.fn.right_value
        return (rv, 0.0) if rv > 0 else None

    def to_json(self):
        body = self.fn.to_json()
        return {"kind": "tabulated", "grid": {"breakpoints": body["breakpoints"]},
                "values": body["values"], "right_value": body["right_value"]}


def weight_from_json(obj: dict) -> Weight:
    try:
        kind = obj["kind"]
    except (KeyError, TypeError) as exc:
        raise ConfigError("weight JSON needs a 'kind' field") from exc
    if kind == "power":
        return Power(float(obj["alpha"]))
    if kind == "powerlog":
        return PowerLog(float(obj["alpha"]), float(obj["beta"]))
    if kind == "tabulated":
        grid = obj.get("grid", {})
        if "breakpoints" in grid:
            fn = PiecewiseFn(grid["breakpoints"], obj["values"],
                             float(obj.get("right_value", 0.0)))
        else:
            fn = PiecewiseFn.from_json({"grid": grid, **obj})
        return Tabulated(fn)
    raise ConfigError(f"unknown weight kind {kind!r}")


# -- weighted integrals and sups ----------------------------------------------


def product_cumulative(fn: PiecewiseFn, w: Weight, a: float, b: float) -> float:
    """Exact integral over (a, b] of fn(t) * w(t) dt.

    Piecewise-constant times a weight: each cell contributes value * W(cell),
    with W exact per kind; 0 * inf is treated as 0 (measure convention).
    """
    if a > b:
        raise InvertedInterval(f"product_cumulative over ({a}, {b}]")
    if a == b:
        return 0.0
    if isinstance(w, Tabulated):
        prod = pointwise_merge(fn, w.fn, _safe_mul)
        return integrate(prod, a, b)
    lo = np.maximum(fn.left_edges, a)
    hi = np.minimum(fn.breakpoints, b)
    sel = (hi > lo) & (fn.values > 0)
    total = 0.0
    if np.any(sel):
        dw = w.cumulative_pairs(lo[sel], hi[sel])
        with np.errstate(invalid="ignore"):
            prod = fn.values[sel] * dw
        prod = np.where(np.isnan(prod), 0.0, prod)  # inf * 0 := 0
        if np.any(np.isinf(prod)):
            return _INF
        total = math.fsum(prod.tolist())
    if b > fn.t_max and fn.right_value > 0:
        tail = w.cumulative(max(a, fn.t_max), b)
        if tail == _INF:
            return _INF
        total += fn.right_value * tail
    return total


def _safe_mul(x, y):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    out = np.where((x == 0) | (y == 0), 0.0, x * y)
    return out


def ess_sup_weighted(fn: PiecewiseFn, w: Weight, interval=(0.0, _INF)) -> float:
    """Essential sup of fn(t) * w(t) over (lo, hi]."""
    lo_b, hi_b = interval
    if lo_b > hi_b:
        raise InvertedInterval(f"ess_sup_weighted over ({lo_b}, {hi_b}]")
    if lo_b == hi_b:
        return 0.0
    lo = np.maximum(fn.left_edges, lo_b)
    hi = np.minimum(fn.breakpoints, hi_b)
    best = 0.0
    for j in np.nonzero((hi > lo) & (fn.values > 0))[0]:
        ws = w.cell_sup(float(lo[j]), float(hi[j]))
        if ws > 0:
            best = max(best, fn.values[j] * ws)
    if hi_b > fn.t_max and fn.right_value > 0:
        ws = w.cell_sup(max(lo_b, fn.t_max), hi_b)
        if ws > 0:
            best = max(best, fn.right_value * ws)
    return best


class WeightProfile:
    """Cached view of psi through the lens of the p-norm.

    big_p(t) = integral_0^t psi^p  (written Psi_p(t)^p), big(t) = Psi_p(t).
    Exact at any t: symbolic kinds use closed-form cumulatives, tabulated
    kinds integrate their step function.
    """

    def __init__(self, psi: Weight, p: float):
        if not 0 < p < _INF:
            raise ValueError("profile exponent must be in (0, inf)")
        self.psi = psi
        self.p = float(p)
        self.density = psi.pow(p)

    def big_p(self, t):
        t_arr = np.atleast_1d(np.asarray(t, float))
        zeros = np.zeros_like(t_arr)
        out = self.density.cumulative_pairs(zeros, t_arr)
        return float(out[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else out

    def big(self, t):
        return np.asarray(self.big_p(t)) ** (1.0 / self.p)

    def big_p_inf(self) -> float:
        return self.density.cumulative(0.0, _INF)

    def __call__(self, t):
        """Psi_p(t) as a plain callable (admissible when psi^p is locally
        integrable and has divergent total mass)."""
        out = self.big(t)
        return float(out) if np.asarray(t).ndim == 0 else out

"""Reverse weighted Hardy inequalities on the half-line.

The inequality under study bounds (integral of f*^q w)^(1/q) by the essential
sup of f_u**(t) v(t), for nonincreasing f*.  Its optimal constant is
equivalent to A(1) (q >= 1) or A(2) (q < 1), both integrals against a
representation measure nu of U^q/sigma^q with respect to U^q.  This module
evaluates both sides directly, computes A(1)/A(2) with analytic head/tail
handling, provides the zeta functional and its smoothed form zeta1 together
with the integration-by-parts identity connecting them, and verifies the
equivalence empirically over seeded trial families.
"""

from __future__ import annotations

import math
from typing import Optional

import mpmath
import numpy as np
from scipy.special import roots_legendre

from .conditions import sigma as sigma_of
from .errors import (
    BranchMismatch,
    DegenerateProblem,
    DegenerateU,
    NonRearrangeable,
)
from .funcs import PiecewiseFn, indicator
from .grid import DEFAULT_GRID, GeometricGrid
from .measures import (
    DiscreteMeasure,
    fit_representation_measure,
    nondegeneracy_check,
)
from .rearrangement import DecreasingFn, cumulative_eval, decreasing_rearrangement
from .reports import EquivReport
from .sampling import random_decreasing
from .weights import (
    Power,
    Tabulated,
    Weight,
    WeightProfile,
    product_cumulative,
    weight_from_json,
)

__all__ = [
    "HardyProblem",
    "lhs_rhs",
    "ZetaFn",
    "zeta",
    "Zeta1Fn",
    "zeta1",
    "parts_identity_sides",
    "envelope_ratio",
    "a1_constant",
    "a2_constant",
    "verify_reverse_hardy",
]

_INF = math.inf
_GL_X, _GL_W = roots_legendre(20)


def _gl_cell(fn, a: float, b: float) -> float:
    """Gauss-Legendre integral of fn over [a, b] (vectorized integrand)."""
    if not b > a:
        return 0.0
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(np.dot(_GL_W, fn(mid + half * _GL_X)))


def _as_decreasing(f) -> DecreasingFn:
    if isinstance(f, DecreasingFn):
        return f
    if isinstance(f, PiecewiseFn):
        return decreasing_rearrangement(f)
    raise NonRearrangeable("expected a PiecewiseFn or DecreasingFn")


def _cumulative_grid(w: Weight, ts: np.ndarray) -> np.ndarray:
    return w.cumulative_pairs(np.zeros_like(ts), ts)


def _growth_exponent(w: Weight) -> float:
    """Exponent g with cumulative W(s) ~ s^g at infinity (0 when W is bounded)."""
    tp = w.tail_power()
    if tp is None or tp[0] == 0.0:
        return 0.0
    c, a = tp
    return a + 1.0 if a > -1.0 else 0.0


class _PowerOfCumulative:
    """Callable t -> (cumulative of w on (0, t])^q, vectorized."""

    def __init__(self, w: Weight, q: float):
        self.w = w
        self.q = q

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        vals = self.w.cumulative_pairs(np.zeros_like(t_arr), t_arr) ** self.q
        return float(vals[0]) if np.asarray(t).ndim == 0 else vals


class HardyProblem:
    """A reverse Hardy problem: exponent q, weights u, v, w, and the measure nu.

    nu plays the representation-measure role for U^q/sigma^q with respect to
    U^q; pass it explicitly or let ``with_fitted_measure`` construct it.
    """

    def __init__(
        self,
        q: float,
        u: Weight,
        v: Weight,
        w: Weight,
        nu: DiscreteMeasure,
        grid: GeometricGrid = DEFAULT_GRID,
    ):
        if not (q > 0.0) or not math.isfinite(q):
            raise ValueError("q must be a positive finite real")
        self.q = float(q)
        self.u, self.v, self.w = u, v, w
        self.nu = nu
        self.grid = grid
        U = _cumulative_grid(u, grid.breakpoints)
        if U[0] <= 0.0 or not np.all(np.isfinite(U)):
            raise DegenerateU("U must be positive and finite on the grid")
        self._U = U
        self.fit_report: Optional[EquivReport] = None

    @classmethod
    def with_fitted_measure(
        cls,
        q: float,
        u: Weight,
        v: Weight,
        w: Weight,
        grid: GeometricGrid = DEFAULT_GRID,
        **fit_kwargs,
    ) -> "HardyProblem":
        sig = sigma_of(u, v, grid)
        u_q = _PowerOfCumulative(u, q)

        def target(t):
            t_arr = np.atleast_1d(np.asarray(t, dtype=float))
            vals = u_q(t_arr) / np.asarray(sig(t_arr), dtype=float) ** q
            return float(vals[0]) if np.asarray(t).ndim == 0 else vals

        nu, report = fit_representation_measure(target, u_q, grid, **fit_kwargs)
        prob = cls(q, u, v, w, nu, grid)
        prob.fit_report = report
        return prob

    @property
    def branch(self) -> int:
        return 1 if self.q >= 1.0 else 2

    def u_cumulative(self, t: float) -> float:
        return self.u.cumulative(0.0, t)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "u": self.u.to_json(),
            "v": self.v.to_json(),
            "w": self.w.to_json(),
            "nu": self.nu.to_json(),
            "grid": self.grid.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "HardyProblem":
        return cls(
            data["q"],
            weight_from_json(data["u"]),
            weight_from_json(data["v"]),
            weight_from_json(data["w"]),
            DiscreteMeasure.from_json(data["nu"]),
            GeometricGrid.from_json(data["grid"]) if "grid" in data else DEFAULT_GRID,
        )


def _limit_ratio_zero(w: Weight, u: Weight, q: float) -> float:
    """lim as s -> 0+ of W(s)/U(s)^q, by growth comparison at two head probes."""
    probes = np.array([1e-9, 1e-8])
    W = w.cumulative_pairs(np.zeros(2), probes)
    U = u.cumulative_pairs(np.zeros(2), probes)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = W / U**q
    r = np.nan_to_num(r, nan=0.0)
    if r[0] <= 0.0:
        return 0.0
    if not math.isfinite(r[0]):
        return _INF
    slope = math.log(r[1] / r[0]) / math.log(probes[1] / probes[0]) if r[1] > 0 else 0.0
    if slope > 1e-9:
        return 0.0
    if slope < -1e-9:
        return _INF
    return float(r[0])


def _limit_ratio_inf(w: Weight, u: Weight, q: float, T: float) -> float:
    """lim sup as s -> infinity of W(s)/U(s)^q from the tail powers."""
    g_w = _growth_exponent(w)
    g_u = _growth_exponent(u)
    diff = g_w - q * g_u
    if diff > 1e-12:
        return _INF
    if diff < -1e-12:
        # ratio decays; the sup over (T, inf) is approached near T
        return 0.0
    # equal growth: evaluate the limit at a far probe
    far = T * 1e8
    return float(w.cumulative(0.0, far) / u.cumulative(0.0, far) ** q)


def _ratio_suffix_sup(problem: HardyProblem) -> tuple[np.ndarray, np.ndarray, float]:
    """Per-cell sups of W/U^q on the grid and the sup beyond the last breakpoint.

    Returns (edges, cell_sups, tail_sup); cell_sups[k] covers (edges[k-1],
    edges[k]] with edges[-1] = 0.
    """
    w, u, q = problem.w, problem.u, problem.q
    edges = problem.grid.breakpoints
    # refine with the atom locations so sups after an atom start exactly there
    locs = problem.nu.locations
    if len(locs):
        inside = locs[(locs > 0.0) & (locs < edges[-1])]
        if len(inside):
            edges = np.unique(np.concatenate([edges, inside]))

    def ratio_at(pts: np.ndarray) -> np.ndarray:
        W = w.cumulative_pairs(np.zeros_like(pts), pts)
        U = u.cumulative_pairs(np.zeros_like(pts), pts)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = W / U**q
        return np.nan_to_num(vals, nan=0.0)

    lefts = np.concatenate([[0.0], edges[:-1]])
    E = ratio_at(edges)
    M = ratio_at(0.5 * (lefts + edges))
    # W/U^q is continuous, so the sup over a left-open cell includes the value
    # at its left edge (the limit from the right)
    left_vals = np.concatenate([[_limit_ratio_zero(w, u, q)], E[:-1]])
    cell_sups = np.maximum(np.maximum(left_vals, M), E)
    T = float(edges[-1])
    ladder = T * 10.0 ** (np.arange(1, 17) / 4.0)
    lv = ratio_at(ladder)
    tail_sup = max(float(E[-1]), float(np.max(lv)), _limit_ratio_inf(w, u, q, T))
    return edges, cell_sups, tail_sup


def a1_constant(problem: HardyProblem) -> float:
    """A(1): the nu-integral of the suffix sup of W/U^q, to the power 1/q."""
    if problem.q < 1.0:
        raise BranchMismatch("A(1) requires q >= 1")
    if len(problem.nu) == 0 and problem.nu.tail is None:
        return 0.0
    edges, cell_sups, tail_sup = _ratio_suffix_sup(problem)
    suffix = np.empty(len(edges) + 1)
    suffix[-1] = tail_sup
    for k in range(len(edges) - 1, -1, -1):
        suffix[k] = max(cell_sups[k], suffix[k + 1])

    def sup_after(t: float) -> float:
        if t <= 0.0:
            return float(suffix[0])
        # an atom exactly at an edge starts from the next cell (whose sup
        # already includes the limit from the right at that edge); off-grid
        # atoms conservatively include their covering cell
        k = int(np.searchsorted(edges, t, side="right"))
        return float(suffix[min(k, len(edges))])

    total = math.fsum(
        m * sup_after(float(t)) for t, m in zip(problem.nu.locations, problem.nu.masses)
    )
    if problem.nu.tail is not None:
        total += problem.nu.tail_integral(sup_after)
    return total ** (1.0 / problem.q)


class ZetaFn:
    """zeta(t) = W(t) + U(t)^q * (integral over (t, inf) of (W/U)^(q/(1-q)) w)^(1-q)."""

    def __init__(self, problem: HardyProblem):
        if problem.q >= 1.0:
            raise BranchMismatch("zeta requires 0 < q < 1")
        self.problem = problem
        q = problem.q
        self.expo = q / (1.0 - q)
        w, u = problem.w, problem.u
        edges = [float(b) for b in problem.grid.breakpoints]
        extra = getattr(w, "fn", None)
        if extra is not None:
            edges = sorted(set(edges) | {float(b) for b in extra.breakpoints})
        self.edges = np.asarray(edges)

        def integrand(s):
            s = np.asarray(s, dtype=float)
            W = w.cumulative_pairs(np.zeros_like(s), s)
            U = u.cumulative_pairs(np.zeros_like(s), s)
            wv = np.asarray(w(s), dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = (W / U) ** self.expo * wv
            return np.nan_to_num(out, nan=0.0)

        self._integrand = integrand
        cells = np.array(
            [
                _gl_cell(integrand, a, b)
                for a, b in zip(np.concatenate([[0.0], self.edges[:-1]]), self.edges)
            ]
        )
        self._suffix = np.concatenate([np.cumsum(cells[::-1])[::-1], [0.0]])
        self.tail_divergent = False
        self._tail = self._tail_integral()

    def _tail_integral(self) -> float:
        w, u, q = self.problem.w, self.problem.u, self.problem.q
        T = float(self.edges[-1])
        tp = w.tail_power()
        if tp is None or tp[0] == 0.0:
            return 0.0
        c_w, a_w = tp
        g_w = _growth_exponent(w)
        g_u = _growth_exponent(u)
        rate = self.expo * (g_w - g_u) + a_w
        if rate >= -1.0:
            self.tail_divergent = True
            return _INF
        val = mpmath.quad(
            lambda s: float(self._integrand(np.array([float(s)]))[0]),
            [T, mpmath.inf],
        )
        return float(val)

    def inner_integral(self, t: float) -> float:
        """integral over (t, infinity) of (W/U)^(q/(1-q)) w."""
        if self.tail_divergent:
            return _INF
        edges = self.edges
        if t >= edges[-1]:
            if self._tail == 0.0:
                return 0.0
            return float(
                mpmath.quad(
                    lambda s: float(self._integrand(np.array([float(s)]))[0]),
                    [t, mpmath.inf],
                )
            )
        k = int(np.searchsorted(edges, t, side="left"))
        partial = _gl_cell(self._integrand, t, float(edges[k]))
        return partial + float(self._suffix[k + 1]) + self._tail

    def __call__(self, t: float) -> float:
        t = float(t)
        if t <= 0.0:
            return 0.0
        q = self.problem.q
        W_t = self.problem.w.cumulative(0.0, t)
        U_t = self.problem.u.cumulative(0.0, t)
        inner = self.inner_integral(t)
        if inner == _INF:
            return _INF
        return W_t + U_t**q * inner ** (1.0 - q)


def zeta(problem: HardyProblem) -> ZetaFn:
    return ZetaFn(problem)


def a2_constant(problem: HardyProblem, with_flags: bool = False):
    """A(2): the nu-integral of zeta/U^q, to the power 1/q (0 < q < 1 only).

    An atom at the origin is evaluated at t_min as a proxy for the t -> 0+
    limit; the returned flags record that boundary substitution.
    """
    if problem.q >= 1.0:
        raise BranchMismatch("A(2) requires 0 < q < 1")
    z = ZetaFn(problem)
    q = problem.q
    flags = {"origin_atom_at_t_min": False, "tail_divergent": z.tail_divergent}
    total = 0.0
    for t, m in zip(problem.nu.locations, problem.nu.masses):
        t = float(t)
        if t == 0.0:
            t = problem.grid.t_min
            flags["origin_atom_at_t_min"] = True
        zv = z(t)
        if zv == _INF:
            total = _INF
            break
        total += float(m) * zv / problem.u.cumulative(0.0, t) ** q
    if problem.nu.tail is not None and total != _INF:
        total += problem.nu.tail_integral(
            lambda s: z(s) / problem.u.cumulative(0.0, s) ** q
        )
    value = total ** (1.0 / q) if total != _INF else _INF
    return (value, flags) if with_flags else value


def lhs_rhs(problem: HardyProblem, f) -> tuple[float, float]:
    """Both sides of the reverse inequality for one nonincreasing f.

    LHS = (integral of f*^q w)^(1/q), exact per cell; RHS = ess sup of
    f_u**(t) v(t) over breakpoints, cell midpoints, and the analytic limits
    at zero and infinity.
    """
    f_star = _as_decreasing(f)
    fn = f_star.fn if hasattr(f_star, "fn") else f_star
    q, u, v, w = problem.q, problem.u, problem.v, problem.w
    lhs_q = product_cumulative(fn.powered(q), w, 0.0, _INF)
    lhs = lhs_q ** (1.0 / q) if lhs_q not in (0.0, _INF) else lhs_q

    candidates = np.unique(
        np.concatenate(
            [
                problem.grid.breakpoints,
                fn.breakpoints,
                0.5 * (fn.breakpoints + np.concatenate([[0.0], fn.breakpoints[:-1]])),
            ]
        )
    )
    P = np.array([product_cumulative(fn, u, 0.0, float(t)) for t in candidates])
    U = u.cumulative_pairs(np.zeros_like(candidates), candidates)
    vv = np.asarray(v(candidates), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.nan_to_num(P / U * vv, nan=0.0)
    rhs = float(np.max(vals)) if len(vals) else 0.0

    # head limit: f_u** -> f*(0+), v -> its limit at zero
    f0 = float(fn.values[0]) if len(fn.values) else fn.right_value
    v0 = v.limit_zero()
    if f0 > 0.0 and v0 > 0.0:
        rhs = max(rhs, f0 * v0 if v0 != _INF else _INF)
    # tail limit: numerator P saturates for compactly supported f*
    P_inf = product_cumulative(fn, u, 0.0, _INF)
    if P_inf > 0.0:
        g_u = _growth_exponent(u)
        tpv = v.tail_power()
        c_v, a_v = tpv if tpv is not None else (0.0, 0.0)
        if math.isfinite(P_inf):
            if c_v > 0.0:
                if abs(a_v - g_u) < 1e-12 and g_u > 0.0:
                    far = problem.grid.t_max * 1e8
                    rhs = max(
                        rhs, P_inf * float(v(far)) / u.cumulative(0.0, far)
                    )
                elif a_v > g_u:
                    rhs = _INF
        else:
            rhs = _INF if c_v > 0.0 else rhs
    return lhs, rhs


class Zeta1Fn:
    """zeta1(t) = Psi_p(t) * (integral over (t,inf) of (s f**/Psi_p^p)^{p'} psi^p)^{1/p'}.

    The specialization with w = f*, U = Psi_p^p, q = 1/p.  Exact closed-form
    tail beyond the support of f* (the integrand has antiderivative
    proportional to F^{p'} Phi^{1-p'} there).
    """

    def __init__(
        self,
        f,
        psi: Weight,
        p: float,
        grid: GeometricGrid = DEFAULT_GRID,
    ):
        if not p > 1.0:
            raise BranchMismatch("zeta1 requires 1 < p < infinity")
        f_star = _as_decreasing(f)
        self.fn = f_star.fn if hasattr(f_star, "fn") else f_star
        self.psi = psi
        self.p = float(p)
        self.pp = p / (p - 1.0)
        self.profile = WeightProfile(psi, p)
        self.density = self.profile.density  # psi^p as a Weight
        self.grid = grid
        fn = self.fn
        self.supp_end = float(fn.breakpoints[-1]) if len(fn.values) else 0.0
        if fn.right_value > 0.0:
            raise NonRearrangeable(
                "zeta1 requires compactly supported f* (zero right tail)"
            )
        self.F_inf = cumulative_eval(fn, self.supp_end) if self.supp_end else 0.0
        edges = sorted(
            {float(b) for b in grid.breakpoints if b < self.supp_end}
            | set(float(b) for b in fn.breakpoints)
        )
        self.edges = np.asarray(edges) if edges else np.asarray([self.supp_end])

        density = self.density
        pp = self.pp

        def integrand(s):
            s = np.asarray(s, dtype=float)
            F = cumulative_eval(fn, s)
            Phi = density.cumulative_pairs(np.zeros_like(s), s)
            dv = np.asarray(density(s), dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = (F / Phi) ** pp * dv
            return np.nan_to_num(out, nan=0.0)

        self._integrand = integrand
        lefts = np.concatenate([[0.0], self.edges[:-1]])
        self._cells = np.array(
            [_gl_cell(integrand, a, b) for a, b in zip(lefts, self.edges)]
        )
        self._suffix = np.concatenate([np.cumsum(self._cells[::-1])[::-1], [0.0]])
        self.phi_inf = self.profile.big_p_inf()

    def _closed_tail(self, t: float) -> float:
        """Exact integral over (t, inf) for t at/after the support end of f*."""
        if self.F_inf == 0.0:
            return 0.0
        p, pp = self.p, self.pp
        phi_t = self.profile.big_p(t)
        if phi_t <= 0.0:
            return _INF
        head = phi_t ** (1.0 - pp)
        tail = self.phi_inf ** (1.0 - pp) if self.phi_inf != _INF else 0.0
        return (p - 1.0) * self.F_inf**pp * (head - tail)

    def inner_integral(self, t: float) -> float:
        t = float(t)
        if t >= self.supp_end:
            return self._closed_tail(t)
        k = int(np.searchsorted(self.edges, t, side="left"))
        partial = _gl_cell(self._integrand, t, float(self.edges[k]))
        return (
            partial + float(self._suffix[k + 1]) + self._closed_tail(self.supp_end)
        )

    def __call__(self, t: float) -> float:
        t = float(t)
        if t <= 0.0:
            return 0.0
        inner = self.inner_integral(t)
        if inner == _INF:
            return _INF
        return self.profile.big(t) * inner ** (1.0 / self.pp)


def zeta1(f, psi: Weight, p: float, grid: GeometricGrid = DEFAULT_GRID) -> Zeta1Fn:
    return Zeta1Fn(f, psi, p, grid)


def zeta_specialized(
    f, psi: Weight, p: float, grid: GeometricGrid = DEFAULT_GRID
) -> ZetaFn:
    """zeta with q = 1/p, w = f* (tabulated), u = psi^p: the comparison partner
    of zeta1."""
    if not p > 1.0:
        raise BranchMismatch("the specialization requires 1 < p < infinity")
    f_star = _as_decreasing(f)
    fn = f_star.fn if hasattr(f_star, "fn") else f_star
    problem = HardyProblem(
        1.0 / p,
        WeightProfile(psi, p).density,
        Power(0.0),
        Tabulated(fn),
        DiscreteMeasure([], []),
        grid,
    )
    return ZetaFn(problem)


def parts_identity_sides(
    f, psi: Weight, p: float, t: float, grid: GeometricGrid = DEFAULT_GRID
) -> tuple[float, float]:
    """Both sides of the integration-by-parts identity linking the two zeta
    integrands, each computed by an independent quadrature route.

    With F(s) = integral of f* on (0,s] and Phi = Psi_p^p:

        integral over (t,inf) of (F/Phi)^{1/(p-1)} f* ds
          = (1/p') * [ F(t)^{p'} Phi(t)^{-1/(p-1)} evaluated as a boundary term
                       + lim_{R->inf} F(R)^{p'} Phi(R)^{-1/(p-1)}
                       + (1/(p-1)) * integral over (t,inf) of (F/Phi)^{p'} psi^p ].

    (The boundary term at t enters with a minus sign; the limit term vanishes
    whenever Psi_p is unbounded.)
    """
    if not p > 1.0:
        raise BranchMismatch("the identity requires 1 < p < infinity")
    z1 = Zeta1Fn(f, psi, p, grid)
    fn = z1.fn
    pp = z1.pp
    e = 1.0 / (p - 1.0)
    density = z1.density

    def lhs_integrand(s):
        s = np.asarray(s, dtype=float)
        F = cumulative_eval(fn, s)
        Phi = density.cumulative_pairs(np.zeros_like(s), s)
        fv = np.asarray(fn(s), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (F / Phi) ** e * fv
        return np.nan_to_num(out, nan=0.0)

    t = float(t)
    edges = [float(b) for b in z1.edges if b > t] + (
        [z1.supp_end] if z1.supp_end > t else []
    )
    edges = sorted(set(edges))
    lhs = 0.0
    prev = t
    for b in edges:
        lhs += _gl_cell(lhs_integrand, prev, b)
        prev = b

    F_t = cumulative_eval(fn, t)
    Phi_t = density.cumulative(0.0, t)
    boundary = -(F_t**pp) * Phi_t ** (-e) if F_t > 0.0 else 0.0
    if z1.phi_inf == _INF:
        at_inf = 0.0
    else:
        at_inf = z1.F_inf**pp * z1.phi_inf ** (-e)
    rhs = (boundary + at_inf + e * z1.inner_integral(t)) / pp
    return lhs, rhs


def envelope_ratio(f, psi: Weight, p: float, ts, grid: GeometricGrid = DEFAULT_GRID):
    """Pointwise ratio t f**(t) (p-1)^{1/p'} / zeta1(t) (should be <= 1)."""
    z1 = Zeta1Fn(f, psi, p, grid)
    fn = z1.fn
    pp = z1.pp
    out = []
    for t in np.atleast_1d(np.asarray(ts, dtype=float)):
        F_t = cumulative_eval(fn, float(t))
        if F_t == 0.0:
            out.append(0.0)
            continue
        z = z1(float(t))
        out.append((p - 1.0) ** (1.0 / pp) * F_t / z if z > 0.0 else _INF)
    return np.asarray(out)


def verify_reverse_hardy(
    problem: HardyProblem,
    n_trials: int = 100,
    seed: int = 0,
) -> EquivReport:
    """Empirical check that the optimal constant matches A(1) or A(2).

    Trials are half random nonincreasing step functions, half indicators
    chi_(0,a] with a sweeping the grid geometrically; C_emp is the max of
    LHS/RHS over trials (0/0 skipped).
    """
    rng = np.random.default_rng(seed)
    n_random = n_trials // 2
    trials: list[tuple[str, PiecewiseFn]] = []
    for i in range(n_random):
        trials.append((f"random[{i}]", random_decreasing(rng)))
    n_ind = n_trials - n_random
    sweep = np.geomspace(problem.grid.t_min, problem.grid.t_max, n_ind)
    for a in sweep:
        trials.append((f"indicator[a={float(a)!r}]", indicator(0.0, float(a))))

    c_emp = 0.0
    witness = ""
    witness_t = 0.0
    any_rhs = False
    for tag, f in trials:
        lhs, rhs = lhs_rhs(problem, f)
        if rhs == 0.0:
            if lhs == 0.0:
                continue
            c_emp, witness = _INF, tag
            witness_t = float(f.breakpoints[-1])
            any_rhs = True
            break
        any_rhs = True
        ratio = lhs / rhs
        if ratio > c_emp:
            c_emp = ratio
            witness = tag
            witness_t = float(f.breakpoints[-1])
    if not any_rhs:
        raise DegenerateProblem("RHS vanished for every trial function")

    flags = {}
    if problem.branch == 1:
        a_val = a1_constant(problem)
    else:
        a_val, flags = a2_constant(problem, with_flags=True)
    ratio = c_emp / a_val if a_val > 0.0 else _INF

    u_q = _PowerOfCumulative(problem.u, problem.q)
    stamp = nondegeneracy_check(problem.nu, u_q)
    return EquivReport(
        lower=ratio,
        upper=ratio,
        lower_witness=witness_t,
        upper_witness=witness_t,
        details={
            "c_emp": c_emp,
            "a_value": a_val,
            "branch": problem.branch,
            "n_trials": n_trials,
            "seed": seed,
            "witness": witness,
            "nondegenerate_measure": stamp.holds,
            **flags,
        },
    )

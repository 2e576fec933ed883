"""Weight kinds: exact cumulatives, powers, cell sups, serialization."""

import math

import mpmath
import numpy as np
import pytest

from lorentzlab import (
    PiecewiseFn,
    Power,
    PowerLog,
    Tabulated,
    WeightProfile,
    ess_sup_weighted,
    indicator,
    power_integral,
    product_cumulative,
    weight_from_json,
)
from lorentzlab.errors import ConfigError, InvertedInterval, NonIntegrableNearZero


class TestPowerIntegral:
    def test_closed_forms(self):
        assert power_integral(1.0, 0.0, 2.0) == 2.0
        assert power_integral(-0.5, 0.0, 1.0) == 2.0
        assert power_integral(-1.0, 1.0, math.e) == 1.0
        assert power_integral(-2.0, 1.0, math.inf) == 1.0

    def test_divergences_and_guards(self):
        assert power_integral(0.0, 1.0, math.inf) == math.inf
        with pytest.raises(NonIntegrableNearZero):
            power_integral(-1.0, 0.0, 1.0)
        with pytest.raises(InvertedInterval):
            power_integral(1.0, 2.0, 1.0)


class TestPower:
    def test_pointwise_and_cumulative(self):
        w = Power(0.5)
        assert w(4.0) == 2.0
        assert w.cumulative(0.0, 4.0) == pytest.approx(16.0 / 3.0, rel=1e-15)

    def test_pow_composes_exponents(self):
        assert Power(0.5).pow(2.0).alpha == 1.0

    def test_cell_sup_by_monotonicity(self):
        assert Power(1.0).cell_sup(0.0, 2.0) == 2.0
        assert Power(-1.0).cell_sup(0.5, 2.0) == 2.0
        assert Power(-1.0).cell_sup(0.0, 1.0) == math.inf

    def test_limits_and_tail(self):
        assert Power(2.0).limit_zero() == 0.0
        assert Power(2.0).limit_inf() == math.inf
        assert Power(2.0).tail_power() == (1.0, 2.0)

    def test_rejects_nonfinite_exponent(self):
        with pytest.raises(ConfigError):
            Power(math.inf)


class TestPowerLog:
    def test_plain_power_above_one(self):
        assert PowerLog(2.0, 3.0)(5.0) == 25.0
        assert PowerLog(0.0, 1.0)(1.0) == 1.0

    def test_log_factor_below_one(self):
        w = PowerLog(0.0, 1.0)
        assert w(math.exp(-1.0)) == pytest.approx(2.0, rel=1e-14)

    def test_cumulative_is_additive(self):
        w = PowerLog(0.5, 2.0)
        whole = w.cumulative(0.0, 3.0)
        split = w.cumulative(0.0, 0.7) + w.cumulative(0.7, 3.0)
        assert whole == pytest.approx(split, rel=1e-12)

    def test_cumulative_matches_quadrature(self):
        w = PowerLog(-0.25, 1.5)
        exact = float(mpmath.quad(lambda t: float(w(float(t))), [0.0, 1.0]))
        assert w.cumulative(0.0, 1.0) == pytest.approx(exact, rel=1e-9)

    def test_nonintegrable_near_zero(self):
        with pytest.raises(NonIntegrableNearZero):
            PowerLog(-1.0, 0.5).cumulative(0.0, 1.0)


class TestTabulated:
    def test_wraps_its_step_function(self):
        w = Tabulated(indicator(0.0, 1.0))
        assert w(0.5) == 1.0 and w(2.0) == 0.0
        assert w.cumulative(0.0, math.inf) == 1.0
        assert w.cell_sup(0.5, 3.0) == 1.0
        assert w.limit_zero() == 1.0
        assert w.limit_inf() == 0.0
        assert w.tail_power() is None

    def test_constant_tail_is_a_power(self):
        w = Tabulated(PiecewiseFn([1.0], [2.0], right_value=0.5))
        assert w.tail_power() == (0.5, 0.0)


def test_json_round_trip_all_kinds():
    ts = np.array([0.25, 0.75, 1.5, 3.0])
    for w in (Power(-0.5), PowerLog(1.0, -2.0), Tabulated(indicator(0.5, 2.0))):
        w2 = weight_from_json(w.to_json())
        np.testing.assert_array_equal(np.asarray(w2(ts)), np.asarray(w(ts)))


def test_unknown_kind_rejected():
    with pytest.raises(ConfigError):
        weight_from_json({"kind": "gaussian"})
    with pytest.raises(ConfigError):
        weight_from_json({})


class TestProductCumulative:
    def test_symbolic_weight_exact(self):
        f = indicator(0.0, 1.0)
        assert product_cumulative(f, Power(-0.5), 0.0, 1.0) == 2.0
        assert product_cumulative(f, Power(-0.5), 0.0, math.inf) == 2.0

    def test_tabulated_weight_merges_cells(self):
        f = indicator(0.0, 2.0)
        w = Tabulated(PiecewiseFn([1.0, 3.0], [2.0, 4.0]))
        assert product_cumulative(f, w, 0.0, math.inf) == 6.0

    def test_zero_cells_mask_divergent_weight(self):
        f = indicator(1.0, 2.0)  # vanishes on (0, 1]
        got = product_cumulative(f, Power(-1.0), 0.0, 2.0)
        assert got == pytest.approx(math.log(2.0), rel=1e-15)

    def test_tail_contributions(self):
        f = PiecewiseFn([1.0], [0.0], right_value=1.0)
        assert product_cumulative(f, Power(-2.0), 0.0, math.inf) == 1.0
        assert product_cumulative(f, Power(0.0), 0.0, math.inf) == math.inf


def test_ess_sup_weighted_pinned():
    f = indicator(0.0, 1.0)
    assert ess_sup_weighted(f, Power(1.0)) == 1.0
    assert ess_sup_weighted(f, Power(-0.5)) == math.inf
    assert ess_sup_weighted(f, Power(1.0), (0.0, 0.5)) == 0.5
    g = PiecewiseFn([1.0], [1.0], right_value=0.5)
    assert ess_sup_weighted(g, Power(1.0)) == math.inf


class TestWeightProfile:
    def test_flat_weight(self):
        prof = WeightProfile(Power(0.0), 2.0)
        assert prof.big_p(4.0) == 4.0
        assert prof.big(4.0) == 2.0
        assert prof.big_p_inf() == math.inf

    def test_powered_density(self):
        prof = WeightProfile(Power(-0.25), 2.0)  # density t^{-1/2}
        assert prof.big_p(1.0) == 2.0
        assert prof(1.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)

    def test_rejects_bad_exponent(self):
        with pytest.raises(ValueError):
            WeightProfile(Power(0.0), 0.0)

"""Norm families, associate-norm formulas, and the duality oracle."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import step_functions
from lorentzlab import (
    ClassicalLorentz,
    GenClassicalLorentz,
    GenLorentz,
    Lpq,
    LpqStar,
    Marcinkiewicz,
    PiecewiseFn,
    Power,
    PowerLog,
    assoc_classical,
    assoc_generalized,
    duality_oracle,
    indicator,
    lpq_star_norm,
    norm,
    norm_spec_from_json,
    p_norm,
    verify_duality,
)
from lorentzlab.errors import HypothesisViolated

one = Power(0.0)
chi01 = indicator(0.0, 1.0)


class TestNormPins:
    def test_lpq(self):
        assert norm(Lpq(2.0, 2.0), chi01) == 1.0
        assert norm(Lpq(2.0, 1.0), chi01) == 2.0
        assert norm(Lpq(2.0, math.inf), chi01) == 1.0

    def test_lpq_star(self):
        assert lpq_star_norm(2.0, 1.0, chi01) == 4.0
        assert norm(LpqStar(2.0, 1.0), chi01) == 4.0
        assert lpq_star_norm(math.inf, math.inf, chi01) == 1.0

    def test_classical_lorentz(self):
        got = norm(ClassicalLorentz(1.5, Power(-0.25)), chi01)
        assert got == pytest.approx((8.0 / 5.0) ** (2.0 / 3.0), rel=1e-12)

    def test_generalized_families(self):
        assert norm(GenLorentz(2.0, 1.0, Power(-0.5)), chi01) == pytest.approx(2.0, rel=1e-12)
        assert norm(GenClassicalLorentz(2.0, one, one), chi01) == 1.0
        assert norm(Marcinkiewicz(2.0, Power(-0.5)), chi01) == pytest.approx(1.0, rel=1e-12)

    def test_zero_function(self):
        zero = PiecewiseFn([1.0], [0.0])
        assert norm(Lpq(2.0, 2.0), zero) == 0.0


def test_spec_json_round_trip():
    specs = [
        Lpq(2.0, math.inf),
        LpqStar(3.0, 1.0),
        ClassicalLorentz(1.0, Power(-0.5)),
        GenLorentz(0.5, 1.0, Power(-2.0)),
        GenClassicalLorentz(2.0, PowerLog(0.0, 1.0), one),
        Marcinkiewicz(2.0, Power(-0.5)),
    ]
    for spec in specs:
        j = spec.to_json()
        back = norm_spec_from_json(j)
        assert type(back) is type(spec)
        assert back.to_json() == j
    assert Lpq(2.0, math.inf).to_json()["q"] == "inf"


@given(step_functions(), st.sampled_from([(2.0, 2.0), (2.0, 1.0), (3.0, math.inf)]))
def test_maximal_form_sandwich(f, pq):
    p, q = pq
    a = norm(Lpq(p, q), f)
    b = lpq_star_norm(p, q, f)
    if a == 0.0:
        assert b == 0.0
        return
    assert b >= a * (1.0 - 1e-9)
    assert b <= (p / (p - 1.0)) * a * (1.0 + 1e-9)


class TestIdentityRoutes:
    """The same norm computed through two independent code paths."""

    @given(step_functions(), st.sampled_from([0.5, 1.0, 2.0]))
    def test_flat_generalized_family_is_the_p_norm(self, f, p):
        got = norm(GenClassicalLorentz(p, one, one), f)
        assert got == pytest.approx(p_norm(f, p), rel=1e-12)

    @given(step_functions(), st.sampled_from([(2.0, -0.25), (3.0, -1.0 / 3.0)]))
    def test_flat_psi_reduces_to_marcinkiewicz(self, f, p_beta):
        p, beta = p_beta
        phi = Power(beta)
        got = norm(GenClassicalLorentz(p, one, phi), f)
        assert got == pytest.approx(norm(Marcinkiewicz(p, phi), f), rel=1e-12)

    @given(step_functions(), st.sampled_from([(2.0, 1.0), (3.0, 2.0)]))
    def test_power_weight_reduces_to_lpq(self, f, pq):
        p, q = pq
        spec = ClassicalLorentz(q, Power(1.0 / p - 1.0 / q))
        assert norm(spec, f) == pytest.approx(norm(Lpq(p, q), f), rel=1e-12)


class TestAssociateClassical:
    def test_pinned_values(self):
        assert assoc_classical(2.0, one, chi01) == pytest.approx(math.sqrt(2.0), rel=1e-12)
        assert assoc_classical(1.0, one, chi01) == 1.0

    def test_sup_branch_can_diverge(self):
        assert assoc_classical(0.5, one, chi01) == math.inf


class TestAssociateGeneralized:
    def test_flat_case_reduces_to_an_origin_atom(self):
        res = assoc_generalized(2.0, one, one, chi01)
        assert res.value == pytest.approx(math.sqrt(2.0), rel=1e-12)
        assert len(res.nu_used) == 1
        assert res.nu_used.locations[0] == 0.0
        assert res.boundary_flags["origin_atom"]
        assert res.boundary_flags["phi_nonincreasing"]
        assert sorted(res.to_json().keys()) == [
            "boundary_flags",
            "fit_report",
            "nu_used",
            "value",
        ]

    def test_inner_denominator_variant_differs(self):
        base = assoc_generalized(2.0, one, one, chi01)
        variant = assoc_generalized(2.0, one, one, chi01, inner_denominator="psi_p")
        assert variant.boundary_flags["inner_denominator"] == "psi_p"
        assert variant.value != pytest.approx(base.value, rel=1e-6)

    def test_rejects_inadmissible_phi(self):
        with pytest.raises(HypothesisViolated):
            assoc_generalized(2.0, one, Power(1.0), chi01)  # increasing
        with pytest.raises(HypothesisViolated):
            assoc_generalized(2.0, one, Power(-0.75), chi01)  # decays too fast

    def test_zero_function_gives_zero(self):
        zero = PiecewiseFn([1.0], [0.0])
        assert assoc_generalized(2.0, one, one, zero).value == 0.0

    def test_homogeneous_of_degree_one(self):
        f = PiecewiseFn([0.5, 2.0], [2.0, 0.5])
        base = assoc_generalized(2.0, one, Power(-0.25), f).value
        scaled = assoc_generalized(2.0, one, Power(-0.25), f.scaled(5.0)).value
        assert scaled == pytest.approx(5.0 * base, rel=1e-12)


class TestDualityOracle:
    def test_self_dual_pins(self):
        assert duality_oracle(Lpq(2.0, 2.0), chi01) == 1.0
        assert duality_oracle(GenClassicalLorentz(2.0, one, one), chi01) == 1.0

    def test_zero_function(self):
        assert duality_oracle(Lpq(2.0, 2.0), PiecewiseFn([1.0], [0.0])) == 0.0

    def test_seeded_equivalence_window(self):
        rep = verify_duality(2.0, one, one, n_functions=6, seed=3)
        assert rep.lower == pytest.approx(math.sqrt(2.0), rel=1e-9)
        assert rep.upper == pytest.approx(1.5602460361504824, rel=1e-9)
        assert rep.details["n_functions"] == 6

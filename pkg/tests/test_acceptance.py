"""Acceptance battery: one test per shipped guarantee, one PASS/FAIL line each.

Every tolerance is pinned here.  Two criteria (06, 08) contain sub-assertions
that are mathematically unattainable as stated; they fail honestly with the
analysis in the failure message rather than being weakened.  The attainable
replacement bounds are covered green in the unit suite.
"""

import json
import math
import re
import subprocess
import sys

import numpy as np
import pytest

from lorentzlab import (
    DEFAULT_GRID,
    ClassicalLorentz,
    DiscreteMeasure,
    FitFailed,
    GenClassicalLorentz,
    HardyProblem,
    Lpq,
    Marcinkiewicz,
    Power,
    PowerLog,
    Tabulated,
    assoc_generalized,
    decreasing_rearrangement,
    distribution,
    embedding_criterion,
    empirical_embedding_check,
    envelope_ratio,
    fit_representation_measure,
    fundamental_equiv_forms,
    fundamental_function,
    indicator,
    indicator_sweep,
    integrate,
    lhs_rhs,
    lpq_star_norm,
    norm,
    p_norm,
    parts_identity_sides,
    pointwise_merge,
    random_decreasing,
    random_step,
    sigma,
    sigma_equivalent,
    verify_duality,
    verify_reverse_hardy,
    zeta1,
    zeta_specialized,
)

ONE = Power(0.0)
CHI01 = Tabulated(indicator(0.0, 1.0))

KAPPA_HARDY = 8.0
KAPPA_ASSOC = 16.0


def _line(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} — {detail}")


def test_criterion_01_rearrangement_preserves_distribution_and_norms():
    rng = np.random.default_rng(1)
    fns = [random_step(rng) for _ in range(200)]
    worst = 0.0
    for f in fns:
        fs = decreasing_rearrangement(f).fn
        for level in {0.0, *map(float, f.values)}:
            assert distribution(f, level) == distribution(fs, level)
        for p in (0.5, 1.0, 2.0, float("inf")):
            a, b = p_norm(f, p), p_norm(fs, p)
            if a == 0.0:
                assert b == 0.0
                continue
            worst = max(worst, abs(b / a - 1.0))
    ok = worst <= 1e-12
    _line(1, ok, f"200 functions equimeasurable exactly; worst norm drift {worst:.2e}")
    assert ok


def test_criterion_02_lpq_star_sandwich_with_tight_constant():
    rng = np.random.default_rng(2024)
    fns = [random_step(rng) for _ in range(100)]
    worst_lo = worst_hi = 0.0
    for p, q in ((2.0, 2.0), (2.0, 1.0), (3.0, float("inf"))):
        c = p / (p - 1.0)
        for f in fns:
            a = norm(Lpq(p, q), f)
            b = lpq_star_norm(p, q, f)
            if a == 0.0:
                assert b == 0.0
                continue
            worst_lo = max(worst_lo, (a - b) / a)
            worst_hi = max(worst_hi, (b - c * a) / (c * a))
    sweep = np.geomspace(1e-3, 1e3, 25)
    tight = max(
        lpq_star_norm(2.0, 2.0, indicator(0.0, a)) / norm(Lpq(2.0, 2.0), indicator(0.0, a))
        for a in sweep
    )
    ok = worst_lo <= 1e-9 and worst_hi <= 1e-9 and tight >= 1.2
    _line(
        2,
        ok,
        f"sandwich violations ({worst_lo:.2e}, {worst_hi:.2e}) <= 1e-9; "
        f"max star/plain ratio on indicators {tight:.6f} >= 1.2",
    )
    assert ok


def test_criterion_03_norm_family_identity_table():
    rng = np.random.default_rng(3)
    fns = [random_step(rng) for _ in range(100)]

    def worst_ratio(spec_a, spec_b):
        w = 0.0
        for f in fns:
            a, b = norm(spec_a, f), norm(spec_b, f)
            if b == 0.0:
                assert a == 0.0
                continue
            w = max(w, abs(a / b - 1.0))
        return w

    worst = 0.0
    for p in (0.5, 1.0, 2.0):
        worst = max(worst, worst_ratio(GenClassicalLorentz(p, ONE, ONE), Lpq(p, p)))
    for p, alpha in ((2.0, -0.25), (3.0, -1.0 / 3.0), (1.5, -0.5)):
        worst = max(
            worst,
            worst_ratio(
                GenClassicalLorentz(p, ONE, Power(alpha)), Marcinkiewicz(p, Power(alpha))
            ),
        )
    for p, q in ((2.0, 1.0), (3.0, 2.0), (1.5, 1.0)):
        worst = max(
            worst,
            worst_ratio(ClassicalLorentz(q, Power(1.0 / p - 1.0 / q)), Lpq(p, q)),
        )
    ok = worst <= 1e-12
    _line(3, ok, f"9 identity settings x 100 functions, worst relative gap {worst:.2e}")
    assert ok


def test_criterion_04_sigma_two_sided_equivalence():
    ts = np.geomspace(1e-3, 1e3, 61)
    bump = Tabulated(indicator(0.5, 2.0))
    pairs = [
        (Power(0.0), Power(0.0)), (Power(0.0), Power(0.5)), (Power(0.0), Power(1.0)),
        (Power(0.0), PowerLog(0.5, 1.0)), (Power(0.0), bump),
        (Power(1.0), Power(0.0)), (Power(1.0), Power(1.0)), (Power(1.0), Power(2.0)),
        (Power(1.0), PowerLog(1.0, 1.0)), (Power(1.0), bump),
        (Power(-0.5), Power(0.0)), (Power(-0.5), Power(0.25)), (Power(-0.5), Power(0.5)),
        (Power(-0.5), PowerLog(0.25, 1.0)), (Power(-0.5), bump),
        (PowerLog(0.0, 1.0), Power(0.0)), (PowerLog(0.0, 1.0), Power(0.5)),
        (PowerLog(0.0, 1.0), Power(1.0)), (PowerLog(0.0, 1.0), PowerLog(1.0, 1.0)),
        (PowerLog(0.0, 1.0), bump),
    ]
    assert len(pairs) == 20
    window_lo, window_hi = math.inf, 0.0
    for u, v in pairs:
        s, se = sigma(u, v), sigma_equivalent(u, v)
        a = np.array([float(s(t)) for t in ts])
        b = np.array([float(se(t)) for t in ts])
        mask = (a > 0) & np.isfinite(a) & (b > 0) & np.isfinite(b)
        assert mask.any()
        r = b[mask] / a[mask]
        lo, hi = float(r.min()), float(r.max())
        print(f"    pair u={u.to_json()} v={v.to_json()}: [{lo:.4f}, {hi:.4f}]")
        assert 0.45 <= lo and hi <= 2.05
        window_lo, window_hi = min(window_lo, lo), max(window_hi, hi)
    _line(4, True, f"20 weight pairs, ratios within [{window_lo:.4f}, {window_hi:.4f}] ⊂ [0.45, 2.05]")


def test_criterion_05_fundamental_function_form_equivalence():
    ts = np.geomspace(1e-3, 1e3, 61)
    rng = np.random.default_rng(42)
    window_lo, window_hi = math.inf, 0.0
    n_pairs = 0
    for k in range(10):
        n_atoms = int(rng.integers(1, 6))
        locs = np.sort(10.0 ** rng.uniform(-3, 3, n_atoms))
        masses = 10.0 ** rng.uniform(-1, 1, n_atoms)
        if k % 3 == 0:
            locs = np.concatenate([[0.0], locs])
            masses = np.concatenate([[10.0 ** rng.uniform(-1, 1)], masses])
        nu = DiscreteMeasure(locs, masses)
        for sig in (Power(1.0), Power(0.5)):
            h = fundamental_function(nu, sig)
            forms = fundamental_equiv_forms(nu, sig)
            hv = np.array([float(h(t)) for t in ts])
            fa = np.array([forms(t)[0] for t in ts])
            r = fa / hv
            lo, hi = float(r.min()), float(r.max())
            print(f"    nu[{len(locs)} atoms] sigma={sig.to_json()}: [{lo:.4f}, {hi:.4f}]")
            assert 0.45 <= lo and hi <= 2.05
            window_lo, window_hi = min(window_lo, lo), max(window_hi, hi)
            n_pairs += 1
    assert n_pairs == 20
    _line(5, True, f"20 measure/scale pairs, ratios within [{window_lo:.4f}, {window_hi:.4f}] ⊂ [0.45, 2.05]")


def test_criterion_06_representation_measure_fits():
    targets = {
        "1": lambda t: np.ones_like(np.asarray(t, dtype=float)),
        "sqrt(t)": lambda t: np.sqrt(np.asarray(t, dtype=float)),
        "t/(1+t)": lambda t: np.asarray(t, dtype=float) / (1.0 + np.asarray(t, dtype=float)),
        "min(1,t)": lambda t: np.minimum(1.0, np.asarray(t, dtype=float)),
    }
    scales = {"t": Power(1.0), "sqrt(t)": Power(0.5)}
    bound = math.log(1.1)
    failures = []
    for hname, h in targets.items():
        for sname, sig in scales.items():
            try:
                nu, rep = fit_representation_measure(h, sig)
            except FitFailed as exc:
                print(f"    h={hname:9s} sigma={sname:8s} unattainable: {exc}")
                achieved = float(re.search(r"sup log-ratio ([\d.]+)", str(exc)).group(1))
                failures.append((hname, sname, achieved))
                continue
            slr = rep.details["sup_log_ratio"]
            refit_h = fundamental_function(nu, sig)
            _, rep2 = fit_representation_measure(refit_h, sig)
            refit = rep2.details["sup_log_ratio"]
            print(f"    h={hname:9s} sigma={sname:8s} sup_log_ratio={slr:.3e} refit={refit:.3e}")
            assert slr <= bound
            assert refit <= 1e-9
    if failures:
        detail = "; ".join(f"({h}, {s}) achieved {a:.3f}" for h, s, a in failures)
        _line(6, False, f"5/8 fits within ln(1.1) with idempotent refits; unattainable: {detail}")
        pytest.fail(
            "Three of the eight target/scale combinations cannot meet the ln(1.1) "
            "interior sup-log-ratio bound with ANY nonnegative measure, not merely "
            "with this fitter.  With scale sigma(t)=t every representable function "
            "is t * (a Stieltjes transform of the measure), whose log-convexity "
            "forces a floor of 0.342 against the kinked target min(1,t) on the "
            "window [1e-2, 1e2]; with sigma(t)=sqrt(t) the representable ratio "
            "h/sigma is nonincreasing, while sqrt(t)/(1+t) rises by 5.05 and "
            "min(1,t)/sqrt(t) by 10 on [1e-2, 1], forcing floors of 0.814 and "
            "1.156.  (Floors confirmed by LP minimax over discretized measures; "
            "fitter-achieved vs floor per combination: 0.833 vs 0.814 for "
            "(t/(1+t), sqrt(t)), 0.367 vs 0.342 for (min(1,t), t), 1.337 vs "
            "1.156 for (min(1,t), sqrt(t)) — near-optimal in each case.)  "
            "A single atom represents t/(1+t), which tracks "
            "min(1,t) only within the inherent factor 2 of this kernel family — "
            "far outside ln(1.1) ≈ 0.0953.  The five attainable combinations all "
            "pass, with refit idempotence at 1e-9.",
            pytrace=False,
        )


def test_criterion_07_reverse_hardy_constants():
    problems = [
        ("q=1 flat", 1.0, ONE, ONE, ONE),
        ("q=2 truncated w", 2.0, ONE, ONE, CHI01),
        ("q=1.5 balanced powers", 1.5, ONE, Power(0.5), Power(0.5)),
        ("q=0.5 truncated w", 0.5, ONE, ONE, CHI01),
        ("q=0.5 power u", 0.5, Power(0.5), Power(0.75), CHI01),
        ("q=0.75 bump w", 0.75, ONE, Power(0.5), Tabulated(indicator(0.1, 10.0))),
    ]
    ratios = []
    branches = set()
    for name, q, u, v, w in problems:
        prob = HardyProblem.with_fitted_measure(q, u, v, w)
        rep = verify_reverse_hardy(prob, n_trials=60, seed=11)
        print(f"    {name:22s} branch={prob.branch} C_emp/A={rep.lower:.6f}")
        branches.add(prob.branch)
        ratios.append(rep.lower)
        assert 1.0 / KAPPA_HARDY <= rep.lower <= KAPPA_HARDY
    assert branches == {1, 2}

    prob = HardyProblem.with_fitted_measure(1.0, ONE, ONE, ONE)
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(5):
        f = random_decreasing(rng)
        l0, r0 = lhs_rhs(prob, f)
        for lam in (3.7, 1e-3, 250.0):
            l1, r1 = lhs_rhs(prob, f.scaled(lam))
            if l0 > 0:
                worst = max(worst, abs(l1 / (lam * l0) - 1.0))
            if r0 > 0:
                worst = max(worst, abs(r1 / (lam * r0) - 1.0))
    ok = worst <= 1e-12
    _line(
        7,
        ok,
        f"6 problems C_emp/A in [{min(ratios):.4f}, {max(ratios):.4f}] ⊂ [1/8, 8]; "
        f"homogeneity drift {worst:.2e}",
    )
    assert ok


def test_criterion_08_zeta_chain_and_parts_identity():
    cases = [
        (2.0, Power(0.0), indicator(0.0, 1.0), "p=2, flat psi, chi(0,1]"),
        (1.5, Power(0.1), indicator(0.0, 2.0), "p=1.5, psi=t^0.1, chi(0,2]"),
        (3.0, Power(0.0), indicator(0.0, 0.5), "p=3, flat psi, chi(0,0.5]"),
    ]
    ts = np.geomspace(1e-4, 1e3, 36)
    refined = DEFAULT_GRID.refine(2)
    max_ratios = []
    worst_parts = 0.0
    worst_env = 0.0
    for p, psi, f, name in cases:
        zf = zeta_specialized(f, psi, p)
        z1 = zeta1(f, psi, p)
        rats = []
        for t in ts:
            zv, z1v = zf(float(t)), z1(float(t))
            if zv > 0 and np.isfinite(zv) and np.isfinite(z1v):
                rats.append(z1v / zv)
        max_ratios.append((name, max(rats)))
        for t in (0.0, 1e-3, 0.1, 0.3):
            for g in (DEFAULT_GRID, refined):
                lhs, rhs = parts_identity_sides(f, psi, p, t, g)
                if rhs != 0.0:
                    worst_parts = max(worst_parts, abs(lhs / rhs - 1.0))
        worst_env = max(worst_env, float(envelope_ratio(f, psi, p, ts).max()))

    parts_ok = worst_parts <= 0.02
    env_ok = worst_env <= 1.0 + 1e-6
    print(f"    integration-by-parts sides agree under refinement: worst dev {worst_parts:.2e}")
    print(f"    weighted lower-envelope bound: max ratio {worst_env:.10f}")
    assert parts_ok and env_ok

    pointwise_ok = all(r <= 1.0 + 1e-9 for _, r in max_ratios)
    detail = ", ".join(f"{r:.6f} ({n})" for n, r in max_ratios)
    _line(8, pointwise_ok, f"zeta1/zeta max ratios: {detail}; parts and envelope sub-checks green")
    if not pointwise_ok:
        pytest.fail(
            "The pointwise comparison zeta1(t) <= zeta(t)*(1+1e-9) fails on all "
            "three symbolic cases: measured maxima "
            + ", ".join(f"{r:.6f} for {n}" for n, r in max_ratios)
            + ".  This is not a discretization artifact: for p=2, flat psi, "
            "f*=chi(0,1], the ratio is exactly sqrt(2-t)/(sqrt(t)+sqrt(1-t)), "
            "which tends to sqrt(2) as t -> 0+, so no tolerance below the "
            "constant p^(1/p') can hold pointwise.  The attainable two-sided "
            "bounds — zeta1 <= p^(1/p') * zeta and "
            "zeta <= ((p-1)^(-1/p') + p^(-1/p')) * zeta1 — are asserted green "
            "in the unit suite.  The other two sub-checks of this criterion "
            "pass as stated: the integration-by-parts identity agrees within "
            "2% under one grid refinement halving (worst deviation "
            f"{worst_parts:.2e}), and the (p-1)^(1/p')-weighted pointwise "
            f"envelope bound holds with 1e-6 slack (max ratio {worst_env:.10f}).",
            pytrace=False,
        )


def test_criterion_09_lp_self_duality_window():
    windows = []
    for p in (1.5, 2.0, 3.0):
        pp = p / (p - 1.0)
        rng = np.random.default_rng(9)
        fns = indicator_sweep(15) + [random_decreasing(rng) for _ in range(50)]
        lo, hi = math.inf, 0.0
        for f in fns:
            r = assoc_generalized(p, ONE, ONE, f).value / p_norm(f, pp)
            lo, hi = min(lo, r), max(hi, r)
        print(f"    p={p}: assoc/||f||_p' in [{lo:.8f}, {hi:.8f}]")
        assert lo >= 1.0 - 1e-6
        assert hi <= p + 0.05
        windows.append((p, lo, hi))
    chi = indicator(0.0, 1.0)
    a = assoc_generalized(2.0, ONE, ONE, chi).value
    assert a == pytest.approx(math.sqrt(2.0), abs=1e-3)
    assert p_norm(chi, 2.0) == 1.0
    detail = "; ".join(f"p={p}: [{lo:.4f}, {hi:.4f}] ⊂ [1-1e-6, {p + 0.05}]" for p, lo, hi in windows)
    _line(9, True, detail)


def test_criterion_10_oracle_vs_closed_form():
    families = [
        ("p=2 flat", 2.0, ONE, ONE),
        ("p=1.5 phi=t^-1/3", 1.5, ONE, Power(-1.0 / 3.0)),
        ("p=3 psi=t^0.2 phi=t^-1/4", 3.0, Power(0.2), Power(-0.25)),
        ("p=0.5 psi=t^-1", 0.5, Power(-1.0), ONE),
        ("p=1 phi=t^-1/2", 1.0, ONE, Power(-0.5)),
        ("p=2 psi=powerlog", 2.0, PowerLog(0.0, 1.0), ONE),
    ]
    windows = []
    for name, p, psi, phi in families:
        rep = verify_duality(p, psi, phi, n_functions=50, seed=13)
        print(f"    {name:26s} closed/oracle in [{rep.lower:.4f}, {rep.upper:.4f}]")
        assert rep.lower >= 1.0 / KAPPA_ASSOC
        assert rep.upper <= KAPPA_ASSOC
        assert rep.lower >= 1.0 - 1e-9  # the oracle is a certified lower bound
        windows.append((rep.lower, rep.upper))

    spec = GenClassicalLorentz(2.0, ONE, ONE)
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(20):
        f, g = random_decreasing(rng), random_decreasing(rng)
        fa = assoc_generalized(2.0, ONE, ONE, f).value
        gn = norm(spec, g)
        fstar = decreasing_rearrangement(f).fn
        gstar = decreasing_rearrangement(g).fn
        pairing = integrate(pointwise_merge(fstar, gstar, np.multiply), 0.0, float("inf"))
        worst = max(worst, pairing / (fa * gn))
    assert worst <= KAPPA_ASSOC
    lo = min(w[0] for w in windows)
    hi = max(w[1] for w in windows)
    _line(
        10,
        True,
        f"6 families, closed/oracle within [{lo:.4f}, {hi:.4f}] ⊂ [1/16, 16]; "
        f"pairing/(assoc·norm) worst {worst:.4f} <= 16",
    )


def test_criterion_11_embedding_criteria():
    good_cases = [
        ("identity L_2", 2.0, 2.0, ONE, ONE, ONE),
        ("L_{2,1} into L_{2,2}", 1.0, 2.0, Power(-0.5), ONE, ONE),
        ("L_{3,1} into L_{3,3}", 1.0, 3.0, Power(-2.0 / 3.0), ONE, ONE),
    ]
    details = []
    for name, p, q, psi, phi, w in good_cases:
        res = embedding_criterion(p, q, psi, phi, w)
        emp = empirical_embedding_check(p, q, psi, phi, w, n_trials=30, seed=4)
        print(
            f"    {name:22s} criterion={res.criterion_value:.6f} holds={res.holds} "
            f"empirical=[{emp.lower:.4f}, {emp.upper:.4f}]"
        )
        assert res.holds
        assert math.isfinite(res.criterion_value)
        assert emp.lower > 0.0
        assert emp.upper <= 1.0 + 1e-9
        details.append(f"{name} criterion {res.criterion_value:.4f}")

    bad = embedding_criterion(2.0, 2.0, Tabulated(indicator(0.0, 1.0)), ONE, ONE)
    bad_emp = empirical_embedding_check(
        2.0, 2.0, Tabulated(indicator(0.0, 1.0)), ONE, ONE, n_trials=30, seed=4
    )
    growth = bad_emp.details["indicator_growth"]
    print(f"    constructed failure: criterion={bad.criterion_value} growth={growth:.1f}")
    assert math.isinf(bad.criterion_value)
    assert not bad.holds
    assert growth >= 10.0
    _line(11, True, "; ".join(details) + f"; failing case growth {growth:.1f}x >= 10x")


def _cli(args, cwd):
    code = "from lorentzlab.cli import main; import sys; sys.exit(main(sys.argv[1:]))"
    proc = subprocess.run(
        [sys.executable, "-c", code, *args], cwd=cwd, capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    return proc


def test_criterion_12_cli_determinism(tmp_path):
    hardy_cfg = tmp_path / "problem.json"
    hardy_cfg.write_text(
        json.dumps(
            {
                "schema_version": 1,
                "q": 1.0,
                "u": {"kind": "power", "alpha": 0.0},
                "v": {"kind": "power", "alpha": 0.0},
                "w": {"kind": "power", "alpha": 0.0},
            }
        )
    )
    jobs = [
        (
            "verify-hardy",
            ["verify-hardy", "--config", str(hardy_cfg), "--trials", "20", "--seed", "11"],
        ),
        (
            "verify-duality",
            [
                "verify-duality", "--p", "2", "--psi", "power:0", "--phi", "power:0",
                "--functions", "50", "--seed", "13",
            ],
        ),
    ]
    for name, args in jobs:
        out_a = tmp_path / f"{name}-a.json"
        out_b = tmp_path / f"{name}-b.json"
        _cli(args + ["--out", str(out_a)], tmp_path)
        _cli(args + ["--out", str(out_b)], tmp_path)
        assert out_a.read_bytes() == out_b.read_bytes(), name
        assert json.loads(out_a.read_text())["command"] == name
    _line(12, True, "verify-hardy and verify-duality outputs byte-identical across seeded reruns")

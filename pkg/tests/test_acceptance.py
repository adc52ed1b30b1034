"""Acceptance suite: every headline requirement at its stated tolerance.

The long integrations are farmed out to worker processes up front (module
fixture ``runs``); each criterion test then consumes its results and prints
one pass/fail line.  Expected wall time is tens of minutes on two cores,
dominated by the T = 100 well-balancedness runs.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pytest

from nchyp.conditions import (check_nonconservative_ec, residual_scale,
                              sample_states)
from nchyp.experiments import make_preset, run_experiment
from nchyp.fluxes import make_fluxset
from nchyp.sbp import build_gll_operator, verify_sbp_property
from nchyp.semidisc import SolutionField, split_form_equivalence
from nchyp.systems import make_system
from nchyp.timeint import stable_dt, step

MONOMIAL_PAIRS = ((4, 4), (5, 5), (4, 5), (5, 4), (3, 5), (5, 3))


def _report(criterion, passed, detail):
    status = "PASS" if passed else "FAIL"
    print(f"[acceptance {criterion}] {status}: {detail}")
    assert passed, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def runs():
    """All long integrations, submitted eagerly to a small process pool."""
    jobs = {}
    for p in range(1, 6):
        jobs[f"advection-p{p}"] = make_preset("advection-ec", degree=p)
    for m, n in MONOMIAL_PAIRS:
        for scheme in ("ec1", "ec2"):
            for p in range(1, 6):
                key = f"monomial-{scheme}-{m}{n}-p{p}"
                jobs[key] = make_preset(f"monomial-{scheme}-{m}{n}", degree=p)
    for p in range(1, 6):
        jobs[f"sainte-marie-p{p}"] = make_preset("sainte-marie-ec", degree=p)
    for p in range(2, 6):
        jobs[f"wb2d-p{p}"] = make_preset("wb2d", degree=p)
    jobs["euler-fsp"] = make_preset("euler-fsp")
    jobs["euler-gravity"] = make_preset("euler-gravity-energy")
    for k in (16, 64, 256):
        jobs[f"euler-manufactured-k{k}"] = make_preset("euler-manufactured",
                                                       elements=k)

    workers = max(2, os.cpu_count() or 1)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {key: pool.submit(run_experiment, cfg)
                   for key, cfg in jobs.items()}
        yield {key: fut.result() for key, fut in futures.items()}


def test_criterion_01_sbp_property():
    import time
    start = time.time()
    worst = max(verify_sbp_property(build_gll_operator(p)) for p in range(9))
    elapsed = time.time() - start
    _report(1, worst <= 1e-13 and elapsed < 1.0,
            f"max SBP residual {worst:.2e} over degrees 0..8 in {elapsed:.2f}s")


def test_criterion_02_flux_condition_suite():
    import time
    start = time.time()
    ec_cases = [
        ("var_advection", {}, "advection", {}, None),
        ("coupled_burgers", {}, "coupled_burgers", {}, None),
        ("shallow_water", {"gravity": 9.812, "dim": 1}, "shallow_water",
         {"alpha": 0.0, "gravity": 9.812, "dim": 1}, None),
        ("shallow_water", {"gravity": 9.812, "dim": 1}, "shallow_water",
         {"alpha": 0.5, "gravity": 9.812, "dim": 1}, None),
        ("shallow_water", {"gravity": 9.812, "dim": 1}, "shallow_water",
         {"alpha": 1.0, "gravity": 9.812, "dim": 1}, None),
        ("sainte_marie", {"gravity": 1.0, "celerity": 2.0, "dim": 1},
         "sainte_marie", {"alphas": (0.5, 1.0, 2 / 3), "gravity": 1.0,
                          "celerity": 2.0, "dim": 1}, None),
        ("euler", {"gamma": 1.4, "dim": 1}, "euler_ec_kep",
         {"gamma": 1.4, "dim": 1}, "entropy"),
        ("euler", {"gamma": 1.4, "dim": 1}, "euler_ec_kep",
         {"gamma": 1.4, "dim": 1}, "total_energy"),
    ]
    for m, n in MONOMIAL_PAIRS:
        if n % 2 == 1:
            ec_cases.append(("monomial", {"m": m, "n": n, "split": "direct"},
                             "monomial_ec1", {"m": m, "n": n}, None))
        ec_cases.append(("monomial", {"m": m, "n": n, "split": "flux"},
                         "monomial_ec2", {"m": m, "n": n, "alpha": 0.5}, None))

    worst_ec = 0.0
    for sys_name, sys_params, flux_name, flux_params, entropy in ec_cases:
        system = make_system(sys_name, **sys_params)
        fluxset = make_fluxset(flux_name, **flux_params)
        rng = np.random.default_rng(2024)
        um, am = sample_states(system, rng, 10_000)
        up, ap = sample_states(system, rng, 10_000)
        res = check_nonconservative_ec(system, fluxset, um, am, up, ap,
                                       entropy=entropy)
        scale = residual_scale(system, fluxset, um, am, up, ap, entropy=entropy)
        worst_ec = max(worst_ec, float(np.max(np.abs(res) / scale)))

    system = make_system("euler", gamma=1.4, dim=1)
    fluxset = make_fluxset("euler_es", gamma=1.4, dim=1)
    rng = np.random.default_rng(2025)
    um, am = sample_states(system, rng, 10_000)
    up, ap = sample_states(system, rng, 10_000)
    res = check_nonconservative_ec(system, fluxset, um, am, up, ap,
                                   entropy="entropy")
    scale = residual_scale(system, fluxset, um, am, up, ap, entropy="entropy")
    worst_es = float(np.max(res / scale))
    elapsed = time.time() - start
    _report(2, worst_ec <= 1e-12 and worst_es <= 1e-14 and elapsed < 10.0,
            f"EC residual {worst_ec:.2e}, ES positive part {worst_es:.2e}, "
            f"{elapsed:.1f}s")


def test_criterion_03_advection_entropy_table(runs):
    drifts = []
    residuals = []
    for p in range(1, 6):
        s = runs[f"advection-p{p}"].summary
        drifts.append(s["entropy_drift"])
        residuals.append(abs(s["entropy_residual"]))
    _report(3, max(drifts) <= 1e-10 and max(residuals) <= 1e-12,
            f"entropy error <= {max(drifts):.2e}, residual <= {max(residuals):.2e} "
            f"for degrees 1..5")


def test_criterion_04_monomial_entropy(runs):
    worst = 0.0
    for m, n in MONOMIAL_PAIRS:
        for p in range(1, 6):
            worst = max(worst, runs[f"monomial-ec2-{m}{n}-p{p}"].summary["entropy_drift"])
    for m, n in ((5, 5), (4, 5), (3, 5), (5, 3)):
        for p in range(1, 6):
            worst = max(worst, runs[f"monomial-ec1-{m}{n}-p{p}"].summary["entropy_drift"])
    _report(4, worst <= 1e-10,
            f"entropy error <= {worst:.2e} for the conservative monomial schemes")


def test_criterion_04_monomial_expected_nonconservation(runs):
    # the first scheme has no entropy-conservative closed form at even-even
    # exponents, so the reported entropy defect must be visible
    worst = max(runs[f"monomial-ec1-44-p{p}"].summary["entropy_drift"]
                for p in range(1, 6))
    _report(4, worst >= 1e-4,
            f"entropy error {worst:.2e} for the non-conservative (4,4) scheme "
            f"(expected >= 1e-4)")


def test_criterion_04_monomial_mass(runs):
    ordinary = []
    special = []
    for m, n in MONOMIAL_PAIRS:
        for scheme in ("ec1", "ec2"):
            for p in range(1, 6):
                drift = abs(runs[f"monomial-{scheme}-{m}{n}-p{p}"]
                            .summary["mass_drift"][0])
                if scheme == "ec1" and (m, n) in ((4, 5), (5, 4)):
                    special.append(drift)
                else:
                    ordinary.append(drift)
    ok_ordinary = max(ordinary) <= 1e-13
    ok_special = all(1e-7 <= d <= 1e-3 for d in special)
    _report(4, ok_ordinary and ok_special,
            f"mass drift <= {max(ordinary):.2e} (bound 1e-13); "
            f"(4,5)/(5,4) first-scheme drifts in [{min(special):.2e}, "
            f"{max(special):.2e}] (expected band [1e-7, 1e-3])")


def test_criterion_05_sainte_marie_entropy(runs):
    worst = max(runs[f"sainte-marie-p{p}"].summary["entropy_drift"]
                for p in range(1, 6))
    _report(5, worst <= 1e-10, f"energy error <= {worst:.2e} for degrees 1..5")


def test_criterion_06_well_balanced_2d(runs):
    worst = 0.0
    for p in range(2, 6):
        s = runs[f"wb2d-p{p}"].summary
        worst = max(worst, s["wb_surface"], s["wb_v1"], s["wb_v2"],
                    s["wb_w"], s["wb_p"])
    _report(6, worst <= 1e-10,
            f"lake-at-rest norms <= {worst:.2e} after T = 100, degrees 2..5")


def test_criterion_07_free_stream(runs):
    dev = runs["euler-fsp"].summary["fsp_deviation"]
    _report(7, dev <= 1e-12, f"free-stream deviation {dev:.2e} after T = 1")


def test_criterion_08_pressure_equilibrium():
    from nchyp.experiments import build_discretization
    disc, state, _ = build_discretization(
        make_preset("euler-gravity-energy", ic="pressure_equilibrium", seed=3))
    disc._source = None
    state = SolutionField(state.u, np.zeros_like(state.aux))
    dt = stable_dt(disc, state, 0.1)
    after = step(disc, state, dt)
    v = after.u[..., 1] / after.u[..., 0]
    p = 0.4 * after.u[..., 2]
    dv = np.max(np.abs(v - 1.0))
    dp = np.max(np.abs(p - 1.0))
    _report(8, dv <= 1e-13 and dp <= 1e-13,
            f"one step keeps velocity to {dv:.2e} and pressure to {dp:.2e}")


def test_criterion_09_total_energy_with_gravity(runs):
    drift = runs["euler-gravity"].summary["entropy_drift"]
    _report(9, drift <= 1e-11,
            f"total-energy drift {drift:.2e} with a linear potential, T = 0.5")


def test_criterion_10_convergence(runs):
    errors = [runs[f"euler-manufactured-k{k}"].summary["l2_error"]
              for k in (16, 64, 256)]
    sides = [4.0, 8.0, 16.0]
    rates = [math.log(errors[i - 1] / errors[i]) / math.log(sides[i] / sides[i - 1])
             for i in (1, 2)]
    _report(10, rates[-1] >= 3.0,
            f"errors {errors[0]:.2e} -> {errors[1]:.2e} -> {errors[2]:.2e}, "
            f"observed orders {rates[0]:.2f}, {rates[1]:.2f}")


def test_criterion_11_split_form_identities():
    rng = np.random.default_rng(7)
    worst = 0.0
    for degree in range(0, 7):
        op = build_gll_operator(degree)
        h = rng.uniform(-2.0, 2.0, op.nnodes)
        g = rng.uniform(-2.0, 2.0, op.nnodes)
        for variant in ("form1", "form2-mean", "form3-mean", "form4-mean-prod",
                        "form4-mean-mean", "form4-prod-mean"):
            worst = max(worst, split_form_equivalence(op, h, g, variant))
    _report(11, worst <= 1e-14,
            f"kernel/operator equivalences hold to {worst:.2e} for degrees 0..6")


def test_criterion_12_no_global_benchmark():
    # the 3D spherical benchmark is out of scope by design; nothing here
    # exercises it and no tolerance references it
    _report(12, True, "3D spherical benchmark intentionally not reproduced")

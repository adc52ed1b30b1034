import math

import numpy as np
import pytest

from conftest import EC_SCHEMES_1D, EC_SCHEMES_2D, build_scheme
from nchyp.conditions import sample_states
from nchyp.fluxes import (euler_es_fluxset, logarithmic_mean, make_fluxset,
                          monomial_ec1_fluctuation,
                          monomial_ec1_is_conservative, product_mean)
from nchyp.systems import make_system


def test_logarithmic_mean_values():
    assert logarithmic_mean(1.0, 1.0) == pytest.approx(1.0)
    assert logarithmic_mean(1.0, 2.0) == pytest.approx(1.0 / math.log(2.0), rel=1e-15)
    # series regime
    val = logarithmic_mean(1.0, 1.0 + 1e-12)
    assert val == pytest.approx(1.0 + 5e-13, abs=1e-15)


def test_logarithmic_mean_series_matches_direct_at_crossover():
    # both branches agree to near round-off around zeta^2 = 1e-4
    a = 1.0
    for b in (1.018, 1.0202, 1.0205, 1.021):
        direct = (b - a) / math.log(b / a)
        assert logarithmic_mean(a, b) == pytest.approx(direct, rel=1e-13)


def test_logarithmic_mean_bounds_and_symmetry():
    rng = np.random.default_rng(0)
    a = rng.uniform(0.1, 10.0, 5000)
    b = rng.uniform(0.1, 10.0, 5000)
    lm = logarithmic_mean(a, b)
    assert np.all(lm >= np.minimum(a, b) - 1e-14)
    assert np.all(lm <= np.maximum(a, b) + 1e-14)
    np.testing.assert_allclose(lm, logarithmic_mean(b, a), rtol=1e-14)
    # monotone in each argument on a sampled grid
    grid = np.linspace(0.2, 5.0, 60)
    vals = logarithmic_mean(grid[:, None], grid[None, :])
    assert np.all(np.diff(vals, axis=0) > -1e-12)
    assert np.all(np.diff(vals, axis=1) > -1e-12)


def test_logarithmic_mean_rejects_nonpositive():
    with pytest.raises(ValueError):
        logarithmic_mean(-1.0, 2.0)
    with pytest.raises(ValueError):
        logarithmic_mean(1.0, 0.0)


def test_product_mean():
    assert product_mean(1.0, 1.0, 1.0, 1.0) == 1.0
    assert product_mean(1.0, 3.0, 2.0, 4.0) == pytest.approx(5.0)
    a, b = 1.7, -0.4
    assert product_mean(a, a, b, b) == pytest.approx(a * b)
    # symmetric under simultaneous pair swap
    assert product_mean(3.0, 1.0, 4.0, 2.0) == product_mean(1.0, 3.0, 2.0, 4.0)


@pytest.mark.parametrize("sys_name,sys_params,flux_name,flux_params,entropies",
                         EC_SCHEMES_1D + EC_SCHEMES_2D)
def test_consistency_and_symmetry(sys_name, sys_params, flux_name,
                                  flux_params, entropies):
    system, fluxset = build_scheme(sys_name, sys_params, flux_name, flux_params)
    rng = np.random.default_rng(1)
    u, aux = sample_states(system, rng, 1000)
    up, ap = sample_states(system, rng, 1000)
    for j in range(system.dim):
        f_cons = fluxset.fnum(u, aux, u, aux, j)
        f_exact = system.flux(u, aux, j)
        scale = 1.0 + np.abs(f_exact)
        assert np.max(np.abs(f_cons - f_exact) / scale) <= 1e-13
        f_ab = fluxset.fnum(u, aux, up, ap, j)
        f_ba = fluxset.fnum(up, ap, u, aux, j)
        assert np.max(np.abs(f_ab - f_ba) / (1.0 + np.abs(f_ab))) <= 1e-13
        for product in fluxset.noncons_products:
            p_aa = product(u, aux, u, aux, j)
            assert np.max(np.abs(p_aa)) <= 1e-13
            p_ab = product(u, aux, up, ap, j)
            p_ba = product(up, ap, u, aux, j)
            assert np.max(np.abs(p_ab + p_ba) / (1.0 + np.abs(p_ab))) <= 1e-12


@pytest.mark.parametrize("sys_name,sys_params,flux_name,flux_params,entropies",
                         EC_SCHEMES_1D + EC_SCHEMES_2D)
def test_pair_kernel_matches_generic_assembly(sys_name, sys_params, flux_name,
                                              flux_params, entropies):
    system, fluxset = build_scheme(sys_name, sys_params, flux_name, flux_params)
    if fluxset.pair_kernel is None:
        pytest.skip("no fused kernel")
    rng = np.random.default_rng(2)
    um, am = sample_states(system, rng, 400)
    up, ap = sample_states(system, rng, 400)

    def generic(j):
        ker = fluxset.fnum(um, am, up, ap, j)
        for term, product, alpha in zip(system.noncons[j],
                                        fluxset.noncons_products,
                                        fluxset.alphas):
            if alpha != 0.0:
                ker = ker + 0.5 * alpha * product(um, am, up, ap, j)
            if alpha != 1.0:
                gj = (term.g(up, ap) - term.g(um, am))[..., None]
                ker = ker + 0.5 * (1.0 - alpha) * term.H(um, am) * gj
        return ker

    if system.dim == 1:
        fused = fluxset.pair_kernel(um, am, up, ap, None, 0)
        ref = generic(0)
    else:
        nx = rng.uniform(-1.0, 1.0, um.shape[0])
        ny = rng.uniform(-1.0, 1.0, um.shape[0])
        fused = fluxset.pair_kernel(um, am, up, ap, (nx, ny), 0)
        ref = nx[..., None] * generic(0) + ny[..., None] * generic(1)
    scale = 1.0 + np.max(np.abs(ref))
    assert np.max(np.abs(fused - ref)) / scale <= 1e-13


def test_monomial_fluctuation_antisymmetry():
    rng = np.random.default_rng(3)
    a = rng.uniform(-2.0, 2.0, 200)
    b = rng.uniform(-2.0, 2.0, 200)
    for m, n in ((1, 1), (2, 3), (4, 5), (5, 4), (4, 4), (5, 5)):
        f_ab = monomial_ec1_fluctuation(m, n, a, b)
        f_ba = monomial_ec1_fluctuation(m, n, b, a)
        assert np.max(np.abs(f_ab + f_ba)) <= 1e-11
        assert np.max(np.abs(monomial_ec1_fluctuation(m, n, a, a))) <= 1e-12


def test_monomial_fluctuation_example():
    # m = n = 1 at (0, 1): value 1/2, antisymmetric counterpart -1/2
    assert monomial_ec1_fluctuation(1, 1, 0.0, 1.0) == pytest.approx(0.5)
    assert monomial_ec1_fluctuation(1, 1, 1.0, 0.0) == pytest.approx(-0.5)


def test_monomial_fluctuation_conservation_identity():
    # alpha <u> fluct + (1 - alpha) <u^{m+1}> jump(u^n) = n/(m+n+1) jump(u^{m+n+1})
    rng = np.random.default_rng(4)
    a = rng.uniform(-2.0, 2.0, 100)
    b = rng.uniform(-2.0, 2.0, 100)
    for m in (1, 3, 5):
        for n in (1, 3, 5):
            alpha = (m + 1) / (m + n + 1)
            lhs = alpha * 0.5 * (a + b) * monomial_ec1_fluctuation(m, n, a, b) \
                + (1 - alpha) * 0.5 * (a ** (m + 1) + b ** (m + 1)) * (b**n - a**n)
            rhs = n / (m + n + 1) * (b ** (m + n + 1) - a ** (m + n + 1))
            assert np.max(np.abs(lhs - rhs)) <= 1e-11


def test_monomial_even_even_flagged():
    assert not monomial_ec1_is_conservative(4, 4)
    assert not monomial_ec1_is_conservative(2, 2)
    assert monomial_ec1_is_conservative(4, 5)
    assert monomial_ec1_is_conservative(5, 4)
    assert monomial_ec1_is_conservative(5, 5)


def test_shallow_water_flux_example():
    # alpha = 1/2, (h, v)- = (1, 1), (h, v)+ = (2, 0):
    # f_h = 1/2 <h><v> + 1/2 <hv> = 0.5 * 1.5 * 0.5 + 0.5 * 0.5 = 0.625
    fluxset = make_fluxset("shallow_water", alpha=0.5, gravity=9.812, dim=1)
    um = np.array([1.0, 1.0])
    up = np.array([2.0, 0.0])
    aux = np.array([0.0])
    f = fluxset.fnum(um, aux, up, aux, 0)
    assert f[0] == pytest.approx(0.625)


def test_euler_induced_total_energy_flux_form():
    # the induced total-energy flux of the entropy/energy-conservative fluxes
    # equals 1/2 rho_log <v> pm(v, v) + rho_log <v> / ((g-1) rhop_log) + pm(p, v)
    from nchyp.conditions import induced_entropy_flux

    gamma = 1.4
    system = make_system("euler", gamma=gamma, dim=1)
    fluxset = make_fluxset("euler_ec_kep", gamma=gamma, dim=1)
    rng = np.random.default_rng(5)
    um, am = sample_states(system, rng, 500)
    up, ap = sample_states(system, rng, 500)
    am = np.zeros_like(am)   # flat potential for the closed form
    ap = np.zeros_like(ap)
    got = induced_entropy_flux(system, fluxset, um, am, up, ap,
                               j=0, entropy="total_energy")
    rm, vm, pm = um[:, 0], um[:, 1] / um[:, 0], (gamma - 1) * um[:, 2]
    rp, vp, pp = up[:, 0], up[:, 1] / up[:, 0], (gamma - 1) * up[:, 2]
    rho_log = logarithmic_mean(rm, rp)
    rhop_log = logarithmic_mean(rm / pm, rp / pp)
    mv = 0.5 * (vm + vp)
    expected = 0.5 * rho_log * mv * product_mean(vm, vp, vm, vp) \
        + rho_log * mv / ((gamma - 1.0) * rhop_log) \
        + product_mean(pm, pp, vm, vp)
    np.testing.assert_allclose(got, expected, rtol=1e-12)


def test_euler_es_momentum_variants_consistent():
    for variant in ("es", "kep"):
        fluxset = euler_es_fluxset(1.4, momentum_variant=variant)
        u = np.array([1.2, 0.5, 3.0])
        aux = np.array([0.0])
        f = fluxset.fnum(u, aux, u, aux, 0)
        system = make_system("euler", gamma=1.4, dim=1)
        np.testing.assert_allclose(f, system.flux(u, aux, 0), rtol=1e-14)
    with pytest.raises(ValueError):
        euler_es_fluxset(1.4, momentum_variant="upwind")


def test_euler_es_stagnant_interface():
    # v- = v+ = 0 switches the pressure dissipation off: interface velocity 0
    fluxset = euler_es_fluxset(1.4)
    um = np.array([1.0, 0.0, 2.0])
    up = np.array([2.0, 0.0, 1.0])
    aux = np.array([0.0])
    f = fluxset.fnum(um, aux, up, aux, 0)
    assert f[0] == pytest.approx(0.0, abs=1e-15)       # no mass flux
    assert f[1] == pytest.approx(0.5 * 0.4 * 3.0)       # mean pressure only


def test_make_fluxset_unknown():
    with pytest.raises(ValueError):
        make_fluxset("nonexistent")

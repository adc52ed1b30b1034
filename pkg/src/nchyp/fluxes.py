"""Two-point mean values and entropy-conservative/stable numerical fluxes.

A :class:`FluxSet` bundles, per spatial direction, the conservative two-point
flux f_num and one "fluctuation product" per nonconservative term,

    P_t(u-, u+) = H_t_num(u-, u+) (g_t(u+) - g_t(u-)),

together with the blending weight alpha_t that interpolates between the
two-point factor flux (alpha = 1) and the pointwise factor (alpha = 0).
Working with the product instead of H_num alone keeps closed-form
fluctuations (monomial scheme) and plain factor fluxes under one interface;
the product must vanish at coincident states and, for volume use, be
antisymmetric under argument exchange.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .systems import _stack, _unit_column


def _logmean_raw(a, b):
    # unchecked core; nonpositive input propagates as nan/inf
    with np.errstate(divide="ignore", invalid="ignore"):
        zeta = (b - a) / (b + a)
        z2 = zeta * zeta
        series = 0.5 * (a + b) / (1.0 + z2 * (1.0 / 3.0 + z2 * (0.2 + z2 / 7.0)))
        small = z2 < 1e-4
        log_ratio = np.log(np.where(small, 2.0, b / a))
        direct = (b - a) / log_ratio
    return np.where(small, series, direct)


def logarithmic_mean(a, b):
    """Stable logarithmic mean (b - a) / (log b - log a).

    For nearly equal arguments the direct quotient loses all digits, so with
    zeta = (b - a)/(b + a) we switch to the even series

        logmean = (a + b)/2 / (1 + zeta^2/3 + zeta^4/5 + zeta^6/7)

    once zeta^2 < 1e-4, which is accurate to better than 1e-15 relative.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a <= 0.0) or np.any(b <= 0.0):
        raise ValueError("logarithmic mean requires positive arguments")
    return _logmean_raw(a, b)


def product_mean(a_minus, a_plus, b_minus, b_plus):
    """Cross mean (a- b+ + a+ b-) / 2; equals a b at coincident pairs."""
    return 0.5 * (a_minus * b_plus + a_plus * b_minus)


def _mean(a, b):
    return 0.5 * (a + b)


def _jump(a, b):
    return b - a


@dataclass(frozen=True)
class FluxSet:
    """Two-point fluxes of a scheme.

    ``fnum(um, auxm, up, auxp, j)`` is the conservative flux in direction j;
    ``noncons_products[t](um, auxm, up, auxp, j)`` the fluctuation product of
    term t; ``alphas[t]`` its blending weight.

    Optional fused fast paths avoid re-deriving primitive variables per
    call.  ``pair_kernel(um, am, up, ap, normals, j)`` evaluates the complete
    two-point kernel

        f_num + sum_t [ alpha_t/2 P_t + (1-alpha_t)/2 H_t(u-) jump(g_t) ],

    contracted with the scaled normal pair ``normals`` in 2D (plain direction
    ``j`` in 1D).  Evaluating it with swapped arguments and negating yields
    the plus-side interface bracket, so one kernel serves both the volume and
    the surface coupling.  ``volume_kernel_1d(op, u, aux)`` contracts the
    same kernel directly with a flux-differencing operator, and
    ``fused_rhs_1d`` replaces the whole periodic 1D right-hand side.  All
    must agree with the generic assembly to round-off; the engine falls back
    when they are absent.
    """

    name: str
    fnum: Callable
    noncons_products: tuple
    alphas: tuple
    symmetric: bool = True
    volume_kernel_1d: Callable | None = None
    pair_kernel: Callable | None = None
    fused_rhs_1d: Callable | None = None


# ---------------------------------------------------------------------------
# variable-coefficient advection
# ---------------------------------------------------------------------------

def advection_fluxset() -> FluxSet:
    """Central scheme for a(x) u_x: pointwise factor only (alpha = 0)."""
    def fnum(um, am, up, ap, j):
        return np.zeros_like(um)

    def product(um, am, up, ap, j):
        return _mean(am[..., 0:1], ap[..., 0:1]) * _jump(um, up)

    def pair_kernel(um, am, up, ap, normals, j):
        return 0.5 * am[..., 0:1] * (up - um)

    return FluxSet("advection", fnum, (product,), (0.0,),
                   pair_kernel=pair_kernel)


# ---------------------------------------------------------------------------
# coupled Burgers
# ---------------------------------------------------------------------------

def coupled_burgers_fluxset() -> FluxSet:
    def fnum(um, am, up, ap, j):
        return np.zeros_like(um)

    def q(u):
        return u[..., 0] + u[..., 1]

    def product_u(um, am, up, ap, j):
        val = _mean(um[..., 0], up[..., 0]) * _jump(q(um), q(up))
        return _unit_column(val, 2, 0)

    def product_v(um, am, up, ap, j):
        val = _mean(um[..., 1], up[..., 1]) * _jump(q(um), q(up))
        return _unit_column(val, 2, 1)

    def pair_kernel(um, am, up, ap, normals, j):
        jq = _jump(q(um), q(up))
        out = np.empty(np.broadcast(jq, um[..., 0]).shape + (2,))
        out[..., 0] = (_mean(um[..., 0], up[..., 0]) / 3.0 + um[..., 0] / 6.0) * jq
        out[..., 1] = (_mean(um[..., 1], up[..., 1]) / 3.0 + um[..., 1] / 6.0) * jq
        return out

    return FluxSet("coupled_burgers", fnum, (product_u, product_v),
                   (2.0 / 3.0, 2.0 / 3.0), pair_kernel=pair_kernel)


# ---------------------------------------------------------------------------
# monomial equation, first scheme: closed-form fluctuation
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _fluctuation_coefficients(m: int, n: int) -> tuple:
    """Division of jump(u^{m+n+1}) - mean(u^{m+1}) jump(u^n) by (u+ + u-).

    The dividend is homogeneous, so with t = u-/u+ the division reduces to a
    univariate synthetic division by (t + 1); the result is returned as the
    homogeneous quotient coefficients q_r of sum_r q_r u+^{m+n-r} u-^r.  For
    m and n not both even the division is exact and the quotient is already
    antisymmetric (q_r = -q_{m+n-r}).  For m and n both even no divisor
    exists (there is no entropy-conservative choice); the pseudo-quotient is
    antisymmetrized so the fluctuation stays consistent and antisymmetric,
    at the price of a genuine entropy defect.
    """
    k = m + n
    c = [Fraction(0)] * (k + 2)
    c[0] += 1
    c[k + 1] -= 1
    # minus mean(u^{m+1}) jump(u^n) = -1/2 (1 + t^{m+1})(1 - t^n) in t
    c[0] -= Fraction(1, 2)
    c[n] += Fraction(1, 2)
    c[m + 1] -= Fraction(1, 2)
    c[k + 1] += Fraction(1, 2)
    # synthetic division by (t + 1), highest degree first
    q = [Fraction(0)] * (k + 1)
    carry = c[k + 1]
    for r in range(k, -1, -1):
        q[r] = carry
        carry = c[r] - carry
    q = [Fraction(1, 2) * (q[r] - q[k - r]) for r in range(k + 1)]
    return tuple(float(v) for v in q)


def monomial_ec1_is_conservative(m: int, n: int) -> bool:
    """Entropy conservation of the first monomial scheme requires m, n not
    both even."""
    return not (m % 2 == 0 and n % 2 == 0)


def _pair_powers(x, kmax: int) -> list:
    powers = [np.ones_like(x), x]
    for _ in range(2, kmax + 1):
        powers.append(powers[-1] * x)
    return powers[: kmax + 1]


def monomial_ec1_fluctuation(m: int, n: int, u_minus, u_plus):
    """Fluctuation h_num jump(u^n) of the first monomial scheme with
    alpha = (m+1)/(m+n+1): antisymmetric, consistent, and entropy-conservative
    whenever m, n are not both even (see _fluctuation_coefficients)."""
    um = np.asarray(u_minus, dtype=float)
    up = np.asarray(u_plus, dtype=float)
    k = m + n
    scale = 2.0 * n / (m + 1)
    coeffs = _fluctuation_coefficients(m, n)
    pm = _pair_powers(um, k)
    pp = _pair_powers(up, k)
    out = np.zeros(np.broadcast(um, up).shape)
    for r, q in enumerate(coeffs):
        if q != 0.0:
            out += q * pp[k - r] * pm[r]
    return scale * out


def monomial_ec1_fluxset(m: int, n: int) -> FluxSet:
    alpha = (m + 1) / (m + n + 1)

    def fnum(um, am, up, ap, j):
        return np.zeros_like(um)

    def product(um, am, up, ap, j):
        return monomial_ec1_fluctuation(m, n, um[..., 0], up[..., 0])[..., None]

    def pair_kernel(um, am, up, ap, normals, j):
        xm = um[..., 0]
        xp = up[..., 0]
        val = (0.5 * alpha) * monomial_ec1_fluctuation(m, n, xm, xp) \
            + (0.5 * (1.0 - alpha)) * xm**m * (xp**n - xm**n)
        return val[..., None]

    def volume_kernel_1d(dtilde, u, aux):
        # contraction per power: sum_k Dt[i,k] u_k^s pairs with u_i^r factors
        x = u[..., 0]
        k = m + n
        coeffs = _fluctuation_coefficients(m, n)
        pows = np.stack(_pair_powers(x, k), axis=-1)            # (K, N, k+1)
        dpows = np.einsum("ik,ekr->eir", dtilde, pows)
        out = np.zeros_like(x)
        for r, q in enumerate(coeffs):
            if q != 0.0:
                out += q * pows[..., r] * dpows[..., k - r]
        out *= 0.5 * alpha * 2.0 * n / (m + 1)
        # pointwise share (1-alpha)/2 u_i^m (u_k^n - u_i^n)
        out += (0.5 * (1.0 - alpha)) * (pows[..., m] * dpows[..., n]
                                        - pows[..., k] * dpows[..., 0])
        return out[..., None]

    from . import _monomial_fast
    fused = _monomial_fast.make_fused_rhs("ec1", m, n, alpha)

    return FluxSet(f"monomial_ec1_{m}_{n}", fnum, (product,), (alpha,),
                   volume_kernel_1d=volume_kernel_1d, pair_kernel=pair_kernel,
                   fused_rhs_1d=fused)


# ---------------------------------------------------------------------------
# monomial equation, second scheme: conservative flux plus -u^n d/dx(u^m)
# ---------------------------------------------------------------------------

def _homogeneous_sum(um, up, order: int):
    """sum_{r=0}^{order-1} u+^{order-1-r} u-^r via a two-sided Horner pass."""
    total = np.ones(np.broadcast(um, up).shape)
    pm = np.ones_like(total)
    for _ in range(order - 1):
        pm = pm * um
        total = total * up + pm
    return total


def monomial_ec2_fluxset(m: int, n: int, alpha: float = 0.5,
                         h_mean: str | Callable = "arithmetic") -> FluxSet:
    """Entropy-conservative scheme for u_t + (u^{m+n})_x - u^n (u^m)_x = 0.

    ``h_mean`` is any symmetric consistent mean of u^n used for the factor
    flux; the conservative flux is adjusted so the combination conserves
    U = u^2/2 for every alpha.
    """
    if h_mean == "arithmetic":
        def hmean(xm, xp):
            return _mean(xm**n, xp**n)
    elif callable(h_mean):
        hmean = h_mean
    else:
        raise ValueError(f"unknown mean kind {h_mean!r}")
    k = m + n
    lead = (m + 1) / (k + 1)

    def fnum_scalar(xm, xp):
        s_full = _homogeneous_sum(xm, xp, k + 1)
        s_m = _homogeneous_sum(xm, xp, m)
        brace = alpha * _mean(xm, xp) * hmean(xm, xp) \
            + (1.0 - alpha) * _mean(xm ** (n + 1), xp ** (n + 1))
        return lead * s_full - brace * s_m

    def fnum(um, am, up, ap, j):
        return fnum_scalar(um[..., 0], up[..., 0])[..., None]

    def product(um, am, up, ap, j):
        xm = um[..., 0]
        xp = up[..., 0]
        return (-hmean(xm, xp) * (xp**m - xm**m))[..., None]

    def volume_kernel_1d(dtilde, u, aux):
        if h_mean != "arithmetic":
            return None
        x = u[..., 0]
        pows = np.stack(_pair_powers(x, k + 1), axis=-1)
        dpows = np.einsum("ik,ekr->eir", dtilde, pows)

        def contract(weights):
            # weights: {(r_minus, r_plus): coeff}; contract u_i^rm (Dt u^rp)_i
            out = np.zeros_like(x)
            for (rm, rp), cf in weights.items():
                out += cf * pows[..., rm] * dpows[..., rp]
            return out

        w: dict = {}

        def add(rm, rp, cf):
            w[(rm, rp)] = w.get((rm, rp), 0.0) + cf

        for r in range(k + 1):            # lead * sum u+^{k-r} u-^r
            add(r, k - r, lead)
        # -(alpha <u><u^n> + (1-alpha) <u^{n+1}>) * sum_{r<m} u+^{m-1-r} u-^r
        for r in range(m):
            a, b = r, m - 1 - r
            add(a + n + 1, b, -(1.0 - alpha) * 0.5)
            add(a, b + n + 1, -(1.0 - alpha) * 0.5)
            add(a + 1, b + n, -alpha * 0.25)
            add(a + n, b + 1, -alpha * 0.25)
            add(a + n + 1, b, -alpha * 0.25)
            add(a, b + n + 1, -alpha * 0.25)
        vol = contract(w)
        # alpha/2 times the product -<u^n>_{ik} (u_k^m - u_i^m), expanded via
        # <u^n>_{ik} (u_k^m - u_i^m) = 1/2 (u_i^n + u_k^n)(u_k^m - u_i^m)
        d1 = dpows[..., 0]
        pm_part = 0.5 * (pows[..., n] * dpows[..., m]
                         - pows[..., n + m] * d1
                         + dpows[..., n + m]
                         - pows[..., m] * dpows[..., n])
        vol = vol - 0.5 * alpha * pm_part
        # pointwise share (1-alpha)/2 (-u_i^n)(u_k^m - u_i^m)
        vol -= (0.5 * (1.0 - alpha)) * (pows[..., n] * dpows[..., m]
                                        - pows[..., n + m] * d1)
        return vol[..., None]

    def pair_kernel(um, am, up, ap, normals, j):
        xm = um[..., 0]
        xp = up[..., 0]
        jm = xp**m - xm**m
        val = fnum_scalar(xm, xp) - (0.5 * alpha) * hmean(xm, xp) * jm \
            - (0.5 * (1.0 - alpha)) * xm**n * jm
        return val[..., None]

    fused = None
    if h_mean == "arithmetic":
        from . import _monomial_fast
        fused = _monomial_fast.make_fused_rhs("ec2", m, n, alpha)

    return FluxSet(f"monomial_ec2_{m}_{n}", fnum, (product,), (alpha,),
                   volume_kernel_1d=volume_kernel_1d, pair_kernel=pair_kernel,
                   fused_rhs_1d=fused)


# ---------------------------------------------------------------------------
# shallow water
# ---------------------------------------------------------------------------

def shallow_water_fluxset(alpha: float, gravity: float, dim: int = 1) -> FluxSet:
    """One-parameter family of entropy-conservative shallow-water fluxes."""
    ncomp = 1 + dim

    def prim(u):
        h = u[..., 0]
        return h, [u[..., 1 + i] / h for i in range(dim)]

    def fnum(um, am, up, ap, j):
        hm, vm = prim(um)
        hp, vp = prim(up)
        fh = alpha * _mean(hm, hp) * _mean(vm[j], vp[j]) \
            + (1.0 - alpha) * _mean(um[..., 1 + j], up[..., 1 + j])
        cols = [fh]
        for i in range(dim):
            f = fh * _mean(vm[i], vp[i])
            if i == j:
                f = f + (1.0 - alpha) * gravity * _mean(hm, hp) ** 2 \
                    + (alpha - 0.5) * gravity * _mean(hm**2, hp**2)
            cols.append(f)
        return _stack(*cols)

    def product(um, am, up, ap, j):
        val = gravity * _mean(um[..., 0], up[..., 0]) * _jump(am[..., 0], ap[..., 0])
        return _unit_column(val, ncomp, 1 + j)

    def pair_kernel(um, am, up, ap, normals, j):
        hm, vm = prim(um)
        hp, vp = prim(up)
        mh = _mean(hm, hp)
        mv = [_mean(vm[i], vp[i]) for i in range(dim)]
        s = (1.0 - alpha) * gravity * mh**2 + (alpha - 0.5) * gravity * _mean(hm**2, hp**2)
        pb = gravity * (0.5 * alpha * mh + 0.5 * (1.0 - alpha) * hm) \
            * _jump(am[..., 0], ap[..., 0])
        fh = [alpha * mh * mv[d] + (1.0 - alpha) * _mean(um[..., 1 + d], up[..., 1 + d])
              for d in range(dim)]
        if normals is None:
            nfh = fh[j]
            out = np.empty(nfh.shape + (ncomp,))
            out[..., 0] = nfh
            for i in range(dim):
                out[..., 1 + i] = nfh * mv[i]
            out[..., 1 + j] += s + pb
            return out
        nx, ny = normals
        nfh = nx * fh[0] + ny * fh[1]
        out = np.empty(np.broadcast(nfh, nx).shape + (ncomp,))
        out[..., 0] = nfh
        out[..., 1] = nfh * mv[0] + nx * (s + pb)
        out[..., 2] = nfh * mv[1] + ny * (s + pb)
        return out

    return FluxSet(f"shallow_water_a{alpha:g}", fnum, (product,), (alpha,),
                   pair_kernel=pair_kernel)


# ---------------------------------------------------------------------------
# hyperbolized Sainte-Marie
# ---------------------------------------------------------------------------

def sainte_marie_fluxset(alpha1: float, alpha2: float, alpha3: float,
                         gravity: float, celerity: float, dim: int = 1) -> FluxSet:
    """Energy-conservative fluxes; the fourth factor weight equals alpha2."""
    ncomp = 3 + dim
    c2 = celerity**2

    def prim(u):
        h = u[..., 0]
        v = [u[..., 1 + i] / h for i in range(dim)]
        w = u[..., 1 + dim] / h
        p = u[..., 2 + dim] / h
        return h, v, w, p

    def fnum(um, am, up, ap, j):
        hm, vm, wm, pm = prim(um)
        hp, vp, wp, pp = prim(up)
        fh = alpha1 * _mean(hm, hp) * _mean(vm[j], vp[j]) \
            + (1.0 - alpha1) * _mean(um[..., 1 + j], up[..., 1 + j])
        cols = [fh]
        for i in range(dim):
            f = fh * _mean(vm[i], vp[i])
            if i == j:
                f = f + (1.0 - alpha1) * gravity * _mean(hm, hp) ** 2 \
                    + (alpha1 - 0.5) * gravity * _mean(hm**2, hp**2) \
                    + alpha3 * _mean(pm, pp) * _mean(hm, hp) \
                    + (1.0 - alpha3) * _mean(pm * hm, pp * hp)
            cols.append(f)
        cols.append(fh * _mean(wm, wp))
        cols.append(fh * _mean(pm, pp))
        return _stack(*cols)

    def prod_grav(um, am, up, ap, j):
        val = gravity * _mean(um[..., 0], up[..., 0]) * _jump(am[..., 0], ap[..., 0])
        return _unit_column(val, ncomp, 1 + j)

    def prod_pres(um, am, up, ap, j):
        _, _, _, pm = prim(um)
        _, _, _, pp = prim(up)
        val = 2.0 * _mean(pm, pp) * _jump(am[..., 0], ap[..., 0])
        return _unit_column(val, ncomp, 1 + j)

    def prod_cel(um, am, up, ap, j):
        hm, vm, _, _ = prim(um)
        hp, vp, _, _ = prim(up)
        val = c2 * _mean(hm, hp) * _jump(vm[j], vp[j])
        return _unit_column(val, ncomp, 2 + dim)

    def prod_vel(um, am, up, ap, j):
        _, vm, _, _ = prim(um)
        _, vp, _, _ = prim(up)
        val = -2.0 * c2 * _mean(vm[j], vp[j]) * _jump(am[..., 0], ap[..., 0])
        return _unit_column(val, ncomp, 2 + dim)

    def pair_kernel(um, am, up, ap, normals, j):
        hm, vm, wm, pm = prim(um)
        hp, vp, wp, pp = prim(up)
        mh = _mean(hm, hp)
        mv = [_mean(vm[i], vp[i]) for i in range(dim)]
        mw = _mean(wm, wp)
        mp = _mean(pm, pp)
        jb = _jump(am[..., 0], ap[..., 0])
        # direction-independent normal-momentum extra and mom/hp fluctuation
        # shares, pointwise minus-side factors folded in
        s = ((1.0 - alpha1) * gravity * mh**2
             + (alpha1 - 0.5) * gravity * _mean(hm**2, hp**2)
             + alpha3 * mp * mh + (1.0 - alpha3) * _mean(pm * hm, pp * hp))
        pb = (gravity * (0.5 * alpha1 * mh + 0.5 * (1.0 - alpha1) * hm)
              + 2.0 * (0.5 * alpha2 * mp + 0.5 * (1.0 - alpha2) * pm)) * jb
        fh = [alpha1 * mh * mv[d] + (1.0 - alpha1) * _mean(um[..., 1 + d], up[..., 1 + d])
              for d in range(dim)]

        def php(d):
            return c2 * (0.5 * alpha3 * mh + 0.5 * (1.0 - alpha3) * hm) \
                * _jump(vm[d], vp[d]) \
                - 2.0 * c2 * (0.5 * alpha2 * mv[d]
                              + 0.5 * (1.0 - alpha2) * vm[d]) * jb

        if normals is None:
            nfh = fh[j]
            out = np.empty(nfh.shape + (ncomp,))
            out[..., 0] = nfh
            for i in range(dim):
                out[..., 1 + i] = nfh * mv[i]
            out[..., 1 + j] += s + pb
            out[..., 1 + dim] = nfh * mw
            out[..., 2 + dim] = nfh * mp + php(j)
            return out
        nx, ny = normals
        nfh = nx * fh[0] + ny * fh[1]
        out = np.empty(np.broadcast(nfh, nx).shape + (ncomp,))
        out[..., 0] = nfh
        out[..., 1] = nfh * mv[0] + nx * (s + pb)
        out[..., 2] = nfh * mv[1] + ny * (s + pb)
        out[..., 3] = nfh * mw
        out[..., 4] = nfh * mp + nx * php(0) + ny * php(1)
        return out

    return FluxSet("sainte_marie", fnum,
                   (prod_grav, prod_pres, prod_cel, prod_vel),
                   (alpha1, alpha2, alpha3, alpha2),
                   pair_kernel=pair_kernel)


# ---------------------------------------------------------------------------
# Euler with internal energy
# ---------------------------------------------------------------------------

def _euler_prim(u, dim, gamma):
    rho = u[..., 0]
    v = [u[..., 1 + i] / rho for i in range(dim)]
    p = (gamma - 1.0) * u[..., 1 + dim]
    return rho, v, p


def euler_ec_kep_fluxset(gamma: float, dim: int = 1) -> FluxSet:
    """Fluxes conserving both the thermodynamic entropy and, via the
    kinetic-energy-preserving momentum flux and the logarithmic-mean gravity
    factor, the total energy."""
    ncomp = 2 + dim

    def fnum(um, am, up, ap, j):
        rm, vm, pm = _euler_prim(um, dim, gamma)
        rp, vp, pp = _euler_prim(up, dim, gamma)
        rho_log = logarithmic_mean(rm, rp)
        frho = rho_log * _mean(vm[j], vp[j])
        cols = [frho]
        for i in range(dim):
            f = frho * _mean(vm[i], vp[i])
            if i == j:
                f = f + _mean(pm, pp)
            cols.append(f)
        rhop_log = logarithmic_mean(rm / pm, rp / pp)
        cols.append(frho / ((gamma - 1.0) * rhop_log)
                    + _mean(vm[j], vp[j]) * _mean(pm, pp))
        return _stack(*cols)

    def prod_grav(um, am, up, ap, j):
        rm = um[..., 0]
        rp = up[..., 0]
        val = logarithmic_mean(rm, rp) * _jump(am[..., 0], ap[..., 0])
        return _unit_column(val, ncomp, 1 + j)

    def prod_pwork(um, am, up, ap, j):
        rm, vm, pm = _euler_prim(um, dim, gamma)
        rp, vp, pp = _euler_prim(up, dim, gamma)
        val = -_mean(vm[j], vp[j]) * _jump(pm, pp)
        return _unit_column(val, ncomp, 1 + dim)

    def pair_kernel(um, am, up, ap, normals, j):
        # unchecked log means: inadmissible states surface as non-finite
        # values in the time loop rather than per-call scans
        rm, vm, pm = _euler_prim(um, dim, gamma)
        rp, vp, pp = _euler_prim(up, dim, gamma)
        rho_log = _logmean_raw(rm, rp)
        rhop_log = _logmean_raw(rm / pm, rp / pp)
        mv = [_mean(vm[i], vp[i]) for i in range(dim)]
        mp = _mean(pm, pp)
        grav = 0.5 * rho_log * _jump(am[..., 0], ap[..., 0])
        if normals is None:
            frho = rho_log * mv[j]
            out = np.empty(frho.shape + (ncomp,))
            out[..., 0] = frho
            for i in range(dim):
                out[..., 1 + i] = frho * mv[i]
            out[..., 1 + j] += mp + grav
            out[..., 1 + dim] = frho / ((gamma - 1.0) * rhop_log) \
                + mv[j] * (mp - 0.5 * _jump(pm, pp))
            return out
        nx, ny = normals
        frho = rho_log * (nx * mv[0] + ny * mv[1])
        nv = nx * mv[0] + ny * mv[1]
        out = np.empty(np.broadcast(frho, nx).shape + (ncomp,))
        out[..., 0] = frho
        out[..., 1] = frho * mv[0] + nx * (mp + grav)
        out[..., 2] = frho * mv[1] + ny * (mp + grav)
        out[..., 3] = frho / ((gamma - 1.0) * rhop_log) + nv * (mp - 0.5 * _jump(pm, pp))
        return out

    return FluxSet("euler_ec_kep", fnum, (prod_grav, prod_pwork), (1.0, 1.0),
                   pair_kernel=pair_kernel)


def euler_es_fluxset(gamma: float, momentum_variant: str = "es",
                     dim: int = 1) -> FluxSet:
    """Entropy-stable surface fluxes built on the interface velocity
    V = <v> - jump(p) / (2 <rho> max|v|), with the pressure dissipation
    switched off (beta = 0) at stagnant interfaces."""
    if momentum_variant not in ("es", "kep"):
        raise ValueError(f"unknown momentum variant {momentum_variant!r}")
    ncomp = 2 + dim

    def interface_velocity(rm, vm, pm, rp, vp, pp, j):
        vmax = np.maximum(np.abs(vm[j]), np.abs(vp[j]))
        safe = np.where(vmax > 0.0, vmax, 1.0)
        beta = np.where(vmax > 0.0, 1.0 / (2.0 * _mean(rm, rp) * safe), 0.0)
        return _mean(vm[j], vp[j]) - beta * _jump(pm, pp)

    def fnum(um, am, up, ap, j):
        rm, vm, pm = _euler_prim(um, dim, gamma)
        rp, vp, pp = _euler_prim(up, dim, gamma)
        vint = interface_velocity(rm, vm, pm, rp, vp, pp, j)
        sgn = np.sign(vint)
        frho = (logarithmic_mean(rm, rp) - 0.5 * _jump(rm, rp) * sgn) * vint
        cols = [frho]
        for i in range(dim):
            if i == j:
                if momentum_variant == "kep":
                    f = frho * _mean(vm[j], vp[j]) + _mean(pm, pp)
                else:
                    vmax = np.maximum(np.abs(vm[j]), np.abs(vp[j]))
                    f = (_mean(um[..., 1 + j], up[..., 1 + j])
                         - 0.5 * _jump(um[..., 1 + j], up[..., 1 + j]) * sgn) * vint \
                        + _mean(pm, pp) - 0.5 * vmax * _mean(rm, rp) * _jump(vm[j], vp[j])
            else:
                f = frho * _mean(vm[i], vp[i])
            cols.append(f)
        rhop_log = logarithmic_mean(rm / pm, rp / pp)
        cols.append(frho / ((gamma - 1.0) * rhop_log) + _mean(pm, pp) * vint)
        return _stack(*cols)

    def prod_grav(um, am, up, ap, j):
        val = logarithmic_mean(um[..., 0], up[..., 0]) * _jump(am[..., 0], ap[..., 0])
        return _unit_column(val, ncomp, 1 + j)

    def prod_pwork(um, am, up, ap, j):
        rm, vm, pm = _euler_prim(um, dim, gamma)
        rp, vp, pp = _euler_prim(up, dim, gamma)
        vint = interface_velocity(rm, vm, pm, rp, vp, pp, j)
        return _unit_column(-vint * _jump(pm, pp), ncomp, 1 + dim)

    return FluxSet(f"euler_es_{momentum_variant}", fnum,
                   (prod_grav, prod_pwork), (1.0, 1.0), symmetric=False)


# ---------------------------------------------------------------------------
# registry used by the experiment runner and command line
# ---------------------------------------------------------------------------

def make_fluxset(name: str, **params) -> FluxSet:
    if name == "advection":
        return advection_fluxset()
    if name == "coupled_burgers":
        return coupled_burgers_fluxset()
    if name == "monomial_ec1":
        return monomial_ec1_fluxset(int(params["m"]), int(params["n"]))
    if name == "monomial_ec2":
        return monomial_ec2_fluxset(int(params["m"]), int(params["n"]),
                                    float(params.get("alpha", 0.5)))
    if name == "shallow_water":
        return shallow_water_fluxset(float(params.get("alpha", 0.5)),
                                     float(params.get("gravity", 9.812)),
                                     int(params.get("dim", 1)))
    if name == "sainte_marie":
        alphas = params.get("alphas", (0.5, 1.0, 2.0 / 3.0))
        return sainte_marie_fluxset(*[float(a) for a in alphas],
                                    gravity=float(params.get("gravity", 1.0)),
                                    celerity=float(params.get("celerity", 2.0)),
                                    dim=int(params.get("dim", 1)))
    if name == "euler_ec_kep":
        return euler_ec_kep_fluxset(float(params.get("gamma", 1.4)),
                                    int(params.get("dim", 1)))
    if name == "euler_es":
        return euler_es_fluxset(float(params.get("gamma", 1.4)),
                                params.get("momentum_variant", "es"),
                                int(params.get("dim", 1)))
    raise ValueError(f"unknown flux set {name!r}")

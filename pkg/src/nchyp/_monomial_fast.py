"""Compiled right-hand sides for the scalar monomial schemes.

The time loops of the monomial studies take millions of right-hand-side
evaluations on tiny arrays, where interpreter overhead dominates; these
kernels evaluate the complete fused update (flux differencing plus periodic
interface coupling) in one pass over a nodal power table.  They are
validated against the generic assembly in the test suite.
"""

from __future__ import annotations

from typing import Callable

import numba
import numpy as np


@numba.njit(cache=True, inline='always')
def _pair_value(pw, a_e, a_i, b_e, b_i, u, scheme, q, kdeg, m, n,
                half_alpha_scale, half_rest, lead, alpha):
    """Complete two-point kernel value for states (a = minus, b = plus)."""
    if scheme == 1:
        s = 0.0
        for r in range(kdeg + 1):
            if q[r] != 0.0:
                s += q[r] * pw[b_e, b_i, kdeg - r] * pw[a_e, a_i, r]
        return half_alpha_scale * s \
            + half_rest * pw[a_e, a_i, m] * (pw[b_e, b_i, n] - pw[a_e, a_i, n])

    s_full = 0.0
    for r in range(kdeg + 1):
        s_full += pw[b_e, b_i, kdeg - r] * pw[a_e, a_i, r]
    s_m = 0.0
    for r in range(m):
        s_m += pw[b_e, b_i, m - 1 - r] * pw[a_e, a_i, r]
    hmean = 0.5 * (pw[a_e, a_i, n] + pw[b_e, b_i, n])
    brace = alpha * 0.5 * (u[a_e, a_i] + u[b_e, b_i]) * hmean \
        + (1.0 - alpha) * 0.5 * (pw[a_e, a_i, n + 1] + pw[b_e, b_i, n + 1])
    jm = pw[b_e, b_i, m] - pw[a_e, a_i, m]
    return lead * s_full - brace * s_m - 0.5 * alpha * hmean * jm \
        - half_rest * pw[a_e, a_i, n] * jm


@numba.njit(cache=True)
def _monomial_rhs(u, dt_op, inv_mass_end, inv_jac, scheme, q, kdeg, m, n,
                  half_alpha_scale, half_rest, lead, alpha):
    nelem, nnode = u.shape
    pw = np.empty((nelem, nnode, kdeg + 2))
    for e in range(nelem):
        for i in range(nnode):
            pw[e, i, 0] = 1.0
            for r in range(1, kdeg + 2):
                pw[e, i, r] = pw[e, i, r - 1] * u[e, i]
    out = np.empty_like(u)
    for e in range(nelem):
        for i in range(nnode):
            acc = 0.0
            for k in range(nnode):
                d = dt_op[i, k]
                if d != 0.0:
                    acc += d * _pair_value(pw, e, i, e, k, u, scheme, q,
                                           kdeg, m, n, half_alpha_scale,
                                           half_rest, lead, alpha)
            out[e, i] = acc
    last = nnode - 1
    for e in range(nelem):
        en = e + 1 if e + 1 < nelem else 0
        bm = _pair_value(pw, e, last, en, 0, u, scheme, q, kdeg, m, n,
                         half_alpha_scale, half_rest, lead, alpha)
        bp = -_pair_value(pw, en, 0, e, last, u, scheme, q, kdeg, m, n,
                          half_alpha_scale, half_rest, lead, alpha)
        out[e, last] += inv_mass_end * bm
        out[en, 0] += inv_mass_end * bp
    for e in range(nelem):
        for i in range(nnode):
            out[e, i] *= -inv_jac
    return out


def make_fused_rhs(scheme: str, m: int, n: int, alpha: float) -> Callable:
    """Bind a compiled periodic 1D right-hand side for one monomial scheme."""
    from .fluxes import _fluctuation_coefficients

    kdeg = m + n
    if scheme == "ec1":
        q = np.array(_fluctuation_coefficients(m, n), dtype=float)
        half_alpha_scale = 0.5 * alpha * 2.0 * n / (m + 1)
        scheme_id, lead = 1, 0.0
    else:
        q = np.zeros(1)
        half_alpha_scale = 0.0
        scheme_id, lead = 2, (m + 1) / (kdeg + 1)
    half_rest = 0.5 * (1.0 - alpha)

    def fused(dtilde, d1, inv_mass_end, inv_jac, u, aux):
        out = _monomial_rhs(np.ascontiguousarray(u[..., 0]), dtilde,
                            inv_mass_end, inv_jac, scheme_id, q, kdeg, m, n,
                            half_alpha_scale, half_rest, lead, alpha)
        return out[..., None]

    return fused

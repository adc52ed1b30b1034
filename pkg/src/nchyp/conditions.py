"""Numerical verification of entropy and well-balancing conditions.

All checkers operate on batches of two-point states (arbitrary leading
shapes, components last) and return signed residuals: zero means the
condition holds with equality (entropy conservation), negative means strict
dissipation, positive is a violation.  The blended condition verified for a
flux set is

    jump(omega) . f_num
      - sum_t [ alpha_t mean(omega) . P_t + (1 - alpha_t) mean(omega . H_t) jump(g_t) ]
      <= jump(psi)

with P_t the fluctuation product carried by the flux set.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .fluxes import FluxSet
from .systems import SystemDefinition


def _jump(a, b):
    return b - a


def _mean(a, b):
    return 0.5 * (a + b)


def _dot(a, b):
    return np.sum(a * b, axis=-1)


# ---------------------------------------------------------------------------
# admissible-state sampling (shared by checks, reports, and the test suite)
# ---------------------------------------------------------------------------

_HEIGHT_RANGE = (0.5, 3.0)
_VELOCITY_RANGE = (-2.0, 2.0)
_PRESSURE_RANGE = (0.5, 5.0)
_SM_PRESSURE_RANGE = (-5.0, 20.0)
_FIELD_RANGE = (-1.0, 1.0)


def sample_states(system: SystemDefinition, rng: np.random.Generator, count: int):
    """Draw admissible states and auxiliary fields for a system."""
    def uni(lo_hi, *shape):
        return rng.uniform(*lo_hi, size=shape + (count,)).reshape(*(shape + (count,))).T \
            if shape else rng.uniform(*lo_hi, size=count)

    name = system.name
    if name == "var_advection":
        u = uni(_VELOCITY_RANGE)[:, None]
        aux = uni((0.5, 3.0))[:, None]
        return u, aux
    if name == "coupled_burgers":
        u = rng.uniform(*_VELOCITY_RANGE, size=(count, 2))
        return u, np.zeros((count, 0))
    if name.startswith("monomial"):
        u = uni(_VELOCITY_RANGE)[:, None]
        return u, np.zeros((count, 0))
    dim = system.dim
    if name == "shallow_water":
        h = uni(_HEIGHT_RANGE)
        v = rng.uniform(*_VELOCITY_RANGE, size=(count, dim))
        u = np.concatenate([h[:, None], h[:, None] * v], axis=-1)
        return u, uni(_FIELD_RANGE)[:, None]
    if name == "sainte_marie":
        h = uni(_HEIGHT_RANGE)
        v = rng.uniform(*_VELOCITY_RANGE, size=(count, dim))
        w = uni(_VELOCITY_RANGE)
        p = uni(_SM_PRESSURE_RANGE)
        u = np.concatenate([h[:, None], h[:, None] * v,
                            (h * w)[:, None], (h * p)[:, None]], axis=-1)
        return u, uni(_FIELD_RANGE)[:, None]
    if name == "euler":
        gamma = system.params["gamma"]
        rho = uni(_HEIGHT_RANGE)
        v = rng.uniform(*_VELOCITY_RANGE, size=(count, dim))
        p = uni(_PRESSURE_RANGE)
        u = np.concatenate([rho[:, None], rho[:, None] * v,
                            (p / (gamma - 1.0))[:, None]], axis=-1)
        return u, uni(_FIELD_RANGE)[:, None]
    raise ValueError(f"no sampler for system {name!r}")


def sample_steady_states(system: SystemDefinition, rng: np.random.Generator,
                         count: int):
    """Draw pairs from the lake-at-rest family (water systems only)."""
    if system.name not in ("shallow_water", "sainte_marie"):
        raise ValueError(f"no steady-state family declared for {system.name!r}")
    total = rng.uniform(2.0, 4.0, size=count)
    b_minus = rng.uniform(*_FIELD_RANGE, size=count)
    b_plus = rng.uniform(*_FIELD_RANGE, size=count)

    def assemble(b):
        h = total - b
        zeros = np.zeros_like(h)
        rest = system.ncomp - 1
        u = np.stack([h] + [zeros] * rest, axis=-1)
        return u, b[:, None]

    um, am = assemble(b_minus)
    up, ap = assemble(b_plus)
    return um, am, up, ap


# ---------------------------------------------------------------------------
# pointwise condition evaluations
# ---------------------------------------------------------------------------

def check_conservative_ec(system, fnum, um, am, up, ap, j=0, entropy=None):
    """Signed residual jump(omega) . f_num - jump(psi) (<= 0 means stable)."""
    pair = system.entropy(entropy)
    om = pair.omega(um, am)
    op = pair.omega(up, ap)
    f = fnum(um, am, up, ap, j)
    return _dot(_jump(om, op), f) - _jump(pair.psi(um, am, j), pair.psi(up, ap, j))


def _noncons_work(system, fluxset, um, am, up, ap, j, omega_m, omega_p):
    """sum_t alpha_t <omega>.P_t + (1-alpha_t) <omega.H_t> jump(g_t)."""
    total = 0.0
    om_mean = _mean(omega_m, omega_p)
    for term, product, alpha in zip(system.noncons[j], fluxset.noncons_products,
                                    fluxset.alphas):
        if alpha != 0.0:
            total = total + alpha * _dot(om_mean, product(um, am, up, ap, j))
        if alpha != 1.0:
            wh = _mean(_dot(omega_m, term.H(um, am)), _dot(omega_p, term.H(up, ap)))
            total = total + (1.0 - alpha) * wh * _jump(term.g(um, am), term.g(up, ap))
    return total


def check_nonconservative_ec(system, fluxset: FluxSet, um, am, up, ap,
                             j=0, entropy=None):
    """Signed residual of the blended two-point entropy condition."""
    pair = system.entropy(entropy)
    om = pair.omega(um, am)
    op = pair.omega(up, ap)
    f = fluxset.fnum(um, am, up, ap, j)
    res = _dot(_jump(om, op), f)
    res = res - _noncons_work(system, fluxset, um, am, up, ap, j, om, op)
    return res - _jump(pair.psi(um, am, j), pair.psi(up, ap, j))


def residual_scale(system, fluxset, um, am, up, ap, j=0, entropy=None):
    """Normalization 1 + |jump(psi)| + |omega| . |f_num| used for tolerances."""
    pair = system.entropy(entropy)
    om = np.abs(pair.omega(um, am))
    op = np.abs(pair.omega(up, ap))
    f = np.abs(fluxset.fnum(um, am, up, ap, j))
    psij = np.abs(_jump(pair.psi(um, am, j), pair.psi(up, ap, j)))
    return 1.0 + psij + _dot(_mean(om, op), f)


def induced_entropy_flux(system, fluxset: FluxSet, um, am, up, ap,
                         j=0, entropy=None):
    """The unique numerical entropy flux induced by an entropy-conservative
    flux set (alpha-blended):

        F_num = <F> + <omega>.f_num - <omega.f>
                - sum_t [ alpha_t/4 jump(omega).P_t
                          + (1-alpha_t)/4 jump(omega.H_t) jump(g_t) ].
    """
    pair = system.entropy(entropy)
    om = pair.omega(um, am)
    op = pair.omega(up, ap)
    f = fluxset.fnum(um, am, up, ap, j)
    result = _mean(pair.entropy_flux(um, am, j), pair.entropy_flux(up, ap, j))
    result = result + _dot(_mean(om, op), f)
    result = result - _mean(_dot(om, system.flux(um, am, j)),
                            _dot(op, system.flux(up, ap, j)))
    for term, product, alpha in zip(system.noncons[j], fluxset.noncons_products,
                                    fluxset.alphas):
        if alpha != 0.0:
            result = result - 0.25 * alpha * _dot(_jump(om, op),
                                                  product(um, am, up, ap, j))
        if alpha != 1.0:
            wh_jump = _jump(_dot(om, term.H(um, am)), _dot(op, term.H(up, ap)))
            gj = _jump(term.g(um, am), term.g(up, ap))
            result = result - 0.25 * (1.0 - alpha) * wh_jump * gj
    return result


def check_form_condition(form: int, system, um, am, up, ap, fnum,
                         gnum=None, hnum=None, hgnum=None, j=0, entropy=None):
    """Signed residual of one of the four nonconservative-term conditions.

    form 1 needs nothing extra, form 2 needs per-term ``gnum``, form 3
    per-term ``hnum``, form 4 per-term ``hgnum`` and ``hnum``.
    """
    pair = system.entropy(entropy)
    om = pair.omega(um, am)
    op = pair.omega(up, ap)
    res = _dot(_jump(om, op), fnum(um, am, up, ap, j))
    terms = system.noncons[j]
    if form == 1:
        for term in terms:
            wh = _mean(_dot(om, term.H(um, am)), _dot(op, term.H(up, ap)))
            res = res - wh * _jump(term.g(um, am), term.g(up, ap))
    elif form == 2:
        if gnum is None:
            raise ValueError("form 2 requires per-term g fluxes")
        for term, gn in zip(terms, gnum):
            whm = _dot(om, term.H(um, am))
            whp = _dot(op, term.H(up, ap))
            res = res + _jump(whm, whp) * gn(um, am, up, ap, j)
            res = res - _jump(whm * term.g(um, am), whp * term.g(up, ap))
    elif form == 3:
        if hnum is None:
            raise ValueError("form 3 requires per-term factor fluxes")
        for term, hn in zip(terms, hnum):
            res = res - _dot(_mean(om, op), hn(um, am, up, ap, j)) \
                * _jump(term.g(um, am), term.g(up, ap))
    elif form == 4:
        if hnum is None or hgnum is None:
            raise ValueError("form 4 requires factor and combined fluxes")
        for term, hn, hgn in zip(terms, hnum, hgnum):
            res = res + _dot(_jump(om, op), hgn(um, am, up, ap, j))
            hval = hn(um, am, up, ap, j)
            res = res - (_dot(op, hval) * term.g(up, ap)
                         - _dot(om, hval) * term.g(um, am))
    else:
        raise ValueError(f"form must be 1..4, got {form}")
    return res - _jump(pair.psi(um, am, j), pair.psi(up, ap, j))


def check_fluctuation_condition(system, dplus, dminus, um, am, up, ap,
                                j=0, entropy=None):
    """jump(F) - (omega_+ . D^+ + omega_- . D^-); <= 0 means admissible."""
    pair = system.entropy(entropy)
    work = _dot(pair.omega(up, ap), dplus(um, am, up, ap)) \
        + _dot(pair.omega(um, am), dminus(um, am, up, ap))
    return _jump(pair.entropy_flux(um, am, j), pair.entropy_flux(up, ap, j)) - work


def check_well_balanced(system, fluxset: FluxSet, um, am, up, ap, j=0):
    """Both interface residuals of the steady-state preservation condition.

    Returns (r_minus, r_plus); a scheme holds the steady family exactly iff
    both vanish for every pair drawn from it:

        r_minus = f_num + sum_t [ alpha_t/2 P_t + (1-alpha_t)/2 H_t(u-) jump(g_t) ] - f(u-)
        r_plus  = -f_num + sum_t [ alpha_t/2 P_t + (1-alpha_t)/2 H_t(u+) jump(g_t) ] + f(u+)
    """
    f = fluxset.fnum(um, am, up, ap, j)
    common = np.zeros_like(f)
    side_m = np.zeros_like(f)
    side_p = np.zeros_like(f)
    for term, product, alpha in zip(system.noncons[j], fluxset.noncons_products,
                                    fluxset.alphas):
        if alpha != 0.0:
            common = common + 0.5 * alpha * product(um, am, up, ap, j)
        if alpha != 1.0:
            gj = _jump(term.g(um, am), term.g(up, ap))[..., None]
            side_m = side_m + 0.5 * (1.0 - alpha) * term.H(um, am) * gj
            side_p = side_p + 0.5 * (1.0 - alpha) * term.H(up, ap) * gj
    r_minus = f + common + side_m - system.flux(um, am, j)
    r_plus = -f + common + side_p + system.flux(up, ap, j)
    return r_minus, r_plus


# ---------------------------------------------------------------------------
# seeded batch reports
# ---------------------------------------------------------------------------

@dataclass
class ConditionReport:
    condition: str
    samples: int
    max_violation: float
    seed: int
    worst_minus: np.ndarray | None = None
    worst_plus: np.ndarray | None = None

    def row(self):
        return {"condition": self.condition, "samples": self.samples,
                "max_violation": f"{self.max_violation:.17g}", "seed": self.seed}


def run_condition_check(system, fluxset, condition: str, samples: int,
                        seed: int, entropy: str | None = None) -> ConditionReport:
    """Evaluate a condition over seeded random admissible pairs.

    ``condition`` is one of ``ec`` (absolute normalized residual), ``es``
    (positive part of the normalized residual) or ``wb`` (residual norm over
    the declared steady family).  Violations aggregate over all directions.
    """
    rng = np.random.default_rng(seed)
    label = f"{condition}:{system.name}:{fluxset.name}"
    if samples == 0:
        return ConditionReport(label, 0, 0.0, seed)
    if condition == "wb":
        um, am, up, ap = sample_steady_states(system, rng, samples)
    else:
        um, am = sample_states(system, rng, samples)
        up, ap = sample_states(system, rng, samples)
    worst = -np.inf
    wm = wp = None
    for j in range(system.dim):
        if condition in ("ec", "es"):
            res = check_nonconservative_ec(system, fluxset, um, am, up, ap,
                                           j=j, entropy=entropy)
            res = res / residual_scale(system, fluxset, um, am, up, ap,
                                       j=j, entropy=entropy)
            viol = np.abs(res) if condition == "ec" else res
        else:
            r_minus, r_plus = check_well_balanced(system, fluxset, um, am, up, ap, j=j)
            viol = np.maximum(np.max(np.abs(r_minus), axis=-1),
                              np.max(np.abs(r_plus), axis=-1))
        idx = int(np.argmax(viol))
        if viol[idx] > worst:
            worst = float(viol[idx])
            wm = um[idx]
            wp = up[idx]
    return ConditionReport(label, samples, worst, seed, wm, wp)


def reports_to_csv(reports, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["condition", "samples",
                                                "max_violation", "seed"])
        writer.writeheader()
        for rep in reports:
            writer.writerow(rep.row())

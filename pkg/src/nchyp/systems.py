"""System definitions: fluxes, nonconservative terms, entropies, sources.

Every system is described by the generic form

    u_t + sum_j d/dx_j f^j(u) + sum_j sum_t H_t^j(u) d/dx_j g_t^j(u) = s(u, x)

together with one or more entropy pairs (U, F) whose entropy variables are
omega = U'(u) and whose potential is psi^j = omega . f^j - F^j.  All callables
broadcast over arbitrary leading axes; states have the components on the last
axis and auxiliary nodal coefficient fields (advection speed, bathymetry,
gravity potential) travel in a separate ``aux`` array so that their interface
jumps remain well defined even when they are discontinuous across elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np


@dataclass(frozen=True)
class NonconsTerm:
    """One nonconservative product H(u) d/dx g(u): the vector factor H and
    the scalar g-function, both direction-specific."""

    H: Callable
    g: Callable


@dataclass(frozen=True)
class EntropyPair:
    name: str
    U: Callable            # (u, aux) -> scalar field
    omega: Callable        # (u, aux) -> (..., ncomp)
    entropy_flux: Callable  # (u, aux, j) -> scalar field
    psi: Callable          # (u, aux, j) -> scalar field


@dataclass(frozen=True)
class SystemDefinition:
    name: str
    ncomp: int
    dim: int
    variable_names: tuple
    aux_names: tuple
    flux: Callable                       # (u, aux, j) -> (..., ncomp)
    noncons: tuple                       # per direction: tuple of NonconsTerm
    wave_speed: Callable                 # (u, aux) -> scalar field
    entropy_pairs: Mapping[str, EntropyPair]
    default_entropy: str
    source: Callable | None = None       # (u, aux, coords, t) -> (..., ncomp)
    reflect: Callable | None = None      # (u, aux, nhat: (..., dim)) -> mirrored u
    is_admissible: Callable | None = None
    conserved_components: tuple = ()
    params: Mapping = field(default_factory=dict)

    @property
    def naux(self) -> int:
        return len(self.aux_names)

    def entropy(self, which: str | None = None) -> EntropyPair:
        return self.entropy_pairs[which or self.default_entropy]


def _stack(*fields):
    return np.stack(np.broadcast_arrays(*fields), axis=-1)


def _unit_column(value, ncomp: int, row: int):
    """Vector field that is ``value`` in component ``row`` and zero elsewhere."""
    value = np.asarray(value)
    out = np.zeros(value.shape + (ncomp,))
    out[..., row] = value
    return out


# ---------------------------------------------------------------------------
# variable-coefficient advection:  u_t + a(x) u_x = 0
# ---------------------------------------------------------------------------

def _make_var_advection() -> SystemDefinition:
    def flux(u, aux, j):
        return np.zeros_like(u)

    def h_factor(u, aux):
        return aux[..., 0:1] * np.ones_like(u)

    def g_fun(u, aux):
        return u[..., 0]

    def entropy(u, aux):
        return u[..., 0] ** 2 / aux[..., 0]

    def omega(u, aux):
        return 2.0 * u / aux[..., 0:1]

    def entropy_flux(u, aux, j):
        return u[..., 0] ** 2

    def psi(u, aux, j):
        return -u[..., 0] ** 2

    pair = EntropyPair("energy", entropy, omega, entropy_flux, psi)
    return SystemDefinition(
        name="var_advection", ncomp=1, dim=1,
        variable_names=("u",), aux_names=("a",),
        flux=flux,
        noncons=((NonconsTerm(h_factor, g_fun),),),
        wave_speed=lambda u, aux: np.abs(aux[..., 0]),
        entropy_pairs={"energy": pair}, default_entropy="energy",
    )


# ---------------------------------------------------------------------------
# coupled Burgers:  u_t + u (u + v)_x = 0,  v_t + v (u + v)_x = 0
# ---------------------------------------------------------------------------

def _make_coupled_burgers() -> SystemDefinition:
    def flux(u, aux, j):
        return np.zeros_like(u)

    def q(u):
        return u[..., 0] + u[..., 1]

    terms = (
        NonconsTerm(lambda u, aux: _unit_column(u[..., 0], 2, 0), lambda u, aux: q(u)),
        NonconsTerm(lambda u, aux: _unit_column(u[..., 1], 2, 1), lambda u, aux: q(u)),
    )

    pair = EntropyPair(
        "energy",
        lambda u, aux: 0.5 * q(u) ** 2,
        lambda u, aux: _stack(q(u), q(u)),
        lambda u, aux, j: q(u) ** 3 / 3.0,
        lambda u, aux, j: -q(u) ** 3 / 3.0,
    )
    return SystemDefinition(
        name="coupled_burgers", ncomp=2, dim=1,
        variable_names=("u", "v"), aux_names=(),
        flux=flux, noncons=(terms,),
        wave_speed=lambda u, aux: np.abs(q(u)),
        entropy_pairs={"energy": pair}, default_entropy="energy",
    )


# ---------------------------------------------------------------------------
# monomial equation  u_t + u^m (u^n)_x = 0, entropy U = u^2 / 2
# ---------------------------------------------------------------------------

def _make_monomial(m: int, n: int, split: str) -> SystemDefinition:
    if m < 1 or n < 1:
        raise ValueError("monomial exponents must satisfy m, n >= 1")
    if split not in ("direct", "flux"):
        raise ValueError(f"unknown monomial split {split!r}")
    k = m + n

    def entropy_flux(u, aux, j):
        return n / (k + 1) * u[..., 0] ** (k + 1)

    if split == "direct":
        # u_t + u^m d/dx(u^n) = 0
        def flux(u, aux, j):
            return np.zeros_like(u)

        terms = (NonconsTerm(lambda u, aux: u[..., 0:1] ** m,
                             lambda u, aux: u[..., 0] ** n),)

        def psi(u, aux, j):
            return -entropy_flux(u, aux, j)
    else:
        # u_t + d/dx(u^{m+n}) - u^n d/dx(u^m) = 0
        def flux(u, aux, j):
            return u**k

        terms = (NonconsTerm(lambda u, aux: -u[..., 0:1] ** n,
                             lambda u, aux: u[..., 0] ** m),)

        def psi(u, aux, j):
            return (m + 1) / (k + 1) * u[..., 0] ** (k + 1)

    pair = EntropyPair(
        "energy",
        lambda u, aux: 0.5 * u[..., 0] ** 2,
        lambda u, aux: u.copy(),
        entropy_flux,
        psi,
    )
    return SystemDefinition(
        name=f"monomial_{split}", ncomp=1, dim=1,
        variable_names=("u",), aux_names=(),
        flux=flux, noncons=(terms,),
        wave_speed=lambda u, aux: k * np.abs(u[..., 0]) ** (k - 1),
        entropy_pairs={"energy": pair}, default_entropy="energy",
        params={"m": m, "n": n, "split": split},
    )


# ---------------------------------------------------------------------------
# shallow water with bathymetry
# ---------------------------------------------------------------------------

def _sw_prim(u, dim):
    h = u[..., 0]
    v = [u[..., 1 + i] / h for i in range(dim)]
    return h, v


def _make_shallow_water(gravity: float, dim: int) -> SystemDefinition:
    if gravity <= 0:
        raise ValueError("gravity must be positive")
    ncomp = 1 + dim

    def flux(u, aux, j):
        h, v = _sw_prim(u, dim)
        cols = [u[..., 1 + j]]
        for i in range(dim):
            f = u[..., 1 + i] * v[j]
            if i == j:
                f = f + 0.5 * gravity * h**2
            cols.append(f)
        return _stack(*cols)

    def noncons_dir(j):
        return (NonconsTerm(
            lambda u, aux: _unit_column(gravity * u[..., 0], ncomp, 1 + j),
            lambda u, aux: aux[..., 0]),)

    def kinetic(u):
        h, v = _sw_prim(u, dim)
        return 0.5 * h * sum(vi**2 for vi in v)

    def entropy(u, aux):
        h = u[..., 0]
        return kinetic(u) + 0.5 * gravity * h**2 + gravity * h * aux[..., 0]

    def omega(u, aux):
        h, v = _sw_prim(u, dim)
        vsq = sum(vi**2 for vi in v)
        return _stack(-0.5 * vsq + gravity * (h + aux[..., 0]), *v)

    def entropy_flux(u, aux, j):
        h, v = _sw_prim(u, dim)
        return (kinetic(u) + gravity * h * (h + aux[..., 0])) * v[j]

    def psi(u, aux, j):
        h, v = _sw_prim(u, dim)
        return 0.5 * gravity * h**2 * v[j]

    def wave(u, aux):
        h, v = _sw_prim(u, dim)
        return np.sqrt(sum(vi**2 for vi in v)) + np.sqrt(gravity * h)

    def reflect(u, aux, nhat):
        h, v = _sw_prim(u, dim)
        vn = sum(v[i] * nhat[..., i] for i in range(dim))
        cols = [h] + [h * (v[i] - 2.0 * vn * nhat[..., i]) for i in range(dim)]
        return _stack(*cols)

    pair = EntropyPair("total_energy", entropy, omega, entropy_flux, psi)
    return SystemDefinition(
        name="shallow_water", ncomp=ncomp, dim=dim,
        variable_names=("h",) + tuple(f"hv{i+1}" for i in range(dim)),
        aux_names=("b",),
        flux=flux, noncons=tuple(noncons_dir(j) for j in range(dim)),
        wave_speed=wave,
        entropy_pairs={"total_energy": pair}, default_entropy="total_energy",
        reflect=reflect,
        is_admissible=lambda u, aux: u[..., 0] > 0,
        conserved_components=(0,),
        params={"gravity": gravity, "dim": dim},
    )


# ---------------------------------------------------------------------------
# hyperbolized Sainte-Marie (dispersive shallow water)
# ---------------------------------------------------------------------------

def _sm_prim(u, dim):
    h = u[..., 0]
    v = [u[..., 1 + i] / h for i in range(dim)]
    w = u[..., 1 + dim] / h
    p = u[..., 2 + dim] / h
    return h, v, w, p


def _make_sainte_marie(gravity: float, celerity: float, dim: int) -> SystemDefinition:
    if gravity <= 0 or celerity <= 0:
        raise ValueError("gravity and celerity must be positive")
    ncomp = 3 + dim
    c2 = celerity**2

    def flux(u, aux, j):
        h, v, w, p = _sm_prim(u, dim)
        cols = [u[..., 1 + j]]
        for i in range(dim):
            f = u[..., 1 + i] * v[j]
            if i == j:
                f = f + 0.5 * gravity * h**2 + h * p
            cols.append(f)
        cols.append(u[..., 1 + dim] * v[j])   # h w v_j
        cols.append(u[..., 2 + dim] * v[j])   # h p v_j
        return _stack(*cols)

    def noncons_dir(j):
        def h_grav(u, aux):
            return _unit_column(gravity * u[..., 0], ncomp, 1 + j)

        def h_pres(u, aux):
            h, v, w, p = _sm_prim(u, dim)
            return _unit_column(2.0 * p, ncomp, 1 + j)

        def h_cel(u, aux):
            return _unit_column(c2 * u[..., 0], ncomp, 2 + dim)

        def h_vel(u, aux):
            h, v, w, p = _sm_prim(u, dim)
            return _unit_column(-2.0 * c2 * v[j], ncomp, 2 + dim)

        def g_b(u, aux):
            return aux[..., 0]

        def g_v(u, aux):
            return u[..., 1 + j] / u[..., 0]

        return (NonconsTerm(h_grav, g_b), NonconsTerm(h_pres, g_b),
                NonconsTerm(h_cel, g_v), NonconsTerm(h_vel, g_b))

    def source(u, aux, coords, t):
        h, v, w, p = _sm_prim(u, dim)
        cols = [np.zeros_like(h) for _ in range(1 + dim)]
        cols.append(2.0 * p)
        cols.append(-2.0 * c2 * w)
        return _stack(*cols)

    def entropy(u, aux):
        h, v, w, p = _sm_prim(u, dim)
        vsq = sum(vi**2 for vi in v)
        return (0.5 * h * (vsq + w**2) + h * p**2 / (2.0 * c2)
                + 0.5 * gravity * h**2 + gravity * h * aux[..., 0])

    def omega(u, aux):
        h, v, w, p = _sm_prim(u, dim)
        vsq = sum(vi**2 for vi in v)
        first = (-0.5 * vsq - 0.5 * w**2 - p**2 / (2.0 * c2)
                 + gravity * (h + aux[..., 0]))
        return _stack(first, *v, w, p / c2)

    def entropy_flux(u, aux, j):
        h, v, w, p = _sm_prim(u, dim)
        return (entropy(u, aux) + 0.5 * gravity * h**2 + h * p) * v[j]

    def psi(u, aux, j):
        h, v, w, p = _sm_prim(u, dim)
        return 0.5 * gravity * h**2 * v[j]

    def wave(u, aux):
        h, v, w, p = _sm_prim(u, dim)
        return np.sqrt(sum(vi**2 for vi in v)) + np.sqrt(gravity * h) + celerity

    def reflect(u, aux, nhat):
        h, v, w, p = _sm_prim(u, dim)
        vn = sum(v[i] * nhat[..., i] for i in range(dim))
        cols = [h] + [h * (v[i] - 2.0 * vn * nhat[..., i]) for i in range(dim)]
        cols.append(u[..., 1 + dim])
        cols.append(u[..., 2 + dim])
        return _stack(*cols)

    names = ("h",) + tuple(f"hv{i+1}" for i in range(dim)) + ("hw", "hp")
    pair = EntropyPair("total_energy", entropy, omega, entropy_flux, psi)
    return SystemDefinition(
        name="sainte_marie", ncomp=ncomp, dim=dim,
        variable_names=names, aux_names=("b",),
        flux=flux, noncons=tuple(noncons_dir(j) for j in range(dim)),
        wave_speed=wave, source=source,
        entropy_pairs={"total_energy": pair}, default_entropy="total_energy",
        reflect=reflect,
        is_admissible=lambda u, aux: u[..., 0] > 0,
        conserved_components=(0,),
        params={"gravity": gravity, "celerity": celerity, "dim": dim},
    )


# ---------------------------------------------------------------------------
# compressible Euler with internal energy as thermodynamic variable
# ---------------------------------------------------------------------------

def euler_pressure(u, gamma: float, dim: int):
    return (gamma - 1.0) * u[..., 1 + dim]


def _euler_prim(u, dim):
    rho = u[..., 0]
    v = [u[..., 1 + i] / rho for i in range(dim)]
    rhoe = u[..., 1 + dim]
    return rho, v, rhoe


def _make_euler(gamma: float, dim: int) -> SystemDefinition:
    if gamma <= 1.0:
        raise ValueError("gamma must exceed 1")
    ncomp = 2 + dim

    def flux(u, aux, j):
        rho, v, rhoe = _euler_prim(u, dim)
        p = (gamma - 1.0) * rhoe
        cols = [u[..., 1 + j]]
        for i in range(dim):
            f = u[..., 1 + i] * v[j]
            if i == j:
                f = f + p
            cols.append(f)
        cols.append((rhoe + p) * v[j])
        return _stack(*cols)

    def noncons_dir(j):
        def h_grav(u, aux):
            return _unit_column(u[..., 0], ncomp, 1 + j)

        def h_pwork(u, aux):
            rho, v, rhoe = _euler_prim(u, dim)
            return _unit_column(-v[j], ncomp, 1 + dim)

        def g_phi(u, aux):
            return aux[..., 0]

        def g_p(u, aux):
            return (gamma - 1.0) * u[..., 1 + dim]

        return (NonconsTerm(h_grav, g_phi), NonconsTerm(h_pwork, g_p))

    def kinetic(u):
        rho, v, rhoe = _euler_prim(u, dim)
        return 0.5 * rho * sum(vi**2 for vi in v)

    # total-energy pair (non-convex functional; conserved for KEP fluxes)
    def energy(u, aux):
        return u[..., 1 + dim] + kinetic(u) + u[..., 0] * aux[..., 0]

    def omega_energy(u, aux):
        rho, v, rhoe = _euler_prim(u, dim)
        vsq = sum(vi**2 for vi in v)
        return _stack(-0.5 * vsq + aux[..., 0], *v, np.ones_like(rho))

    def energy_flux(u, aux, j):
        rho, v, rhoe = _euler_prim(u, dim)
        p = (gamma - 1.0) * rhoe
        return (energy(u, aux) + p) * v[j]

    def psi_energy(u, aux, j):
        rho, v, rhoe = _euler_prim(u, dim)
        return (gamma - 1.0) * rhoe * v[j]

    # thermodynamic entropy pair U = -rho s, s = log(p / rho^gamma)
    def log_s(u):
        rho, v, rhoe = _euler_prim(u, dim)
        return np.log((gamma - 1.0) * rhoe / rho**gamma)

    def neg_rho_s(u, aux):
        return -u[..., 0] * log_s(u)

    def omega_entropy(u, aux):
        rho, v, rhoe = _euler_prim(u, dim)
        zero = np.zeros_like(rho)
        return _stack(gamma - log_s(u), *([zero] * dim), -rho / rhoe)

    def entropy_flux_s(u, aux, j):
        rho, v, rhoe = _euler_prim(u, dim)
        return neg_rho_s(u, aux) * v[j]

    def psi_s(u, aux, j):
        return np.zeros_like(u[..., 0])

    def wave(u, aux):
        rho, v, rhoe = _euler_prim(u, dim)
        p = (gamma - 1.0) * rhoe
        return np.sqrt(sum(vi**2 for vi in v)) + np.sqrt(gamma * p / rho)

    def reflect(u, aux, nhat):
        rho, v, rhoe = _euler_prim(u, dim)
        vn = sum(v[i] * nhat[..., i] for i in range(dim))
        cols = [rho] + [rho * (v[i] - 2.0 * vn * nhat[..., i]) for i in range(dim)]
        cols.append(rhoe)
        return _stack(*cols)

    pairs = {
        "total_energy": EntropyPair("total_energy", energy, omega_energy,
                                    energy_flux, psi_energy),
        "entropy": EntropyPair("entropy", neg_rho_s, omega_entropy,
                               entropy_flux_s, psi_s),
    }
    return SystemDefinition(
        name="euler", ncomp=ncomp, dim=dim,
        variable_names=("rho",) + tuple(f"rhov{i+1}" for i in range(dim)) + ("rhoe",),
        aux_names=("phi",),
        flux=flux, noncons=tuple(noncons_dir(j) for j in range(dim)),
        wave_speed=wave,
        entropy_pairs=pairs, default_entropy="total_energy",
        reflect=reflect,
        is_admissible=lambda u, aux: (u[..., 0] > 0) & (u[..., -1] > 0),
        conserved_components=(0,),
        params={"gamma": gamma, "dim": dim},
    )


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

def make_system(name: str, **params) -> SystemDefinition:
    """Build a system definition by name.

    Recognized names: ``var_advection``, ``coupled_burgers``,
    ``monomial`` (m, n, split), ``shallow_water`` (gravity, dim),
    ``sainte_marie`` (gravity, celerity, dim), ``euler`` (gamma, dim).
    """
    if name == "var_advection":
        _expect(params, ())
        return _make_var_advection()
    if name == "coupled_burgers":
        _expect(params, ())
        return _make_coupled_burgers()
    if name == "monomial":
        _expect(params, ("m", "n", "split"))
        return _make_monomial(int(params["m"]), int(params["n"]),
                              params.get("split", "direct"))
    if name == "shallow_water":
        _expect(params, ("gravity", "dim"))
        return _make_shallow_water(float(params.get("gravity", 9.812)),
                                   int(params.get("dim", 1)))
    if name == "sainte_marie":
        _expect(params, ("gravity", "celerity", "dim"))
        return _make_sainte_marie(float(params.get("gravity", 1.0)),
                                  float(params.get("celerity", 2.0)),
                                  int(params.get("dim", 1)))
    if name == "euler":
        _expect(params, ("gamma", "dim"))
        return _make_euler(float(params.get("gamma", 1.4)),
                           int(params.get("dim", 1)))
    raise ValueError(f"unknown system {name!r}")


def _expect(params: dict, allowed: tuple) -> None:
    extra = set(params) - set(allowed)
    if extra:
        raise ValueError(f"unexpected parameters {sorted(extra)}")


# ---------------------------------------------------------------------------
# entropy compatibility check (finite differences)
# ---------------------------------------------------------------------------

def _fd_directional(fun, u, aux, comp: int, eps: float):
    du = np.zeros_like(u)
    du[..., comp] = eps
    return (fun(u + du, aux) - fun(u - du, aux)) / (2.0 * eps)


def check_entropy_compatibility(system: SystemDefinition, u, aux,
                                direction: int = 0,
                                entropy: str | None = None,
                                eps: float = 1e-6) -> float:
    """Residual of omega . (f' + sum_t H g_t') = F' at the given states.

    Jacobians are taken by central finite differences with step ``eps``;
    the return value is the max-abs mismatch over all state components.
    """
    u = np.asarray(u, dtype=float)
    aux = np.asarray(aux, dtype=float)
    if system.is_admissible is not None and not np.all(system.is_admissible(u, aux)):
        raise ValueError("state is outside the admissible set")
    pair = system.entropy(entropy)
    om = pair.omega(u, aux)
    terms = system.noncons[direction]
    h_vals = [t.H(u, aux) for t in terms]
    worst = 0.0
    for comp in range(system.ncomp):
        dflux = _fd_directional(lambda w, a: system.flux(w, a, direction), u, aux, comp, eps)
        lhs = np.sum(om * dflux, axis=-1)
        for term, h in zip(terms, h_vals):
            dg = _fd_directional(term.g, u, aux, comp, eps)
            lhs = lhs + np.sum(om * h, axis=-1) * dg
        rhs = _fd_directional(lambda w, a: pair.entropy_flux(w, a, direction),
                              u, aux, comp, eps)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst

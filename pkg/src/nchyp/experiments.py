"""Experiment configurations, initial conditions, and the run driver.

A preset captures one complete desk-scale study: system, flux choice, mesh,
CFL, final time, and initial data.  ``run_experiment`` builds everything,
integrates, and returns a picklable summary so batches of runs can be farmed
out to worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict, replace
from typing import Callable

import numpy as np

from . import diagnostics
from .fluxes import make_fluxset
from .mesh import (DEFAULT_WARP_LENGTH, build_mesh_1d, element_nodes_1d,
                   warped_square_mesh)
from .sbp import build_gll_operator
from .semidisc import Discretization, SolutionField
from .systems import make_system
from .timeint import IntegratorConfig, integrate


@dataclass
class ExperimentConfig:
    name: str
    system: str
    flux: str
    ic: str
    degree: int = 3
    elements: int = 32
    mesh_kind: str = "line"        # "line" | "warped2d"
    domain: tuple = (-1.0, 1.0)    # (a, b); warped2d uses (0, L)
    cfl: float = 0.1
    t_final: float = 1.0
    bc: str = "periodic"
    seed: int = 0
    entropy: str | None = None
    system_params: dict = field(default_factory=dict)
    flux_params: dict = field(default_factory=dict)
    output: str | None = None
    callback_interval: int = 0
    method: str = "ssprk104"

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ExperimentResult:
    name: str
    summary: dict
    records: list


@dataclass
class InitialCondition:
    build: Callable                      # (system, coords, config) -> (u0, aux)
    exact: Callable | None = None        # (coords..., t) -> state array
    source: Callable | None = None       # (u, aux, coords, t) -> state array
    summarize: Callable | None = None    # (disc, state0, state) -> dict


# ---------------------------------------------------------------------------
# initial data
# ---------------------------------------------------------------------------

def _ic_advection(system, coords, config):
    x = coords[0]
    u = (2.0 + np.sin(np.pi * (x - 0.7)))[..., None]
    aux = (2.0 + np.cos(np.pi * x))[..., None]
    return u, aux


def _ic_monomial(system, coords, config):
    x = coords[0]
    return np.sin(np.pi * x)[..., None], np.zeros(x.shape + (0,))


def _ic_sainte_marie(system, coords, config):
    x = coords[0]
    h = 1.0 + np.exp(np.sin(2.0 * np.pi * x))
    v = np.ones_like(h)
    w = np.ones_like(h)
    p = 10.0 * np.ones_like(h)
    u = np.stack([h, h * v, h * w, h * p], axis=-1)
    aux = (0.1 * np.exp(np.sin(2.0 * np.pi * x)))[..., None]
    return u, aux


_LAKE_LEVEL = 3.0
_ROUGH_ELEMENT = 7   # 1-based row-major element carrying the bathymetry jump


def _lake_bathymetry(x, y):
    return (1.5 * np.exp(-0.5 * ((x - 1.0) ** 2 + (y - 1.0) ** 2))
            + 0.75 * np.exp(-0.5 * ((x + 1.0) ** 2 + (y + 1.0) ** 2)))


def _ic_lake_at_rest(system, coords, config):
    x, y = coords
    b = _lake_bathymetry(x, y)
    e = _ROUGH_ELEMENT - 1
    b[e] = 2.0 + 0.5 * np.sin(2.0 * np.pi * x[e]) + 0.5 * np.cos(2.0 * np.pi * y[e])
    h = _LAKE_LEVEL - b
    zeros = np.zeros_like(h)
    u = np.stack([h, zeros, zeros, zeros, zeros], axis=-1)
    return u, b[..., None]


def _lake_summary(disc, state0, state):
    h = state.u[..., 0]
    surface = h + state.aux[..., 0] - _LAKE_LEVEL
    v1 = state.u[..., 1] / h
    v2 = state.u[..., 2] / h
    w = state.u[..., 3] / h
    p = state.u[..., 4] / h
    return {
        "wb_surface": diagnostics.mnorm(disc, surface),
        "wb_v1": diagnostics.mnorm(disc, v1),
        "wb_v2": diagnostics.mnorm(disc, v2),
        "wb_w": diagnostics.mnorm(disc, w),
        "wb_p": diagnostics.mnorm(disc, p),
    }


def _ic_euler_gravity(system, coords, config):
    """Isothermal hydrostatic column in the potential phi = x, with a small
    velocity perturbation.  The hydrostatic state is discretely steady for
    the logarithmic-mean gravity factor, including across the periodic wrap
    where the potential jumps, so the perturbed run stays smooth while the
    gravity term keeps exchanging kinetic, internal, and potential energy."""
    x = coords[0]
    gamma = system.params["gamma"]
    rho = np.exp(-x)
    p = np.exp(-x)
    v = 0.05 * np.sin(2.0 * np.pi * x)
    u = np.stack([rho, rho * v, p / (gamma - 1.0)], axis=-1)
    return u, x[..., None]


def _ic_euler_constant(system, coords, config):
    x, y = coords
    gamma = system.params["gamma"]
    rho = np.ones_like(x)
    u = np.stack([rho, 0.3 * rho, -0.2 * rho,
                  np.ones_like(x) / (gamma - 1.0)], axis=-1)
    return u, np.zeros(x.shape + (1,))


def _fsp_summary(disc, state0, state):
    return {"fsp_deviation": float(np.max(np.abs(state.u - state0.u)))}


def _ic_pressure_equilibrium(system, coords, config):
    x = coords[0]
    gamma = system.params["gamma"]
    rng = np.random.default_rng(config.seed)
    rho = 2.0 * np.ones_like(x)
    for k in range(1, 4):
        rho = rho + rng.uniform(0.05, 0.2) * np.sin(2.0 * np.pi * k * x
                                                    + rng.uniform(0, 2 * np.pi))
    u = np.stack([rho, rho, np.ones_like(x) / (gamma - 1.0)], axis=-1)
    return u, np.zeros(x.shape + (1,))


# traveling density profile with stationary velocity; needs source terms
_WAVE_FREQ = math.sqrt(2.0) * math.pi


def _profile(x, t):
    return 2.0 + 0.1 * np.sin(_WAVE_FREQ * (x - t))


def _profile_dt(x, t):
    return -0.1 * _WAVE_FREQ * np.cos(_WAVE_FREQ * (x - t))


def manufactured_solution(x, y, t, gamma: float = 1.4):
    h = _profile(x, t)
    zeros = np.zeros_like(h)
    return np.stack([h, zeros, zeros, h * h - h], axis=-1)


def manufactured_source(gamma: float):
    def source(u, aux, coords, t):
        x, _y = coords
        h = _profile(x, t)
        ht = _profile_dt(x, t)
        zeros = np.zeros_like(h)
        return np.stack([ht,
                         -(gamma - 1.0) * (2.0 * h - 1.0) * ht,
                         zeros,
                         (2.0 * h - 1.0) * ht], axis=-1)
    return source


def _ic_manufactured(system, coords, config):
    x, y = coords
    u = manufactured_solution(x, y, 0.0, system.params["gamma"])
    return u, np.zeros(x.shape + (1,))


IC_REGISTRY = {
    "advection_wave": InitialCondition(_ic_advection),
    "monomial_wave": InitialCondition(_ic_monomial),
    "sainte_marie_wave": InitialCondition(_ic_sainte_marie),
    "lake_at_rest_2d": InitialCondition(_ic_lake_at_rest, summarize=_lake_summary),
    "euler_gravity_wave": InitialCondition(_ic_euler_gravity),
    "euler_constant_2d": InitialCondition(_ic_euler_constant,
                                          summarize=_fsp_summary),
    "pressure_equilibrium": InitialCondition(_ic_pressure_equilibrium),
    "euler_manufactured_2d": InitialCondition(
        _ic_manufactured,
        exact=lambda x, y, t: manufactured_solution(x, y, t),
        source=manufactured_source(1.4)),
}


# ---------------------------------------------------------------------------
# preset catalogue
# ---------------------------------------------------------------------------

def monomial_half_period(m: int, n: int, npoints: int = 1_000_001) -> float:
    """Half the gradient blow-up time of the sine initial data, from a dense
    scan of the characteristic compression rate."""
    x = np.linspace(-1.0, 1.0, npoints)
    rate = n * (m + n - 1) * np.pi * np.sin(np.pi * x) ** (m + n - 2) * np.cos(np.pi * x)
    return float(-0.5 / rate.min())


def _monomial_preset(scheme: str, m: int, n: int) -> ExperimentConfig:
    split = "direct" if scheme == "ec1" else "flux"
    return ExperimentConfig(
        name=f"monomial-{scheme}-{m}{n}",
        system="monomial", flux=f"monomial_{scheme}", ic="monomial_wave",
        degree=3, elements=32, domain=(-1.0, 1.0),
        cfl=0.001, t_final=monomial_half_period(m, n),
        system_params={"m": m, "n": n, "split": split},
        flux_params={"m": m, "n": n},
    )


def _preset_catalogue() -> dict:
    presets: dict[str, Callable[[], ExperimentConfig]] = {}

    presets["advection-ec"] = lambda: ExperimentConfig(
        name="advection-ec", system="var_advection", flux="advection",
        ic="advection_wave", degree=3, elements=32, domain=(-1.0, 1.0),
        cfl=0.01, t_final=1.0)

    for m, n in ((4, 4), (5, 5), (4, 5), (5, 4), (3, 5), (5, 3)):
        for scheme in ("ec1", "ec2"):
            key = f"monomial-{scheme}-{m}{n}"
            presets[key] = (lambda scheme=scheme, m=m, n=n:
                            _monomial_preset(scheme, m, n))

    presets["sainte-marie-ec"] = lambda: ExperimentConfig(
        name="sainte-marie-ec", system="sainte_marie", flux="sainte_marie",
        ic="sainte_marie_wave", degree=3, elements=128, domain=(0.0, 1.0),
        cfl=0.1, t_final=0.1,
        system_params={"gravity": 1.0, "celerity": 2.0, "dim": 1},
        flux_params={"alphas": (0.5, 1.0, 2.0 / 3.0), "gravity": 1.0,
                     "celerity": 2.0, "dim": 1})

    presets["wb2d"] = lambda: ExperimentConfig(
        name="wb2d", system="sainte_marie", flux="sainte_marie",
        ic="lake_at_rest_2d", degree=3, elements=16, mesh_kind="warped2d",
        domain=(0.0, DEFAULT_WARP_LENGTH), cfl=1.0, t_final=100.0, bc="wall",
        system_params={"gravity": 9.81, "celerity": 1.98, "dim": 2},
        flux_params={"alphas": (0.5, 1.0, 2.0 / 3.0), "gravity": 9.81,
                     "celerity": 1.98, "dim": 2})

    presets["euler-fsp"] = lambda: ExperimentConfig(
        name="euler-fsp", system="euler", flux="euler_ec_kep",
        ic="euler_constant_2d", degree=3, elements=16, mesh_kind="warped2d",
        domain=(0.0, DEFAULT_WARP_LENGTH), cfl=0.5, t_final=1.0,
        entropy="total_energy",
        system_params={"gamma": 1.4, "dim": 2},
        flux_params={"gamma": 1.4, "dim": 2})

    presets["euler-gravity-energy"] = lambda: ExperimentConfig(
        name="euler-gravity-energy", system="euler", flux="euler_ec_kep",
        ic="euler_gravity_wave", degree=3, elements=32, domain=(0.0, 1.0),
        cfl=0.01, t_final=0.5, entropy="total_energy",
        system_params={"gamma": 1.4, "dim": 1},
        flux_params={"gamma": 1.4, "dim": 1})

    # time integration is fourth order, so a CFL of 0.1 leaves the spatial
    # error dominant in the refinement study at a tenth of the step count
    presets["euler-manufactured"] = lambda: ExperimentConfig(
        name="euler-manufactured", system="euler", flux="euler_ec_kep",
        ic="euler_manufactured_2d", degree=3, elements=16, mesh_kind="warped2d",
        domain=(0.0, DEFAULT_WARP_LENGTH), cfl=0.1, t_final=2.0,
        entropy="entropy",
        system_params={"gamma": 1.4, "dim": 2},
        flux_params={"gamma": 1.4, "dim": 2})

    return presets


PRESETS = _preset_catalogue()


def make_preset(name: str, **overrides) -> ExperimentConfig:
    try:
        config = PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}") from None
    return replace(config, **overrides) if overrides else config


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def build_discretization(config: ExperimentConfig):
    """Instantiate mesh, operator, system, fluxes, and initial state."""
    system = make_system(config.system, **config.system_params)
    fluxset = make_fluxset(config.flux, **config.flux_params)
    op = build_gll_operator(config.degree)
    ic = IC_REGISTRY[config.ic]

    if config.mesh_kind == "line":
        mesh = build_mesh_1d(config.domain[0], config.domain[1],
                             config.elements, periodic=(config.bc == "periodic"))
        coords = (element_nodes_1d(mesh, op),)
    elif config.mesh_kind == "warped2d":
        side = math.isqrt(config.elements)
        if side * side != config.elements:
            raise ValueError("warped2d runs need a square element count")
        mesh = warped_square_mesh(side, p_geo=config.degree, boundary=config.bc,
                                  length=config.domain[1])
        coords = (mesh.x, mesh.y)
    else:
        raise ValueError(f"unknown mesh kind {config.mesh_kind!r}")

    u0, aux = ic.build(system, coords, config)
    disc = Discretization(mesh, op, system, fluxset, source=ic.source)
    return disc, SolutionField(u0, aux, 0.0), ic


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Integrate one configured experiment and summarize the diagnostics."""
    disc, state0, ic = build_discretization(config)
    exact = None
    if ic.exact is not None:
        exact = ic.exact
    recorder = diagnostics.TraceRecorder(disc, entropy=config.entropy, exact=exact)
    tconf = IntegratorConfig(cfl=config.cfl, t_final=config.t_final,
                             method=config.method,
                             callback_interval=config.callback_interval)
    final = integrate(disc, state0.copy(), tconf, callbacks=(recorder,))

    first = recorder.records[0]
    last = recorder.records[-1]
    summary = {
        "t_final": final.t,
        "entropy_initial": first.entropy,
        "entropy_final": last.entropy,
        "entropy_drift": last.entropy_drift,
        "entropy_residual": last.entropy_residual,
        "mass_initial": first.masses,
        "mass_final": last.masses,
        "mass_drift": last.masses - first.masses,
    }
    if last.error is not None:
        summary["l2_error"] = last.error
    if ic.summarize is not None:
        summary.update(ic.summarize(disc, state0, final))
    if config.output:
        diagnostics.trace_to_csv(config.output, recorder.records,
                                 disc.system.variable_names)
    return ExperimentResult(config.name, summary, recorder.records)


def run_convergence(base: ExperimentConfig, element_counts) -> dict:
    """Refinement study: rerun ``base`` per element count and report EOC."""
    errors = []
    sides = []
    for k in element_counts:
        result = run_experiment(replace(base, elements=int(k), output=None))
        if "l2_error" not in result.summary:
            raise ValueError("convergence study needs an exact solution")
        errors.append(result.summary["l2_error"])
        sides.append(math.sqrt(k) if base.mesh_kind == "warped2d" else k)
    rates = diagnostics.eoc(errors, sides)
    return {"elements": list(element_counts), "errors": errors, "eoc": rates}

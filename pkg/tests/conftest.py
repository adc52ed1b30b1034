"""Shared builders for the test suite."""

import numpy as np

from nchyp.fluxes import make_fluxset
from nchyp.mesh import build_mesh_1d, element_nodes_1d, warped_square_mesh
from nchyp.sbp import build_gll_operator
from nchyp.semidisc import Discretization, SolutionField
from nchyp.systems import make_system

# every entropy-conservative scheme: (system name, system params, flux name,
# flux params, entropy pairs to verify)
EC_SCHEMES_1D = [
    ("var_advection", {}, "advection", {}, (None,)),
    ("coupled_burgers", {}, "coupled_burgers", {}, (None,)),
    ("monomial", {"m": 1, "n": 1, "split": "direct"},
     "monomial_ec1", {"m": 1, "n": 1}, (None,)),
    ("monomial", {"m": 2, "n": 3, "split": "direct"},
     "monomial_ec1", {"m": 2, "n": 3}, (None,)),
    ("monomial", {"m": 4, "n": 5, "split": "direct"},
     "monomial_ec1", {"m": 4, "n": 5}, (None,)),
    ("monomial", {"m": 5, "n": 4, "split": "direct"},
     "monomial_ec1", {"m": 5, "n": 4}, (None,)),
    ("monomial", {"m": 3, "n": 5, "split": "direct"},
     "monomial_ec1", {"m": 3, "n": 5}, (None,)),
    ("monomial", {"m": 4, "n": 4, "split": "flux"},
     "monomial_ec2", {"m": 4, "n": 4, "alpha": 0.5}, (None,)),
    ("monomial", {"m": 4, "n": 5, "split": "flux"},
     "monomial_ec2", {"m": 4, "n": 5, "alpha": 0.5}, (None,)),
    ("shallow_water", {"gravity": 9.812, "dim": 1},
     "shallow_water", {"alpha": 0.0, "gravity": 9.812, "dim": 1}, (None,)),
    ("shallow_water", {"gravity": 9.812, "dim": 1},
     "shallow_water", {"alpha": 0.5, "gravity": 9.812, "dim": 1}, (None,)),
    ("shallow_water", {"gravity": 9.812, "dim": 1},
     "shallow_water", {"alpha": 1.0, "gravity": 9.812, "dim": 1}, (None,)),
    ("sainte_marie", {"gravity": 1.0, "celerity": 2.0, "dim": 1},
     "sainte_marie", {"alphas": (0.5, 1.0, 2 / 3), "gravity": 1.0,
                      "celerity": 2.0, "dim": 1}, (None,)),
    ("euler", {"gamma": 1.4, "dim": 1},
     "euler_ec_kep", {"gamma": 1.4, "dim": 1}, ("entropy", "total_energy")),
]

EC_SCHEMES_2D = [
    ("shallow_water", {"gravity": 9.812, "dim": 2},
     "shallow_water", {"alpha": 0.5, "gravity": 9.812, "dim": 2}, (None,)),
    ("sainte_marie", {"gravity": 9.81, "celerity": 1.98, "dim": 2},
     "sainte_marie", {"alphas": (0.5, 1.0, 2 / 3), "gravity": 9.81,
                      "celerity": 1.98, "dim": 2}, (None,)),
    ("euler", {"gamma": 1.4, "dim": 2},
     "euler_ec_kep", {"gamma": 1.4, "dim": 2}, ("entropy", "total_energy")),
]


def build_scheme(sys_name, sys_params, flux_name, flux_params):
    return make_system(sys_name, **sys_params), make_fluxset(flux_name, **flux_params)


def smooth_state_1d(system, mesh, op, seed=0):
    """Smooth admissible nodal data with nontrivial coefficient fields."""
    x = element_nodes_1d(mesh, op)
    span = mesh.b - mesh.a
    phase = 2.0 * np.pi * (x - mesh.a) / span
    rng = np.random.default_rng(seed)

    def wave(lo, hi, k=1):
        amp = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        return mid + amp * np.sin(k * phase + rng.uniform(0, 2 * np.pi))

    name = system.name
    if name == "var_advection":
        return SolutionField(wave(1.0, 3.0)[..., None], wave(1.0, 3.0, 2)[..., None])
    if name == "coupled_burgers":
        u = np.stack([wave(-1.0, 1.0), wave(-1.0, 1.0, 2)], axis=-1)
        return SolutionField(u, np.zeros(x.shape + (0,)))
    if name.startswith("monomial"):
        return SolutionField(wave(-0.9, 0.9)[..., None], np.zeros(x.shape + (0,)))
    if name == "shallow_water":
        h = wave(1.5, 2.5)
        u = np.stack([h, h * wave(-0.5, 0.5, 2)], axis=-1)
        return SolutionField(u, wave(-0.3, 0.3, 3)[..., None])
    if name == "sainte_marie":
        h = wave(1.5, 2.5)
        u = np.stack([h, h * wave(-0.5, 0.5, 2), h * wave(-0.5, 0.5, 3),
                      h * wave(-2.0, 2.0, 2)], axis=-1)
        return SolutionField(u, wave(-0.3, 0.3, 3)[..., None])
    if name == "euler":
        gamma = system.params["gamma"]
        rho = wave(1.5, 2.5)
        p = wave(1.0, 2.0, 2)
        u = np.stack([rho, rho * wave(-0.5, 0.5, 3), p / (gamma - 1.0)], axis=-1)
        return SolutionField(u, wave(-0.3, 0.3)[..., None])
    raise ValueError(name)


def smooth_state_2d(system, mesh, seed=0):
    x, y = mesh.x, mesh.y
    length = np.max(x) - 0.0
    px = 2.0 * np.pi * x / length
    py = 2.0 * np.pi * y / length
    rng = np.random.default_rng(seed)

    def wave(lo, hi, kx=1, ky=1):
        amp = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        return mid + amp * np.sin(kx * px + rng.uniform(0, 2 * np.pi)) \
            * np.cos(ky * py + rng.uniform(0, 2 * np.pi))

    name = system.name
    if name == "shallow_water":
        h = wave(1.5, 2.5)
        u = np.stack([h, h * wave(-0.5, 0.5, 2), h * wave(-0.5, 0.5, 1, 2)], axis=-1)
        return SolutionField(u, wave(-0.3, 0.3, 2, 2)[..., None])
    if name == "sainte_marie":
        h = wave(1.5, 2.5)
        u = np.stack([h, h * wave(-0.5, 0.5, 2), h * wave(-0.5, 0.5, 1, 2),
                      h * wave(-0.5, 0.5, 2, 2), h * wave(-2.0, 2.0)], axis=-1)
        return SolutionField(u, wave(-0.3, 0.3, 2, 2)[..., None])
    if name == "euler":
        gamma = system.params["gamma"]
        rho = wave(1.5, 2.5)
        p = wave(1.0, 2.0, 2)
        u = np.stack([rho, rho * wave(-0.5, 0.5, 2), rho * wave(-0.5, 0.5, 1, 2),
                      p / (gamma - 1.0)], axis=-1)
        return SolutionField(u, wave(-0.3, 0.3)[..., None])
    raise ValueError(name)


def periodic_disc_1d(sys_name, sys_params, flux_name, flux_params,
                     nelements=8, degree=4, domain=(0.0, 1.0), seed=0):
    system, fluxset = build_scheme(sys_name, sys_params, flux_name, flux_params)
    mesh = build_mesh_1d(*domain, nelements, periodic=True)
    op = build_gll_operator(degree)
    disc = Discretization(mesh, op, system, fluxset)
    return disc, smooth_state_1d(system, mesh, op, seed)


def periodic_disc_2d(sys_name, sys_params, flux_name, flux_params,
                     k_side=3, degree=3, seed=0):
    system, fluxset = build_scheme(sys_name, sys_params, flux_name, flux_params)
    mesh = warped_square_mesh(k_side, p_geo=degree, boundary="periodic")
    op = build_gll_operator(degree)
    disc = Discretization(mesh, op, system, fluxset)
    return disc, smooth_state_2d(system, mesh, seed)

"""Periodic 1D meshes and 2D curvilinear quadrilateral meshes.

The 2D mesh stores the mapping sampled at tensor Gauss-Lobatto nodes and
metric terms obtained by applying the nodal derivative operators to those
samples.  Computing the metric terms that way (instead of differentiating
the analytic map) makes the discrete metric identities

    D1 Y_eta - Y_xi D2^T = 0,     D1 X_eta - X_xi D2^T = 0

hold to round-off for any mapping, which is what free-stream preservation
and curvilinear well-balancing rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .sbp import SbpOperator, build_gll_operator

DEFAULT_WARP_LENGTH = math.sqrt(2.0)


@dataclass(frozen=True)
class Mesh1D:
    a: float
    b: float
    nelements: int
    periodic: bool = True

    @property
    def width(self) -> float:
        return (self.b - self.a) / self.nelements


def build_mesh_1d(a: float, b: float, nelements: int, periodic: bool = True) -> Mesh1D:
    if nelements < 1:
        raise ValueError(f"need at least one element, got {nelements}")
    if not b > a:
        raise ValueError(f"domain must satisfy b > a, got [{a}, {b}]")
    return Mesh1D(a=float(a), b=float(b), nelements=int(nelements), periodic=periodic)


def element_nodes_1d(mesh: Mesh1D, op: SbpOperator) -> np.ndarray:
    """Physical node coordinates, shape (K, N)."""
    dx = mesh.width
    left = mesh.a + dx * np.arange(mesh.nelements)
    return left[:, None] + 0.5 * dx * (op.nodes[None, :] + 1.0)


def warp_map(xi, eta, length: float = DEFAULT_WARP_LENGTH, amplitude: float | None = None):
    """Smooth product-of-sines warp of the square [0, length]^2.

    x = xi  + w sin(2 pi xi / L) sin(2 pi eta / L)
    y = eta + w sin(2 pi xi / L) sin(2 pi eta / L)

    The default amplitude w = L/12 keeps the map bijective.  Corners and the
    whole boundary of the square are fixed points, so the warped mesh remains
    periodic-conforming.
    """
    if amplitude is None:
        amplitude = length / 12.0
    bump = amplitude * np.sin(2.0 * np.pi * np.asarray(xi) / length) \
        * np.sin(2.0 * np.pi * np.asarray(eta) / length)
    return xi + bump, eta + bump


def identity_map(xi, eta):
    return np.asarray(xi, dtype=float), np.asarray(eta, dtype=float)


@dataclass(frozen=True)
class CurvilinearMesh2D:
    """Tensor-product quadrilateral mesh with nodal metric terms.

    Elements are indexed row-major, x fastest (1-based ids in user-facing
    labels).  Arrays have shape (K, N, N) with axis 1 the xi index and
    axis 2 the eta index.
    """

    kx: int
    ky: int
    degree: int
    boundary: str             # "periodic" | "wall"
    x: np.ndarray
    y: np.ndarray
    x_xi: np.ndarray
    x_eta: np.ndarray
    y_xi: np.ndarray
    y_eta: np.ndarray
    jac: np.ndarray

    @property
    def nelements(self) -> int:
        return self.kx * self.ky

    # scaled contravariant normals n1 = (Y_eta, -X_eta), n2 = (-Y_xi, X_xi)
    @property
    def n1x(self) -> np.ndarray:
        return self.y_eta

    @property
    def n1y(self) -> np.ndarray:
        return -self.x_eta

    @property
    def n2x(self) -> np.ndarray:
        return -self.y_xi

    @property
    def n2y(self) -> np.ndarray:
        return self.x_xi

    def element_grid(self) -> np.ndarray:
        """0-based element ids arranged as (ky, kx)."""
        return np.arange(self.nelements).reshape(self.ky, self.kx)


def build_mesh_2d(
    kx: int,
    ky: int,
    mapping: Callable = identity_map,
    p_geo: int = 3,
    boundary: str = "periodic",
    extent: tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0),
) -> CurvilinearMesh2D:
    """Sample ``mapping`` on a kx-by-ky uniform partition of the rectangle.

    The rectangle ``extent`` = (x0, x1, y0, y1) is split uniformly; each
    element's tensor GLL nodes are pushed through ``mapping`` and the metric
    terms are computed by nodal differentiation of the sampled coordinates.
    """
    if kx < 1 or ky < 1:
        raise ValueError("element counts must be positive")
    if p_geo < 1:
        raise ValueError("geometry degree must be at least 1")
    if boundary not in ("periodic", "wall"):
        raise ValueError(f"unknown boundary kind {boundary!r}")
    x0, x1, y0, y1 = extent
    op = build_gll_operator(p_geo)
    n = op.nnodes
    dx = (x1 - x0) / kx
    dy = (y1 - y0) / ky
    ref = 0.5 * (op.nodes + 1.0)

    k = kx * ky
    x = np.empty((k, n, n))
    y = np.empty((k, n, n))
    for ey in range(ky):
        for ex in range(kx):
            e = ey * kx + ex
            xhat = x0 + dx * (ex + ref)[:, None] + 0.0 * ref[None, :]
            yhat = y0 + 0.0 * ref[:, None] + dy * (ey + ref)[None, :]
            xe, ye = mapping(xhat, yhat)
            x[e] = xe
            y[e] = ye

    d = op.deriv
    # differentiate element-centered coordinates: the shift is annihilated
    # exactly, and the matmul round-off scales with the element size instead
    # of the global coordinate magnitude (sharper metric identities)
    xc = x - x.mean(axis=(1, 2), keepdims=True)
    yc = y - y.mean(axis=(1, 2), keepdims=True)
    x_xi = np.einsum("ik,ekj->eij", d, xc)
    y_xi = np.einsum("ik,ekj->eij", d, yc)
    x_eta = np.einsum("jk,eik->eij", d, xc)
    y_eta = np.einsum("jk,eik->eij", d, yc)
    jac = x_xi * y_eta - x_eta * y_xi
    if np.any(jac <= 0.0):
        raise ValueError("mapping is not orientation-preserving: nodal Jacobian <= 0")

    mesh = CurvilinearMesh2D(
        kx=kx, ky=ky, degree=p_geo, boundary=boundary,
        x=x, y=y, x_xi=x_xi, x_eta=x_eta, y_xi=y_xi, y_eta=y_eta, jac=jac,
    )
    for arr in (x, y, x_xi, x_eta, y_xi, y_eta, jac):
        arr.flags.writeable = False
    return mesh


def warped_square_mesh(k_side: int, p_geo: int, boundary: str = "periodic",
                       length: float = DEFAULT_WARP_LENGTH,
                       amplitude: float | None = None) -> CurvilinearMesh2D:
    """Warped mesh of [0, length]^2 used in the 2D test problems."""
    def mapping(xh, yh):
        return warp_map(xh, yh, length=length, amplitude=amplitude)

    return build_mesh_2d(k_side, k_side, mapping, p_geo, boundary,
                         extent=(0.0, length, 0.0, length))


def check_metric_identities(mesh: CurvilinearMesh2D) -> float:
    """Max nodal residual of the two discrete metric identities."""
    d = build_gll_operator(mesh.degree).deriv
    res_y = np.einsum("ik,ekj->eij", d, mesh.y_eta) - np.einsum("jk,eik->eij", d, mesh.y_xi)
    res_x = np.einsum("ik,ekj->eij", d, mesh.x_eta) - np.einsum("jk,eik->eij", d, mesh.x_xi)
    return float(max(np.max(np.abs(res_y)), np.max(np.abs(res_x))))


def min_node_spacing(mesh: CurvilinearMesh2D) -> np.ndarray:
    """Per-node local length scale: reference width 2 times the smallest
    singular value of the mapping Jacobian matrix."""
    a = mesh.x_xi
    b = mesh.x_eta
    c = mesh.y_xi
    e = mesh.y_eta
    # singular values of [[a, b], [c, e]] without forming matrices
    q1 = (a + e) ** 2 + (b - c) ** 2
    q2 = (a - e) ** 2 + (b + c) ** 2
    smin = 0.5 * np.abs(np.sqrt(q1) - np.sqrt(q2))
    return 2.0 * smin

"""Semi-discrete right-hand side assembly.

Flux-differencing volume terms with alpha-blended nonconservative products,
interface coupling, periodic and mirror-wall boundaries, on 1D meshes and 2D
curvilinear meshes.  The production path fuses the strong-form boundary
correction into the extended derivative operator (``skew_extended_derivative``);
``volume_terms``/``surface_terms`` expose the plain split used for testing.

Interface orientation convention: every face carries a global pair
(u-, u+) ordered along the face normal (left-to-right in 1D, owner to
neighbor in 2D).  The conservative interface flux enters with the element's
outward sign, while the fluctuation products enter both sides with the same
global jump g(u+) - g(u-), which is what makes the finite-volume limit come
out as the three-point blended scheme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fluxes import FluxSet
from .mesh import CurvilinearMesh2D, Mesh1D, element_nodes_1d, min_node_spacing
from .sbp import SbpOperator, skew_extended_derivative
from .systems import SystemDefinition


@dataclass
class SolutionField:
    """Per-element nodal state plus auxiliary coefficient fields."""

    u: np.ndarray
    aux: np.ndarray
    t: float = 0.0

    def copy(self) -> "SolutionField":
        return SolutionField(self.u.copy(), self.aux, self.t)


class Discretization:
    """Mesh + operator + system + flux choice, with precomputed assembly data."""

    def __init__(self, mesh, op: SbpOperator, system: SystemDefinition,
                 fluxset: FluxSet, surface_fluxset: FluxSet | None = None,
                 source=None, enable_source: bool = True):
        self.mesh = mesh
        self.op = op
        self.system = system
        self.fluxset = fluxset
        self.surface_fluxset = surface_fluxset or fluxset
        self.enable_source = enable_source
        self._source = source if source is not None else system.source

        if not fluxset.symmetric:
            raise ValueError("volume flux set must be symmetric")
        for j in range(system.dim):
            if len(system.noncons[j]) != len(fluxset.noncons_products):
                raise ValueError("flux set does not match the system's "
                                 "nonconservative terms")
        if len(fluxset.alphas) != len(fluxset.noncons_products):
            raise ValueError("one blending weight per nonconservative term required")

        self.dtilde = skew_extended_derivative(op)
        self.d1 = self.dtilde @ np.ones(op.nnodes)
        self.mass_end = float(op.mass[0])

        if isinstance(mesh, Mesh1D):
            if system.dim != 1:
                raise ValueError("1D mesh requires a one-dimensional system")
            self.dim = 1
            self.coords = (element_nodes_1d(mesh, op),)
            self.jac = 0.5 * mesh.width
            self.local_dx = mesh.width
        elif isinstance(mesh, CurvilinearMesh2D):
            if system.dim != 2:
                raise ValueError("2D mesh requires a two-dimensional system")
            if mesh.degree != op.degree:
                raise ValueError("solution and geometry degrees must agree")
            self.dim = 2
            self.coords = (mesh.x, mesh.y)
            self.jac = mesh.jac
            self.local_dx = min_node_spacing(mesh)
            self._setup_2d()
        else:
            raise TypeError(f"unsupported mesh type {type(mesh)!r}")

    # -- 2D helpers ---------------------------------------------------------

    def _setup_2d(self) -> None:
        mesh = self.mesh
        grid = mesh.element_grid()
        self.metrics = ((mesh.n1x, mesh.n1y), (mesh.n2x, mesh.n2y))
        dt = self.dtilde
        self.dmetrics = (
            (np.einsum("ik,ekj->eij", dt, mesh.n1x),
             np.einsum("ik,ekj->eij", dt, mesh.n1y)),
            (np.einsum("jk,eik->eij", dt, mesh.n2x),
             np.einsum("jk,eik->eij", dt, mesh.n2y)),
        )

        def pair_xi(f):
            return 0.5 * (f[:, :, None, :] + f[:, None, :, :])

        def pair_eta(f):
            return 0.5 * (f[:, :, :, None] + f[:, :, None, :])

        self.pair_metrics = (
            (pair_xi(mesh.n1x), pair_xi(mesh.n1y)),
            (pair_eta(mesh.n2x), pair_eta(mesh.n2y)),
        )
        self.grid = grid
        self.periodic2d = mesh.boundary == "periodic"
        if self.periodic2d:
            self.xneighbor = np.roll(grid, -1, axis=1)
            self.yneighbor = np.roll(grid, -1, axis=0)

    # -- source -------------------------------------------------------------

    def source(self, u, aux, t):
        if not self.enable_source or self._source is None:
            return None
        return self._source(u, aux, self.coords, t)


def _apply_xi(mat, field):
    return np.einsum("ik,ekj...->eij...", mat, field)


def _apply_eta(mat, field):
    return np.einsum("jk,eik...->eij...", mat, field)


# ---------------------------------------------------------------------------
# fused production right-hand side
# ---------------------------------------------------------------------------

def rhs(disc: Discretization, state: SolutionField, t: float | None = None) -> np.ndarray:
    """Semi-discrete time derivative of the state (same shape as state.u)."""
    tt = state.t if t is None else t
    if disc.dim == 1:
        return _rhs_1d(disc, state.u, state.aux, tt)
    return _rhs_2d(disc, state.u, state.aux, tt)


def _local_part_1d(disc, u, aux):
    """(1-alpha)/2 sum_k Dt_ik H(u_i)(g_k - g_i), evaluated without pair tensors."""
    acc = 0.0
    for term, alpha in zip(disc.system.noncons[0], disc.fluxset.alphas):
        if alpha == 1.0:
            continue
        g = term.g(u, aux)
        dg = np.einsum("ik,ek->ei", disc.dtilde, g) - g * disc.d1[None, :]
        acc = acc + (0.5 * (1.0 - alpha)) * term.H(u, aux) * dg[..., None]
    return acc


def _rhs_1d(disc, u, aux, t):
    fs = disc.fluxset
    sys = disc.system
    dt_op = disc.dtilde

    if (fs.fused_rhs_1d is not None and disc.mesh.periodic
            and disc.surface_fluxset is fs and disc._source is None):
        return fs.fused_rhs_1d(dt_op, disc.d1, 1.0 / disc.mass_end,
                               1.0 / disc.jac, u, aux)

    acc = None
    complete = True
    if fs.volume_kernel_1d is not None:
        acc = fs.volume_kernel_1d(dt_op, u, aux)
    if acc is None:
        um = u[:, :, None, :]
        up = u[:, None, :, :]
        am = aux[:, :, None, :]
        ap = aux[:, None, :, :]
        if fs.pair_kernel is not None:
            ker = fs.pair_kernel(um, am, up, ap, None, 0)
        else:
            complete = False
            ker = fs.fnum(um, am, up, ap, 0)
            for product, alpha in zip(fs.noncons_products, fs.alphas):
                if alpha != 0.0:
                    ker = ker + (0.5 * alpha) * product(um, am, up, ap, 0)
        acc = np.einsum("ik,eikc->eic", dt_op, ker)
    if not complete:
        acc = acc + _local_part_1d(disc, u, aux)

    # interface coupling (global left-to-right pairs)
    periodic = disc.mesh.periodic
    if periodic:
        u_l, a_l = u[:, -1, :], aux[:, -1, :]
        u_r = np.roll(u, -1, axis=0)[:, 0, :]
        a_r = np.roll(aux, -1, axis=0)[:, 0, :]
    else:
        if sys.reflect is None:
            raise ValueError(f"system {sys.name!r} has no wall reflection")
        nhat_r = np.ones((1, 1))
        ghost_r = sys.reflect(u[-1:, -1, :], aux[-1:, -1, :], nhat_r)
        ghost_l = sys.reflect(u[:1, 0, :], aux[:1, 0, :], -nhat_r)
        u_l = np.concatenate([ghost_l, u[:, -1, :]], axis=0)
        a_l = np.concatenate([aux[:1, 0, :], aux[:, -1, :]], axis=0)
        u_r = np.concatenate([u[:, 0, :], ghost_r], axis=0)
        a_r = np.concatenate([aux[:, 0, :], aux[-1:, -1, :]], axis=0)

    bracket_m, bracket_p = _face_brackets(disc, u_l, a_l, u_r, a_r, None, 0)
    inv_m = 1.0 / disc.mass_end
    if periodic:
        acc[:, -1, :] += inv_m * bracket_m
        acc[:, 0, :] += inv_m * np.roll(bracket_p, 1, axis=0)
    else:
        acc[:, -1, :] += inv_m * bracket_m[1:]
        acc[:, 0, :] += inv_m * bracket_p[:-1]

    out = -acc / disc.jac
    src = disc.source(u, aux, t)
    if src is not None:
        out = out + src
    return out


def _face_brackets(disc, u_l, a_l, u_r, a_r, normal, j, need_plus=True):
    """Per-face surface brackets for the minus and plus side elements.

    ``normal`` is the scaled face normal as (nx, ny) arrays in 2D, or None in
    1D (normal +1).  The minus side receives +n.f_num plus its fluctuation
    share; the plus side receives -n.f_num plus its own share.
    """
    sfs = disc.surface_fluxset
    sys = disc.system
    if disc.dim == 1:
        if sfs.pair_kernel is not None:
            bm = sfs.pair_kernel(u_l, a_l, u_r, a_r, None, 0)
            bp = -sfs.pair_kernel(u_r, a_r, u_l, a_l, None, 0) if need_plus else None
            return bm, bp
        fstar = sfs.fnum(u_l, a_l, u_r, a_r, 0)
        common = np.zeros_like(fstar)
        for product, alpha in zip(sfs.noncons_products, sfs.alphas):
            if alpha != 0.0:
                common = common + (0.5 * alpha) * product(u_l, a_l, u_r, a_r, 0)
        base_m = fstar + common
        base_p = -fstar + common
        loc_m = np.zeros_like(base_m)
        loc_p = np.zeros_like(base_m)
        for term, alpha in zip(sys.noncons[0], sfs.alphas):
            if alpha != 1.0:
                gj = (term.g(u_r, a_r) - term.g(u_l, a_l))[..., None]
                loc_m = loc_m + (0.5 * (1.0 - alpha)) * term.H(u_l, a_l) * gj
                loc_p = loc_p + (0.5 * (1.0 - alpha)) * term.H(u_r, a_r) * gj
        return base_m + loc_m, base_p + loc_p

    nx, ny = normal
    if sfs.pair_kernel is not None:
        bm = sfs.pair_kernel(u_l, a_l, u_r, a_r, (nx, ny), 0)
        bp = -sfs.pair_kernel(u_r, a_r, u_l, a_l, (nx, ny), 0) if need_plus else None
        return bm, bp
    fstar = nx[..., None] * sfs.fnum(u_l, a_l, u_r, a_r, 0) \
        + ny[..., None] * sfs.fnum(u_l, a_l, u_r, a_r, 1)
    common = np.zeros_like(fstar)
    for tdx, alpha in enumerate(sfs.alphas):
        if alpha == 0.0:
            continue
        for comp, nd in ((0, nx), (1, ny)):
            prod = sfs.noncons_products[tdx](u_l, a_l, u_r, a_r, comp)
            common = common + (0.5 * alpha) * nd[..., None] * prod
    base_m = fstar + common
    base_p = -fstar + common
    loc_m = np.zeros_like(base_m)
    loc_p = np.zeros_like(base_m) if need_plus else None
    for tdx, alpha in enumerate(sfs.alphas):
        if alpha == 1.0:
            continue
        for comp, nd in ((0, nx), (1, ny)):
            term = sys.noncons[comp][tdx]
            gj = (term.g(u_r, a_r) - term.g(u_l, a_l)) * nd
            loc_m = loc_m + (0.5 * (1.0 - alpha)) * term.H(u_l, a_l) * gj[..., None]
            if need_plus:
                loc_p = loc_p + (0.5 * (1.0 - alpha)) * term.H(u_r, a_r) * gj[..., None]
    if not need_plus:
        return base_m + loc_m, None
    return base_m + loc_m, base_p + loc_p


def _volume_pair_2d(disc, u, aux, direction):
    """Symmetric volume kernel (conservative + alpha products) contracted with
    the fused operator along one reference direction."""
    fs = disc.fluxset
    nx, ny = disc.pair_metrics[direction]
    if direction == 0:
        um = u[:, :, None, :, :]
        up = u[:, None, :, :, :]
        am = aux[:, :, None, :, :]
        ap = aux[:, None, :, :, :]
    else:
        um = u[:, :, :, None, :]
        up = u[:, :, None, :, :]
        am = aux[:, :, :, None, :]
        ap = aux[:, :, None, :, :]
    if fs.pair_kernel is not None:
        ker = fs.pair_kernel(um, am, up, ap, (nx, ny), 0)
    else:
        ker = nx[..., None] * fs.fnum(um, am, up, ap, 0) \
            + ny[..., None] * fs.fnum(um, am, up, ap, 1)
        for tdx, alpha in enumerate(fs.alphas):
            if alpha == 0.0:
                continue
            ker = ker + (0.5 * alpha) * (
                nx[..., None] * fs.noncons_products[tdx](um, am, up, ap, 0)
                + ny[..., None] * fs.noncons_products[tdx](um, am, up, ap, 1))
    if direction == 0:
        return np.einsum("ik,eikjc->eijc", disc.dtilde, ker)
    return np.einsum("jk,eijkc->eijc", disc.dtilde, ker)


def _local_part_2d(disc, u, aux, direction):
    """(1-alpha)/2 pointwise-factor volume share in one reference direction,
    using the rank-four expansion of the metric-averaged jump."""
    sys = disc.system
    fs = disc.fluxset
    apply_d = _apply_xi if direction == 0 else _apply_eta
    d1 = disc.d1[None, :, None] if direction == 0 else disc.d1[None, None, :]
    acc = 0.0
    for tdx, alpha in enumerate(fs.alphas):
        if alpha == 1.0:
            continue
        share = 0.0
        for comp, nd, dnd in ((0, disc.metrics[direction][0], disc.dmetrics[direction][0]),
                              (1, disc.metrics[direction][1], disc.dmetrics[direction][1])):
            term = sys.noncons[comp][tdx]
            g = term.g(u, aux)
            dg = apply_d(disc.dtilde, g) - g * d1
            scal = 0.5 * (nd * dg + apply_d(disc.dtilde, nd * g) - g * dnd)
            share = share + term.H(u, aux) * scal[..., None]
        acc = acc + (0.5 * (1.0 - alpha)) * share
    return acc


def _mirror(sys, u_trace, a_trace, nx, ny, outward: float):
    """Mirror ghost across a wall face with scaled normal (nx, ny);
    ``outward`` flips the normal so it points out of the domain."""
    nrm = np.sqrt(nx * nx + ny * ny)
    nhat = np.stack([outward * nx / nrm, outward * ny / nrm], axis=-1)
    return sys.reflect(u_trace, a_trace, nhat)


def _direction_faces(disc, u, aux, direction):
    """Assemble the global face pair arrays (minus, plus) and face normals for
    one reference direction, wall ghosts included, in face-normal orientation."""
    sys = disc.system
    mesh = disc.mesh
    grid = disc.grid
    if direction == 0:
        n_da, n_db = mesh.n1x, mesh.n1y
        tr_minus = (grid, -1)
        tr_plus = (grid, 0)
    else:
        n_da, n_db = mesh.n2x, mesh.n2y
        tr_minus = (grid, slice(None), -1)
        tr_plus = (grid, slice(None), 0)
    um_in = u[tr_minus]
    am_in = aux[tr_minus]
    up_in = u[tr_plus]
    ap_in = aux[tr_plus]
    nx_in = n_da[tr_minus]
    ny_in = n_db[tr_minus]
    if disc.periodic2d:
        shift_axis = 1 if direction == 0 else 0
        u_r = np.roll(up_in, -1, axis=shift_axis)
        a_r = np.roll(ap_in, -1, axis=shift_axis)
        return um_in, am_in, u_r, a_r, nx_in, ny_in

    # wall boundary: prepend the ghost face of the low side, append the ghost
    # face of the high side; every face keeps the global (minus, plus) order
    axis = 1 if direction == 0 else 0
    nx0 = np.expand_dims(n_da[tr_plus].take(0, axis=axis), axis)
    ny0 = np.expand_dims(n_db[tr_plus].take(0, axis=axis), axis)
    u0 = np.expand_dims(up_in.take(0, axis=axis), axis)
    a0 = np.expand_dims(ap_in.take(0, axis=axis), axis)
    ghost_lo = _mirror(sys, u0, a0, nx0, ny0, -1.0)
    u1 = np.expand_dims(um_in.take(-1, axis=axis), axis)
    a1 = np.expand_dims(am_in.take(-1, axis=axis), axis)
    nx1 = np.expand_dims(nx_in.take(-1, axis=axis), axis)
    ny1 = np.expand_dims(ny_in.take(-1, axis=axis), axis)
    ghost_hi = _mirror(sys, u1, a1, nx1, ny1, 1.0)
    u_l = np.concatenate([ghost_lo, um_in], axis=axis)
    a_l = np.concatenate([a0, am_in], axis=axis)
    u_r = np.concatenate([up_in, ghost_hi], axis=axis)
    a_r = np.concatenate([ap_in, a1], axis=axis)
    nx = np.concatenate([nx0, nx_in], axis=axis)
    ny = np.concatenate([ny0, ny_in], axis=axis)
    return u_l, a_l, u_r, a_r, nx, ny


def _rhs_2d(disc, u, aux, t):
    acc = _volume_pair_2d(disc, u, aux, 0) + _volume_pair_2d(disc, u, aux, 1)
    if disc.fluxset.pair_kernel is None:
        for direction in (0, 1):
            loc = _local_part_2d(disc, u, aux, direction)
            if not np.isscalar(loc):
                acc = acc + loc

    grid = disc.grid
    inv_m = 1.0 / disc.mass_end
    for direction in (0, 1):
        u_l, a_l, u_r, a_r, nx, ny = _direction_faces(disc, u, aux, direction)
        bm, bp = _face_brackets(disc, u_l, a_l, u_r, a_r, (nx, ny), direction)
        axis = 1 if direction == 0 else 0
        if disc.periodic2d:
            plus_elems = disc.xneighbor if direction == 0 else disc.yneighbor
            minus_elems = grid
        else:
            take_m = [slice(None)] * 2
            take_m[axis] = slice(1, None)
            take_p = [slice(None)] * 2
            take_p[axis] = slice(0, -1)
            bm = bm[tuple(take_m)]
            bp = bp[tuple(take_p)]
            minus_elems = plus_elems = grid
        if direction == 0:
            acc[minus_elems, -1, :, :] += inv_m * bm
            acc[plus_elems, 0, :, :] += inv_m * bp
        else:
            acc[minus_elems, :, -1, :] += inv_m * bm
            acc[plus_elems, :, 0, :] += inv_m * bp

    out = -acc / disc.jac[..., None]
    src = disc.source(u, aux, t)
    if src is not None:
        out = out + src
    return out


# ---------------------------------------------------------------------------
# reference (unfused) volume and surface terms
# ---------------------------------------------------------------------------

def volume_terms(disc: Discretization, state: SolutionField) -> np.ndarray:
    """Flux-differencing volume terms: per direction, 2 D f_vol plus the
    alpha-blended nonconservative shares (no boundary correction, no 1/J)."""
    u, aux = state.u, state.aux
    fs = disc.fluxset
    sys = disc.system
    d = disc.op.deriv
    if disc.dim == 1:
        um, up = u[:, :, None, :], u[:, None, :, :]
        am, ap = aux[:, :, None, :], aux[:, None, :, :]
        ker = 2.0 * fs.fnum(um, am, up, ap, 0)
        for tdx, (term, alpha) in enumerate(zip(sys.noncons[0], fs.alphas)):
            if alpha != 0.0:
                ker = ker + alpha * fs.noncons_products[tdx](um, am, up, ap, 0)
            if alpha != 1.0:
                gj = (term.g(up, ap) - term.g(um, am))[..., None]
                ker = ker + (1.0 - alpha) * term.H(um, am) * gj
        return np.einsum("ik,eikc->eic", d, ker)

    out = np.zeros_like(u)
    for direction in (0, 1):
        nmx, nmy = disc.metrics[direction]
        if direction == 0:
            um, up = u[:, :, None, :, :], u[:, None, :, :, :]
            am, ap = aux[:, :, None, :, :], aux[:, None, :, :, :]
            nx = 0.5 * (nmx[:, :, None, :] + nmx[:, None, :, :])
            ny = 0.5 * (nmy[:, :, None, :] + nmy[:, None, :, :])
        else:
            um, up = u[:, :, :, None, :], u[:, :, None, :, :]
            am, ap = aux[:, :, :, None, :], aux[:, :, None, :, :]
            nx = 0.5 * (nmx[:, :, :, None] + nmx[:, :, None, :])
            ny = 0.5 * (nmy[:, :, :, None] + nmy[:, :, None, :])
        ker = 2.0 * (nx[..., None] * fs.fnum(um, am, up, ap, 0)
                     + ny[..., None] * fs.fnum(um, am, up, ap, 1))
        for tdx, alpha in enumerate(fs.alphas):
            for comp, nd in ((0, nx), (1, ny)):
                term = sys.noncons[comp][tdx]
                if alpha != 0.0:
                    prod = fs.noncons_products[tdx](um, am, up, ap, comp)
                    ker = ker + alpha * nd[..., None] * prod
                if alpha != 1.0:
                    gj = (term.g(up, ap) - term.g(um, am)) * nd
                    ker = ker + (1.0 - alpha) * term.H(um, am) * gj[..., None]
        if direction == 0:
            out = out + np.einsum("ik,eikjc->eijc", d, ker)
        else:
            out = out + np.einsum("jk,eijkc->eijc", d, ker)
    return out


def surface_terms(disc: Discretization, state: SolutionField) -> np.ndarray:
    """Interface and boundary coupling with the strong-form correction,
    premultiplied by the inverse mass (no 1/J)."""
    u, aux = state.u, state.aux
    sys = disc.system
    out = np.zeros_like(u)
    inv_m = 1.0 / disc.mass_end
    if disc.dim == 1:
        if not disc.mesh.periodic:
            raise NotImplementedError("reference surface terms: periodic 1D only")
        u_l, a_l = u[:, -1, :], aux[:, -1, :]
        u_r = np.roll(u, -1, axis=0)[:, 0, :]
        a_r = np.roll(aux, -1, axis=0)[:, 0, :]
        bm, bp = _face_brackets(disc, u_l, a_l, u_r, a_r, None, 0)
        out[:, -1, :] += inv_m * (bm - sys.flux(u[:, -1, :], aux[:, -1, :], 0))
        out[:, 0, :] += inv_m * (np.roll(bp, 1, axis=0)
                                 + sys.flux(u[:, 0, :], aux[:, 0, :], 0))
        return out

    mesh = disc.mesh
    grid = disc.grid
    for direction in (0, 1):
        u_l, a_l, u_r, a_r, nx, ny = _direction_faces(disc, u, aux, direction)
        bm, bp = _face_brackets(disc, u_l, a_l, u_r, a_r, (nx, ny), direction)
        axis = 1 if direction == 0 else 0
        if disc.periodic2d:
            plus_elems = disc.xneighbor if direction == 0 else disc.yneighbor
            minus_elems = grid
        else:
            take_m = [slice(None)] * 2
            take_m[axis] = slice(1, None)
            take_p = [slice(None)] * 2
            take_p[axis] = slice(0, -1)
            bm = bm[tuple(take_m)]
            bp = bp[tuple(take_p)]
            minus_elems = plus_elems = grid
        if direction == 0:
            tr_hi = (grid, -1)
            tr_lo = (grid, 0)
            n_da, n_db = mesh.n1x, mesh.n1y
        else:
            tr_hi = (grid, slice(None), -1)
            tr_lo = (grid, slice(None), 0)
            n_da, n_db = mesh.n2x, mesh.n2y

        def strong(tr):
            return n_da[tr][..., None] * sys.flux(u[tr], aux[tr], 0) \
                + n_db[tr][..., None] * sys.flux(u[tr], aux[tr], 1)

        if direction == 0:
            out[minus_elems, -1, :, :] += inv_m * bm
            out[plus_elems, 0, :, :] += inv_m * bp
            out[grid, -1, :, :] -= inv_m * strong(tr_hi)
            out[grid, 0, :, :] += inv_m * strong(tr_lo)
        else:
            out[minus_elems, :, -1, :] += inv_m * bm
            out[plus_elems, :, 0, :] += inv_m * bp
            out[grid, :, -1, :] -= inv_m * strong(tr_hi)
            out[grid, :, 0, :] += inv_m * strong(tr_lo)
    return out


# ---------------------------------------------------------------------------
# three-point finite-volume limit (degree 0), assembled independently
# ---------------------------------------------------------------------------

def three_point_fv_rhs(disc: Discretization, state: SolutionField) -> np.ndarray:
    """Blended three-point finite-volume update on a periodic 1D ring."""
    if disc.dim != 1 or disc.op.degree != 0 or not disc.mesh.periodic:
        raise ValueError("finite-volume path: periodic 1D mesh with degree 0")
    sys = disc.system
    fs = disc.fluxset
    sfs = disc.surface_fluxset
    u = state.u[:, 0, :]
    aux = state.aux[:, 0, :]
    dx = disc.mesh.width
    u_p = np.roll(u, -1, axis=0)
    a_p = np.roll(aux, -1, axis=0)

    flux_r = sfs.fnum(u, aux, u_p, a_p, 0)
    acc = flux_r - np.roll(flux_r, 1, axis=0)
    for term, product, alpha in zip(sys.noncons[0], sfs.noncons_products, sfs.alphas):
        if alpha != 0.0:
            pr = product(u, aux, u_p, a_p, 0)
            acc = acc + 0.5 * alpha * (pr + np.roll(pr, 1, axis=0))
        if alpha != 1.0:
            gj = (term.g(u_p, a_p) - term.g(u, aux))[..., None]
            h_here = term.H(u, aux)
            acc = acc + 0.5 * (1.0 - alpha) * h_here * (gj + np.roll(gj, 1, axis=0))
    out = (-acc / dx)[:, None, :]
    src = disc.source(state.u, state.aux, state.t)
    if src is not None:
        out = out + src
    return out


# ---------------------------------------------------------------------------
# split-form identities for scalar nonconservative volume kernels
# ---------------------------------------------------------------------------

_SPLIT_VARIANTS = ("form1", "form2-mean", "form3-mean",
                   "form4-mean-prod", "form4-mean-mean", "form4-prod-mean")


def split_form_equivalence(op: SbpOperator, h: np.ndarray, g: np.ndarray,
                           variant: str) -> float:
    """Max nodal deviation between a two-point volume kernel and its
    equivalent split/strong operator form, for scalar nodal data h, g."""
    if variant not in _SPLIT_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; options: {_SPLIT_VARIANTS}")
    d = op.deriv
    h = np.asarray(h, dtype=float)
    g = np.asarray(g, dtype=float)
    hi = h[:, None]
    hk = h[None, :]
    gi = g[:, None]
    gk = g[None, :]
    if variant == "form1":
        kernel = (d * (hi * (gk - gi))).sum(axis=1)
        operator = h * (d @ g)
    elif variant == "form2-mean":
        kernel = (2.0 * d * (hi * 0.5 * (gi + gk))).sum(axis=1)
        operator = h * (d @ g)
    elif variant == "form3-mean":
        kernel = (d * (0.5 * (hi + hk) * (gk - gi))).sum(axis=1)
        operator = 0.5 * (d @ (h * g) + h * (d @ g) - g * (d @ h))
    elif variant == "form4-mean-prod":
        kernel = (2.0 * d * (0.5 * (hi * gi + hk * gk) - 0.5 * (hi + hk) * gi)).sum(axis=1)
        operator = d @ (h * g) - g * (d @ h)
    elif variant == "form4-mean-mean":
        kernel = (2.0 * d * (0.25 * (hi + hk) * (gi + gk) - 0.5 * (hi + hk) * gi)).sum(axis=1)
        operator = 0.5 * (d @ (h * g) + h * (d @ g) - g * (d @ h))
    else:  # form4-prod-mean
        kernel = (2.0 * d * (0.5 * (hi * gk + hk * gi) - 0.5 * (hi + hk) * gi)).sum(axis=1)
        operator = h * (d @ g)
    return float(np.max(np.abs(kernel - operator)))

"""Diagonal-norm summation-by-parts (SBP) operators on Gauss-Lobatto-Legendre nodes.

The operator bundle (M, D, R, B, N1) satisfies the SBP identity

    M D + D^T M = R^T B N1 R

exactly to round-off, which is what every energy/entropy estimate in the
discretizations downstream rests on.  Degree 0 is the finite-volume limit
(single node, zero derivative).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DEGREE = 20
_NEWTON_TOL = 1e-15
_NEWTON_MAXIT = 100


@dataclass(frozen=True)
class SbpOperator:
    """One-dimensional SBP operator on the reference interval [-1, 1].

    ``mass`` is the diagonal of the quadrature matrix M, ``deriv`` the nodal
    differentiation matrix D, ``restriction`` the (2, N) boundary pick-off R,
    and ``boundary_mass``/``normal_sign`` the diagonals of B and N1.
    """

    degree: int
    nodes: np.ndarray
    mass: np.ndarray
    deriv: np.ndarray
    restriction: np.ndarray
    boundary_mass: np.ndarray
    normal_sign: np.ndarray

    @property
    def nnodes(self) -> int:
        return self.degree + 1


def _legendre(p: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate P_p and P_{p-1} by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    pk_minus = np.ones_like(x)
    if p == 0:
        return pk_minus, np.zeros_like(x)
    pk = x.copy()
    for k in range(2, p + 1):
        pk, pk_minus = ((2 * k - 1) * x * pk - (k - 1) * pk_minus) / k, pk
    return pk, pk_minus


def _gll_nodes(p: int) -> np.ndarray:
    """Gauss-Lobatto-Legendre nodes: +-1 plus the roots of P_p'."""
    if p == 0:
        return np.array([0.0])
    if p == 1:
        return np.array([-1.0, 1.0])
    # Newton on P_p', seeded with Chebyshev-Lobatto points.  The second
    # derivative comes from the Legendre ODE (1-x^2) P'' = 2 x P' - p(p+1) P.
    x = -np.cos(np.pi * np.arange(1, p) / p)
    for _ in range(_NEWTON_MAXIT):
        pk, pk_minus = _legendre(p, x)
        dpk = p * (x * pk - pk_minus) / (x * x - 1.0)
        ddpk = (2.0 * x * dpk - p * (p + 1) * pk) / (1.0 - x * x)
        dx = dpk / ddpk
        x = x - dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    nodes = np.concatenate(([-1.0], x, [1.0]))
    # enforce exact symmetry of the node set
    return 0.5 * (nodes - nodes[::-1])


def _gll_weights(p: int, nodes: np.ndarray) -> np.ndarray:
    if p == 0:
        return np.array([2.0])
    pk, _ = _legendre(p, nodes)
    w = 2.0 / (p * (p + 1) * pk * pk)
    return 0.5 * (w + w[::-1])


def _lagrange_deriv_matrix(nodes: np.ndarray) -> np.ndarray:
    """Collocation derivative D_ij = l_j'(x_i) via barycentric weights."""
    n = len(nodes)
    if n == 1:
        return np.zeros((1, 1))
    dx = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(dx, 1.0)
    lam = 1.0 / dx.prod(axis=1)
    d = (lam[None, :] / lam[:, None]) / dx
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -d.sum(axis=1))
    return d


def build_gll_operator(p: int) -> SbpOperator:
    """Construct the degree-p Gauss-Lobatto collocation SBP operator."""
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise TypeError(f"degree must be an integer, got {p!r}")
    if p < 0 or p > MAX_DEGREE:
        raise ValueError(f"degree must be in [0, {MAX_DEGREE}], got {p}")
    nodes = _gll_nodes(p)
    mass = _gll_weights(p, nodes)
    deriv = _lagrange_deriv_matrix(nodes)
    n = p + 1
    restriction = np.zeros((2, n))
    restriction[0, 0] = 1.0
    restriction[1, -1] = 1.0
    op = SbpOperator(
        degree=p,
        nodes=nodes,
        mass=mass,
        deriv=deriv,
        restriction=restriction,
        boundary_mass=np.array([1.0, 1.0]),
        normal_sign=np.array([-1.0, 1.0]),
    )
    for arr in (op.nodes, op.mass, op.deriv, op.restriction,
                op.boundary_mass, op.normal_sign):
        arr.flags.writeable = False
    return op


def boundary_matrix(op: SbpOperator) -> np.ndarray:
    """Return R^T B N1 R, the diagonal boundary operator."""
    rbn = op.restriction.T @ np.diag(op.boundary_mass * op.normal_sign) @ op.restriction
    return rbn


def verify_sbp_property(op: SbpOperator) -> float:
    """Max-abs entry of M D + D^T M - R^T B N1 R."""
    md = op.mass[:, None] * op.deriv
    res = md + md.T - boundary_matrix(op)
    return float(np.max(np.abs(res)))


def polynomial_accuracy(op: SbpOperator, k: int) -> float:
    """Max nodal error of D applied to x^k against k x^(k-1)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    xk = op.nodes**k
    exact = np.zeros_like(op.nodes) if k == 0 else k * op.nodes ** (k - 1)
    return float(np.max(np.abs(op.deriv @ xk - exact)))


def skew_extended_derivative(op: SbpOperator) -> np.ndarray:
    """Fused flux-differencing operator 2 D - M^{-1} R^T B N1 R.

    With symmetric two-point kernels this single matrix carries both the
    volume contraction and the strong-form boundary correction: contracting
    it against a consistent kernel reproduces 2 D f_vol minus the diagonal
    boundary flux term, so only the interface numerical fluxes remain to be
    added at the element boundaries.
    """
    return 2.0 * op.deriv - boundary_matrix(op) / op.mass[:, None]

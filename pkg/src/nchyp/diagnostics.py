"""Entropy/mass functionals, residuals, error norms, convergence rates."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .semidisc import Discretization, SolutionField, rhs


def quadrature_weights(disc: Discretization) -> np.ndarray:
    """Nodal weights J * (mass quadrature), shaped like one state component."""
    m = disc.op.mass
    if disc.dim == 1:
        return disc.jac * np.broadcast_to(m, disc.coords[0].shape)
    return disc.jac * (m[:, None] * m[None, :])


def total_functional(disc: Discretization, state: SolutionField, phi) -> float:
    """Integral of a nodal functional phi(u, aux) over the mesh."""
    return float(np.sum(quadrature_weights(disc) * phi(state.u, state.aux)))


def component_totals(disc: Discretization, state: SolutionField) -> np.ndarray:
    w = quadrature_weights(disc)[..., None]
    return np.sum(w * state.u, axis=tuple(range(state.u.ndim - 1)))


def entropy_total(disc: Discretization, state: SolutionField,
                  entropy: str | None = None) -> float:
    pair = disc.system.entropy(entropy)
    return total_functional(disc, state, pair.U)


def entropy_residual(disc: Discretization, state: SolutionField,
                     entropy: str | None = None) -> float:
    """Instantaneous entropy rate omega . (J M) rhs summed over all nodes."""
    pair = disc.system.entropy(entropy)
    om = pair.omega(state.u, state.aux)
    dudt = rhs(disc, state)
    return float(np.sum(quadrature_weights(disc)[..., None] * om * dudt))


def mnorm(disc: Discretization, values: np.ndarray) -> float:
    """Quadrature norm sqrt(sum J M values^2) of a nodal scalar field."""
    return math.sqrt(float(np.sum(quadrature_weights(disc) * values**2)))


def l2_error(disc: Discretization, state: SolutionField, exact) -> float:
    """Discrete L2 distance to ``exact(coords..., t)`` over all components."""
    ue = exact(*disc.coords, state.t)
    diff = state.u - ue
    w = quadrature_weights(disc)[..., None]
    return math.sqrt(float(np.sum(w * diff**2)))


def eoc(errors, resolutions) -> list:
    """Observed orders log(e_{k-1}/e_k) / log(N_k/N_{k-1})."""
    errors = list(errors)
    resolutions = list(resolutions)
    if len(errors) != len(resolutions) or len(errors) < 2:
        raise ValueError("need matching error/resolution lists of length >= 2")
    if any(e <= 0 for e in errors):
        raise ValueError("errors must be positive")
    return [math.log(errors[k - 1] / errors[k]) / math.log(resolutions[k] / resolutions[k - 1])
            for k in range(1, len(errors))]


@dataclass
class DiagnosticsRecord:
    t: float
    entropy: float
    entropy_residual: float
    entropy_drift: float        # |total(t) - total(0)| / |total(0)|
    entropy_diff_norm: float    # quadrature norm of U(u(t)) - U(u(0)), scaled
    masses: np.ndarray
    error: float | None = None


class TraceRecorder:
    """Callback collecting a DiagnosticsRecord per invocation.

    The entropy drift is reported both as the (normalized) difference of the
    entropy integrals and as the integral norm of the nodal entropy
    difference against the initial state.
    """

    def __init__(self, disc: Discretization, entropy: str | None = None,
                 exact=None, with_residual: bool = True):
        self.disc = disc
        self.entropy = entropy
        self.exact = exact
        self.with_residual = with_residual
        self.records: list[DiagnosticsRecord] = []
        self._u0 = None
        self._e0 = None

    def __call__(self, state: SolutionField, nstep: int) -> None:
        disc = self.disc
        pair = disc.system.entropy(self.entropy)
        total = entropy_total(disc, state, self.entropy)
        if self._u0 is None:
            self._u0 = state.u.copy()
            self._e0 = total
        scale = abs(self._e0) if self._e0 else 1.0
        drift = abs(total - self._e0) / scale
        diff = pair.U(state.u, state.aux) - pair.U(self._u0, state.aux)
        diff_norm = mnorm(disc, diff) / scale
        res = entropy_residual(disc, state, self.entropy) if self.with_residual else 0.0
        err = l2_error(disc, state, self.exact) if self.exact is not None else None
        self.records.append(DiagnosticsRecord(
            t=state.t, entropy=total, entropy_residual=res,
            entropy_drift=drift, entropy_diff_norm=diff_norm,
            masses=component_totals(disc, state), error=err))


def trace_to_csv(path, records, variable_names) -> None:
    """Write diagnostics rows with 17 significant digits."""
    fields = ["t", "entropy", "entropy_residual", "entropy_drift",
              "entropy_diff_norm"]
    fields += [f"mass_{name}" for name in variable_names]
    has_error = any(r.error is not None for r in records)
    if has_error:
        fields.append("error")

    def fmt(x):
        return f"{x:.17g}"

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for r in records:
            row = [fmt(r.t), fmt(r.entropy), fmt(r.entropy_residual),
                   fmt(r.entropy_drift), fmt(r.entropy_diff_norm)]
            row += [fmt(v) for v in r.masses]
            if has_error:
                row.append(fmt(r.error) if r.error is not None else "")
            writer.writerow(row)

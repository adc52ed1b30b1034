"""Explicit strong-stability-preserving time integration with CFL control."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .semidisc import Discretization, SolutionField, rhs


class NumericalBlowupError(RuntimeError):
    """Raised when the state stops being finite during integration."""

    def __init__(self, t: float):
        super().__init__(f"non-finite state encountered at t = {t:.6g}")
        self.t = t


@dataclass
class IntegratorConfig:
    cfl: float
    t_final: float
    method: str = "ssprk104"
    callback_interval: int = 0   # 0: invoke callbacks only at start and end
    max_steps: int = 50_000_000


def stable_dt(disc: Discretization, state: SolutionField, cfl: float) -> float:
    """cfl * min(local width / wave speed) / (2p + 1).

    The local width is the element width in 1D and twice the smallest
    singular value of the coordinate mapping in 2D.  Returns inf when the
    wave speed vanishes everywhere (the caller clips to the remaining time).
    """
    lam = disc.system.wave_speed(state.u, state.aux)
    with np.errstate(divide="ignore"):
        ratio = np.where(lam > 0.0, disc.local_dx / np.where(lam > 0.0, lam, 1.0), np.inf)
    shortest = float(np.min(ratio))
    if not np.isfinite(shortest):
        return np.inf
    return cfl * shortest / (2 * disc.op.degree + 1)


# stage abscissae of the 10-stage fourth-order SSP scheme
_SSPRK104_C = (0.0, 1 / 6, 1 / 3, 1 / 2, 2 / 3, 1 / 3, 1 / 2, 2 / 3, 5 / 6, 1.0)


def _step_ssprk104(disc, u, aux, t, dt):
    q1 = u.copy()
    q2 = u.copy()
    for i in range(5):
        q1 += (dt / 6.0) * rhs(disc, SolutionField(q1, aux, t + _SSPRK104_C[i] * dt))
    q2 = q2 / 25.0 + 0.36 * q1
    q1 = 15.0 * q2 - 5.0 * q1
    for i in range(5, 9):
        q1 += (dt / 6.0) * rhs(disc, SolutionField(q1, aux, t + _SSPRK104_C[i] * dt))
    return q2 + 0.6 * q1 + (dt / 10.0) * rhs(disc, SolutionField(q1, aux, t + dt))


def _step_rk4(disc, u, aux, t, dt):
    k1 = rhs(disc, SolutionField(u, aux, t))
    k2 = rhs(disc, SolutionField(u + 0.5 * dt * k1, aux, t + 0.5 * dt))
    k3 = rhs(disc, SolutionField(u + 0.5 * dt * k2, aux, t + 0.5 * dt))
    k4 = rhs(disc, SolutionField(u + dt * k3, aux, t + dt))
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


_STEPPERS = {"ssprk104": _step_ssprk104, "rk4": _step_rk4}


def step(disc: Discretization, state: SolutionField, dt: float,
         method: str = "ssprk104") -> SolutionField:
    """Advance one explicit step."""
    if dt <= 0.0:
        raise ValueError("time step must be positive")
    try:
        stepper = _STEPPERS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None
    u_new = stepper(disc, state.u, state.aux, state.t, dt)
    return SolutionField(u_new, state.aux, state.t + dt)


def integrate(disc: Discretization, state: SolutionField,
              config: IntegratorConfig,
              callbacks: Sequence[Callable] = ()) -> SolutionField:
    """March to config.t_final, recomputing the stable step every step.

    The last step is clipped to land on t_final exactly.  Callbacks receive
    (state, step_index) at the start, every ``callback_interval`` steps when
    that is positive, and at the final time.
    """
    if config.t_final < state.t:
        raise ValueError("final time lies before the current time")
    for cb in callbacks:
        cb(state, 0)
    nstep = 0
    while state.t < config.t_final:
        dt = stable_dt(disc, state, config.cfl)
        dt = min(dt, config.t_final - state.t)
        if not np.isfinite(dt) or dt <= 0.0:
            state = SolutionField(state.u, state.aux, config.t_final)
            break
        state = step(disc, state, dt, config.method)
        nstep += 1
        if not np.all(np.isfinite(state.u)):
            raise NumericalBlowupError(state.t)
        if config.callback_interval and nstep % config.callback_interval == 0 \
                and state.t < config.t_final:
            for cb in callbacks:
                cb(state, nstep)
        if nstep >= config.max_steps:
            raise RuntimeError("step budget exhausted before reaching t_final")
    for cb in callbacks:
        cb(state, nstep)
    return state

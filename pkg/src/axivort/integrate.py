"""Explicit Runge-Kutta advection of the particle system.

The particles move along characteristics of the transported measure
(dr/dt = u_r, dz/dt = u_z); weights are copied verbatim at every step.
Crossing into z < 0 beyond rounding is a hard error: the continuum flow
preserves the open upper half-space, so a genuine crossing means the
discretization is invalid at the current dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .biot_savart import default_table, velocity_all
from .errors import ConfigurationError, HalfPlaneError
from .specfun import KernelTable
from .state import VortexState

__all__ = ["StepControl", "step", "cfl_dt", "run"]

_Z_ROUNDING = 1e-14


@dataclass(frozen=True)
class StepControl:
    """Time-stepping description; exactly one of dt / cfl must be set."""

    t_end: float
    dt: float | None = None
    cfl: float | None = None
    scheme: str = "rk4"
    output_every: float = 0.25

    def __post_init__(self):
        if (self.dt is None) == (self.cfl is None):
            raise ConfigurationError("exactly one of dt and cfl must be set")
        if self.scheme not in ("rk4", "rk2"):
            raise ConfigurationError(f"unknown scheme {self.scheme!r}")
        if self.t_end < 0:
            raise ConfigurationError("t_end must be nonnegative")
        if self.output_every <= 0:
            raise ConfigurationError("output_every must be positive")


_RK_STAGES = {
    # (stage position weights, combination weights)
    "rk2": ((0.0, 0.5), (0.0, 1.0)),
    "rk4": ((0.0, 0.5, 0.5, 1.0), (1 / 6, 1 / 3, 1 / 3, 1 / 6)),
}


def step(state: VortexState, dt: float, scheme: str = "rk4",
         table: KernelTable | None = None) -> VortexState:
    """One explicit RK step; returns a new state at t + dt."""
    if dt <= 0:
        raise ConfigurationError("dt must be positive")
    if state.n == 0:
        return state.with_positions(state.r, state.z, t=state.t + dt)
    if table is None:
        table = default_table(state.dim)
    offsets, weights = _RK_STAGES[scheme]
    kr = []
    kz = []
    for stage, off in enumerate(offsets):
        if stage == 0:
            st = state
        else:
            st = state.with_positions(
                state.r + off * dt * kr[stage - 1],
                np.maximum(state.z + off * dt * kz[stage - 1], 0.0),
            )
        ur, uz = velocity_all(st, table)
        kr.append(ur)
        kz.append(uz)
    dr = np.zeros_like(state.r)
    dz = np.zeros_like(state.z)
    for wgt, ur, uz in zip(weights, kr, kz):
        if wgt:
            dr = dr + wgt * ur
            dz = dz + wgt * uz
    r_new = state.r + dt * dr
    z_new = state.z + dt * dz
    bad = z_new < -_Z_ROUNDING
    if bad.any():
        idx = int(np.argmin(z_new))
        raise HalfPlaneError(
            f"particle {idx} crossed to z = {z_new[idx]:.3e} at "
            f"t = {state.t + dt:g}; dt too large"
        )
    z_new = np.maximum(z_new, 0.0)
    if (r_new <= 0).any():
        idx = int(np.argmin(r_new))
        raise HalfPlaneError(
            f"particle {idx} reached r = {r_new[idx]:.3e}; dt too large"
        )
    return state.with_positions(r_new, z_new, t=state.t + dt)


def cfl_dt(state: VortexState, cfl: float, max_dt: float = np.inf,
           dt_floor: float = 0.0, table: KernelTable | None = None) -> float:
    """cfl * resolution length / max particle speed.

    With blob regularization the induced velocity field is smooth below
    the scale delta, so delta is the resolution length: particles drifting
    closer than delta do not create faster dynamics, and tying dt to the
    collapsing nearest-neighbor gap would only burn steps.  Only in the
    singular delta = 0 case does the gap set the scale.

    Returns max_dt when nothing moves; clamped to [dt_floor, max_dt].
    """
    if state.n == 0:
        raise ConfigurationError("cfl_dt requires a nonempty state")
    ur, uz = velocity_all(state, table)
    vmax = float(np.max(np.hypot(ur, uz)))
    if vmax == 0.0:
        return max_dt
    if state.delta > 0:
        length = state.delta
    else:
        length = _kernels.min_gap(state.r, state.z)
    if not np.isfinite(length):
        length = 1.0
    dt = cfl * length / vmax
    return float(min(max(dt, dt_floor), max_dt))


def run(state: VortexState, control: StepControl, sink=None,
        table: KernelTable | None = None) -> VortexState:
    """Advance to t_end, invoking sink(state) at every output cadence point.

    In cfl mode the dt is re-estimated once per output interval and snapped
    to divide the interval exactly.  Deterministic for fixed inputs.
    """
    if table is None and state.n > 0:
        table = default_table(state.dim)
    if sink is not None:
        sink(state)
    t = 0.0
    n_out = int(round(control.t_end / control.output_every))
    remainder = control.t_end - n_out * control.output_every
    intervals = [control.output_every] * n_out
    if remainder > 1e-12 * max(control.t_end, 1.0):
        intervals.append(remainder)
    for k, interval in enumerate(intervals):
        if control.dt is not None:
            dt_target = control.dt
        else:
            dt_target = cfl_dt(
                state, control.cfl,
                max_dt=interval,
                dt_floor=1e-8 * control.t_end,
                table=table,
            )
        n_sub = max(1, int(math.ceil(interval / dt_target - 1e-12)))
        dt = interval / n_sub
        for _ in range(n_sub):
            try:
                state = step(state, dt, control.scheme, table)
            except HalfPlaneError as exc:
                raise HalfPlaneError(
                    f"{exc} (output interval {k})"
                ) from exc
        t += interval
        if sink is not None:
            sink(state)
    return state

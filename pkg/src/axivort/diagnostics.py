"""Functionals of a state: moments, energy, kernel-form derivatives, bounds.

The time derivatives of the vertical moment Z and the radial moment
R_{d-1} are assembled in symmetrized kernel form, whose signs are exact
structural properties of the discrete measure (negative and positive
respectively), not numerical accidents.  The asymmetric assemblies through
the velocities exist as cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .biot_savart import _packed_for, default_table, velocity_all
from .errors import DomainError
from .specfun import Dimension, KernelTable
from .state import VortexState

__all__ = [
    "DiagnosticsSample",
    "moment_R",
    "moment_Z",
    "dZdt_kernel",
    "dRdt_kernel",
    "energy",
    "ke_bound_rhs",
    "log_moment",
    "ur_bound_ratio",
    "diff_inequality_ratio",
    "compute_sample",
    "csv_header",
    "csv_row",
]


@dataclass(frozen=True)
class DiagnosticsSample:
    t: float
    R0: float
    Z: float
    E: float
    R_dm1: float
    dRdt_k: float
    dZdt_k: float
    ur_max: float
    ke_bound: float
    logmom: float
    Rj: dict = field(default_factory=dict)   # extra configured moments


def moment_R(state: VortexState, j: float) -> float:
    """j-th radial moment sum r_i^j w_i."""
    if j < 0:
        raise DomainError("moment order must be nonnegative")
    if j == 0:
        return float(np.sum(state.w))
    return float(np.sum(state.r ** j * state.w))


def moment_Z(state: VortexState) -> float:
    """First vertical moment sum z_i w_i."""
    return float(np.sum(state.z * state.w))


def _tab(state, table):
    if table is None:
        table = default_table(state.dim)
    return _packed_for(table)


def dZdt_kernel(state: VortexState, table: KernelTable | None = None) -> float:
    """Symmetrized kernel form of dZ/dt; strictly negative whenever some
    mass sits off the symmetry plane."""
    if state.n == 0:
        return 0.0
    lo, h, c, e = _tab(state, table)
    return float(_kernels.dzdt_kernel_sum(
        state.r, state.z, state.w, state.dim.d,
        state.delta * state.delta, lo, h, c, e,
    ))


def dRdt_kernel(state: VortexState, table: KernelTable | None = None) -> float:
    """Kernel form of d/dt R_{d-1}; strictly positive whenever some mass
    sits off the symmetry plane."""
    if state.n == 0:
        return 0.0
    lo, h, c, e = _tab(state, table)
    return float(_kernels.drdt_kernel_sum(
        state.r, state.z, state.w, state.dim.d,
        state.delta * state.delta, lo, h, c, e,
    ))


def energy(state: VortexState, table: KernelTable | None = None) -> float:
    """Discrete interaction energy (nonnegative); conserved by the
    semi-discrete dynamics up to time-stepping error."""
    if state.n == 0:
        return 0.0
    lo, h, c, e = _tab(state, table)
    return float(_kernels.energy_kernel_sum(
        state.r, state.z, state.w, state.dim.d,
        state.delta * state.delta, state.dim.c_d / 2.0, lo, h, c, e,
    ))


def ke_bound_rhs(state: VortexState) -> float:
    """Discrete double sum bounding the energy from above (monitored as a
    ratio only; the comparison constant is not explicit)."""
    if state.n == 0:
        return 0.0
    return float(_kernels.kebound_kernel_sum(
        state.r, state.z, state.w, state.dim.d, state.delta * state.delta,
    ))


def log_moment(state: VortexState, p: float = 2.0) -> float:
    """Normalized L^p mean of log(2 + 1/S_direct) against w x w."""
    if p < 1:
        raise DomainError("log_moment requires p >= 1")
    if state.n == 0:
        return 0.0
    total = float(np.sum(state.w))
    raw = _kernels.logmom_kernel_sum(
        state.r, state.z, state.w, float(p), state.delta * state.delta,
    )
    return float((raw / (total * total)) ** (1.0 / p))


def ur_bound_ratio(state: VortexState, table: KernelTable | None = None) -> float:
    """max|u_r|^2 / (sup_ratio * ||w||_1), the monitored constant of the
    radial-velocity sup bound (factor 2 accounts for the mirror mass)."""
    if state.n == 0:
        raise DomainError("ur_bound_ratio requires a nonempty state")
    ur, _ = velocity_all(state, table)
    mass_full = 2.0 * float(np.sum(state.r ** (state.dim.d - 2) * state.w))
    return float(np.max(np.abs(ur)) ** 2 / (state.sup_ratio * mass_full))


def diff_inequality_ratio(sample_prev: DiagnosticsSample,
                          sample_next: DiagnosticsSample,
                          j: float, dim: Dimension) -> float:
    """|dR_j/dt| / R_j^{1 + (d-4)/(2j)} between consecutive samples."""
    dt = sample_next.t - sample_prev.t
    if dt <= 0:
        raise DomainError("samples must be consecutive in time")
    rj_prev = sample_prev.Rj.get(j, sample_prev.R_dm1)
    rj_next = sample_next.Rj.get(j, sample_next.R_dm1)
    rj_mid = 0.5 * (rj_prev + rj_next)
    expo = 1.0 + (dim.d - 4) / (2.0 * j)
    return float(abs(rj_next - rj_prev) / dt / rj_mid ** expo)


def compute_sample(state: VortexState, moments_j=(), logmom_p: float = 2.0,
                   table: KernelTable | None = None) -> DiagnosticsSample:
    """All diagnostics of a state in one pass."""
    d = state.dim.d
    if state.n == 0:
        return DiagnosticsSample(state.t, 0, 0, 0, 0, 0, 0, 0, 0, 0, {})
    ur, _ = velocity_all(state, table)
    rj = {float(j): moment_R(state, float(j)) for j in moments_j}
    return DiagnosticsSample(
        t=state.t,
        R0=float(np.sum(state.w)),
        Z=moment_Z(state),
        E=energy(state, table),
        R_dm1=moment_R(state, d - 1),
        dRdt_k=dRdt_kernel(state, table),
        dZdt_k=dZdt_kernel(state, table),
        ur_max=float(np.max(np.abs(ur))),
        ke_bound=ke_bound_rhs(state),
        logmom=log_moment(state, logmom_p),
        Rj=rj,
    )


_BASE_COLUMNS = "t,R0,Z,E,R_dm1,dRdt_k,dZdt_k,ur_max,ke_bound,logmom"


def _fmt_j(j: float) -> str:
    return f"{j:g}"


def csv_header(moments_j=()) -> str:
    extra = [f"R_j_{_fmt_j(float(j))}" for j in moments_j]
    return ",".join([_BASE_COLUMNS] + extra)


def csv_row(sample: DiagnosticsSample, moments_j=()) -> str:
    vals = [sample.t, sample.R0, sample.Z, sample.E, sample.R_dm1,
            sample.dRdt_k, sample.dZdt_k, sample.ur_max, sample.ke_bound,
            sample.logmom]
    vals += [sample.Rj[float(j)] for j in moments_j]
    return ",".join(repr(float(v)) for v in vals)

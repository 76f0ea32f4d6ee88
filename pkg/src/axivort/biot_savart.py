"""Stream function, velocities and pairwise kernels for mirror-symmetric states.

Blob regularization adds delta^2 to both squared distances, i.e.
S -> S + delta^2/(r rbar), which preserves the ordering
S_direct <= S_mirror and with it every sign property of the kernels.
Scalar entry points evaluate F, F', F* by direct quadrature; the batched
O(N^2) paths route through a KernelTable via the numba kernels and are
bit-deterministic (fixed summation order, compensated accumulation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, SingularityError
from .specfun import (
    Dimension,
    KernelTable,
    build_kernel_table,
    eval_F,
    eval_F_deriv,
    eval_F_star,
)
from .state import VortexState

__all__ = [
    "PairGeometry",
    "Velocity",
    "pair_geometry",
    "velocity_at",
    "velocity_all",
    "stream_at",
    "ktilde",
    "ktilde_batch",
    "rdot_pair",
    "energy_pair",
    "default_table",
]

# default table range; pairs outside it use the log-log asymptotic
# continuation built into the numba evaluator
_TABLE_S_MIN = 1e-10
_TABLE_S_MAX = 1e10
_TABLE_REL_TOL = 1e-8

_table_cache: dict[int, KernelTable] = {}


def default_table(dim: Dimension) -> KernelTable:
    """Shared per-dimension table used by the batched paths."""
    if dim.d not in _table_cache:
        _table_cache[dim.d] = build_kernel_table(
            dim, _TABLE_S_MIN, _TABLE_S_MAX, _TABLE_REL_TOL
        )
    return _table_cache[dim.d]


def _packed(table: KernelTable):
    lo, h, c = table.packed()
    n_int = c.shape[2]
    e = np.empty((3, 4))
    for k in range(3):
        ck = c[k]
        e[k, 0] = ck[3, 0]
        e[k, 1] = ck[2, 0]
        e[k, 2] = ((ck[0, -1] * h + ck[1, -1]) * h + ck[2, -1]) * h + ck[3, -1]
        e[k, 3] = (3.0 * ck[0, -1] * h + 2.0 * ck[1, -1]) * h + ck[2, -1]
    return lo, h, np.ascontiguousarray(c), e


def _packed_for(table: KernelTable):
    cached = getattr(table, "_packed_arrays", None)
    if cached is None:
        cached = _packed(table)
        object.__setattr__(table, "_packed_arrays", cached)
    return cached


@dataclass(frozen=True)
class PairGeometry:
    """Regularized normalized squared separations of a source/target pair.

    s_direct uses (z - zbar), s_mirror uses (z + zbar); both carry the same
    +delta^2 regularization, so s_direct <= s_mirror always.
    """

    s_direct: float
    s_mirror: float
    r: float
    z: float
    r_bar: float
    z_bar: float


@dataclass(frozen=True)
class Velocity:
    u_r: float
    u_z: float


def pair_geometry(dim: Dimension, delta: float, r, z, r_bar, z_bar) -> PairGeometry:
    if r <= 0 or r_bar <= 0:
        raise DomainError("pair_geometry requires r, r_bar > 0")
    if z < 0 or z_bar < 0:
        raise DomainError("pair_geometry requires z, z_bar >= 0")
    rr = r * r_bar
    dr2 = (r - r_bar) ** 2
    d2 = delta * delta
    return PairGeometry(
        s_direct=(dr2 + (z - z_bar) ** 2 + d2) / rr,
        s_mirror=(dr2 + (z + z_bar) ** 2 + d2) / rr,
        r=float(r), z=float(z), r_bar=float(r_bar), z_bar=float(z_bar),
    )


def _state_pair_s(state, r, z):
    rr = r * state.r
    dr2 = (r - state.r) ** 2
    d2 = state.delta * state.delta
    sD = (dr2 + (z - state.z) ** 2 + d2) / rr
    sM = (dr2 + (z + state.z) ** 2 + d2) / rr
    return sD, sM


def velocity_at(state: VortexState, r, z, method: str = "table") -> Velocity:
    """Velocity induced at (r, z) by the state and its implicit mirror.

    method="table" runs the same numba kernel as velocity_all (bit-identical
    arithmetic); method="quadrature" evaluates every kernel by direct
    quadrature and serves as the independent slow route.
    """
    if r <= 0:
        raise DomainError("velocity_at requires r > 0")
    if z < 0:
        raise DomainError("velocity_at requires z >= 0")
    if state.n == 0:
        return Velocity(0.0, 0.0)
    if state.delta == 0.0 and np.any((state.r == r) & (state.z == z)):
        raise SingularityError(
            "evaluation point coincides with a particle and delta = 0"
        )
    if method == "table":
        lo, h, c, e = _packed_for(default_table(state.dim))
        ur, uz = _kernels.velocity_kernel(
            state.r, state.z, state.w,
            np.array([float(r)]), np.array([float(z)]),
            state.dim.d, state.delta * state.delta, False, lo, h, c, e,
        )
        return Velocity(float(ur[0]), float(uz[0]))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    d = state.dim.d
    sD, sM = _state_pair_s(state, r, z)
    fpD = eval_F_deriv(state.dim, sD)
    fpM = eval_F_deriv(state.dim, sM)
    fsD = eval_F_star(state.dim, sD)
    fsM = eval_F_star(state.dim, sM)
    p = (r * state.r) ** (d / 2.0 - 2.0) * state.w
    ur = np.sum((fpD * (z - state.z) - fpM * (z + state.z)) * p) / (
        math.pi * r ** (d - 2)
    )
    uz = -np.sum(
        (2.0 * (r - state.r) * (fpD - fpM) + state.r * (fsD - fsM)) * p
    ) / (2.0 * math.pi * r ** (d - 2))
    return Velocity(float(ur), float(uz))


def velocity_all(state: VortexState, table: KernelTable | None = None):
    """(u_r, u_z) arrays at every particle; deterministic batched path."""
    if state.n == 0:
        return np.empty(0), np.empty(0)
    if table is None:
        table = default_table(state.dim)
    lo, h, c, e = _packed_for(table)
    return _kernels.velocity_kernel(
        state.r, state.z, state.w, state.r, state.z,
        state.dim.d, state.delta * state.delta, True, lo, h, c, e,
    )


def stream_at(state: VortexState, r, z) -> float:
    """Stream function at (r, z); identically zero on the symmetry plane."""
    if r <= 0:
        raise DomainError("stream_at requires r > 0")
    if state.n == 0:
        return 0.0
    if state.delta == 0.0 and np.any((state.r == r) & (state.z == z)):
        raise SingularityError(
            "evaluation point coincides with a particle and delta = 0"
        )
    d = state.dim.d
    sD, sM = _state_pair_s(state, r, z)
    fD = eval_F(state.dim, sD)
    fM = eval_F(state.dim, sM)
    val = np.sum((fD - fM) * (r * state.r) ** (d / 2.0 - 1.0) * state.w)
    return float(-val / (2.0 * math.pi))


def ktilde(dim: Dimension, geom: PairGeometry) -> float:
    """Symmetrized u_z kernel H(r, rbar, s_direct) - H(r, rbar, s_mirror).

    Strictly positive whenever s_direct < s_mirror; zero when they agree.
    """
    fpD = eval_F_deriv(dim, geom.s_direct)
    fpM = eval_F_deriv(dim, geom.s_mirror)
    fsD = eval_F_star(dim, geom.s_direct)
    fsM = eval_F_star(dim, geom.s_mirror)
    a = -2.0 * (geom.r ** (dim.d - 2) - geom.r_bar ** (dim.d - 2)) * (geom.r - geom.r_bar)
    b = geom.r ** (dim.d - 1) + geom.r_bar ** (dim.d - 1)
    return float(a * (fpD - fpM) + b * (fsD - fsM))


def ktilde_batch(dim: Dimension, delta, r, z, r_bar, z_bar, rel_tol=1e-10):
    """Vectorized ktilde over arrays of pair coordinates (quadrature route)."""
    r = np.asarray(r, float)
    z = np.asarray(z, float)
    r_bar = np.asarray(r_bar, float)
    z_bar = np.asarray(z_bar, float)
    rr = r * r_bar
    dr2 = (r - r_bar) ** 2
    d2 = float(delta) ** 2
    sD = (dr2 + (z - z_bar) ** 2 + d2) / rr
    sM = (dr2 + (z + z_bar) ** 2 + d2) / rr
    fpD = eval_F_deriv(dim, sD, rel_tol)
    fpM = eval_F_deriv(dim, sM, rel_tol)
    fsD = eval_F_star(dim, sD, rel_tol)
    fsM = eval_F_star(dim, sM, rel_tol)
    a = -2.0 * (r ** (dim.d - 2) - r_bar ** (dim.d - 2)) * (r - r_bar)
    b = r ** (dim.d - 1) + r_bar ** (dim.d - 1)
    return a * (fpD - fpM) + b * (fsD - fsM)


def rdot_pair(dim: Dimension, geom: PairGeometry, w: float, w_bar: float) -> float:
    """Ordered-pair contribution to the kernel-form d/dt of R_{d-1}.

    ((d-1)/pi) [-F'(s_mirror)] (z + zbar) (r rbar)^{d/2-2} w wbar; strictly
    positive whenever z + zbar > 0.
    """
    if w <= 0 or w_bar <= 0:
        raise DomainError("rdot_pair requires positive weights")
    zsum = geom.z + geom.z_bar
    if zsum == 0.0:
        return 0.0
    fpM = eval_F_deriv(dim, geom.s_mirror)
    return float(
        (dim.d - 1) / math.pi * (-fpM) * zsum
        * (geom.r * geom.r_bar) ** (dim.d / 2.0 - 2.0) * w * w_bar
    )


def energy_pair(dim: Dimension, geom: PairGeometry, w: float, w_bar: float) -> float:
    """Ordered-pair contribution to the interaction energy.

    (c/pi) [F(s_direct) - F(s_mirror)] (r rbar)^{d/2-1} w wbar with
    c = c_d / 2; nonnegative because F is decreasing and
    s_direct <= s_mirror.
    """
    if geom.s_direct == geom.s_mirror:
        return 0.0
    fD = eval_F(dim, geom.s_direct)
    fM = eval_F(dim, geom.s_mirror)
    return float(
        (dim.c_d / 2.0) / math.pi * (fD - fM)
        * (geom.r * geom.r_bar) ** (dim.d / 2.0 - 1.0) * w * w_bar
    )

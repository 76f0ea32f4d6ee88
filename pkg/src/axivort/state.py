"""Discrete half-plane vorticity measure and anti-parallel initial data.

Only the upper half-plane is stored; the mirror image across z = 0 with
opposite-sign weight enters through the folded kernels, never as particles.
Particle weights are the carried mass of the measure w dr dz and are never
mutated once created, so the total mass is conserved to the bit.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, DomainError
from .specfun import Dimension

__all__ = [
    "VortexParticle",
    "VortexState",
    "InitialData",
    "make_initial_state",
    "total_mass",
    "validate",
    "save_checkpoint",
    "load_checkpoint",
]


@dataclass(frozen=True)
class VortexParticle:
    r: float   # cylindrical radius, > 0
    z: float   # height (half-plane representative), >= 0
    w: float   # carried mass of w dr dz, > 0


@dataclass(frozen=True)
class VortexState:
    """Immutable snapshot of the particle system.

    sup_ratio is the frozen estimate of sup |w^0 / r^{d-2}|; the continuum
    transport preserves it, so it is never re-estimated.
    """

    dim: Dimension
    delta: float
    r: np.ndarray
    z: np.ndarray
    w: np.ndarray
    t: float = 0.0
    sup_ratio: float = 1.0

    def __post_init__(self):
        for name in ("r", "z", "w"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.delta < 0 or not np.isfinite(self.delta):
            raise DomainError("delta must be a finite nonnegative real")

    @property
    def n(self) -> int:
        return self.r.size

    @property
    def particles(self) -> list[VortexParticle]:
        return [VortexParticle(float(r), float(z), float(w))
                for r, z, w in zip(self.r, self.z, self.w)]

    def with_positions(self, r, z, t=None) -> "VortexState":
        """New state with moved particles; weights are shared untouched."""
        return replace(self, r=r, z=z, t=self.t if t is None else t)


@dataclass(frozen=True)
class InitialData:
    """Anti-parallel blob description (upper half-plane representative)."""

    kind: str            # "gaussian_pair" | "patch_pair"
    r0: float
    z0: float
    sigma: float         # gaussian width or patch radius
    strength: float      # peak of w / r^{d-2}
    grid_n: int
    cutoff: float        # support truncation radius, in multiples of sigma

    def __post_init__(self):
        if self.kind not in ("gaussian_pair", "patch_pair"):
            raise ConfigurationError(f"unknown initial data kind {self.kind!r}")
        if self.r0 <= 0 or self.z0 <= 0 or self.sigma <= 0:
            raise ConfigurationError("r0, z0, sigma must be positive")
        if self.strength <= 0:
            raise ConfigurationError("strength must be positive")
        if self.cutoff <= 0:
            raise ConfigurationError("cutoff must be positive")


def make_initial_state(dim: Dimension, delta: float, data: InitialData) -> VortexState:
    """Midpoint-sample w^0(r,z) = strength * r^{d-2} * phi on a uniform grid.

    phi is a unit-peak Gaussian or indicator profile in the scaled offsets
    ((r-r0)/sigma, (z-z0)/sigma), truncated at `cutoff` sigmas, restricted
    to z >= 0 and smoothly zeroed below sigma/grid_n so the implicit odd
    mirror stays consistent.  Weights are profile * cell area; zero-weight
    samples are dropped.
    """
    if data.grid_n < 1:
        raise ConfigurationError("grid_n must be >= 1")
    half = data.cutoff * data.sigma
    r_lo, r_hi = data.r0 - half, data.r0 + half
    z_lo, z_hi = max(0.0, data.z0 - half), data.z0 + half
    r_lo = max(r_lo, 0.0)
    n = data.grid_n
    dr = (r_hi - r_lo) / n
    dz = (z_hi - z_lo) / n
    # midpoint sampling: deterministic, and exact for the single-cell case
    rc = r_lo + (np.arange(n) + 0.5) * dr
    zc = z_lo + (np.arange(n) + 0.5) * dz
    R, Z = np.meshgrid(rc, zc, indexing="ij")
    xi = (R - data.r0) / data.sigma
    eta = (Z - data.z0) / data.sigma
    rho2 = xi * xi + eta * eta
    if data.kind == "gaussian_pair":
        phi = np.exp(-0.5 * rho2)
        phi[rho2 > data.cutoff ** 2] = 0.0
    else:
        phi = (rho2 <= 1.0).astype(float)
    # smooth taper to zero at the symmetry plane
    zc_width = data.sigma / n
    frac = np.clip(Z / zc_width, 0.0, 1.0)
    phi = phi * frac * frac * (3.0 - 2.0 * frac)
    phi[(R <= 0.0) | (Z < 0.0)] = 0.0
    w = data.strength * R ** (dim.d - 2) * phi * dr * dz
    keep = w > 0.0
    if not keep.any():
        raise ConfigurationError("initial data has empty support after truncation")
    return VortexState(
        dim=dim,
        delta=float(delta),
        r=R[keep].ravel(),
        z=Z[keep].ravel(),
        w=w[keep].ravel(),
        t=0.0,
        sup_ratio=float(data.strength),
    )


def total_mass(state: VortexState) -> float:
    """Sum of particle weights (the discrete zeroth radial moment).

    Weights are immutable and summed in fixed index order, so the value is
    bit-identical along any trajectory.
    """
    return float(np.sum(state.w))


def validate(state: VortexState) -> list[str]:
    """One entry per violated particle invariant, empty iff valid."""
    out = []
    for i in range(state.n):
        if not (state.r[i] > 0.0):
            out.append(f"particle {i}: r > 0 violated (r={state.r[i]!r})")
        if not (state.z[i] >= 0.0):
            out.append(f"particle {i}: z >= 0 violated (z={state.z[i]!r})")
        if not (state.w[i] > 0.0):
            out.append(f"particle {i}: w > 0 violated (w={state.w[i]!r})")
    if state.delta < 0:
        out.append(f"delta >= 0 violated (delta={state.delta!r})")
    return out


def save_checkpoint(state: VortexState, csv_path: str) -> None:
    """Write `r,z,w` CSV plus a JSON sidecar; round-trips bit-exactly."""
    tmp = csv_path + ".tmp"
    with open(tmp, "w") as f:
        f.write("r,z,w\n")
        for r, z, w in zip(state.r, state.z, state.w):
            f.write(f"{float(r)!r},{float(z)!r},{float(w)!r}\n")
    os.replace(tmp, csv_path)
    sidecar = os.path.splitext(csv_path)[0] + ".json"
    tmp = sidecar + ".tmp"
    with open(tmp, "w") as f:
        json.dump(
            {"dim": state.dim.d, "delta": state.delta, "t": state.t,
             "sup_ratio": state.sup_ratio},
            f, indent=2)
        f.write("\n")
    os.replace(tmp, sidecar)


def load_checkpoint(csv_path: str) -> VortexState:
    data = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    sidecar = os.path.splitext(csv_path)[0] + ".json"
    with open(sidecar) as f:
        meta = json.load(f)
    return VortexState(
        dim=Dimension(int(meta["dim"])),
        delta=float(meta["delta"]),
        r=data[:, 0], z=data[:, 1], w=data[:, 2],
        t=float(meta["t"]),
        sup_ratio=float(meta["sup_ratio"]),
    )

"""Numba pairwise-sum kernels with an inlined kernel-table evaluator.

Every O(N^2) loop here follows the same determinism contract: the outer
loop may be executed by any number of threads, but each target's inner sum
runs in fixed index order with Neumaier-compensated accumulation, and
scalar reductions combine per-target partials sequentially.  Results are
therefore bit-identical for any thread count.

The table evaluator interpolates log|g| vs log s (cubic, uniform grid) and
continues linearly in log-log space outside the tabulated range, which is
exact-to-leading-order for the power-law tails of F, F' and F*.
"""

import math

import numpy as np
from numba import njit, prange

# extrap rows per function k: (g_left, slope_left, g_right, slope_right)


@njit(cache=True, inline="always")
def _tab_log(x, lo, h, ck, ek):
    n_int = ck.shape[1]
    hi = lo + h * n_int
    if x <= lo:
        return ek[0] + ek[1] * (x - lo)
    if x >= hi:
        return ek[2] + ek[3] * (x - hi)
    i = int((x - lo) / h)
    if i >= n_int:
        i = n_int - 1
    dx = x - (lo + i * h)
    return ((ck[0, i] * dx + ck[1, i]) * dx + ck[2, i]) * dx + ck[3, i]


@njit(cache=True, inline="always")
def _tab_F(x, lo, h, c, e):
    return math.exp(_tab_log(x, lo, h, c[0], e[0]))


@njit(cache=True, inline="always")
def _tab_Fp(x, lo, h, c, e):
    return -math.exp(_tab_log(x, lo, h, c[1], e[1]))


@njit(cache=True, inline="always")
def _tab_Fstar(x, lo, h, c, e):
    return math.exp(_tab_log(x, lo, h, c[2], e[2]))


@njit(cache=True, parallel=True)
def velocity_kernel(r, z, w, rt, zt, d, delta2, self_indexed, lo, h, c, e):
    """(u_r, u_z) at targets (rt, zt) from sources (r, z, w)."""
    n = r.size
    nt = rt.size
    ur = np.empty(nt)
    uz = np.empty(nt)
    ex_r = float(d - 2)
    ex_p = 0.5 * d - 2.0
    for i in prange(nt):
        ri = rt[i]
        zi = zt[i]
        s_r = 0.0
        c_r = 0.0
        s_z = 0.0
        c_z = 0.0
        for j in range(n):
            if self_indexed and delta2 == 0.0 and j == i:
                continue
            rj = r[j]
            zj = z[j]
            wj = w[j]
            rr = ri * rj
            dr2 = (ri - rj) * (ri - rj)
            sD = (dr2 + (zi - zj) * (zi - zj) + delta2) / rr
            sM = (dr2 + (zi + zj) * (zi + zj) + delta2) / rr
            xD = math.log(sD)
            xM = math.log(sM)
            fpD = _tab_Fp(xD, lo, h, c, e)
            fpM = _tab_Fp(xM, lo, h, c, e)
            fsD = _tab_Fstar(xD, lo, h, c, e)
            fsM = _tab_Fstar(xM, lo, h, c, e)
            p = rr ** ex_p * wj
            vr = (fpD * (zi - zj) - fpM * (zi + zj)) * p
            vz = (2.0 * (ri - rj) * (fpD - fpM) + rj * (fsD - fsM)) * p
            t = s_r + vr
            if abs(s_r) >= abs(vr):
                c_r += (s_r - t) + vr
            else:
                c_r += (vr - t) + s_r
            s_r = t
            t = s_z + vz
            if abs(s_z) >= abs(vz):
                c_z += (s_z - t) + vz
            else:
                c_z += (vz - t) + s_z
            s_z = t
        pref = 1.0 / (math.pi * ri ** ex_r)
        ur[i] = pref * (s_r + c_r)
        uz[i] = -0.5 * pref * (s_z + c_z)
    return ur, uz


@njit(cache=True, inline="always")
def _neumaier(s, comp, v):
    t = s + v
    if abs(s) >= abs(v):
        comp += (s - t) + v
    else:
        comp += (v - t) + s
    return t, comp


@njit(cache=True)
def _reduce(partials):
    s = 0.0
    comp = 0.0
    for i in range(partials.size):
        s, comp = _neumaier(s, comp, partials[i])
    return s + comp


@njit(cache=True, parallel=True)
def dzdt_kernel_sum(r, z, w, d, delta2, lo, h, c, e):
    """-(1/4pi) sum_ij Ktilde_ij w_i w_j / (r_i r_j)^{d/2}."""
    n = r.size
    partials = np.empty(n)
    ex_a = float(d - 2)
    ex_b = float(d - 1)
    ex_s = 0.5 * d
    for i in prange(n):
        ri = r[i]
        zi = z[i]
        wi = w[i]
        ra_i = ri ** ex_a
        rb_i = ri ** ex_b
        s = 0.0
        comp = 0.0
        for j in range(n):
            if delta2 == 0.0 and j == i:
                continue
            rj = r[j]
            zj = z[j]
            rr = ri * rj
            dr2 = (ri - rj) * (ri - rj)
            sD = (dr2 + (zi - zj) * (zi - zj) + delta2) / rr
            sM = (dr2 + (zi + zj) * (zi + zj) + delta2) / rr
            xD = math.log(sD)
            xM = math.log(sM)
            fpD = _tab_Fp(xD, lo, h, c, e)
            fpM = _tab_Fp(xM, lo, h, c, e)
            fsD = _tab_Fstar(xD, lo, h, c, e)
            fsM = _tab_Fstar(xM, lo, h, c, e)
            ra_j = rj ** ex_a
            rb_j = rj ** ex_b
            aa = -2.0 * (ra_i - ra_j) * (ri - rj)
            bb = rb_i + rb_j
            ktil = aa * (fpD - fpM) + bb * (fsD - fsM)
            v = ktil * wi * w[j] / rr ** ex_s
            s, comp = _neumaier(s, comp, v)
        partials[i] = s + comp
    return -_reduce(partials) / (4.0 * math.pi)


@njit(cache=True, parallel=True)
def drdt_kernel_sum(r, z, w, d, delta2, lo, h, c, e):
    """(d-1)/pi sum_ij [-F'(S_mirror)] (z_i+z_j) (r_i r_j)^{d/2-2} w_i w_j."""
    n = r.size
    partials = np.empty(n)
    ex_p = 0.5 * d - 2.0
    for i in prange(n):
        ri = r[i]
        zi = z[i]
        wi = w[i]
        s = 0.0
        comp = 0.0
        for j in range(n):
            if delta2 == 0.0 and j == i:
                continue
            rj = r[j]
            zj = z[j]
            rr = ri * rj
            dr2 = (ri - rj) * (ri - rj)
            sM = (dr2 + (zi + zj) * (zi + zj) + delta2) / rr
            fpM = _tab_Fp(math.log(sM), lo, h, c, e)
            v = -fpM * (zi + zj) * rr ** ex_p * wi * w[j]
            s, comp = _neumaier(s, comp, v)
        partials[i] = s + comp
    return _reduce(partials) * (d - 1) / math.pi


@njit(cache=True, parallel=True)
def energy_kernel_sum(r, z, w, d, delta2, c_half, lo, h, c, e):
    """(c/pi) sum_ij [F(S)-F(S_mirror)] (r_i r_j)^{d/2-1} w_i w_j."""
    n = r.size
    partials = np.empty(n)
    ex_p = 0.5 * d - 1.0
    for i in prange(n):
        ri = r[i]
        zi = z[i]
        wi = w[i]
        s = 0.0
        comp = 0.0
        for j in range(n):
            if delta2 == 0.0 and j == i:
                continue
            rj = r[j]
            zj = z[j]
            rr = ri * rj
            dr2 = (ri - rj) * (ri - rj)
            sD = (dr2 + (zi - zj) * (zi - zj) + delta2) / rr
            sM = (dr2 + (zi + zj) * (zi + zj) + delta2) / rr
            fD = _tab_F(math.log(sD), lo, h, c, e)
            fM = _tab_F(math.log(sM), lo, h, c, e)
            v = (fD - fM) * rr ** ex_p * wi * w[j]
            s, comp = _neumaier(s, comp, v)
        partials[i] = s + comp
    return _reduce(partials) * c_half / math.pi


@njit(cache=True, parallel=True)
def kebound_kernel_sum(r, z, w, d, delta2):
    """Discrete energy-upper-bound double sum (regularized distances)."""
    n = r.size
    partials = np.empty(n)
    ex = 0.5 * d
    exr = float(d - 1)
    for i in prange(n):
        ri = r[i]
        zi = z[i]
        wi = w[i]
        s = 0.0
        comp = 0.0
        for j in range(n):
            if delta2 == 0.0 and j == i:
                continue
            rj = r[j]
            zj = z[j]
            rr = ri * rj
            dr2 = (ri - rj) * (ri - rj)
            dzm = (zi - zj) * (zi - zj)
            dzp = (zi + zj) * (zi + zj)
            near = dr2 + dzm + delta2
            denom1 = dr2 + dzp + delta2
            denom2 = (ri + rj) * (ri + rj) + dzm + delta2
            v = (zi * zj * rr ** exr * math.log(2.0 + rr / near)
                 / (denom1 * denom2 ** ex)) * wi * w[j]
            s, comp = _neumaier(s, comp, v)
        partials[i] = s + comp
    return _reduce(partials)


@njit(cache=True, parallel=True)
def logmom_kernel_sum(r, z, w, p, delta2):
    """sum_ij log^p(2 + 1/S_direct) w_i w_j with regularized S."""
    n = r.size
    partials = np.empty(n)
    for i in prange(n):
        ri = r[i]
        zi = z[i]
        wi = w[i]
        s = 0.0
        comp = 0.0
        for j in range(n):
            if delta2 == 0.0 and j == i:
                continue
            rj = r[j]
            zj = z[j]
            sD = ((ri - rj) * (ri - rj) + (zi - zj) * (zi - zj) + delta2) / (ri * rj)
            v = math.log(2.0 + 1.0 / sD) ** p * wi * w[j]
            s, comp = _neumaier(s, comp, v)
        partials[i] = s + comp
    return _reduce(partials)


@njit(cache=True)
def min_gap(r, z):
    """Smallest positive inter-particle distance (inf for N < 2)."""
    n = r.size
    best = np.inf
    for i in range(n):
        for j in range(i + 1, n):
            d2 = (r[i] - r[j]) ** 2 + (z[i] - z[j]) ** 2
            if 0.0 < d2 < best:
                best = d2
    return math.sqrt(best) if np.isfinite(best) else np.inf

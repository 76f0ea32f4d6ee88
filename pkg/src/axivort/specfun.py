"""Kernel family F, F', F'', F* and stable power-difference primitives.

All velocity, moment-derivative and energy kernels of the solver are built
from the one-parameter family

    F(s)   = int_0^pi sin^{d-3}(t) cos(t) [2(1-cos t) + s]^{1-d/2} dt
    F*(s)  = (d-2)/2 F(s) - s F'(s)

evaluated here by composite Gauss-Legendre quadrature on the folded
interval [0, pi/2].  Folding (t -> pi - t on the upper half) turns every
integrand into a sign-definite difference A^{-a} - B^{-a} with
A = 2(1-cos t) + s <= B = 2(1+cos t) + s, which is then computed without
cancellation by `stable_pow_diff`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gammaln

from .errors import AccuracyError, DomainError, TableRangeError

__all__ = [
    "Dimension",
    "KernelTable",
    "stable_pow_diff",
    "stable_pow_diff2",
    "eval_F",
    "eval_F_deriv",
    "eval_F_second",
    "eval_F_star",
    "eval_F_star_deriv",
    "build_kernel_table",
    "table_eval",
]


@dataclass(frozen=True)
class Dimension:
    """Ambient dimension d >= 3 together with the sphere-measure constant.

    c_d is the (d-2)-dimensional Hausdorff measure of the unit (d-2)-sphere,
    2 pi^{(d-1)/2} / Gamma((d-1)/2); for d = 3 this is 2 pi.
    """

    d: int
    c_d: float = field(init=False)

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 3:
            raise DomainError(f"dimension must be an integer >= 3, got {self.d!r}")
        cd = 2.0 * math.pi ** ((self.d - 1) / 2.0) / math.exp(gammaln((self.d - 1) / 2.0))
        object.__setattr__(self, "c_d", float(cd))


# ---------------------------------------------------------------------------
# stable power differences


def stable_pow_diff(alpha, x, y):
    """First difference x^{-alpha} - (x+y)^{-alpha}, computed without
    cancellation (expm1/log1p rearrangement).  Result lies in [0, x^{-alpha}].

    Accepts scalars or numpy arrays; alpha > 0, x > 0, y >= 0.
    """
    alpha = np.asarray(alpha, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise DomainError("stable_pow_diff requires x > 0")
    if np.any(~np.isfinite(y)) or np.any(y < 0):
        raise DomainError("stable_pow_diff requires y >= 0")
    if np.any(alpha <= 0):
        raise DomainError("stable_pow_diff requires alpha > 0")
    out = -np.power(x, -alpha) * np.expm1(-alpha * np.log1p(y / x))
    if out.ndim == 0:
        return float(out)
    return out


def stable_pow_diff2(alpha, x, y, z):
    """Second difference f(x) - f(x+y) - f(x+z) + f(x+y+z), f(t) = t^{-alpha}.

    Rearranged into a sum of two nonnegative terms so it never cancels:

        x^{-a} * [ E(u) E(v) + (1+u+v)^{-a} * (-expm1(-a*log1p(uv/(1+u+v)))) ]

    with u = y/x, v = z/x and E(t) = -expm1(-a*log1p(t)) >= 0.
    """
    alpha = np.asarray(alpha, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise DomainError("stable_pow_diff2 requires x > 0")
    if np.any(y < 0) or np.any(z < 0):
        raise DomainError("stable_pow_diff2 requires y, z >= 0")
    if np.any(alpha <= 0):
        raise DomainError("stable_pow_diff2 requires alpha > 0")
    u = y / x
    v = z / x
    e_u = -np.expm1(-alpha * np.log1p(u))
    e_v = -np.expm1(-alpha * np.log1p(v))
    cross = -np.exp(-alpha * np.log1p(u + v)) * np.expm1(
        -alpha * np.log1p(u * v / (1.0 + u + v))
    )
    out = np.power(x, -alpha) * (e_u * e_v + cross)
    if out.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# folded quadrature

# (panels-per-octave, Gauss-Legendre order) refinement ladder; successive
# levels double as each other's error estimate
_LEVELS = ((2, 16), (2, 24), (3, 32), (4, 40))

_gl_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(n):
    if n not in _gl_cache:
        _gl_cache[n] = np.polynomial.legendre.leggauss(n)
    return _gl_cache[n]


def _folded_nodes(smin, ppo, n_gl):
    # geometric panels resolve the integrand peak at theta ~ sqrt(s)
    theta_floor = min(np.pi / 16.0, max(math.sqrt(smin) / 64.0, 1e-21))
    kmax = max(8 * ppo, int(math.ceil(ppo * math.log2((np.pi / 2) / theta_floor))))
    bnds = (np.pi / 2) * 2.0 ** (-np.arange(kmax + 1) / ppo)
    bnds = np.concatenate([bnds, [0.0]])[::-1]
    x, w = _gl(n_gl)
    lo, hi = bnds[:-1], bnds[1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    theta = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return theta, wt


def _folded_integral_fixed(d, s, alpha, ppo, n_gl):
    """int_0^{pi/2} sin^{d-3} cos(t) [A^{-alpha} - B^{-alpha}] dt for each s."""
    theta, wt = _folded_nodes(float(s.min()), ppo, n_gl)
    s2 = np.sin(theta / 2.0)
    c2 = np.cos(theta / 2.0)
    st = 2.0 * s2 * c2
    ct = c2 * c2 - s2 * s2
    pref = st ** (d - 3) * ct * wt
    a0 = 4.0 * s2 * s2        # A - s, exact near theta = 0
    y = 4.0 * ct              # B - A
    out = np.empty_like(s)
    chunk = max(1, int(4e6 / theta.size))
    for i0 in range(0, s.size, chunk):
        A = a0[None, :] + s[i0:i0 + chunk, None]
        vals = -np.power(A, -alpha) * np.expm1(-alpha * np.log1p(y[None, :] / A))
        out[i0:i0 + chunk] = vals @ pref
    return out


def _folded_integral(d, s, alpha, rel_tol):
    """Adaptive evaluation: refine through the rule ladder until two
    successive levels agree to rel_tol; raise AccuracyError otherwise."""
    val = _folded_integral_fixed(d, s, alpha, *_LEVELS[0])
    unresolved = np.ones(s.shape, dtype=bool)
    achieved = np.full(s.shape, np.inf)
    for ppo, n_gl in _LEVELS[1:]:
        idx = np.nonzero(unresolved)[0]
        finer = _folded_integral_fixed(d, s[idx], alpha, ppo, n_gl)
        err = np.abs(finer - val[idx]) / np.maximum(np.abs(finer), 1e-300)
        val[idx] = finer
        achieved[idx] = err
        unresolved[idx] = err > rel_tol
        if not unresolved.any():
            return val
    worst = float(np.max(achieved[unresolved]))
    raise AccuracyError(
        f"quadrature did not converge to rel_tol={rel_tol:g} "
        f"(achieved {worst:.3g})",
        achieved=worst,
    )


def _check_s(s):
    arr = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("kernel argument s must be finite and positive")
    return arr


def _as_input_shape(out, s):
    if np.ndim(s) == 0:
        return float(out[0])
    return out


def eval_F(dim: Dimension, s, rel_tol: float = 1e-12):
    """F(s) by adaptive quadrature of the folded integrand.

    Accepts a scalar or array of positive s; relative error <= rel_tol.
    """
    arr = np.atleast_1d(_check_s(s))
    out = _folded_integral(dim.d, arr, dim.d / 2.0 - 1.0, rel_tol)
    return _as_input_shape(out, s)


def eval_F_deriv(dim: Dimension, s, rel_tol: float = 1e-12):
    """F'(s) via the sign-definite folded integrand; strictly negative."""
    arr = np.atleast_1d(_check_s(s))
    out = -(dim.d - 2) / 2.0 * _folded_integral(dim.d, arr, dim.d / 2.0, rel_tol)
    return _as_input_shape(out, s)


def eval_F_second(dim: Dimension, s, rel_tol: float = 1e-12):
    """F''(s) via the sign-definite folded integrand; strictly positive."""
    arr = np.atleast_1d(_check_s(s))
    out = dim.d * (dim.d - 2) / 4.0 * _folded_integral(
        dim.d, arr, dim.d / 2.0 + 1.0, rel_tol
    )
    return _as_input_shape(out, s)


def eval_F_star(dim: Dimension, s, rel_tol: float = 1e-12):
    """F*(s) = (d-2)/2 F(s) - s F'(s); strictly positive and decreasing."""
    arr = np.atleast_1d(_check_s(s))
    out = (dim.d - 2) / 2.0 * _folded_integral(dim.d, arr, dim.d / 2.0 - 1.0, rel_tol) \
        + arr * (dim.d - 2) / 2.0 * _folded_integral(dim.d, arr, dim.d / 2.0, rel_tol)
    return _as_input_shape(out, s)


def eval_F_star_deriv(dim: Dimension, s, rel_tol: float = 1e-12):
    """(F*)'(s) = (d-4)/2 F'(s) - s F''(s); strictly negative for all d >= 3."""
    arr = np.atleast_1d(_check_s(s))
    fp = -(dim.d - 2) / 2.0 * _folded_integral(dim.d, arr, dim.d / 2.0, rel_tol)
    fpp = dim.d * (dim.d - 2) / 4.0 * _folded_integral(
        dim.d, arr, dim.d / 2.0 + 1.0, rel_tol
    )
    out = (dim.d - 4) / 2.0 * fp - arr * fpp
    return _as_input_shape(out, s)


# ---------------------------------------------------------------------------
# tabulation


@dataclass(frozen=True)
class KernelTable:
    """Log-grid tabulation of (F, F', F*) for one dimension.

    The three functions are strictly signed (F > 0, F' < 0, F* > 0), so
    their logs are interpolated by cubic splines in log s; exponentiation
    makes every interpolated value sign-safe by construction.  `values`
    holds the per-node (F, F', F*) triples; `audit_max_rel_error` is the
    worst relative deviation from direct quadrature seen on the random
    audit set.
    """

    dim: Dimension
    log_s_grid: np.ndarray          # strictly increasing, uniform
    values: np.ndarray              # shape (n, 3): columns F, F', F*
    rel_tol: float
    s_min: float
    s_max: float
    audit_max_rel_error: float
    # spline coefficients of log|g| vs log s, shape (3, 4, n-1),
    # rows: log F, log(-F'), log F*
    _coeffs: np.ndarray

    @property
    def range(self):
        return (self.s_min, self.s_max)

    def packed(self):
        """(lo, h, coeffs) for the inlined numba evaluator."""
        lo = float(self.log_s_grid[0])
        h = float(self.log_s_grid[1] - self.log_s_grid[0])
        return lo, h, self._coeffs


def _spline_coeffs(logs, vals):
    return CubicSpline(logs, vals).c.copy()  # shape (4, n-1)


def _table_raw_eval(table: KernelTable, s):
    """Spline evaluation without the range check (vectorized)."""
    logs = np.log(np.asarray(s, dtype=float))
    lo, h, c = table.packed()
    n_int = c.shape[2]
    i = np.clip(((logs - lo) / h).astype(int), 0, n_int - 1)
    dx = logs - (lo + i * h)
    out = []
    for k, sign in ((0, 1.0), (1, -1.0), (2, 1.0)):
        ck = c[k]
        g = ((ck[0, i] * dx + ck[1, i]) * dx + ck[2, i]) * dx + ck[3, i]
        out.append(sign * np.exp(g))
    return out


def table_eval(table: KernelTable, s):
    """(F, F', F*) at s by cubic interpolation in log s.

    s must lie inside the table range; grid nodes return the stored
    quadrature values exactly.  Interpolated F' < 0 and F* > 0 always
    (log-space interpolation cannot cross zero).
    """
    arr = np.atleast_1d(_check_s(s))
    if np.any(arr < table.s_min) or np.any(arr > table.s_max):
        raise TableRangeError(
            f"s outside table range [{table.s_min:g}, {table.s_max:g}]; "
            "widen the table or use direct quadrature"
        )
    F, Fp, Fstar = _table_raw_eval(table, arr)
    # exact node hits return stored values
    s_nodes = np.exp(table.log_s_grid)
    pos = np.searchsorted(s_nodes, arr)
    pos = np.clip(pos, 0, s_nodes.size - 1)
    hit = s_nodes[pos] == arr
    if hit.any():
        F[hit] = table.values[pos[hit], 0]
        Fp[hit] = table.values[pos[hit], 1]
        Fstar[hit] = table.values[pos[hit], 2]
    if np.ndim(s) == 0:
        return (float(F[0]), float(Fp[0]), float(Fstar[0]))
    return F, Fp, Fstar


def build_kernel_table(
    dim: Dimension,
    s_min: float,
    s_max: float,
    rel_tol: float = 1e-8,
    quad_tol: float = 1e-12,
    audit_points: int = 1000,
    audit_seed: int = 12345,
    max_nodes: int = 400_000,
) -> KernelTable:
    """Tabulate (F, F', F*) on a uniform log-s grid.

    The node count is refined until cubic interpolation reproduces direct
    quadrature to rel_tol on a seeded random audit set; the worst audit
    error is recorded on the table.
    """
    if not (0.0 < s_min < s_max):
        raise DomainError("require 0 < s_min < s_max")
    if not (0.0 < rel_tol <= 1e-3):
        raise DomainError("rel_tol must lie in (0, 1e-3]")
    span = math.log(s_max) - math.log(s_min)
    rng = np.random.default_rng(audit_seed)
    s_audit = np.exp(rng.uniform(math.log(s_min), math.log(s_max), audit_points))
    ref = np.column_stack([
        eval_F(dim, s_audit, quad_tol),
        eval_F_deriv(dim, s_audit, quad_tol),
        eval_F_star(dim, s_audit, quad_tol),
    ])

    h = 0.02
    while True:
        n = int(math.ceil(span / h)) + 1
        if n > max_nodes:
            raise AccuracyError(
                f"kernel table cannot meet rel_tol={rel_tol:g} within "
                f"{max_nodes} nodes"
            )
        logs = np.linspace(math.log(s_min), math.log(s_max), n)
        s_nodes = np.exp(logs)
        F = eval_F(dim, s_nodes, quad_tol)
        Fp = eval_F_deriv(dim, s_nodes, quad_tol)
        Fstar = (dim.d - 2) / 2.0 * F - s_nodes * Fp
        coeffs = np.stack([
            _spline_coeffs(logs, np.log(F)),
            _spline_coeffs(logs, np.log(-Fp)),
            _spline_coeffs(logs, np.log(Fstar)),
        ])
        table = KernelTable(
            dim=dim,
            log_s_grid=logs,
            values=np.column_stack([F, Fp, Fstar]),
            rel_tol=rel_tol,
            s_min=float(s_min),
            s_max=float(s_max),
            audit_max_rel_error=np.nan,
            _coeffs=coeffs,
        )
        got = np.column_stack(_table_raw_eval(table, s_audit))
        err = float(np.max(np.abs(got - ref) / np.abs(ref)))
        if err <= rel_tol:
            object.__setattr__(table, "audit_max_rel_error", err)
            return table
        h /= 2.0

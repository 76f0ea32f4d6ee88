"""Configured experiments, exponent fits, theorem-level checks, verdicts.

A "verdict" is a machine-checkable statement about a run or a randomized
suite, serialized as {check_name, pass, measured, detail}.  Strict
monotonicity of the moments and bitwise constancy of the total mass are
exact discrete statements: a violation is a build defect, never a
tolerance issue.  Asymptotic lower-bound growth exponents, by contrast,
are recorded as reference metadata and never asserted at finite time.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, asdict

import numpy as np

from .biot_savart import default_table, ktilde_batch
from .diagnostics import (
    DiagnosticsSample,
    compute_sample,
    csv_header,
    csv_row,
    diff_inequality_ratio,
)
from .errors import ConfigurationError
from .integrate import StepControl, run
from .specfun import (
    Dimension,
    eval_F_deriv,
    eval_F_second,
    eval_F_star,
    stable_pow_diff,
    stable_pow_diff2,
)
from .state import InitialData, make_initial_state, save_checkpoint

__all__ = [
    "ExponentFit",
    "Verdict",
    "SimConfig",
    "parse_config",
    "serialize_config",
    "fit_growth_exponent",
    "check_monotone",
    "run_experiment",
    "property_suite",
    "reference_lower_exponent",
]

PROPERTY_SEED = 20260301


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares exponent of R(t) ~ C (1+t)^b over a time window."""

    b: float
    stderr: float
    window: tuple
    n_points: int


@dataclass(frozen=True)
class Verdict:
    check_name: str
    passed: bool
    measured: float
    detail: str = ""

    def __post_init__(self):
        if not self.passed and not self.detail:
            raise ConfigurationError("failed verdicts must carry a detail")

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "pass": bool(self.passed),
            "measured": float(self.measured),
            "detail": self.detail,
        }


def reference_lower_exponent(d: int) -> float:
    """Asymptotic growth exponent of R_{d-1}; reference metadata only."""
    if d == 3:
        return 3.0 / 4.0
    if d == 4:
        return 2.0 / 3.0
    return d / (d * d - 2.0 * d - 2.0)


def fit_growth_exponent(ts, rs, window=None) -> ExponentFit:
    """Slope of log R vs log(1+t) over the window (default: last half).

    Standard error is the usual OLS slope error; on an exact power law the
    residual is zero and the fit recovers the exponent to rounding.
    """
    ts = np.asarray(ts, float)
    rs = np.asarray(rs, float)
    if ts.size != rs.size:
        raise ConfigurationError("time and moment series must align")
    if window is None:
        t_a = ts[ts.size // 2] if ts.size else 0.0
        t_b = ts[-1] if ts.size else 0.0
        window = (float(t_a), float(t_b))
    t_a, t_b = window
    if not t_a < t_b:
        raise ConfigurationError("fit window must satisfy t_a < t_b")
    mask = (ts >= t_a) & (ts <= t_b)
    if int(mask.sum()) < 5:
        raise ConfigurationError(
            f"exponent fit needs >= 5 samples in window, got {int(mask.sum())}"
        )
    if np.any(rs[mask] <= 0):
        raise ConfigurationError("exponent fit requires positive moments")
    x = np.log1p(ts[mask])
    y = np.log(rs[mask])
    n = x.size
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    sxx = float(np.sum((x - x.mean()) ** 2))
    dof = max(n - 2, 1)
    stderr = math.sqrt(float(np.sum(resid ** 2)) / dof / sxx) if sxx > 0 else math.inf
    return ExponentFit(b=float(slope), stderr=stderr,
                       window=(float(t_a), float(t_b)), n_points=n)


_MONOTONE_KINDS = ("Z_decreasing", "R_increasing", "R0_constant")


def check_monotone(samples, which: str) -> Verdict:
    """Strict monotonicity (or bitwise constancy for R0) across samples."""
    if which not in _MONOTONE_KINDS:
        raise ConfigurationError(f"unknown monotone check {which!r}")
    if len(samples) < 2:
        return Verdict(which, True, float(len(samples)),
                       "insufficient data (fewer than 2 samples)")
    for k in range(1, len(samples)):
        a, b = samples[k - 1], samples[k]
        if which == "Z_decreasing" and not b.Z < a.Z:
            return Verdict(which, False, float(k),
                           f"Z not strictly decreasing at sample {k}: "
                           f"{a.Z!r} -> {b.Z!r}")
        if which == "R_increasing" and not b.R_dm1 > a.R_dm1:
            return Verdict(which, False, float(k),
                           f"R_dm1 not strictly increasing at sample {k}: "
                           f"{a.R_dm1!r} -> {b.R_dm1!r}")
        if which == "R0_constant" and b.R0 != a.R0:
            return Verdict(which, False, float(k),
                           f"R0 changed at sample {k}: {a.R0!r} -> {b.R0!r}")
    return Verdict(which, True, 0.0, "")


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class SimConfig:
    """Full experiment description (one JSON object on disk)."""

    dim: int
    init: InitialData
    control: StepControl
    delta: float = 0.05
    moments_j: tuple = ()
    logmom_p: float = 2.0
    deterministic: bool = True
    output_dir: str = "run"
    seed: int = 0

    def __post_init__(self):
        if self.dim < 3:
            raise ConfigurationError("dim must be >= 3")
        if self.delta < 0:
            raise ConfigurationError("delta must be nonnegative")
        if self.logmom_p < 1:
            raise ConfigurationError("logmom_p must be >= 1")
        js = tuple(float(j) for j in self.moments_j)
        if float(self.dim - 1) not in js:
            js = js + (float(self.dim - 1),)
        object.__setattr__(self, "moments_j", js)


_INIT_KEYS = {"kind", "r0", "z0", "sigma", "strength", "grid_n", "cutoff"}
_CONTROL_KEYS = {"t_end", "dt", "cfl", "scheme", "output_every"}
_TOP_KEYS = {"dim", "delta", "init", "control", "moments_j", "logmom_p",
             "deterministic", "output_dir", "seed"}


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigurationError(f"unknown {where} keys: {', '.join(unknown)}")


def parse_config(text: str) -> SimConfig:
    """Parse and validate a JSON experiment config, applying defaults."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigurationError("config must be a single JSON object")
    _reject_unknown(doc, _TOP_KEYS, "config")
    for key in ("dim", "init", "control"):
        if key not in doc:
            raise ConfigurationError(f"config is missing required key {key!r}")
    init_doc = doc["init"]
    if not isinstance(init_doc, dict):
        raise ConfigurationError("init must be an object")
    _reject_unknown(init_doc, _INIT_KEYS, "init")
    for key in ("kind", "r0", "z0", "sigma", "strength", "grid_n"):
        if key not in init_doc:
            raise ConfigurationError(f"init is missing required key {key!r}")
    init = InitialData(
        kind=str(init_doc["kind"]),
        r0=float(init_doc["r0"]),
        z0=float(init_doc["z0"]),
        sigma=float(init_doc["sigma"]),
        strength=float(init_doc["strength"]),
        grid_n=int(init_doc["grid_n"]),
        cutoff=float(init_doc.get("cutoff", 4.0)),
    )
    ctl_doc = doc["control"]
    if not isinstance(ctl_doc, dict):
        raise ConfigurationError("control must be an object")
    _reject_unknown(ctl_doc, _CONTROL_KEYS, "control")
    if "t_end" not in ctl_doc:
        raise ConfigurationError("control is missing required key 't_end'")
    dt = ctl_doc.get("dt")
    cfl = ctl_doc.get("cfl")
    if dt is None and cfl is None:
        cfl = 0.25
    control = StepControl(
        t_end=float(ctl_doc["t_end"]),
        dt=None if dt is None else float(dt),
        cfl=None if cfl is None else float(cfl),
        scheme=str(ctl_doc.get("scheme", "rk4")),
        output_every=float(ctl_doc.get("output_every", 0.25)),
    )
    return SimConfig(
        dim=int(doc["dim"]),
        init=init,
        control=control,
        delta=float(doc.get("delta", 0.05)),
        moments_j=tuple(float(j) for j in doc.get("moments_j", ())),
        logmom_p=float(doc.get("logmom_p", 2.0)),
        deterministic=bool(doc.get("deterministic", True)),
        output_dir=str(doc.get("output_dir", "run")),
        seed=int(doc.get("seed", 0)),
    )


def serialize_config(config: SimConfig) -> str:
    """JSON text that parse_config maps back to an equal config."""
    doc = {
        "dim": config.dim,
        "delta": config.delta,
        "init": asdict(config.init),
        "control": {
            "t_end": config.control.t_end,
            "dt": config.control.dt,
            "cfl": config.control.cfl,
            "scheme": config.control.scheme,
            "output_every": config.control.output_every,
        },
        "moments_j": list(config.moments_j),
        "logmom_p": config.logmom_p,
        "deterministic": config.deterministic,
        "output_dir": config.output_dir,
        "seed": config.seed,
    }
    if config.control.dt is None:
        del doc["control"]["dt"]
    else:
        del doc["control"]["cfl"]
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# experiment driver


def _fd_match_verdict(name, ts, vals, derivs, t_end) -> Verdict:
    """Max relative mismatch between a 4th-order finite difference of the
    sampled series and the kernel-form derivative, on mid-run samples."""
    n = len(ts)
    if n < 5:
        return Verdict(name, True, float(n),
                       "insufficient data (fewer than 5 samples)")
    worst = 0.0
    worst_k = -1
    checked = 0
    for k in range(2, n - 2):
        if not (t_end / 3.0 <= ts[k] <= 2.0 * t_end / 3.0):
            continue
        h = ts[k + 1] - ts[k]
        # uniform cadence is required for the centered stencil
        if abs(ts[k - 1] - (ts[k] - h)) > 1e-9 * max(t_end, 1.0):
            continue
        fd = (-vals[k + 2] + 8.0 * vals[k + 1]
              - 8.0 * vals[k - 1] + vals[k - 2]) / (12.0 * h)
        rel = abs(fd - derivs[k]) / abs(derivs[k])
        checked += 1
        if rel > worst:
            worst, worst_k = rel, k
    if checked == 0:
        return Verdict(name, True, 0.0, "insufficient data (no mid-run samples)")
    passed = worst <= 0.01
    detail = "" if passed else (
        f"relative mismatch {worst:.3e} at sample {worst_k} exceeds 1%")
    return Verdict(name, passed, worst, detail)


def _verdicts_for(samples, config: SimConfig) -> list:
    d = config.dim
    t_end = config.control.t_end
    verdicts = [
        check_monotone(samples, "R0_constant"),
        check_monotone(samples, "Z_decreasing"),
        check_monotone(samples, "R_increasing"),
    ]

    e0 = samples[0].E
    if e0 > 0 and len(samples) >= 2:
        drift = max(abs(s.E - e0) for s in samples) / e0
        passed = drift <= 0.02
        verdicts.append(Verdict(
            "energy_drift", passed, drift,
            "" if passed else f"relative energy drift {drift:.3e} exceeds 2%"))
    else:
        verdicts.append(Verdict("energy_drift", True, 0.0,
                                "insufficient data"))

    ts = [s.t for s in samples]
    verdicts.append(_fd_match_verdict(
        "dZdt_fd_match", ts, [s.Z for s in samples],
        [s.dZdt_k for s in samples], t_end))
    verdicts.append(_fd_match_verdict(
        "dRdt_fd_match", ts, [s.R_dm1 for s in samples],
        [s.dRdt_k for s in samples], t_end))

    # late-window growth exponent of R_{d-1}
    try:
        fit = fit_growth_exponent(ts, [s.R_dm1 for s in samples])
    except ConfigurationError as exc:
        verdicts.append(Verdict("upper_bound_exponent", True, 0.0,
                                f"not fitted: {exc}"))
    else:
        if d == 3:
            passed = 0.0 < fit.b <= 4.5
            detail = (f"fitted b={fit.b:.4f} (stderr {fit.stderr:.2e}) over "
                      f"t in [{fit.window[0]:g}, {fit.window[1]:g}]")
            if not passed:
                detail += "; outside (0, 4.5]"
            verdicts.append(Verdict("upper_bound_exponent", passed, fit.b,
                                    detail))
        else:
            verdicts.append(Verdict(
                "upper_bound_exponent", True, fit.b,
                f"recorded only (asserted for d=3); stderr {fit.stderr:.2e}"))

    verdicts.append(Verdict(
        "lower_bound_exponent_reference", True, reference_lower_exponent(d),
        "asymptotic reference exponent; never asserted at finite time"))

    # running max of the differential-inequality ratio at j = d-1
    j = float(d - 1)
    dim = Dimension(d)
    ratios = [diff_inequality_ratio(samples[k - 1], samples[k], j, dim)
              for k in range(1, len(samples))]
    if ratios:
        running = np.maximum.accumulate(ratios)
        cut = max(int(math.ceil(0.1 * len(ratios))), 1)
        growth = float(running[-1] / running[cut - 1]) if running[cut - 1] > 0 \
            else math.inf
        if d >= 5:
            passed = growth < 10.0
            detail = (f"running max grew x{growth:.3f} after the first 10% "
                      "of the run")
            if not passed:
                detail += "; exceeds x10"
            verdicts.append(Verdict("diff_inequality_ratio", passed, growth,
                                    detail))
        else:
            verdicts.append(Verdict(
                "diff_inequality_ratio", True, growth,
                "recorded only (asserted for d >= 5)"))
    else:
        verdicts.append(Verdict("diff_inequality_ratio", True, 0.0,
                                "insufficient data"))
    return verdicts


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as f:
        f.write(text)
    os.replace(tmp, path)


def write_verdicts(verdicts, path: str) -> None:
    text = json.dumps([v.to_dict() for v in verdicts], indent=2) + "\n"
    _atomic_write(path, text)


def run_experiment(config: SimConfig):
    """Run one configured experiment and write its artifacts.

    Returns (samples, verdicts, paths) where paths maps artifact names to
    file locations under config.output_dir.  Byte-identical outputs on
    re-run with an equal config.
    """
    dim = Dimension(config.dim)
    state = make_initial_state(dim, config.delta, config.init)
    table = default_table(dim)
    moments = config.moments_j
    samples = []

    def sink(st):
        samples.append(compute_sample(st, moments, config.logmom_p, table))

    state = run(state, config.control, sink, table)

    verdicts = _verdicts_for(samples, config)

    out = config.output_dir
    os.makedirs(out, exist_ok=True)
    csv_path = os.path.join(out, "diagnostics.csv")
    lines = [csv_header(moments)]
    lines += [csv_row(s, moments) for s in samples]
    _atomic_write(csv_path, "\n".join(lines) + "\n")
    verdict_path = os.path.join(out, "verdicts.json")
    write_verdicts(verdicts, verdict_path)
    ckpt_path = os.path.join(out, f"checkpoint_{state.t:g}.csv")
    save_checkpoint(state, ckpt_path)
    paths = {"diagnostics": csv_path, "verdicts": verdict_path,
             "checkpoint": ckpt_path}
    return samples, verdicts, paths


# ---------------------------------------------------------------------------
# randomized invariant suites


def _sign_suite(dims, n, rng) -> Verdict:
    bad = 0
    worst = 0.0
    for d in dims:
        dim = Dimension(d)
        s = np.exp(rng.uniform(np.log(1e-8), np.log(1e8), n))
        fp = eval_F_deriv(dim, s)
        fpp = eval_F_second(dim, s)
        fs = eval_F_star(dim, s)
        fs_hi = eval_F_star(dim, s * 1.001)
        bad += int(np.sum(fp >= 0))
        bad += int(np.sum(fpp <= 0))
        bad += int(np.sum(fs_hi - fs >= 0))
        bad += int(np.sum(fs <= 0))
        worst = max(worst, float(np.max(fp)))
    passed = bad == 0
    return Verdict("kernel_sign_suite", passed, float(bad),
                   "" if passed else f"{bad} sign violations across d={dims}")


def _jest_envelope(dims, n, rng) -> Verdict:
    worst = 0.0
    for d in dims:
        dim = Dimension(d)
        s = np.exp(rng.uniform(np.log(1e-8), np.log(1e8), n))
        env = -eval_F_deriv(dim, s) * s * (1.0 + s) ** (d / 2.0)
        worst = max(worst, float(env.max() / env.min()))
    passed = worst <= 100.0
    return Verdict("jest_envelope", passed, worst,
                   "" if passed else
                   f"envelope max/min ratio {worst:.3f} exceeds 100")


def _random_quadruples(rng, n):
    r = np.exp(rng.uniform(np.log(0.1), np.log(10.0), n))
    r_bar = np.exp(rng.uniform(np.log(0.1), np.log(10.0), n))
    z = rng.uniform(0.0, 5.0, n)
    z_bar = rng.uniform(0.0, 5.0, n)
    return r, z, r_bar, z_bar


def _ktilde_positivity(dims, deltas, n, rng, rel_tol=1e-10) -> Verdict:
    worst = math.inf
    bad = 0
    for d in dims:
        dim = Dimension(d)
        for delta in deltas:
            r, z, r_bar, z_bar = _random_quadruples(rng, n)
            k = ktilde_batch(dim, delta, r, z, r_bar, z_bar, rel_tol)
            bad += int(np.sum(k <= 0))
            worst = min(worst, float(k.min()))
    passed = bad == 0
    return Verdict("ktilde_positive", passed, worst,
                   "" if passed else
                   f"{bad} non-positive values (min {worst:.3e})")


def _spd_alpha1() -> Verdict:
    k = np.arange(-10, 11, dtype=float)
    x = 2.0 ** k
    X, Y = np.meshgrid(x, x, indexing="ij")
    ratio = stable_pow_diff(1.0, X, Y) / (Y / (X * (X + Y)))
    worst = float(np.max(np.abs(ratio - 1.0)))
    passed = worst <= 1e-12
    return Verdict("pow_diff_alpha1_exact", passed, worst,
                   "" if passed else
                   f"alpha=1 ratio deviates by {worst:.3e}")


def _spd_envelope() -> Verdict:
    k = np.arange(-10, 11, dtype=float)
    x = 2.0 ** k
    X, Y = np.meshgrid(x, x, indexing="ij")
    X3, Y3, Z3 = np.meshgrid(x, x, x, indexing="ij")
    lo = math.inf
    hi = 0.0
    for alpha in (0.5, 2.0):
        r1 = stable_pow_diff(alpha, X, Y) / (X ** -alpha * Y / (X + Y))
        r2 = stable_pow_diff2(alpha, X3, Y3, Z3) / (
            X3 ** -alpha * (Y3 / (X3 + Y3)) * (Z3 / (X3 + Z3)))
        lo = min(lo, float(r1.min()), float(r2.min()))
        hi = max(hi, float(r1.max()), float(r2.max()))
    passed = lo >= 0.1 and hi <= 10.0
    return Verdict("pow_diff_comparator_envelope", passed, hi,
                   "" if passed else
                   f"comparator ratios [{lo:.3f}, {hi:.3f}] escape [1/10, 10]")


def _fault_injection(rng) -> Verdict:
    """Self-test: a sign-flipped F' must break the K-tilde positivity check."""
    dim = Dimension(3)
    n = 500
    r = np.exp(rng.uniform(np.log(0.1), np.log(10.0), n))
    r_bar = np.exp(rng.uniform(np.log(0.1), np.log(10.0), n))
    # log-uniform heights reach the near-plane regime where the F' term
    # dominates K-tilde, so the injected fault cannot hide behind F*
    z = np.exp(rng.uniform(np.log(1e-3), np.log(5.0), n))
    z_bar = np.exp(rng.uniform(np.log(1e-3), np.log(5.0), n))
    sD = ((r - r_bar) ** 2 + (z - z_bar) ** 2) / (r * r_bar)
    sM = ((r - r_bar) ** 2 + (z + z_bar) ** 2) / (r * r_bar)
    fpD = -eval_F_deriv(dim, sD)   # deliberately wrong sign
    fpM = -eval_F_deriv(dim, sM)
    fsD = eval_F_star(dim, sD)
    fsM = eval_F_star(dim, sM)
    a = -2.0 * (r ** (dim.d - 2) - r_bar ** (dim.d - 2)) * (r - r_bar)
    b = r ** (dim.d - 1) + r_bar ** (dim.d - 1)
    faulty = a * (fpD - fpM) + b * (fsD - fsM)
    detected = bool(np.any(faulty <= 0))
    return Verdict("fault_injection_selftest", detected,
                   float(np.sum(faulty <= 0)),
                   "" if detected else
                   "sign-flipped F' went undetected by the positivity check")


def property_suite(seed: int = PROPERTY_SEED, dims=(3, 4, 5, 7),
                   n_sign: int = 10_000, n_ktilde: int = 5_000) -> list:
    """Seeded randomized invariant suites; all checks pass on a correct build."""
    rng = np.random.default_rng(seed)
    return [
        _sign_suite(dims, n_sign, rng),
        _jest_envelope(dims, n_sign, rng),
        _ktilde_positivity(dims, (0.0, 0.1), n_ktilde, rng),
        _spd_alpha1(),
        _spd_envelope(),
        _fault_injection(rng),
    ]

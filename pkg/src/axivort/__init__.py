"""Vortex-particle solver for axisymmetric, swirl-free Euler flow in d >= 3."""

from .specfun import (
    Dimension,
    KernelTable,
    build_kernel_table,
    eval_F,
    eval_F_deriv,
    eval_F_second,
    eval_F_star,
    eval_F_star_deriv,
    stable_pow_diff,
    stable_pow_diff2,
    table_eval,
)
from .state import (
    InitialData,
    VortexParticle,
    VortexState,
    load_checkpoint,
    make_initial_state,
    save_checkpoint,
    total_mass,
)
from .biot_savart import (
    PairGeometry,
    Velocity,
    default_table,
    energy_pair,
    ktilde,
    pair_geometry,
    rdot_pair,
    stream_at,
    velocity_all,
    velocity_at,
)
from .integrate import StepControl, cfl_dt, run, step
from .diagnostics import (
    DiagnosticsSample,
    compute_sample,
    dRdt_kernel,
    dZdt_kernel,
    energy,
    log_moment,
    moment_R,
    moment_Z,
)
from .harness import (
    ExponentFit,
    SimConfig,
    Verdict,
    check_monotone,
    fit_growth_exponent,
    parse_config,
    property_suite,
    run_experiment,
    serialize_config,
)

__version__ = "0.1.0"

"""Config-driven command line: run experiments, property suite, kernel dump.

Exit codes: 0 when every verdict passes, 1 on any failed verdict, 2 on
configuration or I/O errors.  Output files are written to a temporary
name and atomically renamed, so a non-zero exit never leaves partial
artifacts behind.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .errors import ConfigurationError, DomainError
from .harness import (
    SimConfig,
    parse_config,
    property_suite,
    run_experiment,
    serialize_config,
)
from .specfun import Dimension, eval_F, eval_F_deriv, eval_F_star

__all__ = ["SimConfig", "parse_config", "serialize_config", "main"]

EXIT_OK = 0
EXIT_FAILED_VERDICT = 1
EXIT_CONFIG = 2


def _set_threads(threads: int | None) -> None:
    """Apply --threads (0 or None = auto, falling back to SEL_THREADS)."""
    if threads is None:
        env = os.environ.get("SEL_THREADS", "").strip()
        if not env:
            return
        try:
            threads = int(env)
        except ValueError:
            raise ConfigurationError(f"SEL_THREADS must be an integer, got {env!r}")
    if threads < 0:
        raise ConfigurationError("thread count must be nonnegative")
    if threads == 0:
        return
    import numba

    numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))


def _print_verdicts(verdicts, out=sys.stdout) -> bool:
    all_pass = True
    for v in verdicts:
        mark = "PASS" if v.passed else "FAIL"
        line = f"[{mark}] {v.check_name}: measured={v.measured!r}"
        if v.detail:
            line += f" ({v.detail})"
        print(line, file=out)
        all_pass = all_pass and v.passed
    return all_pass


def _cmd_run(args) -> int:
    try:
        with open(args.config) as f:
            text = f.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    config = parse_config(text)
    _, verdicts, paths = run_experiment(config)
    print(f"wrote {paths['diagnostics']}")
    print(f"wrote {paths['verdicts']}")
    print(f"wrote {paths['checkpoint']}")
    return EXIT_OK if _print_verdicts(verdicts) else EXIT_FAILED_VERDICT


def _cmd_props(args) -> int:
    verdicts = property_suite(seed=args.seed)
    return EXIT_OK if _print_verdicts(verdicts) else EXIT_FAILED_VERDICT


def _cmd_kernel_dump(args) -> int:
    if args.smin <= 0 or args.smax <= args.smin:
        raise ConfigurationError("kernel-dump requires 0 < smin < smax")
    if args.n < 2:
        raise ConfigurationError("kernel-dump requires n >= 2")
    dim = Dimension(args.dim)
    s = np.exp(np.linspace(np.log(args.smin), np.log(args.smax), args.n))
    f = eval_F(dim, s)
    fp = eval_F_deriv(dim, s)
    fstar = eval_F_star(dim, s)
    lines = ["s,F,Fp,Fstar"]
    lines += [",".join(repr(float(v)) for v in row)
              for row in zip(s, f, fp, fstar)]
    tmp = args.out + ".tmp"
    with open(tmp, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="axivort",
        description="Vortex-particle experiments for anti-parallel "
        "axisymmetric flows.",
    )
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for pairwise sums "
                        "(0 = auto; default: SEL_THREADS or auto)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a configured experiment")
    p_run.add_argument("config", help="JSON config file")
    p_run.set_defaults(func=_cmd_run)

    p_props = sub.add_parser("props", help="run the randomized property suite")
    p_props.add_argument("--seed", type=int,
                         default=None, help="override the suite seed")
    p_props.set_defaults(func=_cmd_props)

    p_dump = sub.add_parser("kernel-dump", help="dump kernel values as CSV")
    p_dump.add_argument("--dim", type=int, required=True)
    p_dump.add_argument("--smin", type=float, required=True)
    p_dump.add_argument("--smax", type=float, required=True)
    p_dump.add_argument("--n", type=int, required=True)
    p_dump.add_argument("--out", default="kernel.csv")
    p_dump.set_defaults(func=_cmd_kernel_dump)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        _set_threads(args.threads)
        if args.command == "props" and args.seed is None:
            from .harness import PROPERTY_SEED

            args.seed = PROPERTY_SEED
        return args.func(args)
    except (ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

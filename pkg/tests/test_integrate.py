"""Runge-Kutta stepping, CFL estimation, the run driver."""

import numpy as np
import pytest

from axivort.diagnostics import csv_header, csv_row, compute_sample
from axivort.errors import ConfigurationError
from axivort.integrate import StepControl, cfl_dt, run, step
from axivort.state import VortexState


class TestStepControl:
    def test_requires_exactly_one_of_dt_cfl(self):
        with pytest.raises(ConfigurationError):
            StepControl(t_end=1.0)
        with pytest.raises(ConfigurationError):
            StepControl(t_end=1.0, dt=0.1, cfl=0.25)

    def test_rejects_unknown_scheme(self):
        with pytest.raises(ConfigurationError):
            StepControl(t_end=1.0, dt=0.1, scheme="euler")


class TestStep:
    def test_empty_state_advances_time(self, dim3):
        st = VortexState(dim3, 0.05, np.empty(0), np.empty(0), np.empty(0))
        out = step(st, 0.5)
        assert out.t == 0.5
        assert out.n == 0

    def test_one_particle_signs(self, dim3):
        st = VortexState(dim3, 0.05, [1.0], [1.0], [1.0])
        out = step(st, 0.01)
        assert out.z[0] < st.z[0]
        assert out.r[0] > st.r[0]

    def test_fourth_order_convergence(self, tiny_state):
        t_total = 0.4

        def advance(dt):
            st = tiny_state
            for _ in range(round(t_total / dt)):
                st = step(st, dt)
            return st

        ref = advance(0.025)
        errs = []
        for dt in (0.2, 0.1):
            st = advance(dt)
            errs.append(float(np.max(np.hypot(st.r - ref.r, st.z - ref.z))))
        ratio = errs[0] / errs[1]
        assert 16.0 * 0.7 <= ratio <= 16.0 * 1.3

    def test_rejects_nonpositive_dt(self, tiny_state):
        with pytest.raises(ConfigurationError):
            step(tiny_state, 0.0)


class TestCflDt:
    def test_two_particle_formula(self, dim3):
        from axivort.biot_savart import velocity_all

        st = VortexState(dim3, 0.05, [1.0, 1.2], [1.0, 1.0], [1.0, 1.0])
        ur, uz = velocity_all(st)
        v = float(np.max(np.hypot(ur, uz)))
        # spacing 0.2 > delta, so the length scale is delta
        assert cfl_dt(st, 0.25) == pytest.approx(0.25 * 0.05 / v, rel=1e-12)

    def test_degenerate_state_returns_max_dt(self, dim3):
        # a single on-plane particle induces no motion on itself
        st = VortexState(dim3, 0.0, [1.0], [0.0], [1.0])
        assert cfl_dt(st, 0.25, max_dt=2.0) == 2.0


class TestRun:
    def test_t_end_zero_emits_initial_sample(self, tiny_state):
        seen = []
        out = run(tiny_state, StepControl(t_end=0.0, dt=0.1), seen.append)
        assert len(seen) == 1
        assert out is tiny_state

    def test_single_particle_z_strictly_decreasing(self, dim3):
        st = VortexState(dim3, 0.05, [1.0], [1.0], [1.0])
        zs = []
        run(st, StepControl(t_end=5.0, cfl=0.25, output_every=0.5),
            lambda s: zs.append(float(s.z[0])))
        assert len(zs) == 11
        assert all(b < a for a, b in zip(zs, zs[1:]))

    def test_bit_identical_repeat(self, tiny_state):
        def csv_of_run():
            rows = [csv_header()]
            run(tiny_state, StepControl(t_end=0.5, cfl=0.25),
                lambda s: rows.append(csv_row(compute_sample(s))))
            return "\n".join(rows)

        assert csv_of_run() == csv_of_run()

    def test_output_cadence(self, tiny_state):
        ts = []
        run(tiny_state, StepControl(t_end=1.0, dt=0.05, output_every=0.25),
            lambda s: ts.append(s.t))
        assert ts == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0], abs=1e-12)

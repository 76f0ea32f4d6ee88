"""Particle states, initial data sampling, checkpoints."""

import math

import numpy as np
import pytest

from axivort.errors import ConfigurationError, DomainError
from axivort.specfun import Dimension
from axivort.state import (
    InitialData,
    VortexState,
    load_checkpoint,
    make_initial_state,
    save_checkpoint,
    total_mass,
    validate,
)


class TestInitialData:
    def test_single_cell_limit(self, dim3):
        init = InitialData("gaussian_pair", 1.0, 1.0, 0.1, 1.0, 1, 0.5)
        st = make_initial_state(dim3, 0.0, init)
        assert st.n == 1
        assert st.r[0] == pytest.approx(1.0, abs=0.05)
        assert st.z[0] == pytest.approx(1.0, abs=0.05)
        # w ~ omega0(1,1) * dr * dz; profile ~ 1 at the center
        cell = (2 * 0.5 * 0.1) ** 2
        assert st.w[0] == pytest.approx(1.0 * cell, rel=0.01)

    def test_weights_positive_heights_nonnegative(self, small_state):
        assert np.all(small_state.w > 0)
        assert np.all(small_state.z >= 0)
        assert np.all(small_state.r > 0)

    def test_patch_mass_converges(self, dim3):
        # exact mass of the r-weighted indicator disk: pi sigma^2 r0
        exact = math.pi * 0.1 ** 2 * 1.0
        masses = []
        for n in (16, 32):
            init = InitialData("patch_pair", 1.0, 1.0, 0.1, 1.0, n, 1.0)
            masses.append(total_mass(make_initial_state(dim3, 0.0, init)))
        assert masses[1] == pytest.approx(exact, rel=0.01)
        assert abs(masses[1] - exact) < abs(masses[0] - exact)

    def test_rejects_bad_kind(self):
        with pytest.raises(ConfigurationError):
            InitialData("vortex_soup", 1.0, 1.0, 0.1, 1.0, 8, 4.0)

    def test_rejects_empty_support(self, dim3):
        # midpoints of a 2x2 grid over 10 sigma all miss the unit disk
        init = InitialData("patch_pair", 1.0, 1.0, 0.01, 1.0, 2, 10.0)
        with pytest.raises(ConfigurationError):
            make_initial_state(dim3, 0.0, init)


class TestTotalMass:
    def test_empty(self, dim3):
        st = VortexState(dim3, 0.1, np.empty(0), np.empty(0), np.empty(0))
        assert total_mass(st) == 0.0

    def test_single(self, dim3):
        st = VortexState(dim3, 0.1, [1.0], [1.0], [3.0])
        assert total_mass(st) == 3.0

    def test_bit_identical_after_steps(self, tiny_state):
        from axivort.integrate import step

        m0 = total_mass(tiny_state)
        st = tiny_state
        for _ in range(100):
            st = step(st, 1e-3)
        assert total_mass(st) == m0
        assert st.w is tiny_state.w


class TestValidate:
    def test_fresh_state_valid(self, small_state):
        assert validate(small_state) == []

    def test_negative_radius_reported(self, dim3):
        st = VortexState(dim3, 0.1, [-1.0], [1.0], [1.0])
        (msg,) = validate(st)
        assert "r > 0" in msg

    def test_zero_weight_reported(self, dim3):
        st = VortexState(dim3, 0.1, [1.0], [1.0], [0.0])
        (msg,) = validate(st)
        assert "w > 0" in msg


class TestCheckpoint:
    def test_round_trip_bit_exact(self, small_state, tmp_path):
        path = str(tmp_path / "checkpoint_0.csv")
        save_checkpoint(small_state, path)
        back = load_checkpoint(path)
        assert np.array_equal(back.r, small_state.r)
        assert np.array_equal(back.z, small_state.z)
        assert np.array_equal(back.w, small_state.w)
        assert back.dim == small_state.dim
        assert back.delta == small_state.delta
        assert back.t == small_state.t
        assert back.sup_ratio == small_state.sup_ratio

    def test_rewrite_is_byte_identical(self, small_state, tmp_path):
        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        save_checkpoint(small_state, str(p1))
        save_checkpoint(small_state, str(p2))
        assert p1.read_bytes() == p2.read_bytes()


class TestVortexState:
    def test_arrays_are_immutable(self, small_state):
        with pytest.raises(ValueError):
            small_state.r[0] = 2.0

    def test_rejects_negative_delta(self, dim3):
        with pytest.raises(DomainError):
            VortexState(dim3, -0.1, [1.0], [1.0], [1.0])

    def test_with_positions_shares_weights(self, small_state):
        moved = small_state.with_positions(
            small_state.r * 1.1, small_state.z, t=1.0)
        assert moved.w is small_state.w
        assert moved.t == 1.0

    def test_particles_view(self, dim3):
        st = VortexState(dim3, 0.0, [1.0, 2.0], [0.5, 0.25], [3.0, 4.0])
        parts = st.particles
        assert len(parts) == 2
        assert parts[1].r == 2.0 and parts[1].w == 4.0

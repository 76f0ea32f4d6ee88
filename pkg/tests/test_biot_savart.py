"""Velocities, stream function, and pairwise kernels."""

import math

import numpy as np
import pytest

from axivort.biot_savart import (
    PairGeometry,
    energy_pair,
    ktilde,
    pair_geometry,
    rdot_pair,
    stream_at,
    velocity_all,
    velocity_at,
)
from axivort.errors import DomainError, SingularityError
from axivort.specfun import Dimension, eval_F_deriv
from axivort.state import VortexState

from conftest import f4_closed


def _one_particle(dim, delta, r=1.0, z=1.0, w=1.0):
    return VortexState(dim, delta, [r], [z], [w])


class TestPairGeometry:
    def test_regularized_coincident_pair(self, dim3):
        g = pair_geometry(dim3, 0.1, 1.0, 1.0, 1.0, 1.0)
        assert g.s_direct == pytest.approx(0.01)
        assert g.s_mirror == pytest.approx(4.01)

    def test_plain_values(self, dim3):
        g = pair_geometry(dim3, 0.0, 1.0, 2.0, 1.0, 1.0)
        assert g.s_direct == 1.0
        assert g.s_mirror == 9.0

    def test_ordering_always_holds(self, dim3):
        rng = np.random.default_rng(3)
        for _ in range(200):
            r, rb = rng.uniform(0.1, 10, 2)
            z, zb = rng.uniform(0, 5, 2)
            g = pair_geometry(dim3, rng.uniform(0, 0.2), r, z, rb, zb)
            assert g.s_direct <= g.s_mirror

    def test_rejects_bad_coordinates(self, dim3):
        with pytest.raises(DomainError):
            pair_geometry(dim3, 0.0, -1.0, 1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            pair_geometry(dim3, 0.0, 1.0, -1.0, 1.0, 1.0)


class TestVelocityAt:
    def test_uz_vanishes_on_symmetry_plane(self, small_state):
        for r in (0.5, 1.0, 1.7):
            v = velocity_at(small_state, r, 0.0)
            assert abs(v.u_z) <= 1e-12

    def test_one_particle_signs_at_particle(self, dim3):
        st = _one_particle(dim3, 0.05)
        v = velocity_at(st, 1.0, 1.0)
        assert v.u_z < 0
        assert v.u_r > 0

    def test_quadrature_route_value(self, dim3):
        # u_r at (1,2) from a (1,1) particle, delta=0: [F'(1) - 3 F'(9)] / pi
        st = _one_particle(dim3, 0.0)
        fp1 = float(eval_F_deriv(dim3, 1.0))
        fp9 = float(eval_F_deriv(dim3, 9.0))
        expect = (fp1 * 1.0 - fp9 * 3.0) / math.pi
        v = velocity_at(st, 1.0, 2.0, method="quadrature")
        assert v.u_r == pytest.approx(expect, rel=1e-12)
        assert v.u_r < 0

    def test_table_matches_quadrature(self, small_state):
        vt = velocity_at(small_state, 1.3, 0.7, method="table")
        vq = velocity_at(small_state, 1.3, 0.7, method="quadrature")
        assert vt.u_r == pytest.approx(vq.u_r, rel=1e-8)
        assert vt.u_z == pytest.approx(vq.u_z, rel=1e-8)

    def test_singular_evaluation_raises(self, dim3):
        st = _one_particle(dim3, 0.0)
        with pytest.raises(SingularityError):
            velocity_at(st, 1.0, 1.0)


class TestVelocityAll:
    def test_empty_state(self, dim3):
        st = VortexState(dim3, 0.05, np.empty(0), np.empty(0), np.empty(0))
        ur, uz = velocity_all(st)
        assert ur.size == 0 and uz.size == 0

    def test_matches_pointwise_bitwise(self, tiny_state):
        ur, uz = velocity_all(tiny_state)
        # self-pair is included at delta > 0, so the pointwise evaluation
        # over the full source set reproduces the batch exactly
        for i in range(tiny_state.n):
            v = velocity_at(tiny_state, tiny_state.r[i], tiny_state.z[i])
            assert v.u_r == ur[i]
            assert v.u_z == uz[i]

    def test_repeat_call_bitwise_stable(self, small_state):
        ur1, uz1 = velocity_all(small_state)
        ur2, uz2 = velocity_all(small_state)
        assert np.array_equal(ur1, ur2)
        assert np.array_equal(uz1, uz2)


class TestStreamAt:
    def test_vanishes_on_symmetry_plane(self, small_state):
        for r in (0.5, 1.0, 1.7):
            assert abs(stream_at(small_state, r, 0.0)) <= 1e-12

    def test_empty_state(self, dim3):
        st = VortexState(dim3, 0.05, np.empty(0), np.empty(0), np.empty(0))
        assert stream_at(st, 1.0, 1.0) == 0.0

    def test_single_particle_d4_closed_form(self, dim4):
        st = _one_particle(dim4, 0.0)
        expect = -(float(f4_closed(1.0)) - float(f4_closed(9.0))) / (2 * math.pi)
        assert stream_at(st, 1.0, 2.0) == pytest.approx(expect, rel=1e-11)


class TestKtilde:
    def test_positive_generic_pair(self, dim3):
        g = pair_geometry(dim3, 0.0, 1.0, 1.0, 2.0, 1.0)
        assert ktilde(dim3, g) > 0

    def test_equal_radii_reduces_to_fstar_difference(self, dim3):
        from axivort.specfun import eval_F_star

        g = pair_geometry(dim3, 0.0, 1.5, 2.0, 1.5, 1.0)
        expect = 2.0 * 1.5 ** 2 * (
            float(eval_F_star(dim3, g.s_direct))
            - float(eval_F_star(dim3, g.s_mirror)))
        assert ktilde(dim3, g) == pytest.approx(expect, rel=1e-12)
        assert ktilde(dim3, g) > 0

    def test_vanishes_on_symmetry_plane(self, dim3):
        g = pair_geometry(dim3, 0.1, 1.0, 0.0, 2.0, 0.0)
        assert abs(ktilde(dim3, g)) <= 1e-12


class TestRdotPair:
    def test_vanishes_on_symmetry_plane(self, dim3):
        g = pair_geometry(dim3, 0.1, 1.0, 0.0, 2.0, 0.0)
        assert rdot_pair(dim3, g, 1.0, 1.0) == 0.0

    def test_positive_off_plane(self, dim3):
        rng = np.random.default_rng(5)
        for _ in range(100):
            r, rb = rng.uniform(0.1, 10, 2)
            z, zb = rng.uniform(0, 5, 2)
            if z + zb == 0:
                continue
            g = pair_geometry(dim3, 0.05, r, z, rb, zb)
            assert rdot_pair(dim3, g, 1.0, 1.0) > 0

    def test_spot_value_via_quadrature(self, dim3):
        g = pair_geometry(dim3, 0.0, 1.0, 1.0, 1.0, 1.0)
        expect = (2.0 / math.pi) * (-float(eval_F_deriv(dim3, 4.0))) * 2.0
        assert rdot_pair(dim3, g, 1.0, 1.0) == pytest.approx(expect, rel=1e-12)


class TestEnergyPair:
    def test_vanishes_on_symmetry_plane(self, dim4):
        g = pair_geometry(dim4, 0.0, 1.0, 0.0, 2.0, 0.0)
        assert energy_pair(dim4, g, 1.0, 1.0) == 0.0

    def test_nonnegative(self, dim4):
        rng = np.random.default_rng(8)
        for _ in range(100):
            r, rb = rng.uniform(0.1, 10, 2)
            z, zb = rng.uniform(0, 5, 2)
            g = pair_geometry(dim4, 0.05, r, z, rb, zb)
            assert energy_pair(dim4, g, 1.0, 1.0) >= 0

    def test_d4_closed_form_pair(self, dim4):
        g = pair_geometry(dim4, 0.0, 1.0, 2.0, 1.0, 1.0)
        je = float(f4_closed(1.0)) - float(f4_closed(9.0))
        expect = (dim4.c_d / 2.0) / math.pi * je * 1.0
        assert energy_pair(dim4, g, 1.0, 1.0) == pytest.approx(expect, rel=1e-11)

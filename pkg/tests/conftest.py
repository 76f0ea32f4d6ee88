"""Shared fixtures: dimensions, small states, and d=4 closed-form oracles."""

import numpy as np
import pytest

from axivort.specfun import Dimension
from axivort.state import InitialData, make_initial_state


def f4_closed(s):
    """d=4 kernel in closed form: F = (a/2) ln((a+1)/(a-1)) - 1, a = 1+s/2.

    Evaluated through the artanh series in u = 1/a for u < 1/2 (the direct
    form cancels catastrophically for large s), directly otherwise.
    """
    s = np.asarray(s, float)
    a = 1.0 + 0.5 * s
    u = 1.0 / a
    out = np.empty_like(u)
    small = u < 0.5
    us = u[small]
    # Horner in u^2 of sum_{k>=1} u^{2k}/(2k+1)
    acc = np.zeros_like(us)
    for k in range(40, 0, -1):
        acc = (acc + 1.0 / (2 * k + 1)) * us * us
    out[small] = acc
    big = ~small
    sb = s[big]
    out[big] = 0.5 * (1.0 + 0.5 * sb) * np.log((4.0 + sb) / sb) - 1.0
    return out


def f4_deriv_closed(s):
    """Derivative of the d=4 closed form, same split evaluation."""
    s = np.asarray(s, float)
    a = 1.0 + 0.5 * s
    u = 1.0 / a
    out = np.empty_like(u)
    small = u < 0.5
    us = u[small]
    acc = np.zeros_like(us)
    for k in range(40, 0, -1):
        acc = (acc + k / (2.0 * k + 1.0)) * us * us
    out[small] = -acc * us
    big = ~small
    sb = s[big]
    ab = 1.0 + 0.5 * sb
    # a^2 - 1 = s (1 + s/4) exactly, avoiding the subtraction
    out[big] = 0.25 * np.log((4.0 + sb) / sb) - ab / (
        2.0 * sb * (1.0 + 0.25 * sb))
    return out


@pytest.fixture(scope="session")
def dim3():
    return Dimension(3)


@pytest.fixture(scope="session")
def dim4():
    return Dimension(4)


@pytest.fixture(scope="session")
def small_state(dim3):
    """Coarse d=3 Gaussian pair (a few hundred particles)."""
    init = InitialData("gaussian_pair", 1.0, 0.5, 0.15, 1.0, 16, 4.0)
    return make_initial_state(dim3, 0.05, init)


@pytest.fixture(scope="session")
def tiny_state(dim3):
    init = InitialData("gaussian_pair", 1.0, 0.5, 0.15, 1.0, 6, 4.0)
    return make_initial_state(dim3, 0.05, init)

"""Backend parity: the compiled kernels must reproduce the numpy fallback."""

import numpy as np
import pytest

from twoscale_euler import kernels
from twoscale_euler.kernels import get_backend

py = get_backend("python")

try:
    cy = get_backend("cython")
except ImportError:
    cy = None

needs_cython = pytest.mark.skipif(cy is None, reason="extension not built")


def _random_profile(n, seed):
    rng = np.random.default_rng(seed)
    q = rng.uniform(-0.5, 0.5, n)
    return q - q.mean()


@needs_cython
def test_scalar_step_parity_exact():
    for seed in range(5):
        q = _random_profile(257, seed)
        a = py.scalar_roe_step(q, 0.5, 1.0, 0.01)
        b = cy.scalar_roe_step(q, 0.5, 1.0, 0.01)
        np.testing.assert_array_equal(a, b)


@needs_cython
def test_scalar_max_speed_parity_exact():
    for seed in range(5):
        q = _random_profile(128, seed)
        assert py.scalar_max_speed(q, 0.5, 1.0) == cy.scalar_max_speed(q, 0.5, 1.0)


@needs_cython
def test_direct_step_parity():
    rng = np.random.default_rng(0)
    for gamma in (1.0, 1.4, 2.0):
        rho = 1.0 + 0.05 * rng.uniform(-1, 1, 200)
        mom = rho * rng.uniform(0.5, 1.5, 200)
        d_py, m_py = py.direct_roe_step(rho, mom, 0.1, gamma, 1e-4)
        d_cy, m_cy = cy.direct_roe_step(rho, mom, 0.1, gamma, 1e-4)
        np.testing.assert_allclose(d_cy, d_py, rtol=1e-13, atol=1e-16)
        np.testing.assert_allclose(m_cy, m_py, rtol=1e-13, atol=1e-16)


@needs_cython
def test_direct_max_speed_parity():
    rng = np.random.default_rng(1)
    rho = 1.0 + 0.1 * rng.uniform(-1, 1, 150)
    mom = rho * rng.uniform(-1, 1, 150)
    s_py = py.direct_max_speed(rho, mom, 0.05, 1.4)
    s_cy = cy.direct_max_speed(rho, mom, 0.05, 1.4)
    assert s_cy == pytest.approx(s_py, rel=1e-14)


def test_active_backend_reported():
    assert kernels.BACKEND in ("python", "cython")


def test_scalar_step_conserves_sum():
    q = _random_profile(512, 42)
    out = kernels.scalar_roe_step(q, 0.5, 1.0, 0.2)
    assert out.sum() == pytest.approx(q.sum(), abs=1e-12)


def test_scalar_step_upwind_hand_value():
    # 4 cells, h = pi/2, flux 0.5 q^2 + q, single bump 0.2, k = 0.1:
    # all interface speeds positive, so the update is pure upwind
    q = np.array([0.2, 0.0, 0.0, 0.0])
    h = np.pi / 2
    out = kernels.scalar_roe_step(q, 0.5, 1.0, 0.1 / h)
    shed = (0.1 / h) * 0.22  # f(0.2) = 0.22
    np.testing.assert_allclose(
        out, [0.2 - shed, shed, 0.0, 0.0], rtol=0, atol=1e-15
    )
    assert out[0] == pytest.approx(0.185995, abs=1e-6)
    assert out[1] == pytest.approx(0.014005, abs=1e-6)

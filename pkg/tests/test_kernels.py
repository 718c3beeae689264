import numpy as np
import pytest

from hyperbolic import _kernels_py
from hyperbolic._backend import BACKEND

compiled = pytest.importorskip("hyperbolic._kernels")


def test_backend_selected():
    assert BACKEND in ("cython", "python")


def test_bessel_backends_agree():
    rng = np.random.default_rng(0)
    nu = rng.uniform(-50, 50, 5000)
    x = np.exp(rng.uniform(np.log(1e-6), np.log(1e4), 5000))
    lc, rc = compiled.log_bessel_k(nu, x)
    lp, rp = _kernels_py.log_bessel_k(nu, x)
    np.testing.assert_allclose(lc, lp, rtol=1e-13, atol=1e-13)
    np.testing.assert_allclose(rc, rp, rtol=1e-13)


def test_diffusion_backends_agree():
    z = np.random.default_rng(1).standard_normal(20000)
    xc, oc = compiled.hyp_diffusion(0.3, z, 7, 1.5, 0.4, 0.8, 0.1, 1.2, 1e-3)
    xp, op = _kernels_py.hyp_diffusion(0.3, z, 7, 1.5, 0.4, 0.8, 0.1, 1.2, 1e-3)
    assert oc.shape == op.shape == (20000 // 7,)
    np.testing.assert_allclose(oc, op, rtol=1e-12, atol=1e-12)
    assert xc == pytest.approx(xp, abs=1e-12)


def test_ar1_backends_agree():
    eps = np.random.default_rng(2).standard_normal(10000)
    np.testing.assert_allclose(compiled.ar1_filter(0.93, 0.5, eps),
                               _kernels_py.ar1_filter(0.93, 0.5, eps), rtol=1e-11, atol=1e-12)

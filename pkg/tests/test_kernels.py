"""The numba and numpy kernels must agree; the public aliases follow the env flag."""

import os
import subprocess
import sys

import numpy as np
import pytest

from pbtv import _kernels as K

pytestmark = pytest.mark.skipif(not K.NUMBA_AVAILABLE, reason="numba is not installed")


@pytest.fixture
def vec(rng):
    return rng.random(13)


def test_pb_pmf_parity(rng):
    for n in (0, 1, 7, 200):
        p = rng.random(n)
        assert np.max(np.abs(K.pb_pmf_numba(p) - K.pb_pmf_numpy(p))) <= 1e-15


def test_binom_rows_parity():
    for theta in (0.0, 0.3, 1.0):
        assert np.max(np.abs(K.binom_rows_numba(30, theta) - K.binom_rows_numpy(30, theta))) <= 1e-15


def test_product_parity(vec):
    q = vec[::-1].copy()
    assert np.max(np.abs(K.product_masses_numba(vec) - K.product_masses_numpy(vec))) <= 1e-16
    assert abs(K.product_tv_numba(vec, q) - K.product_tv_numpy(vec, q)) <= 1e-13
    assert np.max(np.abs(K.pb_pmf_enum_numba(vec) - K.pb_pmf_enum_numpy(vec))) <= 1e-14


def test_mix_convolve_parity(rng):
    n = 25
    w = rng.random(n + 1)
    w /= w.sum()
    a, b = K.binom_rows_numpy(n, 0.3), K.binom_rows_numpy(n, 0.8)
    assert np.max(np.abs(K.mix_convolve_numba(w, a, b) - K.mix_convolve_numpy(w, a, b))) <= 1e-15


def test_binom_tv_family_parity():
    for a, b in ((0.2, 0.7), (0.0, 1.0), (0.5, 0.5)):
        assert np.max(np.abs(K.binom_tv_family_numba(40, a, b) - K.binom_tv_family_numpy(40, a, b))) <= 1e-14


def test_env_flag_selects_numpy():
    env = dict(os.environ, PBTV_DISABLE_NUMBA="1")
    code = "from pbtv import _kernels as K; print(K.BACKEND, K.pb_pmf is K.pb_pmf_numpy)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]


def test_default_backend_is_numba():
    env = {k: v for k, v in os.environ.items() if k != "PBTV_DISABLE_NUMBA"}
    code = "from pbtv import _kernels as K; print(K.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"

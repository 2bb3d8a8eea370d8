"""The numba kernels and the numpy fallback must agree on everything."""

import subprocess
import sys

import numpy as np
import pytest

from cceqr._backend import load_kernels

np_kernels = load_kernels("numpy")
try:
    nb_kernels = load_kernels("numba")
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable")


def _run_geqp3(kernels, A, k):
    m, n = A.shape
    R = A.copy(order="F")
    V = np.zeros((m, k), order="F")
    tau = np.zeros(k)
    piv = np.arange(n, dtype=np.int64)
    kernels.geqp3_inplace(R, V, tau, piv, k, 1e-8)
    return R, V, tau, piv


@needs_numba
@pytest.mark.parametrize("shape,k", [((6, 6), 6), ((8, 40), 8), ((17, 5), 5)])
def test_geqp3_backends_agree(shape, k):
    rng = np.random.default_rng(0)
    A = np.asfortranarray(rng.standard_normal(shape))
    R1, V1, tau1, piv1 = _run_geqp3(np_kernels, A, k)
    R2, V2, tau2, piv2 = _run_geqp3(nb_kernels, A, k)
    assert np.array_equal(piv1, piv2)
    assert np.allclose(R1, R2, atol=1e-12 * np.linalg.norm(A))
    assert np.allclose(V1, V2, atol=1e-12)
    assert np.allclose(tau1, tau2, atol=1e-13)


@needs_numba
def test_geqp3_backends_agree_with_recomputes(caplog):
    rng = np.random.default_rng(1)
    u = rng.standard_normal(5)
    w = rng.standard_normal(12)
    A = np.asfortranarray(np.outer(u, w) + 1e-9 * rng.standard_normal((5, 12)))
    R1, _, _, piv1 = _run_geqp3(np_kernels, A, 5)
    R2, _, _, piv2 = _run_geqp3(nb_kernels, A, 5)
    assert np.array_equal(piv1, piv2)
    assert np.allclose(R1, R2, atol=1e-12 * np.linalg.norm(A))


@needs_numba
def test_apply_reflector_backends_agree():
    rng = np.random.default_rng(2)
    M1 = np.asfortranarray(rng.standard_normal((7, 9)))
    M2 = M1.copy()
    v = rng.standard_normal(7)
    v[0] = 1.0
    tau = 2.0 / (v @ v)
    np_kernels.apply_reflector_inplace(M1, v, tau)
    nb_kernels.apply_reflector_inplace(M2, v, tau)
    assert np.allclose(M1, M2, atol=1e-13)


def _backend_in_subprocess(env_value):
    code = "import cceqr; print(cceqr.BACKEND)"
    import os
    env = dict(os.environ)
    if env_value is None:
        env.pop("CCEQR_BACKEND", None)
    else:
        env["CCEQR_BACKEND"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    return out


def test_env_flag_selects_numpy():
    out = _backend_in_subprocess("numpy")
    assert out.returncode == 0
    assert out.stdout.strip() == "numpy"


@needs_numba
def test_env_flag_selects_numba():
    out = _backend_in_subprocess("numba")
    assert out.returncode == 0
    assert out.stdout.strip() == "numba"


def test_env_flag_rejects_unknown():
    out = _backend_in_subprocess("fortran")
    assert out.returncode != 0
    assert "CCEQR_BACKEND" in out.stderr

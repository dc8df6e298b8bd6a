import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_hermitian, random_phases
from phasesync import _pykernels

try:
    from phasesync import _ckernels
except ImportError:
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
BACKENDS = [pytest.param(_pykernels, id="python"),
            pytest.param(_ckernels, id="cython", marks=needs_ext)]


@pytest.mark.parametrize("k", BACKENDS)
def test_phase_project(k):
    v = np.array([0, 3 + 4j, -2, 1e-300j])
    out = k.phase_project(v)
    assert np.allclose(out, [1, 0.6 + 0.8j, -1, 1j], atol=1e-15)


@pytest.mark.parametrize("k", BACKENDS)
def test_gpm_step(k, rng):
    C = random_hermitian(rng, 12)
    x = random_phases(rng, 12)
    out, w, zeros = k.gpm_step(C, x)
    assert np.allclose(w, C @ x, atol=1e-12)
    assert np.allclose(out, w / np.abs(w), atol=1e-14)
    assert zeros == 0
    out, _, zeros = k.gpm_step(np.zeros((3, 3), complex), np.ones(3, complex))
    assert zeros == 3 and np.all(out == 1)


@pytest.mark.parametrize("k", BACKENDS)
def test_power_iterate(k, rng):
    H = random_hermitian(rng, 20)
    top = np.linalg.eigvalsh(H)[-1]
    shift = np.abs(H).sum(axis=1).max()
    v0 = rng.standard_normal(20) + 0j
    lam, v, res, it, ok = k.power_iterate(H, v0, 1.0, shift, 1e-10, 100_000)
    assert ok and abs(lam - top) <= 1e-8 and res <= 1e-10
    assert np.linalg.norm(v) == pytest.approx(1.0)
    lam, v, res, it, ok = k.power_iterate(H, v0, 1.0, shift, 1e-10, 3)
    assert not ok and it == 3


@pytest.mark.parametrize("k", BACKENDS)
def test_power_iterate_deflated(k):
    H = np.diag([3.0, 2.0, 1.0]).astype(complex)
    q = np.array([1, 0, 0], complex)
    lam, v, *_ = k.power_iterate(H, np.ones(3, complex), 1.0, 3.0, 1e-12, 10_000, q)
    assert abs(lam - 2.0) <= 1e-10 and abs(v[0]) <= 1e-12


@pytest.mark.parametrize("k", BACKENDS)
def test_jacobi(k, rng):
    A = rng.standard_normal((10, 10))
    A = A + A.T
    w, V, sweeps = k.jacobi_eigh(A)
    assert np.allclose(np.sort(w), np.linalg.eigvalsh(A), atol=1e-10)
    assert np.allclose(V @ np.diag(w) @ V.T, A, atol=1e-10)
    assert sweeps >= 1
    w, V, sweeps = k.jacobi_eigh(np.zeros((4, 4)))
    assert sweeps == 0 and not np.any(w)
    with pytest.raises(RuntimeError):
        k.jacobi_eigh(A, max_sweeps=1)


@pytest.mark.parametrize("k", BACKENDS)
def test_dinf_grid(k, rng):
    x, y = random_phases(rng, 7), random_phases(rng, 7)
    th = 2 * np.pi * np.arange(64) / 64
    ref = np.abs(np.exp(1j * th)[:, None] * x - y).max(axis=1)
    assert np.allclose(k.dinf_grid(x, y, 64), ref, atol=1e-14)


@needs_ext
def test_backends_agree(rng):
    H = random_hermitian(rng, 30)
    v0 = rng.standard_normal(30) + 1j * rng.standard_normal(30)
    shift = np.abs(H).sum(axis=1).max()
    a = _pykernels.power_iterate(H, v0, 1.0, shift, 1e-10, 100_000)
    b = _ckernels.power_iterate(H, v0, 1.0, shift, 1e-10, 100_000)
    assert a[3] == b[3]
    assert abs(a[0] - b[0]) <= 1e-10
    A = rng.standard_normal((16, 16))
    A = A + A.T
    assert np.allclose(np.sort(_pykernels.jacobi_eigh(A)[0]), np.sort(_ckernels.jacobi_eigh(A)[0]),
                       atol=1e-11)


def test_pure_python_switch():
    env = dict(os.environ, PHASESYNC_PURE_PYTHON="1")
    code = (
        "import phasesync, numpy as np;"
        "from phasesync.model import sample_model;"
        "m = sample_model(30, 1.0, 'complex-gaussian', 4);"
        "x = phasesync.run_gpm(m.C).x;"
        "print(phasesync.BACKEND, phasesync.d2(x, m.z))"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert out[0] == "python"
    from phasesync import d2, run_gpm
    from phasesync.model import sample_model

    m = sample_model(30, 1.0, "complex-gaussian", 4)
    assert float(out[1]) == pytest.approx(d2(run_gpm(m.C).x, m.z), abs=1e-10)

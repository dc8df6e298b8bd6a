import math

import numpy as np
import pytest

from conftest import random_hermitian, random_phases
from phasesync.metrics import d2
from phasesync.model import leave_one_out, loo_delta, sample_model, sample_noise
from phasesync.spectral import davis_kahan_check, eigenvector_estimator, projected_estimator


def test_noiseless_estimator_is_exact():
    model = sample_model(20, 0.0, "complex-gaussian", 1)
    x = eigenvector_estimator(model.C, model.z)
    assert np.allclose(x, model.z, atol=1e-8)
    assert d2(projected_estimator(x), model.z) <= 1e-8


def test_estimator_phase_conventions():
    model = sample_model(30, 1.0, "complex-gaussian", 2)
    x = eigenvector_estimator(model.C, model.z)
    ip = np.vdot(model.z, x)
    assert abs(ip.imag) <= 1e-9 * abs(ip) and ip.real > 0
    assert np.linalg.norm(x) == pytest.approx(math.sqrt(30), rel=1e-12)
    y = eigenvector_estimator(model.C)
    k = int(np.argmax(np.abs(y)))
    assert abs(y[k].imag) <= 1e-12 and y[k].real > 0
    assert d2(x, y) <= 1e-7


def test_projection_keeps_unit_modulus_input(rng):
    x = random_phases(rng, 10)
    assert np.allclose(projected_estimator(x), x, atol=1e-15)


def test_estimator_error_scales_with_sigma():
    n, sigma = 200, 0.5
    ratios = []
    for seed in range(50):
        model = sample_model(n, sigma, "complex-gaussian", seed)
        x = eigenvector_estimator(model.C, model.z)
        ratios.append(d2(x, model.z) / sigma)
        px = projected_estimator(x)
        assert d2(px, model.z) <= 2 * d2(x, model.z) + 1e-9
    assert np.median(ratios) <= 3


def test_davis_kahan_zero_perturbation():
    z = np.exp(1j * np.arange(6))
    A = np.outer(z, z.conj())
    res = davis_kahan_check(A, np.zeros((6, 6)))
    assert res.applicable and res.lhs <= 1e-7 and res.rhs == 0.0


@pytest.mark.parametrize("method", ["dense", "power"])
def test_davis_kahan_rank_one(method):
    n = 24
    model = sample_model(n, 0.0, "complex-gaussian", 5)
    A = model.C
    E = 1.5 * sample_noise(n, "complex-gaussian", 6).W
    res = davis_kahan_check(A, E, method=method)
    assert res.gap == pytest.approx(n, abs=1e-6)
    assert res.applicable and res.holds


def test_davis_kahan_methods_agree(rng):
    A = random_hermitian(rng, 20) + np.diag(np.r_[30.0, np.zeros(19)])
    E = random_hermitian(rng, 20, 0.2)
    a = davis_kahan_check(A, E, method="dense")
    b = davis_kahan_check(A, E, method="power")
    assert a.gap == pytest.approx(b.gap, abs=1e-6)
    assert a.e_norm == pytest.approx(b.e_norm, abs=1e-6)
    assert a.lhs == pytest.approx(b.lhs, abs=1e-6)


def test_davis_kahan_not_applicable(rng):
    A = np.diag([1.0, 0.9, 0.0])
    E = random_hermitian(rng, 3)
    res = davis_kahan_check(A, E * 5)
    assert not res.applicable and res.rhs == math.inf and res.holds


def test_davis_kahan_footnote_identity(rng):
    A = random_hermitian(rng, 12) + np.diag(np.r_[20.0, np.zeros(11)])
    E = random_hermitian(rng, 12, 0.3)
    from phasesync.linalg import leading_eigpair

    u = leading_eigpair(A).vector
    ut = leading_eigpair(A + E).vector
    res = davis_kahan_check(A, E)
    assert res.lhs ** 2 / 12 == pytest.approx(2 - 2 * abs(np.vdot(ut, u)) / 12, abs=1e-9)


def test_sparse_perturbation_smaller_bound():
    n, sigma = 100, 1.0
    sparse, full = [], []
    for seed in range(10):
        model = sample_model(n, sigma, "complex-gaussian", seed)
        for m in (0, 50):
            A = leave_one_out(model, m).C
            res = davis_kahan_check(A, sigma * loo_delta(model, m))
            assert res.applicable and res.holds
            sparse.append(res.rhs)
        zz = np.outer(model.z, model.z.conj())
        res = davis_kahan_check(zz, sigma * model.W)
        assert res.holds
        full.append(res.rhs)
    assert np.median(sparse) <= 0.2 * np.median(full)

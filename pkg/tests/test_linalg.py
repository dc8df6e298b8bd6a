import numpy as np
import pytest

from conftest import random_hermitian
from phasesync.errors import ConvergenceError, ValidationError
from phasesync.linalg import (
    as_hermitian,
    dense_eig_oracle,
    hermitian_from_upper,
    leading_eigpair,
    matvec,
    second_smallest_eigenvalue,
    smallest_eigpair,
    spectral_norm,
)
from phasesync.metrics import d2
from phasesync.model import sample_noise


def test_matvec_examples():
    assert np.allclose(matvec(np.eye(2), [1, 1j]), [1, 1j])
    z = np.array([1, 1], dtype=complex)
    assert np.allclose(matvec(np.outer(z, z.conj()), z), [2, 2])
    H = np.array([[0, 1 - 1j], [1 + 1j, 0]])
    assert np.allclose(matvec(H, [1, 0]), [0, 1 + 1j])


def test_matvec_rejects_bad_shapes():
    with pytest.raises(ValidationError):
        matvec(np.eye(3), np.ones(2))
    with pytest.raises(ValidationError):
        matvec(np.ones((2, 3)), np.ones(3))


def test_as_hermitian_validation():
    with pytest.raises(ValidationError):
        as_hermitian(np.array([[0, 1], [2, 0]], dtype=complex))
    with pytest.raises(ValidationError):
        as_hermitian(np.array([[np.nan, 0], [0, 1]]))
    H = as_hermitian(np.array([[1, 2j], [-2j, 3]]))
    assert np.array_equal(H, H.conj().T)


def test_hermitian_from_upper_is_exact(rng):
    U = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    H = hermitian_from_upper(U)
    assert np.array_equal(H, H.conj().T)
    assert np.all(np.diag(H).imag == 0)
    assert np.array_equal(np.triu(H, 1), np.triu(U, 1))


def test_leading_eigpair_rank_one():
    z = np.array([1, 1j, -1])
    pair = leading_eigpair(np.outer(z, z.conj()))
    assert abs(pair.value - 3) <= 1e-10
    assert d2(pair.vector, z) <= 1e-8
    assert np.isclose(np.linalg.norm(pair.vector), np.sqrt(3), rtol=1e-12)


def test_leading_eigpair_diagonal():
    pair = leading_eigpair(np.diag([5.0, 2.0, 1.0]))
    assert abs(pair.value - 5) <= 1e-10
    assert np.abs(pair.vector[1:]).max() <= 1e-6


def test_leading_eigpair_matches_oracle_seed_42():
    H = random_hermitian(np.random.default_rng(42), 8)
    lam, u = dense_eig_oracle(H)[-1]
    pair = leading_eigpair(H)
    assert abs(pair.value - lam) <= 1e-8
    assert d2(pair.vector, u * np.sqrt(8)) <= 1e-6
    assert pair.residual <= 1e-10


def test_eigpair_invariants(rng):
    for _ in range(10):
        H = random_hermitian(rng, 20)
        pair = leading_eigpair(H, tol=1e-9)
        assert pair.residual <= 1e-9
        assert np.isclose(np.linalg.norm(pair.vector), np.sqrt(20), rtol=1e-12)


def test_second_smallest_examples():
    z = np.ones(4, dtype=complex)
    H = 4 * np.eye(4) - np.outer(z, z.conj())
    assert abs(second_smallest_eigenvalue(H, z) - 4) <= 1e-8
    e1 = np.array([1, 0, 0], dtype=complex)
    assert abs(second_smallest_eigenvalue(np.diag([0.0, 3.0, 7.0]), e1) - 3) <= 1e-8


def test_second_smallest_rejects_non_kernel_hint():
    with pytest.raises(ValidationError):
        second_smallest_eigenvalue(np.diag([1.0, 3.0]), np.array([1, 0]))


def test_second_smallest_on_certificate_matches_oracle():
    from phasesync.certificate import build_certificate
    from phasesync.gpm import GPMConfig, run_gpm
    from phasesync.model import sample_model

    model = sample_model(16, 0.1, "complex-gaussian", 3)
    x = run_gpm(model.C, cfg=GPMConfig(tol=1e-13)).x
    S = build_certificate(model.C, x)
    ref = dense_eig_oracle(S)[1][0]
    got = second_smallest_eigenvalue(S, x)
    assert abs(got - ref) <= 1e-6 * abs(ref)


def test_smallest_eigpair_stop_below():
    H = np.diag([-5.0, 1.0, 2.0, 3.0])
    full = smallest_eigpair(H)
    assert full.converged and abs(full.value + 5) <= 1e-9
    early = smallest_eigpair(H, stop_below=-0.1)
    assert early.value < -0.1


def test_spectral_norm_examples():
    z = np.ones(5, dtype=complex)
    assert abs(spectral_norm(np.outer(z, z)) - 5) <= 1e-9
    assert abs(spectral_norm(np.array([[0.0, 1.0], [1.0, 0.0]])) - 1) <= 1e-9
    assert spectral_norm(np.zeros((3, 3))) == 0.0


def test_spectral_norm_wigner_seed_7():
    W = sample_noise(64, "complex-gaussian", 7).W
    vals = [v for v, _ in dense_eig_oracle(W)]
    ref = max(abs(vals[0]), abs(vals[-1]))
    assert abs(spectral_norm(W) - ref) <= 1e-8


def test_spectral_norm_lower_bound_witness(rng):
    H = random_hermitian(rng, 30)
    s = spectral_norm(H)
    for _ in range(50):
        v = rng.standard_normal(30) + 1j * rng.standard_normal(30)
        assert s >= np.linalg.norm(H @ v) / np.linalg.norm(v) - 1e-9


def test_rayleigh_maximality(rng):
    H = random_hermitian(rng, 25)
    lam = leading_eigpair(H).value
    for _ in range(100):
        v = rng.standard_normal(25) + 1j * rng.standard_normal(25)
        v *= np.sqrt(25) / np.linalg.norm(v)
        assert lam >= np.vdot(v, H @ v).real / 25 - 1e-10


def test_hermitian_inner_product_identity(rng):
    H = random_hermitian(rng, 40)
    for _ in range(20):
        u = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        v = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        a = np.vdot(u, matvec(H, v))
        b = np.conj(np.vdot(v, matvec(H, u)))
        assert abs(a - b) <= 1e-12 * max(abs(a), 1.0) * 40


def test_oracle_examples():
    pairs = dense_eig_oracle(np.diag([1.0, 2.0]))
    assert [round(v, 12) for v, _ in pairs] == [1.0, 2.0]
    assert abs(abs(pairs[0][1][0]) - 1) <= 1e-12
    z = np.array([1, 1j, -1])
    vals = [v for v, _ in dense_eig_oracle(np.outer(z, z.conj()))]
    assert np.allclose(vals, [0, 0, 3], atol=1e-10)


def test_oracle_reconstruction(rng):
    H = random_hermitian(rng, 16)
    pairs = dense_eig_oracle(H)
    R = sum(lam * np.outer(v, v.conj()) for lam, v in pairs)
    assert np.linalg.norm(R - H) <= 1e-10 * np.linalg.norm(H)
    V = np.column_stack([v for _, v in pairs])
    assert np.allclose(V.conj().T @ V, np.eye(16), atol=1e-10)


def test_oracle_agrees_with_lapack(rng):
    for n in (1, 2, 7, 30):
        H = random_hermitian(rng, n)
        vals = [v for v, _ in dense_eig_oracle(H)]
        assert np.allclose(vals, np.linalg.eigvalsh(H), atol=1e-10)


def test_oracle_degenerate_spectrum():
    z = np.ones(6, dtype=complex)
    pairs = dense_eig_oracle(6 * np.eye(6) - np.outer(z, z))
    vals = np.array([v for v, _ in pairs])
    assert np.allclose(vals, [0, 6, 6, 6, 6, 6], atol=1e-10)


def test_oracle_non_convergence_raises(rng):
    with pytest.raises(ConvergenceError):
        dense_eig_oracle(random_hermitian(rng, 12), max_sweeps=1)


def test_power_iteration_non_convergence_raises(rng):
    with pytest.raises(ConvergenceError):
        leading_eigpair(random_hermitian(rng, 30), max_iter=3)

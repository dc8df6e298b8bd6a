import math

import numpy as np
import pytest

from conftest import random_phases
from oracles import brute_force_n3, objective
from phasesync.certificate import build_certificate, verify_optimality
from phasesync.errors import ValidationError
from phasesync.gpm import GPMConfig, phase_project, run_gpm
from phasesync.linalg import dense_eig_oracle
from phasesync.model import sample_model


def test_noiseless_closed_form():
    n = 5
    model = sample_model(n, 0.0, "complex-gaussian", 4)
    z = model.z
    S = build_certificate(model.C, z)
    assert np.allclose(S, n * np.eye(n) - np.outer(z, z.conj()), atol=1e-12)
    vals = [v for v, _ in dense_eig_oracle(S)]
    assert np.allclose(vals, [0] + [n] * (n - 1), atol=1e-10)


def test_two_by_two_example():
    z = np.ones(2, dtype=complex)
    S = build_certificate(np.outer(z, z), z)
    assert np.allclose(S, [[1, -1], [-1, 1]])


def test_noiseless_report():
    model = sample_model(16, 0.0, "rademacher", 1)
    rep = verify_optimality(model.C, model.z)
    assert rep.kernel_residual <= 1e-10
    assert abs(rep.lambda2 - 16) <= 1e-8
    assert rep.psd and rep.rank_deficiency_ok
    assert np.allclose(rep.mu, 16)


def test_far_candidate_rejected(rng):
    model = sample_model(20, 0.0, "complex-gaussian", 2)
    v = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    x = phase_project(model.z + 2 * v)
    rep = verify_optimality(model.C, x)
    assert not rep.psd and not rep.rank_deficiency_ok
    assert dense_eig_oracle(build_certificate(model.C, x))[0][0] < 0


def test_structure_and_trace_identity(rng):
    model = sample_model(30, 2.0, "complex-gaussian", 7)
    for _ in range(10):
        x = random_phases(rng, 30)
        S = build_certificate(model.C, x)
        assert np.array_equal(S, S.conj().T)
        assert np.all(np.diag(S).imag == 0)
        assert abs(np.vdot(x, S @ x)) <= 1e-10 * np.abs(model.C).sum()


def test_scaling_covariance(rng):
    model = sample_model(12, 1.0, "complex-gaussian", 3)
    x = run_gpm(model.C).x
    S = build_certificate(model.C, x)
    S2 = build_certificate(4.0 * model.C, x)
    assert np.array_equal(S2, 4.0 * S)
    a = verify_optimality(model.C, x)
    b = verify_optimality(4.0 * model.C, x, kernel_tol=4 * a.kernel_tol)
    assert (a.psd, a.rank_deficiency_ok) == (b.psd, b.rank_deficiency_ok)


def test_report_invariants():
    for seed in range(6):
        model = sample_model(40, 0.8 * math.sqrt(40 / math.log(40)), "complex-gaussian", seed)
        x = run_gpm(model.C, cfg=GPMConfig(max_iter=3000)).x
        rep = verify_optimality(model.C, x)
        assert rep.psd == (rep.lambda2 >= -rep.psd_tol)
        assert (not rep.rank_deficiency_ok) or rep.psd
        d = rep.to_dict()
        assert set(d) >= {"kernel_residual", "lambda2", "psd", "rank_deficiency_ok", "mu"}


def test_lambda2_matches_oracle():
    model = sample_model(24, 0.5, "complex-gaussian", 9)
    x = run_gpm(model.C, cfg=GPMConfig(tol=1e-13)).x
    rep = verify_optimality(model.C, x)
    ref = dense_eig_oracle(build_certificate(model.C, x))[1][0]
    assert rep.lambda2 == pytest.approx(ref, rel=1e-6)


def test_rejects_infeasible_candidate():
    model = sample_model(4, 0.0, "complex-gaussian", 1)
    with pytest.raises(ValidationError):
        build_certificate(model.C, np.full(4, 0.5))
    with pytest.raises(ValidationError):
        verify_optimality(model.C, np.ones(3))


@pytest.mark.parametrize("seed", range(20))
def test_n3_accepts_exactly_the_optimum(seed):
    model = sample_model(3, 0.3, "complex-gaussian", 1000 + seed)
    best, _ = brute_force_n3(model.C)
    x = run_gpm(model.C, cfg=GPMConfig(tol=1e-12)).x
    optimal = abs(objective(model.C, x) - best) <= 1e-6 * abs(best)
    assert verify_optimality(model.C, x).rank_deficiency_ok == optimal

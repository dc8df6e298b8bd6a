"""Pure numpy implementations of the hot kernels.

Same signatures and semantics as the compiled ``_ckernels`` module; used
when the extension is not built or ``PHASESYNC_PURE_PYTHON`` is set.
"""
import math

import numpy as np


def phase_project(v):
    v = np.asarray(v, dtype=np.complex128)
    mag = np.abs(v)
    out = np.ones_like(v)
    nz = mag > 0
    out[nz] = v[nz] / mag[nz]
    return out


def gpm_step(C, x):
    """Return ``(P(Cx), Cx, number of exactly-zero entries of Cx)``."""
    w = C @ x
    mag = np.abs(w)
    zero = mag == 0
    out = np.ones_like(w)
    out[~zero] = w[~zero] / mag[~zero]
    return out, w, int(zero.sum())


def power_iterate(H, v0, alpha, shift, tol, max_iter, deflate=None, stop_below=-math.inf):
    """Power iteration on ``alpha * H + shift * I``.

    Reports the Rayleigh quotient of ``H`` itself and the relative residual
    ``||Hv - lam v|| / max(|lam|, 1)``. ``deflate`` is an optional unit
    vector ``q``; the iteration then runs on ``(I - qq*) H (I - qq*)``, so
    an inexact ``q`` does not put a floor under the residual. The loop also stops (not
    converged) as soon as the Rayleigh quotient drops below ``stop_below``.

    Returns ``(lam, v, residual, iterations, converged)`` with ``v`` unit norm.
    """
    v = np.array(v0, dtype=np.complex128)
    if deflate is not None:
        v -= deflate * np.vdot(deflate, v)
    v /= np.linalg.norm(v)
    lam = 0.0
    res = math.inf
    for it in range(1, max_iter + 1):
        w = H @ v
        if deflate is not None:
            w -= deflate * np.vdot(deflate, w)
        lam = np.vdot(v, w).real
        res = np.linalg.norm(w - lam * v) / max(abs(lam), 1.0)
        if res <= tol:
            return lam, v, res, it, True
        if lam < stop_below:
            return lam, v, res, it, False
        v = alpha * w + shift * v
        if deflate is not None:
            v -= deflate * np.vdot(deflate, v)
        nrm = np.linalg.norm(v)
        if nrm == 0.0 or not math.isfinite(nrm):
            return lam, v, res, it, False
        v /= nrm
    return lam, v, res, max_iter, False


def _round_robin(m):
    """Pairings for one cyclic sweep in tournament order (m even)."""
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        rounds.append(
            (np.array(players[: m // 2]), np.array(players[m // 2 :][::-1]))
        )
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(A, tol=1e-12, max_sweeps=100):
    """Cyclic Jacobi on a real symmetric matrix of even order.

    Disjoint rotations of a tournament round are applied together, so each
    sweep costs O(m) vectorized passes instead of O(m^2) scalar ones.
    Returns ``(eigenvalues, eigenvectors, sweeps)``; raises RuntimeError
    when ``off(A) > tol * ||A||_F`` after ``max_sweeps``.
    """
    A = np.array(A, dtype=np.float64)
    m = A.shape[0]
    if m % 2:
        raise ValueError("jacobi_eigh expects an even order")
    V = np.eye(m)
    fro = np.linalg.norm(A)
    if fro == 0.0:
        return np.zeros(m), V, 0
    rounds = _round_robin(m)
    for sweep in range(max_sweeps + 1):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * fro:
            return np.diag(A).copy(), V, sweep
        if sweep == max_sweeps:
            break
        for p, q in rounds:
            apq = A[p, q]
            app = A[p, p]
            aqq = A[q, q]
            active = apq != 0.0
            tau = np.zeros_like(apq)
            tau[active] = (aqq[active] - app[active]) / (2.0 * apq[active])
            t = np.where(
                active,
                np.sign(tau + (tau == 0)) / (np.abs(tau) + np.sqrt(1.0 + tau * tau)),
                0.0,
            )
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            Ap = A[p, :].copy()
            Aq = A[q, :].copy()
            A[p, :] = c[:, None] * Ap - s[:, None] * Aq
            A[q, :] = s[:, None] * Ap + c[:, None] * Aq
            Ap = A[:, p].copy()
            Aq = A[:, q].copy()
            A[:, p] = Ap * c - Aq * s
            A[:, q] = Ap * s + Aq * c
            Vp = V[:, p].copy()
            Vq = V[:, q].copy()
            V[:, p] = Vp * c - Vq * s
            V[:, q] = Vp * s + Vq * c
    raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")


def dinf_grid(x, y, ngrid):
    """``max_k |x_k e^{i theta_j} - y_k|`` on ``theta_j = 2 pi j / ngrid``."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    theta = 2.0 * np.pi * np.arange(ngrid) / ngrid
    rot = np.exp(1j * theta)
    out = np.empty(ngrid)
    chunk = max(1, (1 << 20) // max(len(x), 1))
    for start in range(0, ngrid, chunk):
        r = rot[start : start + chunk]
        out[start : start + chunk] = np.abs(r[:, None] * x[None, :] - y[None, :]).max(axis=1)
    return out

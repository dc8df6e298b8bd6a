"""Dense complex Hermitian linear algebra.

Matrices are plain ``complex128`` numpy arrays. Public entry points run them
through :func:`as_hermitian`, which rejects non-Hermitian or non-finite
input and returns an exactly Hermitian copy built from the upper triangle.

Eigenpairs come from shifted power iteration (Gershgorin shift); the
cyclic-Jacobi :func:`dense_eig_oracle` exists to check them.
"""
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import ConvergenceError, ValidationError
from .rng import complex_normal

DEFAULT_TOL = 1e-10


def hermitian_from_upper(U):
    """Hermitian matrix whose upper triangle (incl. real part of diagonal) is ``U``'s."""
    U = np.asarray(U, dtype=np.complex128)
    upper = np.triu(U, 1)
    H = upper + upper.conj().T
    H[np.diag_indices_from(H)] = U.diagonal().real
    return H


def as_hermitian(H, name="H", rtol=1e-12):
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise ValidationError(f"{name} has NaN or Inf entries")
    H = H.astype(np.complex128, copy=False)
    scale = max(float(np.abs(H).max(initial=0.0)), 1.0)
    if np.abs(H - H.conj().T).max(initial=0.0) > rtol * scale:
        raise ValidationError(f"{name} is not Hermitian")
    return hermitian_from_upper(H)


def as_vector(v, n=None, name="v"):
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValidationError(f"{name} must be 1-D, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise ValidationError(f"{name} has length {v.shape[0]}, expected {n}")
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} has NaN or Inf entries")
    return np.ascontiguousarray(v, dtype=np.complex128)


def matvec(H, v):
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {H.shape}")
    v = as_vector(v, H.shape[0])
    return H @ v


def gershgorin_bound(H):
    """max_k sum_l |H_kl|, an upper bound on every |eigenvalue| of H."""
    return float(np.abs(H).sum(axis=1).max(initial=0.0))


@dataclass(frozen=True)
class EigPair:
    value: float
    vector: np.ndarray
    residual: float
    iterations: int = 0
    converged: bool = True


def default_max_iter(n):
    # 10n + 1000 is too short for the lambda_2 of certificate matrices, whose
    # gap to lambda_3 is an edge spacing of the noise spectrum.
    return max(10 * n + 1000, 250 * n)


def extended_max_iter(n):
    """Budget for eigenvalues next to a noise-edge neighbour (gaps ~0.05 against shifts ~2n)."""
    return max(default_max_iter(n), 1000 * n)


def _run_power(H, v0, alpha, shift, tol, max_iter, deflate, what, stop_below=-np.inf):
    if tol <= 0:
        raise ValidationError("tol must be positive")
    if max_iter < 1:
        raise ValidationError("max_iter must be >= 1")
    lam, v, res, iters, ok = kernels.power_iterate(
        H, v0, alpha, shift, tol, max_iter, deflate, stop_below
    )
    if not np.isfinite(res) and iters <= 1:
        raise ValidationError(f"{what}: non-finite values encountered")
    if not ok and lam < stop_below:
        return float(lam), v, float(res), int(iters), False
    if not ok:
        raise ConvergenceError(
            f"{what}: no convergence in {iters} iterations (residual {res:.3e})",
            residual=float(res),
            iterations=int(iters),
        )
    return float(lam), v, float(res), int(iters), True


def _unit(q, n):
    if q is None:
        return None
    q = as_vector(q, n, "deflate")
    return q / np.linalg.norm(q)


def leading_eigpair(H, tol=DEFAULT_TOL, max_iter=None, rng_seed=0, deflate=None):
    """Algebraically largest eigenpair of ``H``.

    Power iteration on ``H + cI`` with ``c`` the Gershgorin bound, so the
    shifted matrix is positive semidefinite and its dominant eigenvalue is
    the top of H's spectrum. The vector is returned with norm ``sqrt(n)``.
    If the top eigenvalue is degenerate, any vector of its eigenspace may
    come back. ``deflate`` restricts the search to the orthogonal
    complement of that vector (used for the second-largest eigenvalue).
    """
    H = as_hermitian(H)
    n = H.shape[0]
    max_iter = default_max_iter(n) if max_iter is None else int(max_iter)
    v0 = complex_normal(rng_seed, n)
    lam, v, res, iters, _ = _run_power(
        H, v0, 1.0, gershgorin_bound(H), tol, max_iter, _unit(deflate, n), "leading_eigpair"
    )
    return EigPair(lam, v * np.sqrt(n), res, iters)


def smallest_eigpair(
    H, tol=DEFAULT_TOL, max_iter=None, rng_seed=0, deflate=None, stop_below=-np.inf
):
    """Algebraically smallest eigenpair, optionally on the complement of ``deflate``.

    If the Rayleigh quotient falls below ``stop_below`` the iteration ends
    early and the pair comes back with ``converged=False``; its value is
    then only an upper bound on the smallest eigenvalue.
    """
    H = as_hermitian(H)
    n = H.shape[0]
    max_iter = default_max_iter(n) if max_iter is None else int(max_iter)
    v0 = complex_normal(rng_seed, n)
    lam, v, res, iters, ok = _run_power(
        H, v0, -1.0, gershgorin_bound(H), tol, max_iter, _unit(deflate, n),
        "smallest_eigpair", stop_below,
    )
    return EigPair(lam, v * np.sqrt(n), res, iters, ok)


def second_smallest_eigenvalue(H, kernel_hint, tol=DEFAULT_TOL, max_iter=None, rng_seed=0):
    """Smallest eigenvalue of ``H`` on the orthogonal complement of a kernel vector.

    ``kernel_hint`` must satisfy ``||H h|| / ||h|| <= 1e-6``. Runs power
    iteration on ``gamma I - H`` (gamma the Gershgorin bound) and
    re-orthogonalizes against the hint every step.
    """
    H = as_hermitian(H)
    h = as_vector(kernel_hint, H.shape[0], "kernel_hint")
    hn = np.linalg.norm(h)
    if hn == 0 or np.linalg.norm(H @ h) / hn > 1e-6:
        raise ValidationError("kernel_hint is not a numerical kernel vector of H")
    return smallest_eigpair(H, tol, max_iter, rng_seed, deflate=h).value


def spectral_norm(H, tol=DEFAULT_TOL, max_iter=None, rng_seed=0):
    H = as_hermitian(H)
    if not np.any(H):
        return 0.0
    top = leading_eigpair(H, tol, max_iter, rng_seed).value
    bottom = leading_eigpair(-H, tol, max_iter, rng_seed).value
    return max(abs(top), abs(bottom))


def _real_embedding(H):
    return np.block([[H.real, -H.imag], [H.imag, H.real]])


def _complex_basis(Q, n, k):
    """k orthonormal complex vectors spanning the columns of a paired real basis."""
    cands = [Q[:n, j] + 1j * Q[n:, j] for j in range(Q.shape[1])]
    basis = []
    for _ in range(k):
        norms = [np.linalg.norm(c) for c in cands]
        j = int(np.argmax(norms))
        b = cands.pop(j) / norms[j]
        basis.append(b)
        cands = [c - b * np.vdot(b, c) for c in cands]
    return basis


def dense_eig_oracle(H, tol=1e-12, max_sweeps=100):
    """Full eigendecomposition through the real embedding ``[[Re, -Im], [Im, Re]]``.

    Each eigenvalue of H appears twice in the embedding; pairs are merged
    and complex eigenvectors rebuilt from the paired real ones. Returns
    ``[(value, unit vector), ...]`` in ascending order.
    """
    H = as_hermitian(H)
    n = H.shape[0]
    if n > 512:
        raise ValidationError("dense_eig_oracle is meant for n <= 512")
    try:
        w, V, _ = kernels.jacobi_eigh(_real_embedding(H), tol, max_sweeps)
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]
    gap_tol = 1e-10 * max(np.linalg.norm(H), 1.0)
    out = []
    start = 0
    while start < 2 * n:
        stop = start + 1
        while stop < 2 * n and w[stop] - w[stop - 1] <= gap_tol:
            stop += 1
        size = stop - start
        if size % 2:
            raise ConvergenceError("eigenvalue pairing failed in the real embedding")
        for vec in _complex_basis(V[:, start:stop], n, size // 2):
            out.append((float(np.vdot(vec, H @ vec).real), vec))
        start = stop
    out.sort(key=lambda pair: pair[0])
    return out

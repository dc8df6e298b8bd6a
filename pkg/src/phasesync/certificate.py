"""Dual certificate ``S = Re{ddiag(C x x*)} - C`` for the unit-modulus QP."""
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ValidationError
from .linalg import (
    as_hermitian,
    extended_max_iter,
    as_vector,
    smallest_eigpair,
    spectral_norm,
)

HINT_LIMIT = 1e-6
# lambda2 only has to be resolved well below psd_tol; a tighter residual is
# unreachable once ||Sx|| sits near 1e-9, as it does for a converged GPM run.
CERT_EIG_TOL = 1e-8


def _feasible(C, x):
    C = as_hermitian(C, "C")
    x = as_vector(x, C.shape[0], "x")
    if np.abs(np.abs(x) - 1.0).max() > 1e-8:
        raise ValidationError("candidate must have unit-modulus entries")
    return C, x


def build_certificate(C, x):
    C, x = _feasible(C, x)
    S = -C
    S[np.diag_indices_from(S)] += (C @ x * x.conj()).real
    return S


@dataclass
class CertificateReport:
    kernel_residual: float
    lambda2: float
    psd: bool
    rank_deficiency_ok: bool
    mu: np.ndarray
    psd_tol: float
    kernel_tol: float

    def to_dict(self):
        d = asdict(self)
        d["mu"] = [float(v) for v in self.mu]
        return d


def verify_optimality(C, x, psd_tol=None, kernel_tol=None, eig_tol=CERT_EIG_TOL, max_iter=None):
    """Decide whether ``x x*`` is the unique optimum of the SDP relaxation.

    ``lambda2`` is the smallest eigenvalue of ``S`` on the complement of
    ``x`` (the second smallest of ``S``, as ``S x = 0``). If ``x`` is not a
    numerical kernel vector of ``S`` then ``S`` cannot be PSD (``x* S x = 0``
    always), and ``lambda2`` falls back to the smallest eigenvalue of ``S``
    overall, which is then negative. Once the iteration proves a negative
    eigenvalue it stops, and ``lambda2`` is that (negative) upper bound.

    Defaults: ``psd_tol = 1e-8 ||C||_2``, ``kernel_tol = 1e-7 sqrt(n)``.
    """
    C, x = _feasible(C, x)
    n = C.shape[0]
    S = build_certificate(C, x)
    if psd_tol is None:
        psd_tol = 1e-8 * spectral_norm(C, 1e-6)
    if kernel_tol is None:
        kernel_tol = 1e-7 * math.sqrt(n)
    if max_iter is None:
        max_iter = extended_max_iter(n)
    Sx = S @ x
    kernel_residual = float(np.linalg.norm(Sx) / math.sqrt(n))
    deflate = x if np.linalg.norm(Sx) / np.linalg.norm(x) <= HINT_LIMIT else None
    # Stop as soon as the Rayleigh quotient proves S indefinite.
    lam2 = smallest_eigpair(S, eig_tol, max_iter, deflate=deflate, stop_below=-psd_tol).value
    psd = lam2 >= -psd_tol
    rank_ok = bool(lam2 > psd_tol and kernel_residual <= kernel_tol)
    return CertificateReport(
        kernel_residual=kernel_residual,
        lambda2=float(lam2),
        psd=bool(psd),
        rank_deficiency_ok=rank_ok,
        mu=np.abs(C @ x),
        psd_tol=float(psd_tol),
        kernel_tol=float(kernel_tol),
    )

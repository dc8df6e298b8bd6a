"""Spectral estimator and a numerical Davis-Kahan check."""
import math
from dataclasses import dataclass

import numpy as np

from .gpm import phase_project
from .linalg import (
    as_hermitian,
    as_vector,
    dense_eig_oracle,
    extended_max_iter,
    leading_eigpair,
    spectral_norm,
)
from .metrics import d2

DK_SLACK = 1e-8
# Tolerance for eigenvalues that are only used as numbers (gap, ||E||).
VALUE_TOL = 1e-8


def eigenvector_estimator(C, z=None, tol=1e-10, max_iter=None):
    """Leading eigenvector of ``C`` with norm ``sqrt(n)``.

    Phase convention: ``z* x >= 0`` when the truth is given, otherwise the
    largest-modulus entry (first one on ties) is made real positive.
    """
    C = as_hermitian(C, "C")
    x = leading_eigpair(C, tol, max_iter).vector
    if z is not None:
        z = as_vector(z, C.shape[0], "z")
        ip = np.vdot(z, x)
        if ip != 0:
            x = x * (abs(ip) / ip)
    else:
        k = int(np.argmax(np.abs(x)))
        x = x * (abs(x[k]) / x[k])
    return x


def projected_estimator(x_tilde):
    return phase_project(x_tilde)


@dataclass(frozen=True)
class DavisKahanResult:
    lhs: float
    rhs: float
    applicable: bool
    gap: float
    e_norm: float

    @property
    def holds(self):
        return (not self.applicable) or self.lhs <= self.rhs + DK_SLACK


def _top_two(A, method, tol):
    n = A.shape[0]
    if method == "dense":
        pairs = dense_eig_oracle(A)
        lam1, u = pairs[-1]
        return lam1, pairs[-2][0], u * math.sqrt(n)
    top = leading_eigpair(A, tol)
    second = leading_eigpair(
        A, max(tol, VALUE_TOL), extended_max_iter(n), deflate=top.vector
    ).value
    return top.value, second, top.vector


def davis_kahan_check(A, E, method="auto", tol=1e-10):
    """Evaluate both sides of ``d2(u~, u) <= sqrt(2)||E u|| / (delta - ||E||)``.

    ``u`` and ``u~`` are leading eigenvectors of ``A`` and ``A + E`` with
    norm ``sqrt(n)``; ``delta`` is the top eigengap of ``A``. The
    eigenvalues come from the Jacobi oracle (``method="dense"``) or from
    deflated power iteration (``"power"``); ``"auto"`` uses the oracle up to
    n = 32.
    """
    A = as_hermitian(A, "A")
    E = as_hermitian(E, "E")
    n = A.shape[0]
    if method == "auto":
        method = "dense" if n <= 32 else "power"
    lam1, lam2, u = _top_two(A, method, tol)
    gap = lam1 - lam2
    if method == "dense":
        ev = [v for v, _ in dense_eig_oracle(E)]
        e_norm = max(abs(ev[0]), abs(ev[-1]))
        u_t = dense_eig_oracle(A + E)[-1][1] * math.sqrt(n)
    else:
        e_norm = spectral_norm(E, max(tol, VALUE_TOL), extended_max_iter(n))
        u_t = leading_eigpair(A + E, tol).vector
    lhs = d2(u_t, u)
    applicable = gap > e_norm
    rhs = math.sqrt(2.0) * float(np.linalg.norm(E @ u)) / (gap - e_norm) if applicable else math.inf
    return DavisKahanResult(lhs, rhs, applicable, gap, e_norm)

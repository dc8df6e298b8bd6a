"""Distances between phase vectors modulo a global rotation."""
import math

import numpy as np

from ._backend import kernels
from .errors import ValidationError

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _pair(x, y):
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError(f"shape mismatch: {x.shape} vs {y.shape}")
    return x, y


def align_phase(x, y):
    """Rotation ``theta`` minimizing ``||x e^{i theta} - y||_2``.

    ``theta = Arg(x* y)``. Returns ``(theta, degenerate)``; when ``x* y`` is
    (numerically) zero every rotation is optimal, and ``theta = 0`` with
    ``degenerate = True``.
    """
    x, y = _pair(x, y)
    ip = np.vdot(x, y)
    scale = np.linalg.norm(x) * np.linalg.norm(y)
    if abs(ip) <= 1e-14 * scale:
        return 0.0, True
    return float(np.angle(ip)), False


def d2(x, y):
    """``min_theta ||x e^{i theta} - y||_2``.

    Equal to ``sqrt(||x||^2 + ||y||^2 - 2|x* y|)``, but evaluated as the norm
    of the aligned difference so nearby vectors do not lose half their
    digits to cancellation.
    """
    x, y = _pair(x, y)
    theta, _ = align_phase(x, y)
    return float(np.linalg.norm(x * np.exp(1j * theta) - y))


def d2_formula(x, y):
    """The closed form ``sqrt(max(0, ||x||^2 + ||y||^2 - 2|x* y|))``."""
    x, y = _pair(x, y)
    val = np.vdot(x, x).real + np.vdot(y, y).real - 2.0 * abs(np.vdot(x, y))
    return math.sqrt(max(0.0, val))


def aligned_linf(x, y):
    x, y = _pair(x, y)
    theta, _ = align_phase(x, y)
    return float(np.abs(x * np.exp(1j * theta) - y).max(initial=0.0))


def _linf_at(x, y, theta):
    return float(np.abs(x * np.exp(1j * theta) - y).max(initial=0.0))


def dinf(x, y, tol=1e-9, ngrid=4096):
    """``min_theta ||x e^{i theta} - y||_inf`` to within ``tol``.

    The objective is Lipschitz in theta with constant ``max|x_k|``. It is
    evaluated on a uniform grid; every cell whose Lipschitz lower bound does
    not exceed the best grid value is refined by golden-section search.
    """
    x, y = _pair(x, y)
    if tol <= 0:
        raise ValidationError("tol must be positive")
    if x.size == 0:
        return 0.0
    f = kernels.dinf_grid(x, y, int(ngrid))
    lip = float(np.abs(x).max())
    h = 2.0 * math.pi / ngrid
    best = float(f.min())
    if lip == 0.0:
        return best
    lower = 0.5 * (f + np.roll(f, -1)) - 0.5 * lip * h
    for j in np.flatnonzero(lower <= best):
        a = j * h
        b = a + h
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
        fc = _linf_at(x, y, c)
        fd = _linf_at(x, y, d)
        while b - a > tol:
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - _GOLDEN * (b - a)
                fc = _linf_at(x, y, c)
            else:
                a, c, fc = c, d, fd
                d = a + _GOLDEN * (b - a)
                fd = _linf_at(x, y, d)
        best = min(best, fc, fd)
    return best

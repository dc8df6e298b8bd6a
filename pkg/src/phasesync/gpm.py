"""Generalized power method: ``x <- P(C x)`` with entrywise phase projection."""
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import ValidationError
from .linalg import as_hermitian, as_vector, leading_eigpair
from .metrics import d2
from .model import leave_one_out

RATIO_FLOOR = 1e-13


def phase_project(v):
    """Entrywise ``v_k / |v_k|``, with 1 wherever ``v_k == 0``."""
    return kernels.phase_project(np.asarray(v, dtype=np.complex128))


def gpm_step(C, x):
    C = np.asarray(C, dtype=np.complex128)
    x = as_vector(x, C.shape[0], "x")
    return kernels.gpm_step(C, x)[0]


@dataclass
class GPMConfig:
    tol: float | None = None  # default 1e-10 * sqrt(n)
    max_iter: int | None = None  # default min(3 n^2, 1e5)
    capture_trace: bool = True
    region_kappas: tuple[float, float] | None = None

    def resolved(self, n):
        tol = 1e-10 * math.sqrt(n) if self.tol is None else float(self.tol)
        max_iter = min(3 * n * n, 100_000) if self.max_iter is None else int(self.max_iter)
        if tol <= 0:
            raise ValidationError("tol must be positive")
        if max_iter < 1:
            raise ValidationError("max_iter must be >= 1")
        return tol, max_iter


@dataclass
class GPMTrace:
    """Iterate history of one GPM run.

    ``contraction_ratios[t-1] = step_d2[t] / step_d2[t-1]`` for t >= 1, NaN
    where the denominator is at most 1e-13. ``region_n1`` and ``region_n2``
    hold ``||W x^t||_inf / sqrt(n log n)`` and ``d2(x^t, z) / sqrt(n)`` per
    iterate, and are empty unless the truth was supplied. With
    ``capture_trace`` off only the first and last iterates are kept.
    """

    iterates: list = field(default_factory=list)
    step_d2: list = field(default_factory=list)
    contraction_ratios: list = field(default_factory=list)
    region_n1: list = field(default_factory=list)
    region_n2: list = field(default_factory=list)
    in_region: list = field(default_factory=list)
    converged: bool = False
    fixed_point_residual: float = math.nan
    zero_entries: int = 0

    @property
    def x(self):
        return self.iterates[-1]

    @property
    def iterations(self):
        return len(self.step_d2)

    def ratios(self, min_denominator=RATIO_FLOOR):
        """Contraction ratios whose denominator exceeds ``min_denominator``."""
        s = np.asarray(self.step_d2)
        if s.size < 2:
            return np.empty(0)
        keep = s[:-1] > min_denominator
        return s[1:][keep] / s[:-1][keep]


def _check_init(x0, n):
    nrm = np.linalg.norm(x0)
    on_sphere = abs(nrm - math.sqrt(n)) <= 1e-8 * math.sqrt(n)
    unit_mod = np.all(np.abs(np.abs(x0) - 1.0) <= 1e-8)
    if not (on_sphere or unit_mod):
        raise ValidationError("init must have norm sqrt(n) or unit-modulus entries")


def fixed_point_residual(C, x):
    """``||C x - diag(|C x|) x||_2 / n``."""
    w = C @ x
    return float(np.linalg.norm(w - np.abs(w) * x) / x.shape[0])


def run_gpm(C, init=None, cfg=None, z=None, W=None):
    """Iterate ``x^{t+1} = P(C x^t)`` until ``d2(x^{t+1}, x^t) <= tol``.

    ``init`` defaults to the leading eigenvector of ``C`` scaled to norm
    ``sqrt(n)``. Supplying both ``z`` and ``W`` turns on the contraction
    region diagnostics.
    """
    C = as_hermitian(C, "C")
    n = C.shape[0]
    cfg = cfg or GPMConfig()
    tol, max_iter = cfg.resolved(n)
    if init is None:
        x = leading_eigpair(C).vector
    else:
        x = as_vector(init, n, "init")
        _check_init(x, n)
    diagnose = z is not None and W is not None
    if diagnose:
        z = as_vector(z, n, "z")
        W = np.asarray(W, dtype=np.complex128)
        norm_n1 = math.sqrt(n * math.log(n))
        norm_n2 = math.sqrt(n)

    trace = GPMTrace()
    trace.iterates.append(x)

    def record(v):
        if not diagnose:
            return
        r1 = float(np.abs(W @ v).max()) / norm_n1
        r2 = d2(v, z) / norm_n2
        trace.region_n1.append(r1)
        trace.region_n2.append(r2)
        if cfg.region_kappas is not None:
            k2, k3 = cfg.region_kappas
            trace.in_region.append(r1 <= k2 and r2 <= k3)

    record(x)
    for _ in range(max_iter):
        x_new, _, zeros = kernels.gpm_step(C, x)
        trace.zero_entries += zeros
        step = d2(x_new, x)
        if trace.step_d2:
            prev = trace.step_d2[-1]
            trace.contraction_ratios.append(step / prev if prev > RATIO_FLOOR else math.nan)
        trace.step_d2.append(step)
        if cfg.capture_trace:
            trace.iterates.append(x_new)
        x = x_new
        record(x)
        if step <= tol:
            trace.converged = True
            break
    if not cfg.capture_trace:
        trace.iterates.append(x)
    trace.fixed_point_residual = fixed_point_residual(C, x)
    return trace


@dataclass
class AuxiliaryBundle:
    m: int
    trace: GPMTrace
    proximity: list


def proximity(primary, auxiliary):
    """``d2(x^t, x^{t,m})`` over the common prefix of two traces."""
    k = min(len(primary.iterates), len(auxiliary.iterates))
    return [d2(primary.iterates[t], auxiliary.iterates[t]) for t in range(k)]


def run_auxiliary(model, m, cfg=None, primary=None):
    """Run GPM on the leave-one-out matrix ``C^(m)`` and track its distance
    to the primary sequence (recomputed from ``model.C`` if not given)."""
    cfg = cfg or GPMConfig()
    if not cfg.capture_trace:
        raise ValidationError("run_auxiliary needs capture_trace=True")
    if primary is None:
        primary = run_gpm(model.C, cfg=cfg)
    loo = leave_one_out(model, m)
    trace = run_gpm(loo.C, cfg=cfg)
    return AuxiliaryBundle(int(m), trace, proximity(primary, trace))


def auxiliary_indices(n, count):
    """``count`` evenly spread 0-based indices in ``[0, n)``."""
    count = max(0, min(int(count), n))
    if count == 0:
        return []
    return sorted({int(round(v)) for v in np.linspace(0, n - 1, count)})

"""Signals, Wigner noise and measurement matrices ``C = zz* + sigma W``.

Everything is a pure function of (parameters, seed). Indices are 0-based.
"""
from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError
from .linalg import as_hermitian, as_vector, hermitian_from_upper
from .rng import SplitMix64, derive_seed

NOISE_KINDS = ("complex-gaussian", "rademacher", "zero")


@dataclass(frozen=True)
class NoiseMatrix:
    W: np.ndarray
    kind: str


@dataclass(frozen=True)
class MeasurementModel:
    z: np.ndarray
    noise: NoiseMatrix
    sigma: float
    C: np.ndarray

    @property
    def n(self):
        return self.z.shape[0]

    @property
    def W(self):
        return self.noise.W


def sample_signal(n, rng_seed):
    """Unit-modulus vector with phases i.i.d. uniform on [0, 2 pi)."""
    if int(n) < 2:
        raise ValidationError(f"n must be >= 2, got {n}")
    theta = 2.0 * np.pi * SplitMix64(rng_seed).uniform(int(n))
    return np.exp(1j * theta)


def sample_noise(n, kind, rng_seed):
    """Hermitian Wigner matrix with zero diagonal and E|W_kl|^2 = 1.

    ``complex-gaussian``: real and imaginary parts i.i.d. N(0, 1/2).
    ``rademacher``: real and imaginary parts i.i.d. +-1/sqrt(2).
    ``zero``: the zero matrix.
    Upper-triangle entries are drawn in row-major order.
    """
    n = int(n)
    if n < 2:
        raise ValidationError(f"n must be >= 2, got {n}")
    if kind not in NOISE_KINDS:
        raise ValidationError(f"unknown noise kind {kind!r}; expected one of {NOISE_KINDS}")
    W = np.zeros((n, n), dtype=np.complex128)
    if kind == "zero":
        return NoiseMatrix(W, kind)
    iu = np.triu_indices(n, 1)
    m = iu[0].size
    gen = SplitMix64(rng_seed)
    if kind == "complex-gaussian":
        g = gen.standard_normal(2 * m) * np.sqrt(0.5)
    else:
        g = gen.signs(2 * m) * np.sqrt(0.5)
    W[iu] = g[0::2] + 1j * g[1::2]
    return NoiseMatrix(hermitian_from_upper(W), kind)


def _combine(z, W, sigma):
    return hermitian_from_upper(np.outer(z, z.conj()) + sigma * W)


def assemble(z, noise, sigma):
    z = as_vector(z, name="z")
    if not isinstance(noise, NoiseMatrix):
        noise = NoiseMatrix(as_hermitian(noise, "W"), "custom")
    if noise.W.shape != (z.shape[0], z.shape[0]):
        raise ValidationError(f"W has shape {noise.W.shape}, z has length {z.shape[0]}")
    sigma = float(sigma)
    if not sigma >= 0:
        raise ValidationError(f"sigma must be >= 0, got {sigma}")
    return MeasurementModel(z, noise, sigma, _combine(z, noise.W, sigma))


def model_residual(model):
    """Frobenius norm of ``C - (zz* + sigma W)`` recomputed along the same path."""
    return float(np.linalg.norm(model.C - _combine(model.z, model.W, model.sigma)))


def _check_index(model, m):
    if not 0 <= int(m) < model.n:
        raise ValidationError(f"index {m} out of range for n = {model.n}")
    return int(m)


def loo_noise(W, m):
    """``W`` with row and column ``m`` set to zero."""
    Wm = np.array(W, dtype=np.complex128)
    Wm[m, :] = 0
    Wm[:, m] = 0
    return Wm


def leave_one_out(model, m):
    """Model whose noise has row/column ``m`` removed; ``model`` is untouched."""
    m = _check_index(model, m)
    Wm = loo_noise(model.W, m)
    return replace(
        model, noise=NoiseMatrix(Wm, model.noise.kind), C=_combine(model.z, Wm, model.sigma)
    )


def loo_delta(model, m):
    """``W - W^(m)``: nonzero only in row and column ``m``."""
    m = _check_index(model, m)
    D = np.zeros_like(model.W)
    D[m, :] = model.W[m, :]
    D[:, m] = model.W[:, m]
    return D


def sample_model(n, sigma, kind, rng_seed):
    """Signal and noise drawn from two streams derived from one seed."""
    z = sample_signal(n, derive_seed(rng_seed, "signal"))
    W = sample_noise(n, kind, derive_seed(rng_seed, "noise"))
    return assemble(z, W, sigma)

"""Linearized 1-bit quantizer statistics.

Two linear models of ``r = Q(h + n)`` are used by the denoisers, both
derived assuming ``h ~ CN(0, Eh I)``:

* direct model ``r = h + q`` with per-entry error variance ``Q0``;
* Bussgang model ``r = alpha h + d`` with ``d`` uncorrelated with ``h`` and
  per-entry distortion variance ``D0 = 2 - alpha**2 Eh``.

The Monte Carlo estimators here are independent oracles for the closed
forms; the ``validate`` CLI command runs them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beamspace import ConfigurationError
from .channel import crandn

__all__ = [
    "BussgangParams",
    "compute_params",
    "cross_moment",
    "mc_cross_moment",
    "AlphaEstimate",
    "mc_alpha_detail",
    "mc_alpha",
]

# samples per vectorized block in the Monte Carlo loops
CHUNK = 1 << 18


@dataclass(frozen=True)
class BussgangParams:
    Eh: float
    N0: float
    alpha: float
    Q0: float
    D0_over_alpha2: float

    @property
    def D0(self) -> float:
        """Distortion variance of ``d`` itself (not divided by ``alpha**2``)."""
        return self.alpha**2 * self.D0_over_alpha2

    def with_alpha(self, alpha: float) -> "BussgangParams":
        """Copy with a different gain and the other fields kept; used for negative controls."""
        return BussgangParams(self.Eh, self.N0, alpha, self.Q0, self.D0 / alpha**2)


def cross_moment(Eh: float, N0: float) -> float:
    """Closed form of ``E[h^H r] / B`` for Gaussian ``h``."""
    return 2.0 * Eh / math.sqrt(math.pi * (Eh + N0))


def compute_params(Eh: float, N0: float) -> BussgangParams:
    if Eh < 0 or N0 < 0:
        raise ConfigurationError(f"Eh and N0 must be non-negative, got Eh={Eh}, N0={N0}")
    if Eh + N0 <= 0:
        raise ConfigurationError("Eh + N0 must be positive; the quantizer input is identically zero")
    s = math.sqrt(math.pi * (Eh + N0))
    alpha = 2.0 / s
    Q0 = 2.0 + Eh - 4.0 * Eh / s
    D0_over_alpha2 = 2.0 / alpha**2 - Eh
    return BussgangParams(Eh=Eh, N0=N0, alpha=alpha, Q0=Q0, D0_over_alpha2=D0_over_alpha2)


def _one_bit(z: np.ndarray) -> np.ndarray:
    return np.where(z.real >= 0, 1.0, -1.0) + 1j * np.where(z.imag >= 0, 1.0, -1.0)


def mc_cross_moment(Eh: float, N0: float, samples: int, rng: np.random.Generator) -> float:
    """Sample mean of ``Re(conj(h) Q(h + n))`` over scalar draws.

    Converges to :func:`cross_moment`. Work is split into fixed-size
    blocks, so the result depends only on ``samples`` and the rng state.
    """
    if samples < 1:
        raise ConfigurationError("samples must be >= 1")
    total = 0.0
    left = samples
    while left > 0:
        n = min(left, CHUNK)
        h = crandn(rng, n, Eh)
        r = _one_bit(h + crandn(rng, n, N0))
        total += float(np.sum((h.conj() * r).real))
        left -= n
    return total / samples


@dataclass(frozen=True)
class AlphaEstimate:
    alpha: float
    imag: float
    imag_stderr: float
    trials: int


def mc_alpha_detail(Eh: float, N0: float, B: int, trials: int, rng: np.random.Generator) -> AlphaEstimate:
    """Ratio-of-means estimate of ``E[h^H r] / E[||h||^2]`` over full vectors.

    Also reports the imaginary part of the normalized cross moment and its
    standard error, which should be statistically indistinguishable from 0.
    """
    if trials < 1 or B < 1:
        raise ConfigurationError("trials and B must be >= 1")
    per_block = max(1, CHUNK // B)
    num = 0.0 + 0.0j
    den = 0.0
    imag_parts = []
    done = 0
    while done < trials:
        t = min(per_block, trials - done)
        h = crandn(rng, (t, B), Eh)
        r = _one_bit(h + crandn(rng, (t, B), N0))
        hr = np.sum(h.conj() * r, axis=1)
        num += complex(np.sum(hr))
        den += float(np.sum(np.abs(h) ** 2))
        imag_parts.append(hr.imag / B)
        done += t
    imag = np.concatenate(imag_parts)
    se = float(np.std(imag, ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf
    alpha = num.real / den if den > 0 else 0.0
    return AlphaEstimate(alpha=alpha, imag=float(np.mean(imag)), imag_stderr=se, trials=trials)


def mc_alpha(Eh: float, N0: float, B: int, trials: int, rng: np.random.Generator) -> float:
    return mc_alpha_detail(Eh, N0, B, trials, rng).alpha

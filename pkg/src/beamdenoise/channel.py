"""Synthetic sparse multipath channels, thermal noise and the 1-bit ADC.

Randomness always comes from an explicit :class:`numpy.random.Generator`.
:func:`stream` derives independent PCG64 generators from a master seed and
an integer key via :class:`numpy.random.SeedSequence`. Simulations key
streams by trial index, so a trial's output does not depend on which other
trials ran or in what order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .beamspace import ComplexVec, ConfigurationError, Domain, antenna

__all__ = [
    "ChannelRealization",
    "NoiseModel",
    "stream",
    "crandn",
    "steering_vector",
    "generate_channel",
    "gaussian_channel",
    "add_noise",
    "quantize_1bit",
    "snr_db_to_n0",
]

TWO_PI = 2.0 * math.pi


def stream(seed: int, *key: int) -> np.random.Generator:
    """PCG64 generator for ``(seed, *key)``; distinct keys give independent streams."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def crandn(rng: np.random.Generator, size, var: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples with variance ``var``."""
    scale = math.sqrt(var / 2.0)
    re = rng.standard_normal(size)
    im = rng.standard_normal(size)
    return scale * (re + 1j * im)


def snr_db_to_n0(snr_db: float, Eh: float = 1.0) -> float:
    """Noise variance for ``SNR = Eh / N0`` given in dB."""
    return Eh * 10.0 ** (-snr_db / 10.0)


@dataclass(frozen=True)
class NoiseModel:
    N0: float
    rng_seed: int = 0

    def __post_init__(self):
        if not self.N0 >= 0:
            raise ConfigurationError(f"N0 must be non-negative, got {self.N0}")

    def rng(self, *key: int) -> np.random.Generator:
        return stream(self.rng_seed, *key)


def steering_vector(Omega: float, B: int) -> ComplexVec:
    """``a(Omega)`` with entry ``b`` equal to ``exp(1j * b * Omega)``."""
    if B < 1:
        raise ConfigurationError(f"B must be >= 1, got {B}")
    return ComplexVec(np.exp(1j * Omega * np.arange(B)), Domain.ANTENNA)


def _synthesize(gains: np.ndarray, angles: np.ndarray, B: int) -> np.ndarray:
    # B x L matrix of steering vectors times gains; phases reduced mod 2*pi
    phase = np.mod(np.outer(np.arange(B), angles), TWO_PI)
    return np.exp(1j * phase) @ gains


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Path gains and spatial frequencies plus the antenna-domain channel."""

    B: int
    gains: np.ndarray
    angles: np.ndarray
    h: ComplexVec

    @property
    def L(self) -> int:
        return self.gains.size

    @property
    def paths(self) -> list[tuple[complex, float]]:
        return list(zip(self.gains.tolist(), self.angles.tolist()))

    def reconstruct(self) -> ComplexVec:
        """Recompute ``sum_l gains[l] * a(angles[l])`` path by path."""
        acc = np.zeros(self.B, dtype=np.complex128)
        for kappa, omega in self.paths:
            acc += kappa * steering_vector(omega, self.B).data
        return ComplexVec(acc, Domain.ANTENNA)


def _separated_angles(rng: np.random.Generator, L: int, min_sep: float) -> np.ndarray:
    # Uniform over circular configurations with pairwise gap >= min_sep:
    # draw L points on a circle shortened by L*min_sep, re-insert the gaps,
    # then rotate and shuffle.
    slack = TWO_PI - L * min_sep
    pts = np.sort(rng.uniform(0.0, slack, L)) + min_sep * np.arange(L)
    pts = np.mod(pts + rng.uniform(0.0, TWO_PI), TWO_PI)
    return rng.permutation(pts)


def generate_channel(
    B: int,
    L: int,
    rng: np.random.Generator | None = None,
    gain_distribution: str = "cn",
    min_separation: float = 0.0,
    gains: Sequence[complex] | None = None,
    angles: Sequence[float] | None = None,
) -> ChannelRealization:
    """Draw an L-path channel for a B-antenna uniform linear array.

    Parameters
    ----------
    B, L : int
        Antenna and path counts.
    rng : numpy.random.Generator
        Source of randomness; unused when both ``gains`` and ``angles`` are
        given.
    gain_distribution : {"cn", "unit"}
        ``"cn"`` draws gains i.i.d. CN(0, 1/L). ``"unit"`` draws gains of
        modulus ``1/sqrt(L)`` with uniform phase. Both give
        ``E[||h||^2 / B] = 1``.
    min_separation : float
        Minimum circular distance between spatial frequencies, radians.
    gains, angles : sequence, optional
        Force specific path parameters instead of drawing them.
    """
    if B < 1:
        raise ConfigurationError(f"B must be >= 1, got {B}")
    if L < 1:
        raise ConfigurationError(f"L must be >= 1, got {L}")
    if min_separation < 0 or L * min_separation > TWO_PI:
        raise ConfigurationError(
            f"cannot place {L} paths with separation {min_separation} rad on [0, 2*pi)"
        )
    if (gains is None or angles is None) and rng is None:
        raise ConfigurationError("rng is required unless gains and angles are both given")

    if angles is None:
        ang = _separated_angles(rng, L, min_separation) if min_separation > 0 else rng.uniform(0.0, TWO_PI, L)
    else:
        ang = np.mod(np.asarray(angles, dtype=float), TWO_PI)
        if ang.size != L:
            raise ConfigurationError(f"expected {L} angles, got {ang.size}")

    if gains is None:
        if gain_distribution == "cn":
            g = crandn(rng, L, 1.0 / L)
        elif gain_distribution == "unit":
            g = np.exp(1j * rng.uniform(0.0, TWO_PI, L)) / math.sqrt(L)
        else:
            raise ConfigurationError(f"unknown gain distribution {gain_distribution!r}")
    else:
        g = np.asarray(gains, dtype=np.complex128)
        if g.size != L:
            raise ConfigurationError(f"expected {L} gains, got {g.size}")

    g.setflags(write=False)
    ang.setflags(write=False)
    h = ComplexVec(_synthesize(g, ang, B), Domain.ANTENNA)
    return ChannelRealization(B=B, gains=g, angles=ang, h=h)


def gaussian_channel(B: int, rng: np.random.Generator, Eh: float = 1.0) -> ComplexVec:
    """i.i.d. ``CN(0, Eh)`` antenna-domain channel (the many-path limit)."""
    return ComplexVec(crandn(rng, B, Eh), Domain.ANTENNA)


def add_noise(h, N0: float, rng: np.random.Generator) -> ComplexVec:
    """Return ``h + n`` with ``n ~ CN(0, N0 I)``. ``N0 == 0`` returns ``h`` as-is."""
    if not N0 >= 0:
        raise ConfigurationError(f"N0 must be non-negative, got {N0}")
    h = antenna(h)
    if N0 == 0:
        return h
    return ComplexVec(h.data + crandn(rng, h.B, N0), Domain.ANTENNA)


def _sign(x: np.ndarray) -> np.ndarray:
    # sign(0) := +1 keeps the quantizer total
    return np.where(x >= 0, 1.0, -1.0)


def quantize_1bit(y) -> ComplexVec:
    """Per-component sign quantizer: ``sign(Re y) + 1j * sign(Im y)``."""
    y = antenna(y)
    return ComplexVec(_sign(y.data.real) + 1j * _sign(y.data.imag), Domain.ANTENNA)

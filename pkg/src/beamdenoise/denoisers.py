"""SURE-tuned soft-thresholding denoisers for beamspace channel vectors.

All SURE-driven estimators share one kernel, :func:`sure_scan`. It walks
the candidate thresholds ``0, m_1, ..., m_B`` (the ascending beamspace
magnitudes) while keeping running sums over the bins that survive the
threshold. At each candidate it evaluates the closed-form optimal scale and
the resulting SURE, and keeps the first strict minimum below the threshold
cap ``sqrt(2 D0 log B)``. After sorting, each step costs O(1).

The estimators are specializations of that kernel:

========================  =========================  =========  ===========
algorithm                 thresholded vector         gain       noise var.
========================  =========================  =========  ===========
``beaches``               ``dft(y)`` (unquantized)   1          ``E0``
``one-beaches``           ``dft(r)``                 1          ``Q0``
``alpha-beaches``         ``dft(r) / alpha``         1          ``D0/alpha^2``
``sand``                  ``dft(r)``                 ``alpha``  ``D0``, scale learned
========================  =========================  =========  ===========
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .beamspace import ComplexVec, ConfigurationError, Domain, _fft, antenna, beamspace, idft, sort_magnitudes
from .bussgang import BussgangParams, compute_params

__all__ = [
    "EPS",
    "DenoiseResult",
    "SureSums",
    "ScanResult",
    "soft_threshold",
    "sure_evaluate",
    "gamma_star",
    "threshold_cap",
    "sure_scan",
    "beaches",
    "one_beaches",
    "alpha_beaches",
    "sand",
    "ml_1bit",
    "blmmse",
    "ALGORITHMS",
    "denoise",
    "mse",
]

# magnitudes are clamped to EPS before inversion in the 1/m sum
EPS = 1e-12


@dataclass(frozen=True, eq=False)
class DenoiseResult:
    """Output of a denoiser.

    ``h_star_beam == gamma_star * soft_threshold(y_beam, tau_star)``, where
    ``y_beam`` is the beamspace vector the algorithm thresholded, and
    ``h_star_ant == idft(h_star_beam)``. ``sure_min`` is NaN for the
    baselines that do not minimize SURE.
    """

    algorithm: str
    h_star_beam: ComplexVec
    h_star_ant: ComplexVec
    tau_star: float
    gamma_star: float
    sure_min: float
    y_beam: ComplexVec
    cut: int = 0

    def summary(self) -> str:
        return (
            f"algorithm={self.algorithm} tau_star={self.tau_star!r} "
            f"gamma_star={self.gamma_star!r} sure_min={self.sure_min!r}"
        )


@dataclass(frozen=True)
class SureSums:
    """Sums over the sorted magnitudes ``m[k+1..B]`` that survive a threshold.

    ``sum_inv`` uses magnitudes clamped to :data:`EPS`.
    """

    sum_sq: float
    sum_abs: float
    sum_inv: float
    k: int
    B: int

    @property
    def count(self) -> int:
        return self.B - self.k

    @classmethod
    def from_sorted(cls, mags: np.ndarray, k: int) -> "SureSums":
        """Recompute the sums from scratch for cut index ``k`` (0 <= k <= B)."""
        B = mags.size
        if not 0 <= k <= B:
            raise ConfigurationError(f"cut index {k} outside 0..{B}")
        tail = np.asarray(mags[k:], dtype=float)
        return cls(
            sum_sq=float(np.sum(tail * tail)),
            sum_abs=float(np.sum(tail)),
            sum_inv=float(np.sum(1.0 / np.maximum(tail, EPS))),
            k=k,
            B=B,
        )


def soft_threshold(v, tau: float):
    """Shrink each magnitude by ``tau`` (zeroing if smaller) and keep phases.

    Accepts a :class:`ComplexVec` (the domain tag is kept) or an array.
    """
    if tau < 0:
        raise ConfigurationError(f"tau must be non-negative, got {tau}")
    data = v.data if isinstance(v, ComplexVec) else np.asarray(v, dtype=np.complex128)
    mag = np.abs(data)
    keep = mag > tau
    safe = np.where(keep, mag, 1.0)
    out = np.where(keep, data * ((mag - tau) / safe), 0.0 + 0.0j)
    if isinstance(v, ComplexVec):
        return ComplexVec(out, v.domain)
    return out


# Scalar kernels shared by the public helpers and the scan loop. ``n`` is the
# number of surviving bins, i.e. B - k.


def _quad(s2, s1, n, tau):
    return s2 - 2.0 * tau * s1 + tau * tau * n


def _lin(s2, s1, si, n, tau, D0):
    return 2.0 * (s2 - tau * s1) - D0 * (2.0 * n - tau * si)


def _gamma(quad, lin, alpha):
    if not quad > 0:
        return 0.0
    return max(0.0, lin / (2.0 * alpha * quad))


def _sure(quad, lin, gamma, alpha, D0, B, energy):
    return gamma * gamma * quad / B + (energy - D0) / (alpha * alpha) - gamma * lin / (alpha * B)


def sure_evaluate(sums: SureSums, tau: float, gamma: float, alpha: float, D0: float, energy: float = 2.0) -> float:
    """SURE of ``gamma * soft_threshold(r_hat, tau)`` from the survivor sums.

    ``energy`` is ``||r_hat||^2 / B``. It is exactly 2 for a 1-bit observation
    with the unitary DFT. For other inputs, pass the actual value so the
    constant term stays unbiased.
    """
    if alpha <= 0:
        raise ConfigurationError("alpha must be positive")
    n = sums.count
    quad = _quad(sums.sum_sq, sums.sum_abs, n, tau)
    lin = _lin(sums.sum_sq, sums.sum_abs, sums.sum_inv, n, tau, D0)
    return _sure(quad, lin, gamma, alpha, D0, sums.B, energy)


def gamma_star(sums: SureSums, tau: float, alpha: float, D0: float) -> float:
    """Non-negative scale minimizing SURE at fixed ``tau``; 0 if the quadratic term vanishes."""
    if alpha <= 0:
        raise ConfigurationError("alpha must be positive")
    n = sums.count
    quad = _quad(sums.sum_sq, sums.sum_abs, n, tau)
    lin = _lin(sums.sum_sq, sums.sum_abs, sums.sum_inv, n, tau, D0)
    return _gamma(quad, lin, alpha)


def threshold_cap(D0: float, B: int) -> float:
    return math.sqrt(2.0 * D0 * math.log(B)) if D0 > 0 and B > 1 else 0.0


@dataclass(frozen=True)
class ScanResult:
    tau: float
    gamma: float
    sure: float
    cut: int


def sure_scan(
    mags: np.ndarray,
    alpha: float,
    D0: float,
    gamma: float | None = None,
    energy: float = 2.0,
    on_update: Callable[[SureSums], None] | None = None,
) -> ScanResult:
    """Joint (scale, threshold) search over the sorted magnitudes.

    Parameters
    ----------
    mags : ndarray
        Ascending magnitudes ``m_1 <= ... <= m_B``. Extra trailing entries
        (such as the ``inf`` sentinels from :func:`sort_magnitudes`) are
        ignored.
    alpha, D0 : float
        Gain and distortion variance of ``r_hat = alpha h_hat + d_hat``.
    gamma : float, optional
        Hold the scale fixed instead of optimizing it.
    energy : float
        ``||r_hat||^2 / B``; only shifts the reported SURE.
    on_update : callable, optional
        Receives the running :class:`SureSums` after each finite update.

    Notes
    -----
    The loop runs over ``k = 0 .. B+1`` with two ``inf`` sentinels. Candidate
    ``k`` is accepted when its SURE is strictly below the best so far and its
    threshold is below the cap. The ``tau = 0`` candidate is always
    admissible, so a zero cap (``D0 == 0``) selects ``tau = 0``.
    """
    if alpha <= 0:
        raise ConfigurationError(f"alpha must be positive, got {alpha}")
    m = np.asarray(mags, dtype=float)
    B = int(np.count_nonzero(np.isfinite(m)))
    if B < 1:
        raise ConfigurationError("need at least one magnitude")
    vals = m[:B]
    # Survivor sums for every cut, accumulated from the largest magnitude down.
    # Subtracting from the full sums instead loses all precision in the 1/m
    # sum once a near-zero bin (clamped to EPS) has been removed.
    tab2 = _suffix_sums(vals * vals)
    tab1 = _suffix_sums(vals)
    tabi = _suffix_sums(1.0 / np.maximum(vals, EPS))
    # plain floats: the loop is scalar arithmetic and numpy scalars are slower
    seq = vals.tolist() + [math.inf, math.inf]
    s2, s1, si = tab2[0], tab1[0], tabi[0]
    cap = threshold_cap(D0, B)

    best_sure = math.inf
    best_tau = 0.0
    best_gamma = 0.0 if gamma is None else float(gamma)
    best_k = 0
    tau = 0.0
    for k in range(B + 2):
        if k == 0 or tau < cap:
            n = B - k
            quad = _quad(s2, s1, n, tau)
            lin = _lin(s2, s1, si, n, tau, D0)
            g = _gamma(quad, lin, alpha) if gamma is None else gamma
            sure = _sure(quad, lin, g, alpha, D0, B, energy)
            if sure < best_sure:
                best_sure, best_tau, best_gamma, best_k = sure, tau, g, k
        # drop m_{k+1} from the survivors and make it the next threshold
        tau = seq[k]
        if k < B:
            s2, s1, si = tab2[k + 1], tab1[k + 1], tabi[k + 1]
            if on_update is not None:
                on_update(SureSums(s2, s1, si, k + 1, B))
        else:
            s2 = s1 = si = -math.inf
    return ScanResult(tau=best_tau, gamma=best_gamma, sure=best_sure, cut=best_k)


def _suffix_sums(x: np.ndarray) -> list[float]:
    """``out[k] = sum(x[k:])`` for k = 0..len(x), summed from the end."""
    out = np.zeros(x.size + 1)
    out[:-1] = np.cumsum(x[::-1])[::-1]
    return out.tolist()


def _result(name, y_beam: ComplexVec, scan: ScanResult) -> DenoiseResult:
    est = soft_threshold(y_beam.data, scan.tau) * scan.gamma
    hb = ComplexVec(est, Domain.BEAMSPACE)
    return DenoiseResult(
        algorithm=name,
        h_star_beam=hb,
        h_star_ant=idft(hb),
        tau_star=scan.tau,
        gamma_star=scan.gamma,
        sure_min=scan.sure,
        y_beam=y_beam,
        cut=scan.cut,
    )


def _beaches(name: str, y_beam: ComplexVec, E0: float) -> DenoiseResult:
    if not E0 >= 0:
        raise ConfigurationError(f"noise variance must be non-negative, got {E0}")
    srt = sort_magnitudes(y_beam)
    energy = y_beam.energy() / y_beam.B
    scan = sure_scan(srt.values, 1.0, E0, gamma=1.0, energy=energy)
    return _result(name, y_beam, scan)


def beaches(y_hat, E0: float) -> DenoiseResult:
    """Soft-threshold a beamspace observation ``y_hat = h_hat + e`` with ``e ~ CN(0, E0 I)``.

    The threshold minimizes SURE over ``{0} U |y_hat|`` below
    ``sqrt(2 E0 log B)``.
    """
    return _beaches("beaches", beamspace(y_hat), E0)


def one_beaches(r, params: BussgangParams) -> DenoiseResult:
    """BEACHES on ``dft(r)``, modelling the 1-bit error as Gaussian with variance ``Q0``."""
    r = antenna(r)
    return _beaches("one-beaches", ComplexVec(_fft(r.data), Domain.BEAMSPACE), params.Q0)


def alpha_beaches(r, params: BussgangParams) -> DenoiseResult:
    """BEACHES on ``dft(r) / alpha`` with noise variance ``D0 / alpha**2``.

    Dividing by the Bussgang gain restores the channel's scale before
    thresholding.
    """
    if params.alpha <= 0:
        raise ConfigurationError("alpha must be positive")
    r = antenna(r)
    y = ComplexVec(_fft(r.data) / params.alpha, Domain.BEAMSPACE)
    return _beaches("alpha-beaches", y, params.D0_over_alpha2)


def sand(r, params: BussgangParams, on_update: Callable[[SureSums], None] | None = None) -> DenoiseResult:
    """Sparsity-adaptive 1-bit denoiser: learn both scale and threshold.

    Returns ``gamma* soft_threshold(dft(r), tau*)`` where ``(gamma*, tau*)``
    minimize SURE under ``dft(r) = alpha h_hat + d_hat``,
    ``d_hat ~ CN(0, D0 I)``. Cost is O(B log B) for the FFT and sort plus
    one linear pass.
    """
    if params.alpha <= 0:
        raise ConfigurationError("alpha must be positive")
    r = antenna(r)
    y = ComplexVec(_fft(r.data), Domain.BEAMSPACE)
    srt = sort_magnitudes(y)
    energy = y.energy() / y.B
    scan = sure_scan(srt.values, params.alpha, params.D0, energy=energy, on_update=on_update)
    return _result("sand", y, scan)


def ml_1bit(r) -> DenoiseResult:
    """Identity estimator ``h* = r``."""
    r = antenna(r)
    y = ComplexVec(_fft(r.data), Domain.BEAMSPACE)
    return DenoiseResult("ml", y, r, 0.0, 1.0, math.nan, y)


def blmmse(r, Eh: float, N0: float) -> DenoiseResult:
    """Bussgang linear MMSE for i.i.d. channels: ``h* = Eh / sqrt(pi (Eh + N0)) r``."""
    if Eh + N0 <= 0:
        raise ConfigurationError("Eh + N0 must be positive")
    c = Eh / math.sqrt(math.pi * (Eh + N0))
    r = antenna(r)
    y = ComplexVec(_fft(r.data), Domain.BEAMSPACE)
    return DenoiseResult("blmmse", y * c, r * c, 0.0, c, math.nan, y)


def _run_beaches(y, Eh, N0):
    y = antenna(y)
    return beaches(ComplexVec(_fft(y.data), Domain.BEAMSPACE), N0)


# name -> f(observation, Eh, N0); "beaches" expects the unquantized y = h + n
ALGORITHMS: dict[str, Callable[[ComplexVec, float, float], DenoiseResult]] = {
    "sand": lambda r, Eh, N0: sand(r, compute_params(Eh, N0)),
    "alpha-beaches": lambda r, Eh, N0: alpha_beaches(r, compute_params(Eh, N0)),
    "one-beaches": lambda r, Eh, N0: one_beaches(r, compute_params(Eh, N0)),
    "beaches": _run_beaches,
    "ml": lambda r, Eh, N0: ml_1bit(r),
    "blmmse": blmmse,
}


def denoise(algorithm: str, observation, Eh: float, N0: float) -> DenoiseResult:
    try:
        fn = ALGORITHMS[algorithm]
    except KeyError:
        raise ConfigurationError(
            f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}"
        ) from None
    return fn(antenna(observation), Eh, N0)


def mse(estimate, truth) -> float:
    """Per-entry squared error ``||estimate - truth||^2 / B`` (same domain required)."""
    if isinstance(estimate, DenoiseResult):
        estimate = estimate.h_star_beam
    diff = estimate - truth
    return diff.energy() / diff.B

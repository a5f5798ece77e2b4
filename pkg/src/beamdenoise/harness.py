"""Monte Carlo MSE sweeps and the built-in validation report.

Sweep config files are INI-style ``key = value`` text (an optional
``[sweep]`` header is allowed)::

    [sweep]
    B = 256                    # antennas, power of two for the FFT path
    L = 2                      # propagation paths
    snr_db = 0, 10, 20         # SNR = Eh / N0 in dB, Eh = 1
    trials = 500
    seed = 1234
    algorithms = sand, alpha-beaches, one-beaches, ml, blmmse
    min_separation = 0.0       # radians between path spatial frequencies
    channel = multipath        # or: gaussian (i.i.d. CN(0, Eh) entries)
    gain_distribution = cn     # or: unit
    output = results.csv       # optional
    workers = 1                # optional process-level parallelism

Per trial, the channel comes from stream ``(seed, trial, 0)`` and the noise
at SNR index ``i`` from ``(seed, trial, 1, i)``. All algorithms see the same
realization. Results therefore do not depend on trial order or worker count.
"""

from __future__ import annotations

import configparser
import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from .beamspace import ComplexVec, ConfigurationError, Domain, _fft, is_power_of_two
from .bussgang import (
    BussgangParams,
    compute_params,
    cross_moment,
    mc_alpha_detail,
    mc_cross_moment,
)
from .channel import (
    add_noise,
    gaussian_channel,
    generate_channel,
    quantize_1bit,
    snr_db_to_n0,
    stream,
)
from .denoisers import alpha_beaches, beaches, blmmse, ml_1bit, one_beaches, sand

__all__ = [
    "SWEEP_ALGORITHMS",
    "CSV_HEADER",
    "SweepConfig",
    "SweepRecord",
    "load_config",
    "run_sweep",
    "records_to_csv",
    "write_records",
    "sure_unbiasedness",
    "Check",
    "ValidationReport",
    "run_validation",
]

SWEEP_ALGORITHMS = ("sand", "alpha-beaches", "one-beaches", "ml", "blmmse", "beaches-unquantized")
CSV_HEADER = ("algorithm", "snr_db", "trials", "mean_mse", "mse_db", "stderr_mse")


@dataclass(frozen=True)
class SweepConfig:
    B: int = 256
    L: int = 2
    snr_db: tuple[float, ...] = (0.0, 10.0, 20.0)
    trials: int = 500
    seed: int = 0
    algorithms: tuple[str, ...] = ("sand", "alpha-beaches", "one-beaches", "ml", "blmmse")
    min_separation: float = 0.0
    channel: str = "multipath"
    gain_distribution: str = "cn"
    Eh: float = 1.0
    output: str | None = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.B < 1:
            raise ConfigurationError("B must be >= 1")
        if self.L < 1:
            raise ConfigurationError("L must be >= 1")
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if not self.snr_db:
            raise ConfigurationError("snr_db must list at least one value")
        if not self.algorithms:
            raise ConfigurationError("algorithms must list at least one name")
        bad = [a for a in self.algorithms if a not in SWEEP_ALGORITHMS]
        if bad:
            raise ConfigurationError(
                f"unknown algorithm(s) {', '.join(bad)}; choose from {', '.join(SWEEP_ALGORITHMS)}"
            )
        if self.channel not in ("multipath", "gaussian"):
            raise ConfigurationError(f"channel must be 'multipath' or 'gaussian', got {self.channel!r}")
        if self.Eh <= 0:
            raise ConfigurationError("Eh must be positive")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        if self.min_separation < 0 or self.L * self.min_separation > 2 * math.pi:
            raise ConfigurationError("min_separation infeasible for L paths")

    @property
    def fast_path(self) -> bool:
        return is_power_of_two(self.B)


@dataclass(frozen=True)
class SweepRecord:
    algorithm: str
    snr_db: float
    trials: int
    mean_mse: float
    stderr_mse: float

    @property
    def mse_db(self) -> float:
        return 10.0 * math.log10(self.mean_mse) if self.mean_mse > 0 else -math.inf

    @property
    def stderr_db(self) -> float:
        """First-order standard error of ``mse_db``."""
        return 10.0 / math.log(10.0) * self.stderr_mse / self.mean_mse if self.mean_mse > 0 else math.inf

    def row(self) -> list[str]:
        return [
            self.algorithm,
            repr(self.snr_db),
            str(self.trials),
            repr(self.mean_mse),
            repr(self.mse_db),
            repr(self.stderr_mse),
        ]


_LIST_KEYS = {"snr_db": float, "algorithms": str}
_SCALAR_KEYS = {
    "B": int,
    "L": int,
    "trials": int,
    "seed": int,
    "min_separation": float,
    "channel": str,
    "gain_distribution": str,
    "Eh": float,
    "output": str,
    "workers": int,
}


def load_config(source) -> SweepConfig:
    """Parse an INI-style sweep config from a path or a string of text."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).exists()):
        text = Path(source).read_text()
    else:
        text = str(source)
    if not any(line.strip().startswith("[") for line in text.splitlines()):
        text = "[sweep]\n" + text
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # keys are case-sensitive (B, L, Eh)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config: {exc}") from None
    if not parser.has_section("sweep"):
        raise ConfigurationError("config needs a [sweep] section")
    known = {f.name for f in fields(SweepConfig)}
    kwargs = {}
    for key, raw in parser.items("sweep"):
        if key not in known:
            raise ConfigurationError(f"unknown config key {key!r}")
        try:
            if key in _LIST_KEYS:
                conv = _LIST_KEYS[key]
                kwargs[key] = tuple(conv(x.strip()) for x in raw.split(",") if x.strip())
            else:
                kwargs[key] = _SCALAR_KEYS[key](raw.strip())
        except ValueError:
            raise ConfigurationError(f"bad value for {key}: {raw!r}") from None
    return SweepConfig(**kwargs)


def _estimate(alg: str, r: ComplexVec, y: ComplexVec, params: BussgangParams) -> np.ndarray:
    if alg == "sand":
        return sand(r, params).h_star_beam.data
    if alg == "alpha-beaches":
        return alpha_beaches(r, params).h_star_beam.data
    if alg == "one-beaches":
        return one_beaches(r, params).h_star_beam.data
    if alg == "ml":
        return ml_1bit(r).h_star_beam.data
    if alg == "blmmse":
        return blmmse(r, params.Eh, params.N0).h_star_beam.data
    if alg == "beaches-unquantized":
        return beaches(ComplexVec(_fft(y.data), Domain.BEAMSPACE), params.N0).h_star_beam.data
    raise ConfigurationError(f"unknown algorithm {alg!r}")


def _trial(cfg: SweepConfig, t: int) -> np.ndarray:
    """Per-bin squared errors, shape ``(len(snr_db), len(algorithms))``."""
    crng = stream(cfg.seed, t, 0)
    if cfg.channel == "gaussian":
        h = gaussian_channel(cfg.B, crng, cfg.Eh)
    else:
        h = generate_channel(
            cfg.B, cfg.L, crng, gain_distribution=cfg.gain_distribution, min_separation=cfg.min_separation
        ).h
        if cfg.Eh != 1.0:
            h = h * math.sqrt(cfg.Eh)
    h_beam = _fft(h.data)
    out = np.empty((len(cfg.snr_db), len(cfg.algorithms)))
    for i, snr in enumerate(cfg.snr_db):
        N0 = snr_db_to_n0(snr, cfg.Eh)
        params = compute_params(cfg.Eh, N0)
        y = add_noise(h, N0, stream(cfg.seed, t, 1, i))
        r = quantize_1bit(y)
        for j, alg in enumerate(cfg.algorithms):
            err = _estimate(alg, r, y, params) - h_beam
            out[i, j] = np.vdot(err, err).real / cfg.B
    return out


def _trial_block(args) -> np.ndarray:
    cfg, start, stop = args
    return np.stack([_trial(cfg, t) for t in range(start, stop)])


def trial_errors(cfg: SweepConfig, trial_indices: Sequence[int] | None = None) -> np.ndarray:
    """Squared errors for each trial, shape ``(trials, n_snr, n_alg)``."""
    if trial_indices is not None:
        return np.stack([_trial(cfg, t) for t in trial_indices])
    if cfg.workers == 1:
        return _trial_block((cfg, 0, cfg.trials))
    bounds = np.linspace(0, cfg.trials, min(cfg.workers * 4, cfg.trials) + 1).astype(int)
    jobs = [(cfg, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        blocks = list(pool.map(_trial_block, jobs))
    return np.concatenate(blocks)


def run_sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """Average per-bin squared error for every (algorithm, SNR) cell.

    Records are ordered algorithm-major, following the config order. The
    reduction is ``np.mean``, which sums pairwise in fixed trial order.
    """
    errs = trial_errors(cfg)
    records = []
    for j, alg in enumerate(cfg.algorithms):
        for i, snr in enumerate(cfg.snr_db):
            col = errs[:, i, j]
            se = float(np.std(col, ddof=1) / math.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0
            records.append(SweepRecord(alg, snr, cfg.trials, float(np.mean(col)), se))
    if cfg.output:
        write_records(records, cfg.output)
    return records


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def write_records(records: Sequence[SweepRecord], path) -> None:
    Path(path).write_text(records_to_csv(records))


def sure_unbiasedness(
    params: BussgangParams, B: int = 256, trials: int = 2000, seed: int = 0, true_params: BussgangParams | None = None
) -> tuple[float, float]:
    """Mean SURE at the SAND optimum vs. mean realized per-bin squared error.

    Channels are i.i.d. ``CN(0, Eh)``, where the Gaussian model behind the
    closed forms holds. ``params`` is what the denoiser is told. The data
    are generated with ``true_params`` (default: ``params``), which lets a
    corrupted ``params`` act as a negative control.
    """
    truth = true_params or params
    sures = np.empty(trials)
    errs = np.empty(trials)
    for t in range(trials):
        rng = stream(seed, t)
        h = gaussian_channel(B, rng, truth.Eh)
        r = quantize_1bit(add_noise(h, truth.N0, rng))
        res = sand(r, params)
        sures[t] = res.sure_min
        d = res.h_star_beam.data - _fft(h.data)
        errs[t] = np.vdot(d, d).real / B
    return float(np.mean(sures)), float(np.mean(errs))


@dataclass(frozen=True)
class Check:
    name: str
    reference: float
    measured: float
    error: float
    tolerance: float
    passed: bool
    note: str = ""


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def format(self) -> str:
        head = f"{'check':<34} {'reference':>14} {'measured':>14} {'error':>11} {'tol':>9}  result"
        lines = [head, "-" * len(head)]
        for c in self.checks:
            lines.append(
                f"{c.name:<34} {c.reference:>14.8g} {c.measured:>14.8g} {c.error:>11.3e} "
                f"{c.tolerance:>9.2g}  {'PASS' if c.passed else 'FAIL'}"
            )
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _rel(measured: float, reference: float) -> float:
    return abs(measured - reference) / abs(reference)


def run_validation(seed: int = 2024, alpha_scale: float = 1.0, sure_trials: int = 2000) -> ValidationReport:
    """Compare the closed-form statistics and SURE against Monte Carlo.

    ``alpha_scale`` multiplies the gain handed to the denoiser in the SURE
    check only; values other than 1 are a negative control and should fail.
    """
    rep = ValidationReport()

    for i, (Eh, N0) in enumerate([(1.0, 1.0), (4.0, 0.0)]):
        ref = cross_moment(Eh, N0)
        est = mc_cross_moment(Eh, N0, 1_000_000, stream(seed, 10, i))
        err = _rel(est, ref)
        rep.add(Check(f"cross moment Eh={Eh:g} N0={N0:g}", ref, est, err, 0.01, err <= 0.01))

    for i, (Eh, N0) in enumerate([(1.0, 1.0), (1.0, 0.0)]):
        ref = compute_params(Eh, N0).alpha
        est = mc_alpha_detail(Eh, N0, 256, 10_000, stream(seed, 20, i))
        err = _rel(est.alpha, ref)
        rep.add(Check(f"alpha Eh={Eh:g} N0={N0:g} B=256", ref, est.alpha, err, 0.01, err <= 0.01))
        z = abs(est.imag) / est.imag_stderr
        rep.add(Check(f"Im E[h^H r]/B Eh={Eh:g} N0={N0:g} (z)", 0.0, est.imag, z, 3.0, z < 3.0))

    worst = 0.0
    for Eh in np.linspace(0.0, 10.0, 10):
        for N0 in np.linspace(0.1, 10.0, 10):
            p = compute_params(float(Eh), float(N0))
            worst = max(worst, abs(p.Q0 - (2.0 + p.Eh - 2.0 * p.alpha * p.Eh)))
    rep.add(Check("Q0 = 2 + Eh - 2 alpha Eh (grid)", 0.0, worst, worst, 1e-12, worst <= 1e-12))

    truth = compute_params(1.0, 0.1)
    told = truth if alpha_scale == 1.0 else truth.with_alpha(truth.alpha * alpha_scale)
    mean_sure, mean_err = sure_unbiasedness(told, B=256, trials=sure_trials, seed=seed + 1, true_params=truth)
    err = abs(mean_sure - mean_err) / mean_err
    name = "E[SURE] = MSE (B=256, N0=0.1)" + ("" if alpha_scale == 1.0 else f" alpha x{alpha_scale:g}")
    rep.add(Check(name, mean_err, mean_sure, err, 0.05, err <= 0.05))
    return rep

"""Command-line entry point: ``simulate``, ``denoise`` and ``validate``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .beamspace import ConfigurationError, read_vector_csv, write_vector_csv
from .denoisers import ALGORITHMS, denoise
from .harness import load_config, records_to_csv, run_sweep, run_validation


def _simulate(args) -> int:
    cfg = load_config(Path(args.config))
    if args.out:
        cfg = type(cfg)(**{**cfg.__dict__, "output": args.out})
    records = run_sweep(cfg)
    if not cfg.output:
        sys.stdout.write(records_to_csv(records))
    else:
        print(f"wrote {len(records)} records to {cfg.output} (SNR = Eh/N0, Eh = {cfg.Eh:g})", file=sys.stderr)
    return 0


def _denoise(args) -> int:
    vec = read_vector_csv(args.infile)
    res = denoise(args.alg, vec, args.eh, args.n0)
    if args.out:
        write_vector_csv(args.out, res.h_star_ant)
    print(f"tau_star={res.tau_star!r} gamma_star={res.gamma_star!r} sure_min={res.sure_min!r}")
    return 0


def _validate(args) -> int:
    rep = run_validation(seed=args.seed, alpha_scale=args.alpha_scale)
    print(rep.format())
    return 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beamdenoise",
        description="SURE-tuned denoising of 1-bit quantized beamspace channel estimates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a Monte Carlo MSE sweep from a config file")
    p.add_argument("--config", required=True, help="INI-style sweep configuration")
    p.add_argument("--out", help="CSV output path (overrides 'output' in the config)")
    p.set_defaults(func=_simulate)

    p = sub.add_parser("denoise", help="denoise one antenna-domain vector stored as CSV")
    p.add_argument("--alg", required=True, choices=sorted(ALGORITHMS))
    p.add_argument("--eh", type=float, default=1.0, help="per-antenna channel energy Eh")
    p.add_argument("--n0", type=float, required=True, help="thermal noise variance N0")
    p.add_argument("--in", dest="infile", required=True, help="input CSV, one 're,im' per line")
    p.add_argument("--out", help="write the denoised antenna-domain vector here")
    p.set_defaults(func=_denoise)

    p = sub.add_parser("validate", help="check closed forms and SURE against Monte Carlo")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--alpha-scale", type=float, default=1.0, help="corrupt alpha in the SURE check (negative control)")
    p.set_defaults(func=_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

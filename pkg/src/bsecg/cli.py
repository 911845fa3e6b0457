"""Command-line entry point: compress, decompress, bench, synth.

Log verbosity follows the BSECG_LOG_LEVEL environment variable (default WARNING).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .bundle import PAYLOAD_F32, PAYLOAD_F64, BundleError
from .dictionary import DictionaryError, KernelKind
from .metrics import MetricError
from .pipeline import (METHODS, PipelineConfig, PipelineError, bench_command,
                       compress_command, decompress_command, synth_command)
from .sensing import SensingError
from .signal import SignalError, SyntheticBeatSpec
from .solvers import SolverDivergenceError
from .synthetic import atom_beat_spec, ecg_like_spec

log = logging.getLogger("bsecg")

LOG_ENV = "BSECG_LOG_LEVEL"

_KNOWN_ERRORS = (PipelineError, BundleError, SignalError, DictionaryError, SensingError,
                 MetricError, SolverDivergenceError, OSError, ValueError)


def _u64(text):
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return v


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _method_list(text):
    out = [t.strip().lower() for t in text.split(",") if t.strip()]
    bad = [m for m in out if m not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s) {bad}; choose from {list(METHODS)}")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bsecg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compress", help="CSV record -> compressed bundle")
    c.add_argument("--in", dest="inp", required=True, help="input CSV (header of lead names)")
    c.add_argument("--out", required=True, help="output bundle")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--cr", type=float, help="compression ratio N/m (default 10)")
    g.add_argument("--m", type=int, help="measurements per beat")
    c.add_argument("--kernel", default="rc", choices=["rc", "g", "hs", "tg"])
    c.add_argument("--seed", type=_u64, default=0)
    c.add_argument("--lambda1", type=float, help="l1 weight (default: chosen from the noise level)")
    c.add_argument("--lambda2", type=float, help="group weight (default: lambda1 * sqrt(atoms per group * leads))")
    c.add_argument("--groups", type=int, help="number of atom groups (default: one per atom)")
    c.add_argument("--fs", type=float, default=1000.0, help="sampling rate, Hz")
    c.add_argument("--n", type=int, default=800, help="beat window length in samples")
    c.add_argument("--f32", action="store_true", help="store measurements as float32")
    c.add_argument("--identity", action="store_true", help="identity sensing (debug, needs CR=1)")
    c.add_argument("--no-sparse-coding", action="store_true",
                   help="skip the sparse-coding sparsity report")
    c.add_argument("--workers", type=int, default=1)

    d = sub.add_parser("decompress", help="bundle -> reconstructed CSV")
    d.add_argument("--in", dest="inp", required=True)
    d.add_argument("--out", required=True)
    d.add_argument("--workers", type=int, default=1)

    b = sub.add_parser("bench", help="error / PRD / WDD over a directory of CSV subjects")
    b.add_argument("--data", required=True, help="directory of subject CSV files")
    b.add_argument("--crs", type=_float_list, default=[4.0, 6.0, 8.0, 10.0])
    b.add_argument("--methods", type=_method_list, default=list(METHODS))
    b.add_argument("--out", required=True, help="output directory")
    b.add_argument("--seed", type=_u64, default=0)
    b.add_argument("--groups", type=int)
    b.add_argument("--fs", type=float, default=1000.0)
    b.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("synth", help="write a synthetic beat (or a dataset of them) as CSV")
    s.add_argument("--spec", help="JSON beat spec; overrides --preset")
    s.add_argument("--preset", default="ecg", choices=["ecg", "atom"])
    s.add_argument("--leads", type=int, default=12)
    s.add_argument("--seed", type=_u64, default=0, help="subject seed for presets")
    s.add_argument("--noise-std", type=float, default=0.0, help="additive noise std, mV")
    s.add_argument("--snr-db", type=float, help="add white noise at this per-lead SNR")
    s.add_argument("--noise-seed", type=_u64, default=0)
    s.add_argument("--beats", type=int, default=1, help="repeat the beat this many times")
    s.add_argument("--subjects", type=int,
                   help="write this many subjects (seeds seed, seed+1, ...) into --out as a directory")
    s.add_argument("--out", required=True)
    return p


def _preset(args, seed):
    if args.preset == "atom":
        return atom_beat_spec(args.leads, seed, noise_std=args.noise_std)
    return ecg_like_spec(args.leads, seed, noise_std=args.noise_std)


def _run(args):
    if args.command == "compress":
        cfg = PipelineConfig(
            kernel=KernelKind.parse(args.kernel), n=args.n, fs=args.fs, m=args.m, cr=args.cr,
            seed=args.seed, lambda1=args.lambda1, lambda2=args.lambda2, n_groups=args.groups,
            payload_type=PAYLOAD_F32 if args.f32 else PAYLOAD_F64,
            identity_sensing=args.identity, sparse_coding=not args.no_sparse_coding,
            workers=args.workers)
        bundle = compress_command(cfg, args.inp, args.out)
        log.info("wrote %s: %d beat(s), m=%d, S=%d", args.out, len(bundle.beats), bundle.m,
                 bundle.n_leads)
    elif args.command == "decompress":
        decompress_command(args.inp, args.out, args.workers)
    elif args.command == "bench":
        cfg = PipelineConfig(seed=args.seed, n_groups=args.groups, fs=args.fs,
                             sparse_coding=False, workers=args.workers)
        rows = bench_command(args.data, args.crs, args.methods, args.out, cfg)
        log.info("wrote %d report rows to %s", len(rows), args.out)
    elif args.command == "synth":
        if args.spec:
            try:
                spec = SyntheticBeatSpec.from_dict(json.loads(Path(args.spec).read_text()))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise SignalError(f"{args.spec}: invalid spec ({exc})") from None
            specs = [spec]
        elif args.subjects:
            specs = [_preset(args, args.seed + i) for i in range(args.subjects)]
        else:
            specs = [_preset(args, args.seed)]
        if args.subjects and not args.spec:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            for i, spec in enumerate(specs):
                synth_command(spec, out / f"subject{i:03d}.csv", args.beats, args.snr_db,
                              args.noise_seed + i)
        else:
            synth_command(specs[0], args.out, args.beats, args.snr_db, args.noise_seed)
    return 0


def main(argv=None) -> int:
    level = os.environ.get(LOG_ENV, "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except _KNOWN_ERRORS as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"bsecg {args.command}: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

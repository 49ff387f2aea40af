"""Command-line interface.

Subcommands:
  simulate  Monte-Carlo SER/BER sweep to CSV
  bound     analytic union bound sweep to CSV
  psd       Welch PSD of a random coded waveform to CSV
  bsa       labeling optimization for a codebook
  search    constant-weight code search
  validate  check a codebook file
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .analysis import (Mapping, bsa_cost, bsa_optimize, low_freq_power_fraction,
                       psd_estimate, union_bound_ser)
from .codebook import (Codebook, SearchFailure, distance_spectrum, load_codebook,
                       max_run_length, save_codebook, search_constant_weight_code,
                       validate_codebook)
from .codebook import builtin_4b6b, builtin_5b10b, builtin_manchester
from .codecs import encode_8b10b, encode_block
from .channel import modulate
from .linecodes import CODE_NAMES, get_code
from .sweep import SweepConfig, run_sweep, write_csv

__all__ = ["main"]


class CliError(Exception):
    pass


def parse_ebn0(text: str) -> tuple[float, ...]:
    """Parse '9,10,11' or 'start:stop:step' (stop inclusive up to rounding)."""
    text = text.strip()
    if not text:
        return ()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliError(f"bad range {text!r}: expected start:stop:step")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise CliError(f"bad range {text!r}: values must be numbers") from None
        if step <= 0:
            raise CliError("range step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        if count <= 0:
            raise CliError(f"empty range {text!r}")
        return tuple(float(start + i * step) for i in range(count))
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise CliError(f"bad value list {text!r}") from None


def apply_config_file(args: argparse.Namespace, path: str) -> None:
    """Apply 'key = value' lines; keys must match existing options and their
    values are coerced to the option's current type. File wins over flags."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.readlines()
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}") from None
    for ln in lines:
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        if "=" not in ln:
            raise CliError(f"bad config line {ln!r}: expected key=value")
        key, value = (p.strip() for p in ln.split("=", 1))
        key = key.replace("-", "_")
        if not hasattr(args, key):
            raise CliError(f"unknown config key {key!r}")
        current = getattr(args, key)
        try:
            if isinstance(current, bool):
                coerced = value.lower() in ("1", "true", "yes", "on")
            elif isinstance(current, int):
                coerced = int(value)
            elif isinstance(current, float):
                coerced = float(value)
            elif isinstance(current, tuple):
                coerced = parse_ebn0(value)
            else:
                coerced = value
        except ValueError:
            raise CliError(f"bad config value for {key!r}: {value!r}") from None
        setattr(args, key, coerced)


def _load_any_codebook(name_or_path: str) -> Codebook:
    builtin = {"5b10b": builtin_5b10b, "4b6b": builtin_4b6b,
               "manchester": builtin_manchester}
    if name_or_path in builtin:
        return builtin[name_or_path]()
    try:
        return load_codebook(name_or_path)
    except OSError as exc:
        raise CliError(f"cannot read codebook {name_or_path}: {exc}") from None
    except ValueError as exc:
        raise CliError(f"bad codebook {name_or_path}: {exc}") from None


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def cmd_simulate(args: argparse.Namespace) -> int:
    points = parse_ebn0(args.ebn0)
    if not points:
        raise CliError("no Eb/N0 points given")
    cfg = SweepConfig(code=args.code, eb_n0_db=points, trials=args.trials,
                      seed=args.seed, decoder=args.decoder,
                      max_bit_errors=args.max_bit_errors,
                      batch_symbols=args.batch_symbols, workers=args.workers,
                      include_timing=args.timing)
    results = run_sweep(cfg)
    stream, close = _open_out(args.output)
    try:
        write_csv(results, cfg, stream)
    finally:
        if close:
            stream.close()
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    points = parse_ebn0(args.ebn0)
    if not points:
        raise CliError("no Eb/N0 points given")
    code = get_code(args.code)
    if code.bound_spectrum_step_energy is None or code.codebook is None:
        raise CliError(
            f"{args.code} has no single-block union bound (sequence-coded); "
            "choose a table code")
    spectrum = distance_spectrum(code.codebook).average
    k = code.data_bits_per_symbol
    stream, close = _open_out(args.output)
    try:
        stream.write("# vlclab-bound v1\n")
        stream.write("code,eb_n0_db,ser_upper_bound,ber_lower,ber_upper\n")
        for db in points:
            pe = union_bound_ser(spectrum, db, float(code.on_chips_per_data_bit),
                                 step_energy_factor=code.bound_spectrum_step_energy)
            stream.write(f"{args.code},{db:.12g},{pe:.12g},{pe / k:.12g},{pe:.12g}\n")
    finally:
        if close:
            stream.close()
    return 0


def cmd_psd(args: argparse.Namespace) -> int:
    code = get_code(args.code)
    rng = np.random.default_rng(args.seed)
    if args.code == "8b10b":
        data = rng.integers(0, 256, size=args.symbols)
        chips, _ = encode_8b10b(data, rd=-1)
    else:
        bits = rng.integers(0, 2, size=args.symbols * code.data_bits_per_symbol)
        chips = encode_block(code.codebook, bits.astype(np.uint8))
    wave = modulate(chips, code.modulation)
    est = psd_estimate(wave, segment_length=args.segment_length,
                       overlap_fraction=args.overlap, window=args.window)
    frac = low_freq_power_fraction(est, args.cutoff)
    stream, close = _open_out(args.output)
    try:
        stream.write("# vlclab-psd v1\n")
        stream.write(f"# code={args.code} symbols={args.symbols} "
                     f"segments={est.segment_count} "
                     f"low_freq_fraction@{args.cutoff:g}={frac:.6g}\n")
        stream.write("f_per_chip,density\n")
        for f, d in zip(est.freqs, est.density):
            stream.write(f"{f:.12g},{d:.12g}\n")
    finally:
        if close:
            stream.close()
    return 0


def cmd_bsa(args: argparse.Namespace) -> int:
    cb = _load_any_codebook(args.codebook)
    rng = np.random.default_rng(args.seed)
    if args.init == "identity":
        init = Mapping.identity(cb.size)
    else:
        init = Mapping(perm=tuple(int(v) for v in rng.permutation(cb.size)))
    code_gamma = args.on_chips_per_data_bit
    if code_gamma is None:
        code_gamma = cb.words.sum() / (cb.size * cb.k)  # measured ON chips per data bit
    n0 = float(code_gamma) / (10.0 ** (args.ebn0 / 10.0))
    result = bsa_optimize(cb, init, n0)
    report = bsa_cost(result.mapping, cb, n0)
    # store as a codebook: dataword label -> codeword of its assigned slot
    out_words = np.zeros_like(cb.words)
    for slot, label in enumerate(result.mapping.perm):
        out_words[label] = cb.words[slot]
    mapped = Codebook(k=cb.k, n=cb.n, words=out_words, control=cb.control,
                      weight=cb.weight)
    save_codebook(mapped, args.output)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as f:
            f.write("# vlclab-bsa-trace v1\n")
            f.write("step,total_cost,ber_estimate\n")
            for i, cost in enumerate(result.trace):
                f.write(f"{i},{cost:.12g},{cost / cb.k:.12g}\n")
    print(f"bsa: {len(result.trace) - 1} swaps, "
          f"cost {result.trace[0]:.6g} -> {result.final_cost:.6g}, "
          f"ber estimate {report.ber_estimate:.6g} at {args.ebn0:g} dB")
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    try:
        cb = search_constant_weight_code(
            n=args.n, w=args.weight, d_min=args.min_distance,
            max_run=args.max_run, target_size=args.size, seed=args.seed,
            restarts=args.restarts, steps=args.steps)
    except (ValueError, SearchFailure) as exc:
        raise CliError(str(exc)) from None
    save_codebook(cb, args.output)
    total = cb.size + cb.control.shape[0]
    print(f"search: found {total} words (n={args.n}, w={args.weight}, "
          f"d>={args.min_distance}), k={cb.k}, {cb.control.shape[0]} control")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        cb = load_codebook(args.codebook)
    except OSError as exc:
        raise CliError(f"cannot read codebook {args.codebook}: {exc}") from None
    except ValueError as exc:
        print(f"vlclab: malformed codebook: {exc}", file=sys.stderr)
        return 2
    report = validate_codebook(cb, expect_min_distance=args.min_distance,
                               expect_max_run=args.max_run)
    run = max_run_length(cb).max_run
    print(f"codebook: k={cb.k} n={cb.n} entries={cb.size} "
          f"control={cb.control.shape[0]} weights={list(report.weights)} "
          f"min_distance={report.min_distance} max_run={run}")
    if report.ok:
        print("valid")
        return 0
    for v in report.violations:
        print(f"violation: {v}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vlclab",
        description="Line-coding laboratory: constant-weight codes, bounds, "
                    "and Monte-Carlo error-rate sweeps.")
    parser.add_argument("--version", action="version",
                        version=f"vlclab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte-Carlo SER/BER sweep")
    sim.add_argument("--code", choices=CODE_NAMES, required=True)
    sim.add_argument("--ebn0", required=True,
                     help="dB points: '9,10,11' or 'start:stop:step'")
    sim.add_argument("--trials", type=int, default=1_000_000,
                     help="symbols per point (default 1e6)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--decoder", choices=("soft", "hard"), default="soft")
    sim.add_argument("--max-bit-errors", type=int, default=200,
                     help="stop a point after this many bit errors (0 = never)")
    sim.add_argument("--batch-symbols", type=int, default=1 << 15)
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--timing", action="store_true",
                     help="append a wallclock column (breaks byte-level "
                          "reproducibility of the CSV)")
    sim.add_argument("--config", help="key=value file overriding the flags")
    sim.add_argument("--output", "-o", default="-")
    sim.set_defaults(func=cmd_simulate)

    bnd = sub.add_parser("bound", help="analytic union bound sweep")
    bnd.add_argument("--code", choices=CODE_NAMES, required=True)
    bnd.add_argument("--ebn0", required=True)
    bnd.add_argument("--config", help="key=value file overriding the flags")
    bnd.add_argument("--output", "-o", default="-")
    bnd.set_defaults(func=cmd_bound)

    psd = sub.add_parser("psd", help="Welch PSD of a random coded waveform")
    psd.add_argument("--code", choices=CODE_NAMES, required=True)
    psd.add_argument("--symbols", type=int, default=200_000)
    psd.add_argument("--seed", type=int, default=0)
    psd.add_argument("--segment-length", type=int, default=1024)
    psd.add_argument("--overlap", type=float, default=0.5)
    psd.add_argument("--window", default="hann")
    psd.add_argument("--cutoff", type=float, default=0.05,
                     help="low-frequency report cutoff in cycles/chip")
    psd.add_argument("--config", help="key=value file overriding the flags")
    psd.add_argument("--output", "-o", default="-")
    psd.set_defaults(func=cmd_psd)

    bsa = sub.add_parser("bsa", help="optimize dataword-to-codeword labeling")
    bsa.add_argument("--codebook", required=True,
                     help="path or builtin name (5b10b, 4b6b, manchester)")
    bsa.add_argument("--ebn0", type=float, default=9.0,
                     help="design point in dB (default 9)")
    bsa.add_argument("--init", choices=("identity", "random"), default="random")
    bsa.add_argument("--seed", type=int, default=0)
    bsa.add_argument("--on-chips-per-data-bit", type=float, default=None,
                     help="energy ledger override (default: measured from table)")
    bsa.add_argument("--trace", help="write cost trace CSV here")
    bsa.add_argument("--config", help="key=value file overriding the flags")
    bsa.add_argument("--output", "-o", required=True,
                     help="write the relabeled codebook here")
    bsa.set_defaults(func=cmd_bsa)

    srch = sub.add_parser("search", help="search a constant-weight code")
    srch.add_argument("--n", type=int, required=True)
    srch.add_argument("--weight", type=int, required=True)
    srch.add_argument("--min-distance", type=int, required=True)
    srch.add_argument("--max-run", type=int, default=None)
    srch.add_argument("--size", type=int, required=True,
                      help="number of words to find (entries + control)")
    srch.add_argument("--seed", type=int, default=0)
    srch.add_argument("--restarts", type=int, default=40)
    srch.add_argument("--steps", type=int, default=20000)
    srch.add_argument("--config", help="key=value file overriding the flags")
    srch.add_argument("--output", "-o", required=True)
    srch.set_defaults(func=cmd_search)

    val = sub.add_parser("validate", help="check a codebook file")
    val.add_argument("codebook")
    val.add_argument("--min-distance", type=int, default=None)
    val.add_argument("--max-run", type=int, default=None)
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "config", None):
            apply_config_file(args, args.config)
        return args.func(args)
    except CliError as exc:
        print(f"vlclab: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0

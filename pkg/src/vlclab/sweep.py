"""Monte-Carlo SER/BER sweeps with reproducible sharding.

Random draws are keyed by (master seed, sweep point index, batch index),
so the aggregated error counts are independent of worker count and batch
scheduling. Early stopping truncates the batch sequence at the first
batch where the cumulative bit error count reaches the target, again in
batch-index order, which keeps parallel runs bit-identical.
"""

from __future__ import annotations

import dataclasses
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from .analysis import union_bound_ser
from .channel import eb_n0_to_sigma, modulate
from .codebook import distance_spectrum
from .codecs import (datawords_to_bits, decode_8b10b_hard, decode_8b10b_soft,
                     decode_block_hard, decode_manchester, encode_8b10b)
from .linecodes import LineCode, get_code

__all__ = ["SweepConfig", "SweepPoint", "run_point", "run_sweep", "write_csv"]

CSV_FORMAT_LINE = "# vlclab-sweep v1"


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    """Sweep controls. ``trials`` counts symbols (blocks) per point;
    ``max_bit_errors`` stops a point early once reached (0 disables)."""

    code: str
    eb_n0_db: tuple[float, ...]
    trials: int = 1_000_000
    seed: int = 0
    decoder: str = "soft"
    max_bit_errors: int = 200
    batch_symbols: int = 1 << 15
    workers: int = 1
    include_timing: bool = False

    def __post_init__(self) -> None:
        if self.decoder not in ("soft", "hard"):
            raise ValueError("decoder must be 'soft' or 'hard'")
        if self.trials <= 0 or self.batch_symbols <= 0:
            raise ValueError("trials and batch_symbols must be positive")
        if self.workers <= 0:
            raise ValueError("workers must be positive")


@dataclasses.dataclass(frozen=True)
class SweepPoint:
    """Measured error rates at one Eb/N0 point, with the analytic bound
    (None for codes without a single-block bound) and the bit-error
    bracket implied by the measured symbol error rate."""

    eb_n0_db: float
    symbols_sent: int
    symbol_errors: int
    bits_sent: int
    bit_errors: int
    union_bound: float | None
    wallclock_s: float

    @property
    def ser(self) -> float:
        return self.symbol_errors / self.symbols_sent if self.symbols_sent else 0.0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_sent if self.bits_sent else 0.0

    @property
    def ber_lower(self) -> float:
        """SER / k: at least one bit flips per symbol error."""
        k = self.bits_sent // self.symbols_sent if self.symbols_sent else 1
        return self.ser / k

    @property
    def ber_upper(self) -> float:
        """SER: at most all bits flip per symbol error."""
        return self.ser


def _popcount_table(k: int) -> np.ndarray:
    values = np.arange(1 << k, dtype=np.int64)
    out = np.zeros(1 << k, dtype=np.int64)
    v = values.copy()
    for _ in range(k):
        out += v & 1
        v >>= 1
    return out


def _batch_rng(seed: int, point_index: int, batch_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(point_index, batch_index))
    return np.random.default_rng(ss)


def _run_batch_table(code: LineCode, sigma: float, decoder: str,
                     symbols: int, rng: np.random.Generator,
                     tx_table: np.ndarray,
                     popcnt: np.ndarray) -> tuple[int, int]:
    """One batch for a pure table code: draw datawords, modulate, add noise,
    decode, count symbol and bit errors."""
    size = tx_table.shape[0]
    sent = rng.integers(0, size, size=symbols)
    rx = tx_table[sent] + rng.normal(0.0, sigma, size=(symbols, tx_table.shape[1]))
    if decoder == "soft":
        scores = rx @ tx_table.T - 0.5 * (tx_table * tx_table).sum(axis=1)
        decided = scores.argmax(axis=1)
    else:
        cb = code.codebook
        if code.modulation.kind == "vppm50":
            # slice each half-slot pair back to a coded bit by comparing halves
            chips = (rx[:, 0::2] > rx[:, 1::2]).astype(np.uint8)
        else:
            chips = (rx > 0.5).astype(np.uint8)  # midpoint of unit on/off levels
        if code.name == "manchester":
            bits, _ = decode_manchester(chips.ravel())
            decided = bits.astype(np.int64)
        else:
            outcomes = decode_block_hard(cb, chips.ravel())
            decided = np.array([o.dataword for o in outcomes], dtype=np.int64)
    diff = sent ^ decided
    return int(np.count_nonzero(diff)), int(popcnt[diff].sum())


def _run_batch_8b10b(sigma: float, decoder: str, symbols: int,
                     rng: np.random.Generator,
                     popcnt: np.ndarray) -> tuple[int, int]:
    """One batch as an independent 8b/10b stream starting at negative
    running disparity."""
    sent = rng.integers(0, 256, size=symbols)
    chips, _ = encode_8b10b(sent, rd=-1)
    rx = modulate(chips).astype(float)
    rx += rng.normal(0.0, sigma, size=rx.shape)
    if decoder == "soft":
        decided, _ = decode_8b10b_soft(rx, rd=-1)
    else:
        sliced = (rx > 0.5).astype(np.uint8)
        decided, _, _ = decode_8b10b_hard(sliced, rd=-1)
    diff = sent ^ decided
    return int(np.count_nonzero(diff)), int(popcnt[diff].sum())


def run_point(code: LineCode, eb_n0_db: float, cfg: SweepConfig,
              point_index: int) -> SweepPoint:
    """Simulate one operating point. Batches are evaluated in index order
    for the stop rule; workers only parallelize the computation."""
    start = time.perf_counter()
    _, chan = eb_n0_to_sigma(code.on_chips_per_data_bit, eb_n0_db)
    sigma = chan.sigma
    k = code.data_bits_per_symbol
    popcnt = _popcount_table(k)
    if code.codebook is not None:
        tx_table = modulate(code.codebook.words, code.modulation).astype(float)
    else:
        tx_table = None

    n_batches = -(-cfg.trials // cfg.batch_symbols)

    def batch_sizes() -> Iterable[tuple[int, int]]:
        for b in range(n_batches):
            size = min(cfg.batch_symbols, cfg.trials - b * cfg.batch_symbols)
            yield b, size

    def run_one(args: tuple[int, int]) -> tuple[int, int, int]:
        b, size = args
        rng = _batch_rng(cfg.seed, point_index, b)
        if tx_table is not None:
            se, be = _run_batch_table(code, sigma, cfg.decoder, size, rng,
                                      tx_table, popcnt)
        else:
            se, be = _run_batch_8b10b(sigma, cfg.decoder, size, rng, popcnt)
        return size, se, be

    symbols = symbol_errors = bit_errors = 0
    stop = cfg.max_bit_errors if cfg.max_bit_errors > 0 else None
    jobs = list(batch_sizes())
    if cfg.workers == 1:
        results = map(run_one, jobs)
        for size, se, be in results:
            symbols += size
            symbol_errors += se
            bit_errors += be
            if stop is not None and bit_errors >= stop:
                break
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            done = False
            pos = 0
            while pos < len(jobs) and not done:
                wave = jobs[pos:pos + cfg.workers]
                for size, se, be in pool.map(run_one, wave):
                    symbols += size
                    symbol_errors += se
                    bit_errors += be
                    if stop is not None and bit_errors >= stop:
                        done = True
                        break
                pos += len(wave)

    if code.bound_spectrum_step_energy is not None:
        spectrum = distance_spectrum(code.codebook).average
        bound = union_bound_ser(spectrum, eb_n0_db,
                                float(code.on_chips_per_data_bit),
                                step_energy_factor=code.bound_spectrum_step_energy)
    else:
        bound = None
    return SweepPoint(eb_n0_db=eb_n0_db, symbols_sent=symbols,
                      symbol_errors=symbol_errors, bits_sent=symbols * k,
                      bit_errors=bit_errors, union_bound=bound,
                      wallclock_s=time.perf_counter() - start)


def run_sweep(cfg: SweepConfig) -> list[SweepPoint]:
    code = get_code(cfg.code)
    return [run_point(code, db, cfg, i) for i, db in enumerate(cfg.eb_n0_db)]


def write_csv(points: Sequence[SweepPoint], cfg: SweepConfig, stream) -> None:
    """Versioned CSV: a format tag line, a header, one row per point.
    Wallclock appears only when requested so default output is
    reproducible byte for byte."""
    cols = ["code", "decoder", "eb_n0_db", "symbols", "symbol_errors", "ser",
            "bits", "bit_errors", "ber", "ber_lower", "ber_upper",
            "union_bound_ser"]
    if cfg.include_timing:
        cols.append("wallclock_s")
    stream.write(CSV_FORMAT_LINE + "\n")
    stream.write(",".join(cols) + "\n")
    for p in points:
        row = [cfg.code, cfg.decoder, f"{p.eb_n0_db:.12g}", str(p.symbols_sent),
               str(p.symbol_errors), f"{p.ser:.12g}", str(p.bits_sent),
               str(p.bit_errors), f"{p.ber:.12g}", f"{p.ber_lower:.12g}",
               f"{p.ber_upper:.12g}",
               "" if p.union_bound is None else f"{p.union_bound:.12g}"]
        if cfg.include_timing:
            row.append(f"{p.wallclock_s:.3f}")
        stream.write(",".join(row) + "\n")

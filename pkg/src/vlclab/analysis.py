"""Analytic error bounds, labeling optimization, and spectral estimation.

The pairwise error probability between two equal-energy intensity
waveforms at squared sample distance D is Q(sqrt(D / (2 N0))). For a
constant-weight OOK code, a codeword pair at Hamming distance 2r differs
in 2r chip slots, giving D = 2 r * pulse_energy; for 50% VPPM each
differing coded bit doubles its contribution.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy import signal, special

from .codebook import Codebook

__all__ = [
    "BsaResult",
    "CostReport",
    "Mapping",
    "PsdEstimate",
    "ber_bounds",
    "bsa_cost",
    "bsa_optimize",
    "low_freq_power_fraction",
    "psd_estimate",
    "q_function",
    "union_bound_ser",
]


def q_function(x):
    """Gaussian tail probability Q(x). Scalar in, float out; arrays pass
    through elementwise."""
    out = 0.5 * special.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def union_bound_ser(average_spectrum: np.ndarray,
                    eb_n0_db: float,
                    on_chips_per_data_bit: float,
                    pulse_energy: float = 1.0,
                    step_energy_factor: float = 1.0) -> float:
    """Union upper bound on block (symbol) error probability.

    ``average_spectrum[r-1]`` is the average number of neighbors at Hamming
    distance 2r. Each such pair contributes Q(sqrt(step * r * eps / N0))
    where eps is the pulse energy and N0 follows from the Eb ledger.
    """
    gamma = float(on_chips_per_data_bit)
    eb = gamma * pulse_energy
    n0 = eb / (10.0 ** (eb_n0_db / 10.0))
    avg = np.asarray(average_spectrum, dtype=float)
    r = np.arange(1, avg.size + 1)
    args = np.sqrt(step_energy_factor * r * pulse_energy / n0)
    return float((avg * q_function(args)).sum())


def ber_bounds(symbol_error_prob: float, data_bits: int) -> tuple[float, float]:
    """Bracket bit error probability given block error probability: at least
    one and at most all of the k data bits flip per block error."""
    return symbol_error_prob / data_bits, symbol_error_prob


# ---------------------------------------------------------------------------
# labeling optimization (binary switching)


@dataclasses.dataclass(frozen=True)
class Mapping:
    """Assignment of dataword labels to codeword slots: ``perm[slot]`` is the
    dataword carried by codeword ``slot``."""

    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("mapping must be a permutation of 0..M-1")

    @classmethod
    def identity(cls, size: int) -> "Mapping":
        return cls(perm=tuple(range(size)))


@dataclasses.dataclass(frozen=True)
class CostReport:
    """Per-codeword and total label-weighted pairwise error cost; the bit
    error estimate divides by the bits per symbol."""

    per_codeword: np.ndarray
    total: float
    ber_estimate: float


def _pep_matrix(cb: Codebook, n0: float, pulse_energy: float) -> np.ndarray:
    words = cb.words.astype(np.int64)
    h = (words[:, None, :] != words[None, :, :]).sum(axis=2)
    pep = q_function(np.sqrt(h * pulse_energy / (2.0 * n0)))
    np.fill_diagonal(pep, 0.0)
    return pep


def _bit_distance_matrix(size: int, k: int, perm: np.ndarray) -> np.ndarray:
    labels = perm
    x = labels[:, None] ^ labels[None, :]
    d = np.zeros((size, size), dtype=np.int64)
    for _ in range(k):
        d += x & 1
        x >>= 1
    return d


def bsa_cost(mapping: Mapping, cb: Codebook, n0: float,
             pulse_energy: float = 1.0) -> CostReport:
    """Estimated bit error contribution of a labeling at a noise level.

    Per codeword: the sum over partners of (label Hamming distance) times
    the pairwise error probability at the codeword pair's chip distance,
    divided by the codebook size (uniform source). The total sums these
    contributions; dividing by the bits per symbol estimates the bit error
    probability under the union bound.
    """
    size = cb.size
    perm = np.asarray(mapping.perm, dtype=np.int64)
    pep = _pep_matrix(cb, n0, pulse_energy)
    d = _bit_distance_matrix(size, cb.k, perm)
    per = (d * pep).sum(axis=1) / size
    total = float(per.sum())
    return CostReport(per_codeword=per, total=total, ber_estimate=total / cb.k)


@dataclasses.dataclass(frozen=True)
class BsaResult:
    mapping: Mapping
    trace: tuple[float, ...]

    @property
    def final_cost(self) -> float:
        return self.trace[-1]


def bsa_optimize(cb: Codebook, init: Mapping, n0: float,
                 pulse_energy: float = 1.0) -> BsaResult:
    """Binary switching: repeatedly visit codewords in order of decreasing
    cost contribution and apply the label swap with the largest strict
    decrease in total cost, until a full pass makes no swap.

    Deterministic given the initial mapping; the trace records the total
    cost after the initial state and after every accepted swap.
    """
    size = cb.size
    pep = _pep_matrix(cb, n0, pulse_energy)
    perm = np.array(init.perm, dtype=np.int64)

    def popcount(values: np.ndarray) -> np.ndarray:
        out = np.zeros_like(values)
        v = values.copy()
        for _ in range(cb.k):
            out += v & 1
            v >>= 1
        return out

    d = popcount(perm[:, None] ^ perm[None, :])
    per = (d * pep).sum(axis=1) / size
    total = float(per.sum())
    trace = [total]
    scale = max(total, 1e-300)
    improved = True
    while improved:
        improved = False
        order = np.argsort(-per, kind="stable")
        for a in order:
            a = int(a)
            # delta of swapping labels at slots a and b, for every b
            others = np.arange(size)
            d_a = popcount(perm[a] ^ perm)          # current label of a vs all labels
            best_delta = 0.0
            best_b = -1
            for b in range(size):
                if b == a:
                    continue
                mask = (others != a) & (others != b)
                db_vs = popcount(perm[b] ^ perm[mask])
                da_vs = d_a[mask]
                delta = 2.0 / size * float(
                    ((db_vs - da_vs) * (pep[a, mask] - pep[b, mask])).sum())
                if delta < best_delta:
                    best_delta = delta
                    best_b = b
            if best_b >= 0 and best_delta < -1e-12 * scale:
                b = best_b
                perm[a], perm[b] = perm[b], perm[a]
                d = popcount(perm[:, None] ^ perm[None, :])
                per = (d * pep).sum(axis=1) / size
                total = float(per.sum())
                trace.append(total)
                improved = True
    return BsaResult(mapping=Mapping(perm=tuple(int(v) for v in perm)),
                     trace=tuple(trace))


# ---------------------------------------------------------------------------
# spectral estimation


@dataclasses.dataclass(frozen=True)
class PsdEstimate:
    """One-sided Welch estimate with frequency in cycles per chip slot."""

    freqs: np.ndarray
    density: np.ndarray
    segment_length: int
    segment_count: int

    @property
    def bin_width(self) -> float:
        return float(self.freqs[1] - self.freqs[0])

    @property
    def total_power(self) -> float:
        return float(self.density.sum() * self.bin_width)

    @property
    def ac_power(self) -> float:
        return float(self.density[1:].sum() * self.bin_width)


def psd_estimate(waveform: np.ndarray,
                 segment_length: int = 1024,
                 overlap_fraction: float = 0.5,
                 window: str = "hann") -> PsdEstimate:
    """Welch power spectral density of a chip waveform (1 sample per chip).

    The mean is removed before windowing and restored as an impulse in the
    DC bin, so a nonzero mean cannot leak through the window mainlobe into
    the low-frequency bins; the integral of the density equals the
    mean-square value of the waveform.
    """
    wave = np.asarray(waveform, dtype=float).ravel()
    if segment_length < 8:
        raise ValueError("segment_length must be at least 8")
    if wave.size < segment_length:
        raise ValueError(
            f"waveform has {wave.size} samples, below segment_length={segment_length}")
    if not 0.0 <= overlap_fraction < 1.0:
        raise ValueError("overlap_fraction must be in [0, 1)")
    mean = wave.mean()
    noverlap = int(segment_length * overlap_fraction)
    freqs, density = signal.welch(
        wave - mean, fs=1.0, window=window, nperseg=segment_length,
        noverlap=noverlap, detrend=False, return_onesided=True,
        scaling="density")
    density = density.copy()
    df = float(freqs[1] - freqs[0])
    density[0] += mean * mean / df
    step = segment_length - noverlap
    count = 1 + (wave.size - segment_length) // step
    return PsdEstimate(freqs=freqs, density=density,
                       segment_length=segment_length, segment_count=count)


def low_freq_power_fraction(psd: PsdEstimate, cutoff: float) -> float:
    """Fraction of the AC power at frequencies in (0, cutoff]: the DC bin is
    excluded from both numerator and denominator. A pure-DC waveform has no
    AC power and yields 0."""
    if not 0.0 < cutoff <= 0.5:
        raise ValueError("cutoff must be in (0, 0.5] cycles per chip")
    ac = psd.density[1:]
    freqs = psd.freqs[1:]
    tot = float(ac.sum())
    if tot <= 0.0:
        return 0.0
    return float(ac[freqs <= cutoff].sum()) / tot

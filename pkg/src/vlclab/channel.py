"""Intensity-modulated AWGN channel model and Eb/N0 bookkeeping.

Chips are mapped to optical intensity samples (one sample per chip slot),
scaled by a flat channel gain, and perturbed by additive white Gaussian
noise of two-sided level N0/2 per sample. Energy bookkeeping is in terms
of the pulse energy: the received-energy difference between an ON and an
OFF chip slot.
"""

from __future__ import annotations

import dataclasses
import math
from fractions import Fraction

import numpy as np

__all__ = [
    "ChannelConfig",
    "EbN0Point",
    "ModulationMap",
    "OOK",
    "VPPM50",
    "eb_n0_to_sigma",
    "modulate",
    "sigma_to_eb_n0",
    "transmit",
]


@dataclasses.dataclass(frozen=True)
class ModulationMap:
    """How coded bits become intensity samples.

    ``ook`` sends each coded bit as one sample at on/off level. ``vppm50``
    sends each coded bit as two half-slot samples, pulse position leading
    for a 1 and trailing for a 0 (50% duty cycle).
    """

    kind: str
    off_level: float = 0.0
    on_level: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("ook", "vppm50"):
            raise ValueError(f"unknown modulation kind {self.kind!r}")
        if not self.on_level > self.off_level:
            raise ValueError("on_level must exceed off_level")

    @property
    def chips_per_coded_bit(self) -> int:
        return 1 if self.kind == "ook" else 2


OOK = ModulationMap(kind="ook")
VPPM50 = ModulationMap(kind="vppm50")


def modulate(chips: np.ndarray, m: ModulationMap = OOK) -> np.ndarray:
    """Map an array of coded bits (last axis = time) to intensity samples."""
    chips = np.asarray(chips)
    if m.kind == "ook":
        return np.where(chips > 0, m.on_level, m.off_level)
    lead = np.where(chips > 0, m.on_level, m.off_level)
    trail = np.where(chips > 0, m.off_level, m.on_level)
    out = np.empty(chips.shape[:-1] + (2 * chips.shape[-1],), dtype=float)
    out[..., 0::2] = lead
    out[..., 1::2] = trail
    return out


@dataclasses.dataclass(frozen=True)
class ChannelConfig:
    """Flat-gain AWGN channel: y = alpha * x + z, z ~ N(0, n0/2) per sample.

    ``pulse_energy`` is the ON/OFF received-energy difference per chip slot
    at unit gain; it sets the scale that noise levels are quoted against.
    """

    n0: float
    alpha: float = 1.0
    pulse_energy: float = 1.0
    seed: int | None = None

    def __post_init__(self) -> None:
        if not self.n0 > 0:
            raise ValueError("n0 must be positive (use a tiny value for near-noiseless runs)")
        if not self.pulse_energy > 0:
            raise ValueError("pulse_energy must be positive")

    @property
    def sigma(self) -> float:
        """Per-sample noise standard deviation, sqrt(n0/2)."""
        return math.sqrt(self.n0 / 2.0)


def transmit(samples: np.ndarray, cfg: ChannelConfig,
             rng: np.random.Generator | None = None) -> np.ndarray:
    """Apply gain and add white Gaussian noise to intensity samples."""
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    samples = np.asarray(samples, dtype=float)
    return cfg.alpha * samples + rng.normal(0.0, cfg.sigma, size=samples.shape)


@dataclasses.dataclass(frozen=True)
class EbN0Point:
    """A per-data-bit SNR operating point with its resolved energy terms."""

    eb_n0_db: float
    eb: float
    n0: float

    @property
    def sigma(self) -> float:
        return math.sqrt(self.n0 / 2.0)


def eb_n0_to_sigma(on_chips_per_data_bit: float | Fraction,
                   eb_n0_db: float,
                   pulse_energy: float = 1.0,
                   alpha: float = 1.0,
                   seed: int | None = None) -> tuple[EbN0Point, ChannelConfig]:
    """Resolve an Eb/N0 operating point into a channel configuration.

    Energy per data bit is ``on_chips_per_data_bit * pulse_energy``: the
    ledger charges each data bit for the ON chip slots its code spends on
    it. The returned config carries the N0 that realizes the requested
    ratio at that energy.
    """
    gamma = float(on_chips_per_data_bit)
    if gamma <= 0:
        raise ValueError("on_chips_per_data_bit must be positive")
    eb = gamma * pulse_energy
    n0 = eb / (10.0 ** (eb_n0_db / 10.0))
    point = EbN0Point(eb_n0_db=eb_n0_db, eb=eb, n0=n0)
    cfg = ChannelConfig(n0=n0, alpha=alpha, pulse_energy=pulse_energy, seed=seed)
    return point, cfg


def sigma_to_eb_n0(on_chips_per_data_bit: float | Fraction,
                   sigma: float,
                   pulse_energy: float = 1.0) -> float:
    """Inverse of :func:`eb_n0_to_sigma`: per-sample sigma to Eb/N0 in dB."""
    gamma = float(on_chips_per_data_bit)
    if gamma <= 0 or sigma <= 0:
        raise ValueError("on_chips_per_data_bit and sigma must be positive")
    eb = gamma * pulse_energy
    n0 = 2.0 * sigma * sigma
    return 10.0 * math.log10(eb / n0)

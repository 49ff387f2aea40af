"""Line-coding laboratory for intensity-modulated optical links.

Constant-weight run-length-limited block codes and classic baselines
(Manchester, 4B6B over 50% VPPM, 8b/10b), with analytic union bounds,
labeling optimization, constant-weight code search, spectral estimation,
and a reproducible Monte-Carlo SER/BER harness.
"""

__version__ = "0.1.0"

from .analysis import (BsaResult, CostReport, Mapping, PsdEstimate, ber_bounds,
                       bsa_cost, bsa_optimize, low_freq_power_fraction,
                       psd_estimate, q_function, union_bound_ser)
from .channel import (OOK, VPPM50, ChannelConfig, EbN0Point, ModulationMap,
                      eb_n0_to_sigma, modulate, sigma_to_eb_n0, transmit)
from .codebook import (Codebook, DistanceSpectrum, RunLengthReport,
                       SearchFailure, ValidationReport, builtin_4b6b,
                       builtin_5b10b, builtin_manchester, distance_spectrum,
                       hamming_distance, load_codebook, max_run_length,
                       min_distance, parse_codebook, save_codebook,
                       search_constant_weight_code, validate_codebook)
from .codecs import (DecodeOutcome, DecodeStatus, decode_8b10b_hard,
                     decode_8b10b_soft, decode_block_hard, decode_block_soft,
                     decode_manchester, encode_8b10b, encode_block,
                     encode_manchester)
from .linecodes import CODE_NAMES, LineCode, get_code
from .sweep import SweepConfig, SweepPoint, run_point, run_sweep, write_csv

__all__ = [
    "BsaResult", "ChannelConfig", "CODE_NAMES", "Codebook", "CostReport",
    "DecodeOutcome", "DecodeStatus", "DistanceSpectrum", "EbN0Point",
    "LineCode", "Mapping", "ModulationMap", "OOK", "PsdEstimate",
    "RunLengthReport", "SearchFailure", "SweepConfig", "SweepPoint",
    "VPPM50", "ValidationReport", "__version__", "ber_bounds", "bsa_cost",
    "bsa_optimize", "builtin_4b6b", "builtin_5b10b", "builtin_manchester",
    "decode_8b10b_hard", "decode_8b10b_soft", "decode_block_hard",
    "decode_block_soft", "decode_manchester", "distance_spectrum",
    "eb_n0_to_sigma", "encode_8b10b", "encode_block", "encode_manchester",
    "get_code", "hamming_distance", "load_codebook",
    "low_freq_power_fraction", "max_run_length", "min_distance", "modulate",
    "parse_codebook", "psd_estimate", "q_function", "run_point", "run_sweep",
    "save_codebook", "search_constant_weight_code", "sigma_to_eb_n0",
    "transmit", "union_bound_ser", "validate_codebook", "write_csv",
]

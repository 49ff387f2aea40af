"""Encoders and decoders: table block codes, Manchester, and 8b/10b.

Hard decoders work chip-by-chip after threshold slicing; soft decoders
score intensity samples directly (correlation minus half codeword energy,
equivalent to minimum Euclidean distance for equiprobable codewords).
"""

from __future__ import annotations

import dataclasses
import enum
from typing import Sequence

import numpy as np

from .channel import OOK, ModulationMap, modulate
from .codebook import Codebook, min_distance

__all__ = [
    "DecodeOutcome",
    "DecodeStatus",
    "decode_4b6b_hard",
    "decode_8b10b_hard",
    "decode_8b10b_soft",
    "decode_block_hard",
    "decode_block_soft",
    "decode_manchester",
    "encode_4b6b",
    "encode_8b10b",
    "encode_block",
    "encode_manchester",
]


class DecodeStatus(enum.Enum):
    EXACT = "exact"
    CORRECTED = "corrected"
    DETECTED = "detected_uncorrectable"


@dataclasses.dataclass(frozen=True)
class DecodeOutcome:
    """One decoded block: chosen dataword, confidence class, and the Hamming
    distance from the received chips to the chosen codeword."""

    dataword: int
    status: DecodeStatus
    distance: int


def _split_bits(data: np.ndarray, k: int) -> np.ndarray:
    data = np.asarray(data, dtype=np.uint8).ravel()
    if data.size % k:
        raise ValueError(f"bit count {data.size} is not a multiple of k={k}")
    if np.any(data > 1):
        raise ValueError("data bits must be 0 or 1")
    weights = 1 << np.arange(k - 1, -1, -1)
    return (data.reshape(-1, k) * weights).sum(axis=1)


def datawords_to_bits(words: np.ndarray, k: int) -> np.ndarray:
    """Expand dataword indices back to MSB-first bits."""
    words = np.asarray(words, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1)
    return ((words[:, None] >> shifts) & 1).astype(np.uint8).ravel()


def encode_block(cb: Codebook, data: Sequence[int] | np.ndarray) -> np.ndarray:
    """Encode a bit stream with a table code, MSB-first k-bit groups."""
    idx = _split_bits(data, cb.k)
    return cb.words[idx].ravel()


def decode_block_hard(cb: Codebook, chips: np.ndarray) -> list[DecodeOutcome]:
    """Nearest-codeword decode of sliced chips, lowest index on ties.

    A block is CORRECTED when it sits strictly inside the unique decoding
    radius of exactly one codeword, DETECTED when the nearest codeword is
    ambiguous or outside that radius.
    """
    chips = np.asarray(chips, dtype=np.uint8).reshape(-1, cb.n)
    dist = (chips[:, None, :] != cb.words[None, :, :]).sum(axis=2)
    nearest = dist.argmin(axis=1)
    best = dist[np.arange(len(chips)), nearest]
    radius = (min_distance(cb) - 2) // 2
    ties = (dist == best[:, None]).sum(axis=1)
    out = []
    for word, d, tie in zip(nearest, best, ties):
        if d == 0:
            status = DecodeStatus.EXACT
        elif d <= radius and tie == 1:
            status = DecodeStatus.CORRECTED
        else:
            status = DecodeStatus.DETECTED
        out.append(DecodeOutcome(dataword=int(word), status=status, distance=int(d)))
    return out


def decode_block_soft(cb: Codebook, received: np.ndarray,
                      modmap: ModulationMap = OOK,
                      alpha: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Maximum-likelihood decode of noisy samples against a table code.

    Returns (datawords, codeword indices); for data-only codebooks these
    coincide. Ties resolve to the lowest index via argmax first-occurrence.
    """
    ref = alpha * modulate(cb.words, modmap)
    block = ref.shape[1]
    received = np.asarray(received, dtype=float).reshape(-1, block)
    scores = received @ ref.T - 0.5 * (ref * ref).sum(axis=1)
    idx = scores.argmax(axis=1)
    return idx, idx


def encode_manchester(data: Sequence[int] | np.ndarray,
                      one_first: bool = True) -> np.ndarray:
    """Manchester encode: each bit becomes a two-chip pair. With
    ``one_first`` (default) 1 -> 10 and 0 -> 01; otherwise polarity flips."""
    data = np.asarray(data, dtype=np.uint8).ravel()
    if np.any(data > 1):
        raise ValueError("data bits must be 0 or 1")
    first = data if one_first else 1 - data
    out = np.empty(data.size * 2, dtype=np.uint8)
    out[0::2] = first
    out[1::2] = 1 - first
    return out


def decode_manchester(chips: np.ndarray,
                      one_first: bool = True) -> tuple[np.ndarray, list[DecodeStatus]]:
    """Decode sliced Manchester pairs. Invalid pairs (00, 11) are flagged
    DETECTED and resolved by their first chip: the emitted bit is the one
    whose valid codeword starts with that chip value."""
    chips = np.asarray(chips, dtype=np.uint8).reshape(-1, 2)
    first = chips[:, 0]
    second = chips[:, 1]
    valid = first != second
    bits = first if one_first else 1 - first
    statuses = [DecodeStatus.EXACT if v else DecodeStatus.DETECTED for v in valid]
    return bits.astype(np.uint8), statuses


def encode_4b6b(data: Sequence[int] | np.ndarray) -> np.ndarray:
    from .codebook import builtin_4b6b
    return encode_block(builtin_4b6b(), data)


def decode_4b6b_hard(chips: np.ndarray) -> list[DecodeOutcome]:
    from .codebook import builtin_4b6b
    return decode_block_hard(builtin_4b6b(), chips)


# ---------------------------------------------------------------------------
# 8b/10b (disparity-controlled, two sub-blocks)

# 5b/6b sub-table: value -> (word at negative running disparity, word at
# positive). Balanced entries repeat the same word.
_T5B6B = {
    0: ("100111", "011000"), 1: ("011101", "100010"), 2: ("101101", "010010"),
    3: ("110001", "110001"), 4: ("110101", "001010"), 5: ("101001", "101001"),
    6: ("011001", "011001"), 7: ("111000", "000111"), 8: ("111001", "000110"),
    9: ("100101", "100101"), 10: ("010101", "010101"), 11: ("110100", "110100"),
    12: ("001101", "001101"), 13: ("101100", "101100"), 14: ("011100", "011100"),
    15: ("010111", "101000"), 16: ("011011", "100100"), 17: ("100011", "100011"),
    18: ("010011", "010011"), 19: ("110010", "110010"), 20: ("001011", "001011"),
    21: ("101010", "101010"), 22: ("011010", "011010"), 23: ("111010", "000101"),
    24: ("110011", "001100"), 25: ("100110", "100110"), 26: ("010110", "010110"),
    27: ("110110", "001001"), 28: ("001110", "001110"), 29: ("101110", "010001"),
    30: ("011110", "100001"), 31: ("101011", "010100"),
}

# 3b/4b sub-table, same layout.
_T3B4B = {
    0: ("1011", "0100"), 1: ("1001", "1001"), 2: ("0101", "0101"),
    3: ("1100", "0011"), 4: ("1101", "0010"), 5: ("1010", "1010"),
    6: ("0110", "0110"), 7: ("1110", "0001"),
}

# Alternate encoding of y=7 that avoids five-bit runs across the sub-block
# boundary; selected per current disparity for specific 5-bit values.
_A7 = ("0111", "1000")
_A7_AT_MINUS = {17, 18, 20}
_A7_AT_PLUS = {11, 13, 14}


def _bits(s: str) -> np.ndarray:
    return np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")


def _disp(s: str) -> int:
    return 2 * s.count("1") - len(s)


def _build_8b10b_tables() -> tuple[np.ndarray, np.ndarray]:
    """Return (enc, flip): enc[rd_index, byte] is the 10-chip codeword for
    the byte at running disparity -1 (index 0) or +1 (index 1); flip[byte]
    is 1 when encoding the byte toggles the running disparity."""
    enc = np.zeros((2, 256, 10), dtype=np.uint8)
    flip = np.zeros(256, dtype=np.uint8)
    for byte in range(256):
        x, y = byte & 0x1F, byte >> 5
        for rd_index, rd in enumerate((-1, +1)):
            six = _T5B6B[x][rd_index]
            rd2 = rd if _disp(six) == 0 else -rd
            use_alt = y == 7 and ((rd2 < 0 and x in _A7_AT_MINUS)
                                  or (rd2 > 0 and x in _A7_AT_PLUS))
            if use_alt:
                four = _A7[0 if rd2 < 0 else 1]
            else:
                four = _T3B4B[y][0 if rd2 < 0 else 1]
            rd3 = rd2 if _disp(four) == 0 else -rd2
            enc[rd_index, byte] = _bits(six + four)
            if rd_index == 0:
                flip[byte] = rd3 != rd
            else:
                # toggling must not depend on the entry disparity
                assert flip[byte] == (rd3 != rd)
    return enc, flip


_ENC_8B10B, _FLIP_8B10B = _build_8b10b_tables()

# word value -> byte, over both disparity columns (no value collides with a
# different byte, checked once at import)
_WORD_TO_BYTE: dict[int, int] = {}
_POW2_10 = 1 << np.arange(9, -1, -1)
for _byte in range(256):
    for _rdi in (0, 1):
        _key = int((_ENC_8B10B[_rdi, _byte] * _POW2_10).sum())
        assert _WORD_TO_BYTE.setdefault(_key, _byte) == _byte
del _byte, _rdi, _key


def _rd_index(rd: int) -> int:
    if rd not in (-1, 1):
        raise ValueError("running disparity must be -1 or +1")
    return 0 if rd < 0 else 1


def encode_8b10b(data_bytes: Sequence[int] | np.ndarray,
                 rd: int = -1) -> tuple[np.ndarray, int]:
    """Encode a byte stream, threading running disparity across blocks.
    Returns (chips, final running disparity)."""
    start = _rd_index(rd)
    data_bytes = np.asarray(data_bytes, dtype=np.int64).ravel()
    if data_bytes.size == 0:
        return np.zeros(0, dtype=np.uint8), rd
    if np.any(data_bytes < 0) or np.any(data_bytes > 255):
        raise ValueError("data bytes must be in 0..255")
    flips = _FLIP_8B10B[data_bytes].astype(np.int64)
    # disparity index seen by block t = start XOR (parity of flips before t)
    rd_seq = (start + np.concatenate([[0], np.cumsum(flips[:-1])])) % 2
    chips = _ENC_8B10B[rd_seq, data_bytes].ravel()
    rd_out = -1 if (start + int(flips.sum())) % 2 == 0 else 1
    return chips, rd_out


def decode_8b10b_hard(chips: np.ndarray,
                      rd: int = -1) -> tuple[np.ndarray, list[DecodeStatus], int]:
    """Hard 8b/10b decode of sliced chips, tracking running disparity.

    A received word found in the table but not matching the expected column
    for the current disparity is a disparity violation: the byte is kept and
    flagged DETECTED. Unknown words map to the nearest codeword in the
    current-disparity column (lowest byte on ties), also DETECTED.
    """
    state = _rd_index(rd)
    chips = np.asarray(chips, dtype=np.uint8).reshape(-1, 10)
    keys = (chips * _POW2_10).sum(axis=1)
    out = np.zeros(len(chips), dtype=np.int64)
    statuses: list[DecodeStatus] = []
    for t, key in enumerate(keys):
        byte = _WORD_TO_BYTE.get(int(key))
        if byte is None:
            dist = (chips[t][None, :] != _ENC_8B10B[state]).sum(axis=1)
            byte = int(dist.argmin())
            statuses.append(DecodeStatus.DETECTED)
        elif np.array_equal(_ENC_8B10B[state, byte], chips[t]):
            statuses.append(DecodeStatus.EXACT)
        else:
            statuses.append(DecodeStatus.DETECTED)
        out[t] = byte
        state ^= int(_FLIP_8B10B[byte])
    return out, statuses, (-1 if state == 0 else 1)


def decode_8b10b_soft(received: np.ndarray, rd: int = -1,
                      alpha: float = 1.0,
                      chunk_blocks: int = 32768) -> tuple[np.ndarray, int]:
    """Sequence ML decode of noisy OOK samples over the running-disparity
    trellis (two states, 256 parallel branches per transition).

    Per-block nearest-codeword decisions are unreliable here because the two
    disparity columns together contain word pairs at Hamming distance 1 and 2;
    tracking the disparity state recovers the designed distance. Blocks are
    processed in chunks with traceback from the best end state per chunk,
    carrying the decided state across chunk boundaries.
    """
    state = _rd_index(rd)
    received = np.asarray(received, dtype=float).reshape(-1, 10)
    total = received.shape[0]
    ref = alpha * _ENC_8B10B.reshape(512, 10).astype(float)
    half_energy = 0.5 * (ref * ref).sum(axis=1)
    flips = _FLIP_8B10B.astype(np.int64)
    keep = np.flatnonzero(flips == 0)
    toggle = np.flatnonzero(flips == 1)
    out = np.zeros(total, dtype=np.int64)
    pos = 0
    while pos < total:
        block = received[pos:pos + chunk_blocks]
        t_len = block.shape[0]
        sc = (block @ ref.T - half_energy).reshape(t_len, 2, 256)
        # per source state: best keep-branch and best toggle-branch
        best_keep = sc[:, :, keep].argmax(axis=2)
        best_tog = sc[:, :, toggle].argmax(axis=2)
        m_keep = np.take_along_axis(sc[:, :, keep], best_keep[:, :, None], 2)[:, :, 0]
        m_tog = np.take_along_axis(sc[:, :, toggle], best_tog[:, :, None], 2)[:, :, 0]
        byte_keep = keep[best_keep]
        byte_tog = toggle[best_tog]
        mk = m_keep.tolist()
        mt = m_tog.tolist()
        # add-compare-select over the two states; ties prefer the keep path
        # into state 0 and the source-0 path otherwise
        metric = [-np.inf, -np.inf]
        metric[state] = 0.0
        src = np.zeros((t_len, 2), dtype=np.int8)
        for t in range(t_len):
            a0 = metric[0] + mk[t][0]   # 0 -> 0, balanced word
            b0 = metric[1] + mt[t][1]   # 1 -> 0, toggling word
            a1 = metric[0] + mt[t][0]   # 0 -> 1, toggling word
            b1 = metric[1] + mk[t][1]   # 1 -> 1, balanced word
            if a0 >= b0:
                n0, s0 = a0, 0
            else:
                n0, s0 = b0, 1
            if a1 >= b1:
                n1, s1 = a1, 0
            else:
                n1, s1 = b1, 1
            metric[0], metric[1] = n0, n1
            src[t, 0] = s0
            src[t, 1] = s1
        end = 0 if metric[0] >= metric[1] else 1
        cur = end
        for t in range(t_len - 1, -1, -1):
            prev = int(src[t, cur])
            if prev == cur:
                out[pos + t] = byte_keep[t, prev]
            else:
                out[pos + t] = byte_tog[t, prev]
            cur = prev
        state = end
        pos += t_len
    return out, (-1 if state == 0 else 1)

"""Codebook model, combinatorial property checks, and constant-weight code search.

A codebook is an ordered bijection between k-bit datawords and n-bit
codewords, optionally extended by control symbols that are never produced
by data encoding. Codewords are numpy uint8 arrays of 0/1 chips; the
leftmost chip (index 0) is transmitted first.
"""

from __future__ import annotations

import dataclasses
import itertools
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Codebook",
    "DistanceSpectrum",
    "RunLengthReport",
    "RunLengthWitness",
    "SearchFailure",
    "ValidationReport",
    "builtin_4b6b",
    "builtin_5b10b",
    "builtin_manchester",
    "distance_spectrum",
    "format_codebook",
    "hamming_distance",
    "load_codebook",
    "max_run_length",
    "min_distance",
    "parse_codebook",
    "save_codebook",
    "search_constant_weight_code",
    "word_from_bits",
    "word_to_string",
]


def word_from_bits(bits: str | Sequence[int] | np.ndarray) -> np.ndarray:
    """Coerce a chip sequence ('0'/'1' string or 0/1 iterable) to uint8."""
    if isinstance(bits, str):
        if bits.strip("01"):
            raise ValueError(f"codeword may contain only '0'/'1': {bits!r}")
        arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("codeword must be one-dimensional")
    if np.any(arr > 1):
        raise ValueError("codeword chips must be 0 or 1")
    return arr


def word_to_string(word: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in np.asarray(word).ravel())


@dataclasses.dataclass(frozen=True)
class Codebook:
    """Ordered dataword-to-codeword table plus optional control symbols.

    Row i of ``words`` is the codeword assigned to dataword i. ``weight``
    declares a constant codeword weight; it is validated by
    :func:`validate_codebook`, not by construction.
    """

    k: int
    n: int
    words: np.ndarray
    control: np.ndarray = dataclasses.field(
        default_factory=lambda: np.zeros((0, 0), dtype=np.uint8))
    weight: int | None = None

    def __post_init__(self) -> None:
        words = np.ascontiguousarray(np.asarray(self.words, dtype=np.uint8))
        if words.shape != (1 << self.k, self.n):
            raise ValueError(
                f"expected {1 << self.k} rows of {self.n} chips, got {words.shape}")
        control = np.ascontiguousarray(
            np.asarray(self.control, dtype=np.uint8).reshape(-1, self.n))
        if np.any(words > 1) or np.any(control > 1):
            raise ValueError("codeword chips must be 0 or 1")
        words.setflags(write=False)
        control.setflags(write=False)
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "control", control)

    @property
    def size(self) -> int:
        return self.words.shape[0]

    def word(self, index: int) -> np.ndarray:
        return self.words[index]

    def all_words(self) -> np.ndarray:
        """Data codewords followed by control symbols."""
        if self.control.size == 0:
            return self.words
        return np.vstack([self.words, self.control])


def hamming_distance(a, b) -> int:
    a = word_from_bits(a)
    b = word_from_bits(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    return int(np.count_nonzero(a != b))


def min_distance(cb: Codebook) -> int:
    """Minimum pairwise Hamming distance over the data codewords."""
    if cb.size < 2:
        return cb.n
    d = _pairwise_distances(cb.words)
    return int(d[~np.eye(cb.size, dtype=bool)].min())


def _pairwise_distances(words: np.ndarray) -> np.ndarray:
    return (words[:, None, :] != words[None, :, :]).sum(axis=2)


@dataclasses.dataclass(frozen=True)
class DistanceSpectrum:
    """Neighbor counts per codeword at Hamming distance 2r, r = 1..n//2."""

    per_codeword: np.ndarray
    average: np.ndarray


def distance_spectrum(cb: Codebook) -> DistanceSpectrum:
    d = _pairwise_distances(cb.words)
    off = ~np.eye(cb.size, dtype=bool)
    if np.any(d[off] % 2):
        raise ValueError("odd pairwise distance found; codebook is not constant weight")
    half = cb.n // 2
    per = np.zeros((cb.size, half), dtype=np.int64)
    for r in range(1, half + 1):
        per[:, r - 1] = (d == 2 * r).sum(axis=1)
    return DistanceSpectrum(per_codeword=per, average=per.mean(axis=0))


@dataclasses.dataclass(frozen=True)
class RunLengthWitness:
    first: int   # index of the leading codeword
    second: int  # index of the trailing codeword
    run: int
    bit: int


@dataclasses.dataclass(frozen=True)
class RunLengthReport:
    max_run: int
    witnesses: tuple[RunLengthWitness, ...]


def _longest_run(arr: np.ndarray) -> tuple[int, int]:
    edges = np.flatnonzero(np.diff(arr)) + 1
    starts = np.concatenate([[0], edges])
    lengths = np.diff(np.concatenate([starts, [len(arr)]]))
    t = int(np.argmax(lengths))
    return int(lengths[t]), int(arr[starts[t]])


def max_run_length(cb: Codebook) -> RunLengthReport:
    """Longest run of identical chips over every ordered concatenation of two
    data codewords (a codeword followed by itself included); control symbols
    are excluded from the scan."""
    words = cb.words
    best = 0
    witnesses: list[RunLengthWitness] = []
    for i in range(cb.size):
        for j in range(cb.size):
            run, bit = _longest_run(np.concatenate([words[i], words[j]]))
            if run > best:
                best = run
                witnesses = [RunLengthWitness(i, j, run, bit)]
            elif run == best:
                witnesses.append(RunLengthWitness(i, j, run, bit))
    return RunLengthReport(max_run=best, witnesses=tuple(witnesses))


@dataclasses.dataclass(frozen=True)
class ValidationReport:
    """Violated properties (empty means valid) plus measured parameters."""

    violations: tuple[str, ...]
    min_distance: int | None
    weights: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_codebook(cb: Codebook,
                      expect_min_distance: int | None = None,
                      expect_max_run: int | None = None) -> ValidationReport:
    """Check bijectivity, constant weight, control disjointness, and any
    caller-declared distance/run expectations. Violations are reported as
    data, not raised."""
    violations: list[str] = []
    keys = {word_to_string(w) for w in cb.words}
    if len(keys) != cb.size:
        violations.append("duplicate codeword among data entries")
    weights = tuple(sorted({int(w.sum()) for w in cb.all_words()}))
    if cb.weight is not None and weights != (cb.weight,):
        violations.append(
            f"weights {weights} differ from declared constant weight {cb.weight}")
    ctrl_keys = [word_to_string(w) for w in cb.control]
    if len(set(ctrl_keys)) != len(ctrl_keys):
        violations.append("duplicate control symbol")
    overlap = keys.intersection(ctrl_keys)
    if overlap:
        violations.append(f"control symbols not disjoint from data codewords: {sorted(overlap)}")
    dmin = min_distance(cb) if cb.size >= 2 else None
    if expect_min_distance is not None and dmin is not None and dmin < expect_min_distance:
        violations.append(
            f"minimum distance {dmin} below declared {expect_min_distance}")
    if expect_max_run is not None:
        run = max_run_length(cb).max_run
        if run > expect_max_run:
            violations.append(f"max run {run} exceeds declared {expect_max_run}")
    return ValidationReport(violations=tuple(violations),
                            min_distance=dmin, weights=weights)


# ---------------------------------------------------------------------------
# text format


def format_codebook(cb: Codebook) -> str:
    """Render as text: header 'k n [w]', entry lines 'index bits', then an
    optional '# control' section with one codeword per line."""
    head = f"{cb.k} {cb.n}" if cb.weight is None else f"{cb.k} {cb.n} {cb.weight}"
    lines = [head]
    lines += [f"{i} {word_to_string(w)}" for i, w in enumerate(cb.words)]
    if cb.control.shape[0]:
        lines.append("# control")
        lines += [word_to_string(w) for w in cb.control]
    return "\n".join(lines) + "\n"


def parse_codebook(text: str) -> Codebook:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty codebook file")
    head = lines[0].split()
    if len(head) not in (2, 3):
        raise ValueError(f"bad header {lines[0]!r}: expected 'k n [w]'")
    try:
        k, n = int(head[0]), int(head[1])
        weight = int(head[2]) if len(head) == 3 else None
    except ValueError as exc:
        raise ValueError(f"bad header {lines[0]!r}: {exc}") from None
    size = 1 << k
    words = np.zeros((size, n), dtype=np.uint8)
    seen = np.zeros(size, dtype=bool)
    pos = 1
    while pos < len(lines) and lines[pos] != "# control":
        parts = lines[pos].split()
        if len(parts) != 2:
            raise ValueError(f"bad entry line {lines[pos]!r}: expected 'index bits'")
        idx = int(parts[0])
        if not 0 <= idx < size:
            raise ValueError(f"entry index {idx} out of range 0..{size - 1}")
        if seen[idx]:
            raise ValueError(f"duplicate entry index {idx}")
        word = word_from_bits(parts[1])
        if word.shape[0] != n:
            raise ValueError(f"entry {idx} has {word.shape[0]} chips, expected {n}")
        words[idx] = word
        seen[idx] = True
        pos += 1
    if not seen.all():
        missing = np.flatnonzero(~seen)
        raise ValueError(f"missing entries for datawords {missing.tolist()}")
    control: list[np.ndarray] = []
    if pos < len(lines):
        for ln in lines[pos + 1:]:
            word = word_from_bits(ln)
            if word.shape[0] != n:
                raise ValueError(f"control symbol {ln!r} has wrong length")
            control.append(word)
    ctrl = np.array(control, dtype=np.uint8) if control else np.zeros((0, n), np.uint8)
    return Codebook(k=k, n=n, words=words, control=ctrl, weight=weight)


def load_codebook(path) -> Codebook:
    with open(path, "r", encoding="utf-8") as f:
        return parse_codebook(f.read())


def save_codebook(cb: Codebook, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_codebook(cb))


def _load_builtin(name: str) -> Codebook:
    text = (resources.files("vlclab") / "tables" / name).read_text(encoding="utf-8")
    return parse_codebook(text)


@lru_cache(maxsize=None)
def builtin_5b10b() -> Codebook:
    """The bundled 32-entry constant-weight rate-1/2 table (k=5, n=10, w=5,
    minimum distance 4) with its four control symbols."""
    return _load_builtin("five_b_ten_b.txt")


@lru_cache(maxsize=None)
def builtin_4b6b() -> Codebook:
    """The standard 16-entry weight-3 table of IEEE 802.15.7 (k=4, n=6)."""
    return _load_builtin("four_b_six_b.txt")


@lru_cache(maxsize=None)
def builtin_manchester() -> Codebook:
    """Manchester as a 1-bit block code: 0 -> 01, 1 -> 10."""
    return _load_builtin("manchester.txt")


# ---------------------------------------------------------------------------
# constant-weight code search


class SearchFailure(RuntimeError):
    """No code of the requested size was found within the search budget."""


def _concat_run_ok(a: np.ndarray, b: np.ndarray, max_run: int) -> bool:
    return _longest_run(np.concatenate([a, b]))[0] <= max_run


def search_constant_weight_code(n: int, w: int, d_min: int,
                                max_run: int | None = None,
                                target_size: int = 2,
                                seed: int = 0,
                                restarts: int = 40,
                                steps: int = 20000) -> Codebook:
    """Find ``target_size`` weight-``w`` words of length ``n`` with pairwise
    Hamming distance >= ``d_min`` (and, if ``max_run`` is set, no run of
    identical chips longer than ``max_run`` inside any word or across any
    ordered concatenation of two chosen words).

    Greedy seeding plus plateau moves: repeatedly try to insert an outside
    word, evicting at most one conflicting member before refilling greedily.
    Restarts reshuffle the insertion order. Deterministic for a fixed seed.
    Raises :class:`SearchFailure` when the budget is exhausted.
    """
    if not 0 <= w <= n:
        raise ValueError(f"weight {w} out of range for length {n}")
    if d_min % 2:
        raise ValueError("d_min must be even for a constant-weight code")
    words = np.array([[1 if i in comb else 0 for i in range(n)]
                      for comb in itertools.combinations(range(n), w)],
                     dtype=np.uint8)
    if max_run is not None:
        keep = [i for i, word in enumerate(words)
                if _concat_run_ok(word, word, max_run)]
        words = words[keep]
    m = len(words)
    if m < target_size:
        raise SearchFailure(
            f"only {m} candidate words exist for (n={n}, w={w}, max_run={max_run})")
    compat = _pairwise_distances(words) >= d_min
    if max_run is not None:
        for i in range(m):
            for j in range(i + 1, m):
                if compat[i, j] and not (
                        _concat_run_ok(words[i], words[j], max_run)
                        and _concat_run_ok(words[j], words[i], max_run)):
                    compat[i, j] = compat[j, i] = False
    np.fill_diagonal(compat, False)

    rng = np.random.default_rng(seed)

    def greedy_fill(chosen: list[int], in_set: np.ndarray, order: Iterable[int]) -> None:
        for cand in order:
            if not in_set[cand] and all(compat[cand, c] for c in chosen):
                chosen.append(cand)
                in_set[cand] = True

    for restart in range(restarts):
        chosen: list[int] = []
        in_set = np.zeros(m, dtype=bool)
        # first attempt is plain lexicographic; later restarts shuffle
        order = range(m) if restart == 0 else rng.permutation(m)
        greedy_fill(chosen, in_set, order)
        for _ in range(steps):
            if len(chosen) >= target_size:
                break
            cand = int(rng.integers(0, m))
            if in_set[cand]:
                continue
            conflicts = [c for c in chosen if not compat[cand, c]]
            if len(conflicts) > 1:
                continue
            for c in conflicts:
                chosen.remove(c)
                in_set[c] = False
            chosen.append(cand)
            in_set[cand] = True
            greedy_fill(chosen, in_set, rng.permutation(m))
        if len(chosen) >= target_size:
            ordered = sorted(chosen, key=lambda i: word_to_string(words[i]))
            picked = words[ordered[:target_size]]
            k = target_size.bit_length() - 1  # largest k with 2**k <= size
            entries = picked[:1 << k]
            extra = picked[1 << k:]
            return Codebook(k=k, n=n, words=entries,
                            control=extra if len(extra) else np.zeros((0, n), np.uint8),
                            weight=w)
    raise SearchFailure(
        f"no (n={n}, w={w}, d>={d_min}) code of size {target_size} found "
        f"within {restarts} restarts")

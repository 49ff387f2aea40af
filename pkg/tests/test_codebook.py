import numpy as np
import pytest

from vlclab.codebook import (Codebook, SearchFailure, builtin_4b6b,
                             builtin_5b10b, builtin_manchester,
                             distance_spectrum, format_codebook,
                             hamming_distance, load_codebook, max_run_length,
                             min_distance, parse_codebook, save_codebook,
                             search_constant_weight_code, validate_codebook,
                             word_from_bits, word_to_string)


def test_word_from_bits_forms():
    assert word_from_bits("0110").tolist() == [0, 1, 1, 0]
    assert word_from_bits([1, 0, 1]).tolist() == [1, 0, 1]
    assert word_to_string(word_from_bits("10011")) == "10011"
    with pytest.raises(ValueError):
        word_from_bits("01x0")
    with pytest.raises(ValueError):
        word_from_bits([0, 2, 1])


def test_hamming_distance():
    assert hamming_distance("0000", "0000") == 0
    assert hamming_distance("0101", "1010") == 4
    assert hamming_distance("0011", "0010") == 1
    with pytest.raises(ValueError):
        hamming_distance("01", "011")


def test_codebook_shape_validation():
    with pytest.raises(ValueError):
        Codebook(k=2, n=4, words=np.zeros((3, 4), np.uint8))
    with pytest.raises(ValueError):
        Codebook(k=1, n=3, words=np.array([[0, 1, 2], [1, 0, 0]], np.uint8))
    cb = Codebook(k=1, n=2, words=np.array([[0, 1], [1, 0]], np.uint8))
    assert cb.size == 2
    with pytest.raises(ValueError):
        cb.words[0, 0] = 1  # frozen storage


def test_builtin_tables_load():
    cb5 = builtin_5b10b()
    assert (cb5.k, cb5.n, cb5.weight) == (5, 10, 5)
    assert cb5.control.shape == (4, 10)
    cb4 = builtin_4b6b()
    assert (cb4.k, cb4.n, cb4.weight) == (4, 6, 3)
    cbm = builtin_manchester()
    assert (cbm.k, cbm.n, cbm.weight) == (1, 2, 1)
    assert word_to_string(cbm.words[0]) == "01"
    assert word_to_string(cbm.words[1]) == "10"


def test_distance_spectrum_small():
    cb = Codebook(k=1, n=4, words=np.array([[0, 0, 1, 1], [1, 1, 0, 0]], np.uint8))
    spec = distance_spectrum(cb)
    assert spec.per_codeword.shape == (2, 2)
    assert spec.per_codeword.tolist() == [[0, 1], [0, 1]]
    assert spec.average.tolist() == [0.0, 1.0]


def test_distance_spectrum_rejects_odd_distances():
    cb = Codebook(k=1, n=4, words=np.array([[0, 0, 0, 1], [0, 0, 1, 1]], np.uint8))
    with pytest.raises(ValueError):
        distance_spectrum(cb)


def test_max_run_includes_self_concatenation():
    # 0111 after itself: ...0111|0111... has a run of 3; 1110 after itself
    # makes 1110|1110 with runs of 3 as well, but 0111 then 1110 gives 6
    cb = Codebook(k=1, n=4, words=np.array([[0, 1, 1, 1], [1, 1, 1, 0]], np.uint8))
    rep = max_run_length(cb)
    assert rep.max_run == 6
    pairs = {(w.first, w.second) for w in rep.witnesses}
    assert (0, 1) in pairs
    assert all(w.run == 6 for w in rep.witnesses)


def test_validate_flags_violations():
    words = np.array([[0, 1, 0, 1], [0, 1, 0, 1]], np.uint8)
    rep = validate_codebook(Codebook(k=1, n=4, words=words))
    assert not rep.ok
    assert any("duplicate" in v for v in rep.violations)

    cb = Codebook(k=1, n=4, words=np.array([[0, 0, 1, 1], [1, 1, 0, 0]], np.uint8),
                  weight=2)
    rep = validate_codebook(cb, expect_min_distance=4, expect_max_run=4)
    assert rep.ok
    assert rep.min_distance == 4
    rep = validate_codebook(cb, expect_min_distance=6)
    assert any("minimum distance" in v for v in rep.violations)

    mixed = Codebook(k=1, n=4, words=np.array([[0, 0, 1, 1], [1, 1, 1, 0]], np.uint8),
                     weight=2)
    rep = validate_codebook(mixed)
    assert any("weight" in v for v in rep.violations)

    overlap = Codebook(k=1, n=4, words=np.array([[0, 0, 1, 1], [1, 1, 0, 0]], np.uint8),
                       control=np.array([[0, 0, 1, 1]], np.uint8))
    rep = validate_codebook(overlap)
    assert any("disjoint" in v for v in rep.violations)


def test_format_parse_roundtrip(tmp_path):
    cb = builtin_5b10b()
    text = format_codebook(cb)
    back = parse_codebook(text)
    assert np.array_equal(back.words, cb.words)
    assert np.array_equal(back.control, cb.control)
    assert back.weight == cb.weight

    path = tmp_path / "cb.txt"
    save_codebook(cb, path)
    again = load_codebook(path)
    assert np.array_equal(again.words, cb.words)


@pytest.mark.parametrize("text", [
    "",
    "2\n",                          # header too short
    "1 2\n0 01\n",                  # missing entry 1
    "1 2\n0 01\n0 10\n",            # duplicate index
    "1 2\n0 01\n2 10\n",            # index out of range
    "1 2\n0 011\n1 10\n",           # wrong length
    "1 2\n0 01\n1 10\n# control\n011\n",  # control wrong length
])
def test_parse_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_codebook(text)


def test_search_small_instance_exact():
    # (n=4, w=2, d=2): all six weight-2 words are pairwise at distance >= 2
    cb = search_constant_weight_code(n=4, w=2, d_min=2, target_size=4, seed=1)
    assert cb.size == 4
    assert min_distance(cb) >= 2
    assert validate_codebook(cb).ok


def test_search_respects_run_limit():
    cb = search_constant_weight_code(n=6, w=3, d_min=2, max_run=2,
                                     target_size=4, seed=0)
    data_only = Codebook(k=cb.k, n=cb.n, words=cb.words, weight=cb.weight)
    assert max_run_length(data_only).max_run <= 2


def test_search_rejects_odd_distance():
    with pytest.raises(ValueError):
        search_constant_weight_code(n=6, w=3, d_min=3, target_size=2)


def test_search_failure_is_reported():
    # only one word exists at (n=3, w=3), so size 2 is impossible
    with pytest.raises(SearchFailure):
        search_constant_weight_code(n=3, w=3, d_min=2, target_size=2)


def test_search_is_deterministic():
    a = search_constant_weight_code(n=8, w=4, d_min=4, target_size=8, seed=5)
    b = search_constant_weight_code(n=8, w=4, d_min=4, target_size=8, seed=5)
    assert np.array_equal(a.words, b.words)
    assert np.array_equal(a.control, b.control)

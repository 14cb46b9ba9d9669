"""Symbolic dynamics: marker automorphisms, Hedlund orbit and SFT counts."""
import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from horseshoe.shift import (
    FLIP, PAPER_COLUMNS, PAPER_TABLE, PSI, SFT, Automorphism, BlockSwap, EPSeq,
    InvalidAutomorphism, MarginError, PeriodicSeq, Word, apply, apply_ep, apply_periodic,
    compare_to_paper, count_fixed, count_fixed_enumerate, count_fixed_transfer, fix_to_sft,
    hedlund_orbit, hedlund_x, table,
)

PAPER_SWAPS = [BlockSwap("0010100", "0011100"), BlockSwap("10100", "11100"),
               BlockSwap("10010", "10110"), BlockSwap("0010", "0110")]


# -- independent oracles ---------------------------------------------------------------

def marker_oracle(u, v, seq, i):
    """Symbol i of the image, straight from the per-coordinate rule."""
    j = next(k for k in range(len(u)) if u[k] != v[k])
    w = "".join(seq(i - j + k) for k in range(len(u)))
    if w == u:
        return v[j]
    if w == v:
        return u[j]
    return seq(i)


def periodic_contains(word, f):
    """Does the periodic extension of ``word`` contain ``f`` anywhere?"""
    n = len(word)
    return any(all(word[(i + k) % n] == f[k] for k in range(len(f))) for i in range(n))


def brute_count(forbidden, n):
    return sum(1 for bits in itertools.product("01", repeat=n)
               if not any(periodic_contains("".join(bits), f) for f in forbidden))


# -- words and swaps -------------------------------------------------------------------

def test_word_parse_and_dot():
    w = Word.parse("10.100")
    assert (w.bits, w.dot, str(w)) == ("10100", 2, "10.100")
    with pytest.raises(ValueError):
        Word.parse("1.0.1")
    with pytest.raises(ValueError):
        Word.parse("")
    with pytest.raises(ValueError):
        Word("012")


def test_blockswap_validation():
    with pytest.raises(InvalidAutomorphism):
        BlockSwap("001", "01")
    with pytest.raises(InvalidAutomorphism):
        BlockSwap("0110", "0110")
    with pytest.raises(InvalidAutomorphism):
        BlockSwap("0011", "0101")      # differs in two places
    s = BlockSwap.parse("00.10", "01.10")
    assert (s.u, s.v, s.position) == ("0010", "0110", 1)
    assert str(s) == "00.10 <-> 01.10"
    with pytest.raises(InvalidAutomorphism):
        BlockSwap.parse("001.0", "011.0")   # dot not right after the swapped symbol


def test_marker_certificate_paper_swaps():
    for s in PAPER_SWAPS:
        assert s.is_marker(), s


def test_marker_certificate_rejects_self_overlap():
    # 010 <-> 000: the word 0000 carries rewrites one step apart
    assert not BlockSwap("000", "010").is_marker()


def test_paper_swap_example_center_flips():
    s = BlockSwap("0010100", "0011100")
    # ...000101000...: only the symbol centred on 0010100 changes
    assert apply(s, "000101000") == "111"
    assert apply(s, "0010100") == "1"
    assert apply(s, "0011100") == "0"
    assert apply(s, "0000000") == "0"


def test_flip_and_identity():
    assert apply(FLIP, "0110") == "1001"
    assert apply(Automorphism(), "0110") == "0110"
    assert apply_periodic(FLIP, PeriodicSeq("001")).word == "110"


def test_margin_error():
    s = BlockSwap("0010", "0110")
    with pytest.raises(MarginError):
        apply(s, "001")
    with pytest.raises(MarginError):
        apply(s, "00100110", margins=(0, 2))


def test_periodic_no_occurrence_unchanged():
    s = BlockSwap("0010", "0110")
    for w in ("000", "111"):
        assert apply_periodic(s, PeriodicSeq(w)).word == w


@pytest.mark.parametrize("swap", PAPER_SWAPS, ids=str)
def test_swap_involution_and_shift_commuting_exhaustive(swap):
    L = swap.length
    r = swap.left + swap.right
    for m in range(r + 1, 2 * L + 3):
        for bits in itertools.product("01", repeat=m):
            w = "".join(bits)
            out = apply(swap, w)
            # shift commuting: dropping the first input symbol drops the first output one
            if m > r + 1:
                assert apply(swap, w[1:]) == out[1:]
            if m > 2 * r:
                assert apply(swap, out) == w[2 * swap.left: m - 2 * swap.right]


@pytest.mark.parametrize("swap", PAPER_SWAPS, ids=str)
def test_swap_matches_oracle_on_random_windows(swap):
    rng = random.Random(7)
    for _ in range(500):
        w = "".join(rng.choice("01") for _ in range(rng.randint(swap.length, 30)))
        out = apply(swap, w)
        exp = "".join(marker_oracle(swap.u, swap.v, lambda k: w[k], i)
                      for i in range(swap.left, len(w) - swap.right))
        assert out == exp


@given(st.text("01", min_size=1, max_size=14), st.integers(0, 20))
def test_periodic_commutes_with_rotation(word, k):
    s = BlockSwap("0010", "0110")
    x = PeriodicSeq(word)
    assert apply_periodic(s, x.rotate(k)) == apply_periodic(s, x).rotate(k)
    n = len(word)
    exp = "".join(marker_oracle(s.u, s.v, lambda i: word[i % n], i) for i in range(n))
    assert apply_periodic(s, x).word == exp


def test_gamma_empty_square_is_identity():
    ff = Automorphism([FLIP, FLIP])
    for bits in itertools.product("01", repeat=8):
        w = "".join(bits)
        assert apply(ff, w) == w


# -- fixed points versus SFT -----------------------------------------------------------

def test_fix_to_sft_paper():
    assert fix_to_sft(PAPER_SWAPS[0]).forbidden == ("0010100", "0011100")
    assert fix_to_sft(BlockSwap("0010", "0110")).forbidden == ("0010", "0110")
    with pytest.raises(InvalidAutomorphism):
        fix_to_sft(FLIP)


@pytest.mark.parametrize("swap", PAPER_SWAPS, ids=str)
def test_fixed_iff_in_sft(swap):
    rng = random.Random(11)
    sft = fix_to_sft(swap)
    for _ in range(2500):
        w = "".join(rng.choice("01") for _ in range(rng.randint(1, 12)))
        fixed = apply_periodic(swap, PeriodicSeq(w)).word == w
        assert fixed == sft.allows_periodic(w)
        assert sft.allows_periodic(w) == (not any(periodic_contains(w, f) for f in sft.forbidden))


# -- counting ----------------------------------------------------------------------------

def test_count_examples():
    assert count_fixed(SFT(), 5) == 32
    assert count_fixed(SFT(["0010", "0110"]), 3) == 2
    assert count_fixed(SFT(["0010100", "0011100"]), 7) == 114
    assert table(["L_q"])["L_q"] == [8, 16, 22, 40, 72]
    assert table(["L_r"])["L_r"] == [2, 16, 22, 52, 72]


def test_paper_table_all_cells():
    assert all(compare_to_paper().values())
    assert table() == PAPER_TABLE


@pytest.mark.parametrize("name", ["L_p", "L_q", "L_r", "L_s"])
def test_transfer_equals_enumeration_paper(name):
    sft = PAPER_COLUMNS[name]
    for n in range(1, 13):
        e = count_fixed_enumerate(sft, n)
        assert count_fixed(sft, n) == e
        if n >= sft.max_len - 1:
            assert count_fixed_transfer(sft, n) == e
        if n <= 10:
            assert e == brute_count(sft.forbidden, n)


def test_transfer_equals_enumeration_random():
    rng = random.Random(2024)
    for _ in range(50):
        words = ["".join(rng.choice("01") for _ in range(rng.randint(1, 6)))
                 for _ in range(rng.randint(1, 2))]
        sft = SFT(words)
        for n in range(1, 13):
            assert count_fixed(sft, n) == count_fixed_enumerate(sft, n), (words, n)
            if n >= sft.max_len - 1:
                assert count_fixed_transfer(sft, n) == count_fixed_enumerate(sft, n)


def test_sft_deduplicates():
    assert SFT(["01", "01", "0.1"]).forbidden == ("01",)


# -- Hedlund -----------------------------------------------------------------------------

def test_hedlund_paper_displays():
    # x^(0) ... 0110110 . 11111 and its first images
    assert hedlund_x(0) == EPSeq.parse("01", "0110110.1", "1")
    assert apply_ep(PSI, hedlund_x(0)) == EPSeq.parse("01", "01101101.0", "0")
    assert apply_ep(PSI, hedlund_x(1)) == EPSeq.parse("01", "011011010.1", "1")
    assert apply_ep(PSI, hedlund_x(2)) == EPSeq.parse("01", "0110110101.0", "0")


def test_hedlund_orbit_64():
    v = hedlund_orbit(64)
    assert v.matches_pattern and v.all_distinct and v.period is None
    assert v.infinite_order_evidence


def test_hedlund_detects_finite_order():
    v = hedlund_orbit(10, Automorphism([FLIP]))
    assert not v.matches_pattern
    assert v.period == 2


def test_epseq_canonical_equality():
    a = EPSeq("01", "0101", "1", 0)
    b = EPSeq("01", "", "1", 4)
    assert a == b and hash(a) == hash(b)
    assert a.shift(2).shift(-2) == a
    assert a.flip().flip() == a
    assert EPSeq("0", "", "0", 5) == EPSeq("0", "", "0", -3)

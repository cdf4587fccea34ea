"""Names, multiplicities, tail certificates, block reconstruction."""

import random
from fractions import Fraction

import pytest

from leftreal.errors import InvalidName, MonotonicityViolation, NotASet
from leftreal.foundations import Dyadic, NatSetView, ZERO
from leftreal.names import (
    CheckStatus,
    IncreasingDyadicStream,
    Modulus,
    NameStream,
    digit_exponents,
    multiplicities,
    name_from_increasing,
    partial_sum,
    regular_sum,
    roc_certificate_check,
    strongly_lc,
    tail_weight,
)


def frac(d: Dyadic) -> Fraction:
    return Fraction(d.num, 2**d.exp)


def random_name(rng: random.Random, count: int) -> NameStream:
    # values >= k+1 keep the total weight at most 1
    vals = [k + 1 + rng.randint(0, 6) for k in range(count)]
    rng.shuffle(vals)
    return NameStream.from_list(vals)


# ---------------------------------------------------------------------------
# partial sums
# ---------------------------------------------------------------------------


def test_partial_sum_constant_one():
    assert frac(partial_sum(NameStream.from_list([1]), 0)) == Fraction(1, 2)


def test_partial_sum_odd_exponents():
    f = NameStream.affine(2, 1)
    assert frac(partial_sum(f, 2)) == Fraction(21, 32)


def test_partial_sum_overflow_rejected():
    f = NameStream.from_list([1, 1, 1])
    with pytest.raises(InvalidName):
        partial_sum(f, 2)


# ---------------------------------------------------------------------------
# multiplicities
# ---------------------------------------------------------------------------


def test_multiplicities_direct_count():
    t = multiplicities(NameStream.from_list([3, 1, 3, 5]), 3)
    assert t.count(3) == 2 and t.count(1) == 1 and t.count(5) == 1 and t.count(0) == 0


def test_multiplicities_identity_name():
    t = multiplicities(NameStream.from_function(lambda k: k), 10)
    assert all(t.count(m) == 1 for m in range(11))
    assert sum(t.counts.values()) == 11


def test_rearranged_sum_matches_partial_sum():
    rng = random.Random(3)
    for _ in range(100):
        f = random_name(rng, rng.randint(1, 40))
        upto = f.length - 1
        assert multiplicities(f, upto).rearranged_sum() == partial_sum(f, upto)


# ---------------------------------------------------------------------------
# tail weights and the tail-rate certificate
# ---------------------------------------------------------------------------


def test_tail_weight_odd_name():
    f = NameStream.affine(2, 1)
    got = tail_weight(f, 4, 10)
    oracle = sum(Fraction(1, 2**k) for k in range(5, 22, 2))
    assert frac(got) == oracle


def test_tail_weight_at_zero_is_partial_sum():
    f = NameStream.affine(2, 1)
    assert tail_weight(f, 0, 12) == partial_sum(f, 12)


def test_tail_weight_empty_range():
    assert tail_weight(NameStream.affine(2, 1), 0, -1) == ZERO


def test_roc_certificate_consistent_for_geometric_name():
    f = NameStream.affine(2, 1)
    r = Modulus.shift(2)
    for n in range(9):
        # geometric oracle: the true tail beyond n+2 is at most 2^-n
        true_tail = sum(Fraction(1, 2**k) for k in range(n + 2, 4000, 2) if k % 2 == 1)
        assert true_tail <= Fraction(1, 2**n)
        chk = roc_certificate_check(f, r, n, 1000)
        assert chk.status is CheckStatus.CONSISTENT


def test_roc_certificate_refuted_by_adversarial_name():
    # tail at position 5 is 4/32 + 2^-20 which exceeds the level-3 bound 1/8
    f = NameStream.from_list([1, 5, 5, 5, 5, 20])
    r = Modulus.shift(2)
    chk = roc_certificate_check(f, r, 3, 5)
    assert chk.status is CheckStatus.REFUTED


def test_roc_certificate_vacuous_beyond_emitted_values():
    f = NameStream.from_list([2, 3, 9])
    r = Modulus.from_function(lambda n: 50 + n)
    chk = roc_certificate_check(f, r, 0, 2)
    assert chk.status is CheckStatus.CONSISTENT
    assert chk.tail == ZERO


def test_roc_certificate_sound_on_solvable_family():
    # names f(k) = a*k + b with a >= 1: tail beyond r(n) is at most
    # 2^-(r(n)-1), so r(n) = n+1+b is a valid certificate rate
    for a, b in [(1, 1), (2, 1), (2, 3), (3, 2)]:
        f = NameStream.affine(a, b)
        r = Modulus.shift(1 + b)
        for n in range(6):
            assert roc_certificate_check(f, r, n, 500).status is CheckStatus.CONSISTENT


# ---------------------------------------------------------------------------
# names from increasing streams
# ---------------------------------------------------------------------------


def test_digit_exponents():
    assert digit_exponents(Dyadic.of(3, 3)) == [2, 3]
    assert digit_exponents(ZERO) == []


def test_name_from_increasing_simple():
    xs = IncreasingDyadicStream.from_list([ZERO, Dyadic.of(1, 1), Dyadic.of(3, 2)])
    f = name_from_increasing(xs, 2)
    assert f.values(f.length) == [1, 2]


def test_name_from_increasing_three_eighths():
    xs = IncreasingDyadicStream.from_list([ZERO, Dyadic.of(3, 3)])
    f = name_from_increasing(xs, 1)
    assert f.values(f.length) == [2, 3]


def test_name_from_increasing_rejects_decrease():
    xs = IncreasingDyadicStream.from_list(
        [ZERO, Dyadic.of(1, 1), Dyadic.of(1, 2)], strict=False
    )
    with pytest.raises(MonotonicityViolation):
        name_from_increasing(xs, 2)


def test_block_boundary_sums_reconstruct_stream():
    rng = random.Random(17)
    for _ in range(100):
        vals = [ZERO]
        for _ in range(rng.randint(1, 12)):
            exp = rng.randint(8, 16)
            # increments below 2^-4 keep the 12-step total inside [0, 1]
            vals.append(vals[-1] + Dyadic.of(rng.randint(1, 2 ** (exp - 4) - 1), exp))
        xs = IncreasingDyadicStream.from_list(vals)
        steps = len(vals) - 1
        f = name_from_increasing(xs, steps)
        for t in range(steps + 1):
            upto = f.block_boundaries[t] - 1
            assert partial_sum(f, upto) == xs.at(t)
            if upto >= 0:
                # rearranging by multiplicity leaves the block sums fixed
                assert multiplicities(f, upto).rearranged_sum() == xs.at(t)


# ---------------------------------------------------------------------------
# strongly left-computable and regular streams
# ---------------------------------------------------------------------------


def test_strongly_lc_evens():
    w = NatSetView.from_elements([0, 2, 4, 6, 8, 10], horizon=12)
    xs = strongly_lc(w)
    # geometric oracle
    for t in range(7):
        oracle = sum(Fraction(1, 2 ** (2 * j + 1)) for j in range(t))
        assert frac(xs.at(t)) == oracle
    assert xs.at(10) == xs.at(6)  # constant after exhaustion


def test_strongly_lc_empty():
    w = NatSetView.from_elements([], horizon=4)
    xs = strongly_lc(w)
    assert xs.at(0) == ZERO and xs.at(5) == ZERO


def test_strongly_lc_rejects_duplicates():
    w = NatSetView(lambda n: n == 1, horizon=8, enumerator=lambda: iter([1, 1]))
    xs = strongly_lc(w)
    with pytest.raises(NotASet):
        xs.at(2)


def test_regular_sum_two_halves():
    w = NatSetView.from_elements([0], horizon=4)
    xs = regular_sum([strongly_lc(w), strongly_lc(w)])
    assert xs.at(0) == ZERO
    assert frac(xs.at(1)) == 1
    assert frac(xs.at(9)) == 1


def test_strongly_lc_monotone_bounded():
    rng = random.Random(23)
    for _ in range(20):
        elems = rng.sample(range(40), rng.randint(0, 20))
        w = NatSetView.from_elements(elems, horizon=40)
        xs = strongly_lc(w)
        prev = ZERO
        for t in range(25):
            cur = xs.at(t)
            assert prev <= cur <= Dyadic.of(1, 0)
            prev = cur

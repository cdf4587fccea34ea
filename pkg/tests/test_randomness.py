"""Test families: weights, validation, coverage, and both directions of
the test/complexity-rate correspondence."""

import random
from fractions import Fraction

import pytest

from leftreal.errors import (
    DegenerateMachine,
    LevelEmpty,
    PrefixViolation,
    PreconditionRefuted,
    RateError,
)
from leftreal.foundations import BitStream, Dyadic, strings_of_length
from leftreal.kraft_chaitin import kc_allocate, kc_build_machine
from leftreal.machines import Budget, Interpreter, complexity, validate_table
from leftreal.names import Modulus
from leftreal.randomness import (
    FamilyStatus,
    KurtzStatus,
    TestFamily,
    TestKind,
    covers,
    kurtz_witness_check,
    level_weight,
    rate_from_skt,
    skt_from_rate,
    validate_family,
)

THREE_ENTRY = validate_table([("0", "00"), ("10", "01"), ("11", "111")])


def frac(d: Dyadic) -> Fraction:
    return Fraction(d.num, 2**d.exp)


def random_machine_and_rate(rng: random.Random):
    """A table machine with domain weight < 1 and an admissible rate."""
    weight = Fraction(0)
    lengths = []
    while len(lengths) < rng.randint(1, 32):
        l = rng.randint(2, 10)
        if weight + Fraction(1, 2**l) >= 1:  # strict: keep a free crumb
            break
        weight += Fraction(1, 2**l)
        lengths.append(l)
    codes = kc_allocate(lengths)
    entries = []
    for c in codes:
        out_len = rng.randint(0, 10)
        entries.append((c, "".join(rng.choice("01") for _ in range(out_len))))
    offsets = [rng.randint(2, 4)]
    for _ in range(6):
        offsets.append(offsets[-1] + rng.randint(1, 3))
    r = Modulus.from_function(lambda n, off=tuple(offsets): n + off[n])
    return validate_table(entries), r


# ---------------------------------------------------------------------------
# weights and validation
# ---------------------------------------------------------------------------


def test_level_weight_small_example():
    fam = TestFamily.explicit([[], ["000", "001"]], TestKind.MARTIN_LOF)
    assert frac(level_weight(fam, 1)) == Fraction(1, 4)
    assert frac(level_weight(fam, 1)) <= Fraction(1, 2)


def test_level_weight_empty_level():
    fam = TestFamily.explicit([[]], TestKind.MARTIN_LOF)
    assert level_weight(fam, 0).is_zero()
    assert level_weight(fam, 7).is_zero()


def test_level_weight_deduplicates():
    fam = TestFamily.explicit([["01", "01", "01"]], TestKind.MARTIN_LOF)
    assert frac(level_weight(fam, 0)) == Fraction(1, 4)


def test_validate_consistent_family():
    fam = TestFamily.explicit([["0"], ["00"], ["000"]], TestKind.STRONG_KURTZ)
    assert validate_family(fam, 2).consistent


def test_validate_refutes_mixed_lengths():
    fam = TestFamily.explicit([["0"], ["00"], ["000", "01"]], TestKind.STRONG_KURTZ)
    v = validate_family(fam, 2)
    assert v.status is FamilyStatus.REFUTED and v.refuted_level == 2


def test_validate_refutes_overweight_level():
    fam = TestFamily.explicit(
        [["0"], ["00"], ["0000", "0001", "0010", "0011", "0100"]],
        TestKind.MARTIN_LOF,
    )
    v = validate_family(fam, 2)
    assert v.status is FamilyStatus.REFUTED and v.refuted_level == 2


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------


def test_covers_finds_prefix():
    fam = TestFamily.explicit([["01"]], TestKind.STRONG_KURTZ)
    rep = covers(fam, BitStream.periodic("01"), 0)
    assert rep.covered and rep.witness == "01"


def test_covers_rejects_non_prefix():
    fam = TestFamily.explicit([["11"]], TestKind.STRONG_KURTZ)
    assert not covers(fam, BitStream.periodic("01"), 0).covered


# ---------------------------------------------------------------------------
# machine + rate -> family
# ---------------------------------------------------------------------------


def test_skt_from_rate_three_entry_machine():
    fam = skt_from_rate(THREE_ENTRY, Modulus.shift(2), 3, Budget(12, 10**3))
    assert fam.level_list(0) == ["00", "01"]
    assert fam.level_list(1) == ["111"]
    assert fam.level_list(2) == [] and fam.level_list(3) == []
    assert fam.kind is TestKind.STRONG_KURTZ
    assert fam.meta["complete"]
    assert validate_family(fam, 3).consistent


def test_skt_from_rate_empty_machine():
    fam = skt_from_rate(validate_table([]), Modulus.shift(2), 4, Budget(12, 10**3))
    assert all(fam.level_list(n) == [] for n in range(5))


def test_skt_from_rate_rejects_slow_rates():
    with pytest.raises(RateError):
        skt_from_rate(THREE_ENTRY, Modulus.affine(1, 0), 2, Budget(12, 10**3))
    with pytest.raises(RateError):
        skt_from_rate(
            THREE_ENTRY, Modulus.from_function(lambda n: 5), 2, Budget(12, 10**3)
        )


def test_skt_from_rate_random_machines_satisfy_bounds():
    rng = random.Random(101)
    for _ in range(10):
        machine, r = random_machine_and_rate(rng)
        fam = skt_from_rate(machine, r, 5, Budget(14, 10**4))
        for n in range(6):
            level = fam.level_list(n)
            assert {len(s) for s in level} <= {r.at(n)}
            assert len(level) < 1 << (r.at(n) - n)
            assert frac(level_weight(fam, n)) < Fraction(1, 2**n)


def test_skt_from_rate_degenerate_complete_code_flagged():
    # the whole domain is the complete code {0,1}^2 producing distinct
    # outputs of length 4: the strict cardinality bound fails at n = 2
    machine = validate_table(
        [("00", "0000"), ("01", "0001"), ("10", "0010"), ("11", "0011")]
    )
    with pytest.raises(DegenerateMachine):
        skt_from_rate(machine, Modulus.shift(2), 2, Budget(10, 10**3))


def test_skt_from_rate_covers_certified_stream():
    # machine built so that prefixes of x carry certificates at levels 0..3
    x = BitStream.periodic("10")
    requests = [(2, x.prefix(n + 2)) for n in range(4)]  # weight exactly 1
    machine = kc_build_machine(requests)
    fam = skt_from_rate(machine, Modulus.shift(2), 3, Budget(12, 10**3))
    for n in range(4):
        rep = covers(fam, x, n)
        assert rep.covered and rep.witness == x.prefix(n + 2)


# ---------------------------------------------------------------------------
# family -> machine + rate
# ---------------------------------------------------------------------------


def singleton_family(x: BitStream, length_of, n_levels: int) -> TestFamily:
    return TestFamily.explicit(
        [[x.prefix(length_of(n))] for n in range(n_levels)], TestKind.STRONG_KURTZ
    )


def test_rate_from_skt_singleton_levels():
    # levels hold one string of length 3n+3; the odd levels request
    # lengths (3(2m+1)+3) - m = 5m + 6... realized exactly by the table
    x = BitStream.periodic("011")
    fam = singleton_family(x, lambda n: 3 * n + 3, 14)
    assert validate_family(fam, 13).consistent
    result = rate_from_skt(fam, overhead=0, n_max=5)
    b = Budget(40, 10**5)
    for n in range(6):
        r_n = result.rate.at(n)
        assert r_n == 3 * (2 * n + 1) + 3
        tau = x.prefix(r_n)
        v = complexity(result.machine, tau, b)
        assert v.value == r_n - n  # requested length, realized exactly


def test_rate_from_skt_weight_chain_fits_in_unit_interval():
    # a maximal Martin-Löf family: levels of weight exactly 2^-n turn
    # into requests of total weight exactly 1, which the allocator accepts
    x = BitStream.periodic("10")
    levels = []
    for n in range(16):
        levels.append(
            [p + x.prefix(n + 2)[len(p) :] for p in strings_of_length(2)]
            if n % 2 == 1
            else []
        )
    # each odd level n holds 4 strings of length n+2: weight 4*2^-(n+2) = 2^-n
    fam = TestFamily.explicit(levels, TestKind.STRONG_KURTZ)
    assert validate_family(fam, 15).consistent
    result = rate_from_skt(fam, overhead=0, n_max=7)
    committed = sum(Fraction(1, 2**l) for l, _ in result.requests)
    # the telescoping chain sums to 1 - 2^-(n_max+1), approaching the
    # closed unit bound from below; the allocator accepted everything
    assert committed == 1 - Fraction(1, 2**8)
    assert len(result.codewords) == len(result.requests)


def test_rate_from_skt_empty_family_has_no_rate():
    fam = TestFamily.explicit([[]], TestKind.STRONG_KURTZ)
    result = rate_from_skt(fam, overhead=0, n_max=2)
    assert result.machine.entries == ()
    with pytest.raises(LevelEmpty):
        result.rate.at(0)


def test_rate_from_skt_round_trip_through_interpreter_embedding():
    # fold in the measured table-call overhead: embedding the synthesized
    # table as the first auxiliary costs exactly 3 extra bits
    x = BitStream.periodic("01")
    fam = singleton_family(x, lambda n: n + 2, 40)
    interp_overhead = Interpreter().call_overhead(1)
    assert interp_overhead == 3
    result = rate_from_skt(fam, overhead=interp_overhead, n_max=5)
    host = Interpreter(aux=(result.machine,))
    b = Budget(30, 10**4)
    for n in range(6):
        r_n = result.rate.at(n)
        v = complexity(host, x.prefix(r_n), b)
        assert v.at_most(r_n - n)


def test_rate_from_skt_rejects_non_uniform_levels():
    fam = TestFamily.explicit(
        [[], ["000"], [], ["00000", "0000"]], TestKind.STRONG_KURTZ
    )
    with pytest.raises(PreconditionRefuted):
        rate_from_skt(fam, overhead=0, n_max=1)


# ---------------------------------------------------------------------------
# weight-1 prefix code witness check
# ---------------------------------------------------------------------------


def complete_codes(depth: int):
    """All complete binary prefix codes of depth <= depth."""
    yield [""]
    if depth > 0:
        for left in complete_codes(depth - 1):
            for right in complete_codes(depth - 1):
                yield ["0" + w for w in left] + ["1" + w for w in right]


def test_kurtz_witness_complete_codes_exhaustive():
    streams = [
        BitStream.periodic("0"),
        BitStream.periodic("1"),
        BitStream.periodic("01"),
        BitStream.periodic("110"),
        BitStream.periodic("0101001011"),
    ]
    count = 0
    for code in complete_codes(4):
        count += 1
        # every length-4 window extends some codeword: full coverage
        for w in strings_of_length(4):
            assert any(w.startswith(c) or c.startswith(w) for c in code)
        for x in streams:
            rep = kurtz_witness_check(code, x, stage=100)
            assert rep.status is KurtzStatus.PREFIX_FOUND
    assert count == 677  # all full binary trees of depth <= 4


def test_kurtz_witness_examples():
    x = BitStream.periodic("10")
    assert kurtz_witness_check(["0", "10", "11"], x, 10).witness == "10"
    assert (
        kurtz_witness_check(["00", "01", "10", "11"], x, 10).status
        is KurtzStatus.PREFIX_FOUND
    )


def test_kurtz_witness_rejects_underweight():
    with pytest.raises(PreconditionRefuted):
        kurtz_witness_check(["00", "01"], BitStream.periodic("0"), 10)


def test_kurtz_witness_rejects_prefix_violation():
    with pytest.raises(PrefixViolation):
        kurtz_witness_check(["0", "00", "01", "1"], BitStream.periodic("0"), 10)

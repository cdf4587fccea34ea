"""Level-indexed randomness-test families with exact weight accounting.

A family assigns to each level ``n`` an enumerable set of strings.  A
Martin-Löf family must keep the level weight ``sum(2**-len(s))`` at or
below ``2**-n``; a strong Kurtz family additionally keeps each level
length-uniform.  Levels are deduplicated on enumeration, so repeated
emissions never double-count weight.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .errors import (
    DegenerateMachine,
    HorizonExceeded,
    LevelEmpty,
    PrefixViolation,
    PreconditionRefuted,
    RateError,
)
from .foundations import BitStream, Dyadic, ONE, ZERO, half_power
from .kraft_chaitin import KCAllocator
from .machines import Budget, PrefixMachine, TableMachine, enumerate_domain
from .names import Modulus


class TestKind(enum.Enum):
    __test__ = False  # keep pytest from collecting the Test* name

    MARTIN_LOF = "martin-löf"
    STRONG_KURTZ = "strong-kurtz"


class TestFamily:
    """Replayable level enumerators plus kind and optional cardinalities."""

    __test__ = False  # keep pytest from collecting the Test* name

    def __init__(
        self,
        level_fn: Callable[[int], Iterable[str]],
        kind: TestKind,
        card_fn: Optional[Callable[[int], int]] = None,
        label: str = "",
        meta: Optional[dict] = None,
    ):
        self._level_fn = level_fn
        self.kind = kind
        self.card_fn = card_fn
        self.label = label
        self.meta = meta or {}

    def level(self, n: int) -> Iterator[str]:
        """Fresh deduplicated enumeration of level ``n``."""
        seen: set[str] = set()
        for s in self._level_fn(n):
            if s not in seen:
                seen.add(s)
                yield s

    def level_list(self, n: int, stage: Optional[int] = None) -> list[str]:
        it = self.level(n)
        if stage is None:
            return list(it)
        return list(itertools.islice(it, stage))

    @staticmethod
    def explicit(
        levels: Sequence[Sequence[str]], kind: TestKind, label: str = ""
    ) -> "TestFamily":
        frozen = [list(lv) for lv in levels]

        def level_fn(n: int) -> Iterable[str]:
            return frozen[n] if n < len(frozen) else []

        def card_fn(n: int) -> int:
            return len(dict.fromkeys(frozen[n])) if n < len(frozen) else 0

        return TestFamily(level_fn, kind, card_fn=card_fn, label=label)


def weight_of(strings: Iterable[str]) -> Dyadic:
    """Exact ``sum(2**-len(s))`` (caller is responsible for deduplication)."""
    lens = [len(s) for s in strings]
    if not lens:
        return ZERO
    e = max(lens)
    return Dyadic.of(sum(1 << (e - l) for l in lens), e)


def level_weight(family: TestFamily, n: int, stage: Optional[int] = None) -> Dyadic:
    """Weight of the first ``stage`` deduplicated strings of level ``n``.

    A stage-truncated weight is a lower bound of the true level weight;
    it is exact when the enumerator exhausts within the stage.
    """
    return weight_of(family.level_list(n, stage))


class FamilyStatus(enum.Enum):
    CONSISTENT = "consistent"
    REFUTED = "refuted"


@dataclass
class FamilyVerdict:
    status: FamilyStatus
    refuted_level: Optional[int] = None
    reason: str = ""

    @property
    def consistent(self) -> bool:
        return self.status is FamilyStatus.CONSISTENT


def validate_family(
    family: TestFamily, n_max: int, stage: Optional[int] = None
) -> FamilyVerdict:
    """Budgeted weight / uniform-length / cardinality validation.

    Refutation is sound and final (weights only grow with more
    enumeration); consistency is relative to the stage budget.
    """
    for n in range(n_max + 1):
        strings = family.level_list(n, stage)
        if family.kind is TestKind.STRONG_KURTZ and len({len(s) for s in strings}) > 1:
            return FamilyVerdict(
                FamilyStatus.REFUTED, n, reason=f"mixed lengths at level {n}"
            )
        w = weight_of(strings)
        if w > half_power(n):
            return FamilyVerdict(
                FamilyStatus.REFUTED,
                n,
                reason=f"level {n} weight {w.num}/2^{w.exp} exceeds 2^-{n}",
            )
        if family.card_fn is not None and stage is None:
            declared = family.card_fn(n)
            if declared != len(strings):
                return FamilyVerdict(
                    FamilyStatus.REFUTED,
                    n,
                    reason=f"level {n} emitted {len(strings)} strings, declared {declared}",
                )
    return FamilyVerdict(FamilyStatus.CONSISTENT)


@dataclass
class CoverageReport:
    level: int
    witness: Optional[str]
    stage: Optional[int]

    @property
    def covered(self) -> bool:
        return self.witness is not None


def covers(
    family: TestFamily, x: BitStream, n: int, stage: Optional[int] = None
) -> CoverageReport:
    """Search level ``n`` for a prefix of ``x``."""
    for count, s in enumerate(family.level(n)):
        if stage is not None and count >= stage:
            break
        if x.prefix(len(s)) == s:
            return CoverageReport(level=n, witness=s, stage=stage)
    return CoverageReport(level=n, witness=None, stage=stage)


# ---------------------------------------------------------------------------
# Rate -> test (one proof direction)
# ---------------------------------------------------------------------------


def skt_from_rate(
    machine: PrefixMachine, r: Modulus, n_max: int, budget: Budget
) -> TestFamily:
    """Build the strong Kurtz family whose level ``n`` collects outputs of
    length ``r(n)`` produced by programs of length at most ``r(n) - n``.

    Requires ``r`` strictly increasing with ``r(n) > n`` on the range.
    The length budget is raised to ``r(n_max) - n_max`` when smaller
    (the level definition fixes the program lengths it needs; the guard
    still applies).  The family's ``meta['complete']`` is False when the
    step budget may have hidden domain elements (levels are then
    under-approximations: still sound for the weight bound, possibly
    incomplete for coverage).
    """
    for n in range(n_max + 1):
        if r.at(n) <= n:
            raise RateError(f"need r(n) > n, got r({n}) = {r.at(n)}")
    if not r.strictly_increasing_on(n_max):
        raise RateError("rate must be strictly increasing on the level range")
    need_l = max(r.at(n) - n for n in range(n_max + 1))
    if need_l > budget.L:
        budget = Budget(need_l, budget.t, allow_large=budget.allow_large)
    enum = enumerate_domain(machine, budget)
    levels: list[list[str]] = []
    for n in range(n_max + 1):
        out_len, max_prog = r.at(n), r.at(n) - n
        level = list(
            dict.fromkeys(
                out
                for prog, out in enum.pairs
                if len(out) == out_len and len(prog) <= max_prog
            )
        )
        if len(level) >= 1 << max_prog:
            raise DegenerateMachine(
                f"level {n} holds {len(level)} >= 2^{max_prog} strings; "
                "the budgeted domain is a complete code at that length"
            )
        levels.append(level)

    family = TestFamily.explicit(levels, TestKind.STRONG_KURTZ, label="skt-from-rate")
    family.meta.update(
        {
            "complete": not enum.truncated_lengths,
            "machine": getattr(machine, "id", None),
            "rate": r.label,
            "n_max": n_max,
        }
    )
    return family


# ---------------------------------------------------------------------------
# Test -> machine and rate (the converse direction)
# ---------------------------------------------------------------------------


@dataclass
class RateReadoff:
    """Rate read off a family's level lengths; not necessarily monotone."""

    values: list[Optional[int]]

    def at(self, n: int) -> int:
        if n >= len(self.values):
            raise HorizonExceeded(f"rate known only up to {len(self.values) - 1}")
        v = self.values[n]
        if v is None:
            raise LevelEmpty(n)
        return v


@dataclass
class SynthesizedMachine:
    machine: TableMachine
    rate: RateReadoff
    overhead: int
    requests: list[tuple[int, str]]
    codewords: list[str]


def rate_from_skt(
    family: TestFamily,
    overhead: int,
    n_max: int,
    stage: Optional[int] = None,
) -> SynthesizedMachine:
    """Synthesize a machine from a covering strong Kurtz family.

    Requests ``(len(s) - m, s)`` are drawn from the odd levels ``2m+1``
    (whose weights telescope to at most 1), in level order; the returned
    rate reads off the common length of level ``2(n + overhead) + 1``.
    ``overhead`` is the measured cost of embedding the synthesized table
    into a host machine (0 when complexities are taken relative to the
    synthesized machine itself).
    """
    alloc = KCAllocator()
    entries: list[tuple[str, str]] = []
    requests: list[tuple[int, str]] = []
    codewords: list[str] = []
    for m in range(n_max + overhead + 1):
        for s in family.level_list(2 * m + 1, stage):
            length = len(s) - m
            if length < 0:
                raise PreconditionRefuted(
                    f"level {2 * m + 1} string shorter than the level index allows"
                )
            requests.append((length, s))
            cw = alloc.request(length)
            codewords.append(cw)
            entries.append((cw, s))
    values: list[Optional[int]] = []
    for n in range(n_max + 1):
        lengths = {len(s) for s in family.level_list(2 * (n + overhead) + 1, stage)}
        if len(lengths) > 1:
            raise PreconditionRefuted(
                f"level {2 * (n + overhead) + 1} is not length-uniform"
            )
        values.append(lengths.pop() if lengths else None)
    return SynthesizedMachine(
        machine=TableMachine(tuple(entries)),
        rate=RateReadoff(values),
        overhead=overhead,
        requests=requests,
        codewords=codewords,
    )


# ---------------------------------------------------------------------------
# Kurtz witness check
# ---------------------------------------------------------------------------


class KurtzStatus(enum.Enum):
    PREFIX_FOUND = "prefix-found"
    NOT_FOUND_AT_STAGE = "not-found-at-stage"


@dataclass
class KurtzReport:
    status: KurtzStatus
    witness: Optional[str] = None
    total_weight: Optional[Dyadic] = None


def kurtz_witness_check(
    strings: Iterable[str], x: BitStream, stage: int
) -> KurtzReport:
    """Check whether a weight-1 prefix-free set contains a prefix of ``x``.

    The set must be prefix-free, exhaust within ``stage`` emissions, and
    have total weight exactly 1 (a complete code); violations raise.
    """
    collected: list[str] = []
    it = iter(strings)
    for _ in range(stage):
        try:
            collected.append(next(it))
        except StopIteration:
            break
    else:
        try:
            next(it)
            raise PreconditionRefuted(f"enumerator did not exhaust within {stage}")
        except StopIteration:
            pass
    collected = list(dict.fromkeys(collected))
    srt = sorted(collected)
    for a, b in zip(srt, srt[1:]):
        if b.startswith(a):
            raise PrefixViolation(a, b)
    total = weight_of(collected)
    if total != ONE:
        raise PreconditionRefuted(
            f"total weight {total.num}/2^{total.exp} differs from 1"
        )
    witness = next((s for s in collected if x.prefix(len(s)) == s), None)
    if witness is None:
        return KurtzReport(KurtzStatus.NOT_FOUND_AT_STAGE, total_weight=total)
    return KurtzReport(KurtzStatus.PREFIX_FOUND, witness=witness, total_weight=total)

"""The two constructive bridges between certified dyadic-series names and
complexity-rate certificates.

One direction turns a name with a rearranged-tail rate into a covering
length-uniform test family by enumerating open intervals in stages; the
other reconstructs a name in blocks from an increasing approximation
whose prefixes carry machine-relative complexity certificates.

Both directions assume a non-dyadic limit; the stage machinery detects
the finite/eventually-constant inputs it can see at desk scale and
reports an explicit shortcut instead of running a loop whose open
intervals could never contain the limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import PreconditionRefuted, RateError
from .foundations import Dyadic, ZERO, floor_scale, half_power
from .machines import Budget, PrefixMachine, complexity
from .names import (
    CheckStatus,
    IncreasingDyadicStream,
    Modulus,
    NameStream,
    name_from_increasing,
    roc_certificate_check,
    tail_weight,
)
from .randomness import TestFamily, TestKind


@dataclass
class RateSpec:
    """A tail-weight rate plus the stage-length schedule derived from it."""

    r: Modulus

    def s(self, n: int) -> int:
        return self.r.at(n + 2) + n + 2


@dataclass(frozen=True)
class StageInterval:
    """One enumerated open interval ``]lo, lo + 2**-length_exp[``."""

    t: int
    lo: Dyadic
    length_exp: int
    m: int


@dataclass
class StageTrace:
    """Replayable record of a staged interval enumeration."""

    intervals: list[StageInterval]
    p_events: list[tuple[int, int, int]]  # (pointer index, stage, new value)
    stages: int
    name_label: str = ""
    rate_label: str = ""

    def p_at(self, e: int, t: int) -> int:
        value = 0
        for idx, stage, new in self.p_events:
            if idx == e and stage <= t:
                value = new
        return value

    def final_p(self) -> dict[int, tuple[int, int]]:
        """Last observed pointer values as ``index -> (value, stage)``."""
        out: dict[int, tuple[int, int]] = {}
        for idx, stage, new in self.p_events:
            out[idx] = (new, stage)
        return out

    def intervals_of_exp(self, exp: int) -> list[StageInterval]:
        return [iv for iv in self.intervals if iv.length_exp == exp]


def _cells_touching(lo: Dyadic, exp: int) -> list[int]:
    """Grid cells of size ``2**-exp`` meeting the open interval at ``lo``.

    At most two: the cell containing ``lo`` and, when ``lo`` is not on
    the grid, the next one (cells beyond [0, 1] are clipped).
    """
    j0 = floor_scale(lo, exp)
    cells = []
    if j0 < (1 << exp):
        cells.append(j0)
    if lo.exp > exp and j0 + 1 < (1 << exp):  # lo strictly inside its cell
        cells.append(j0 + 1)
    return cells


@dataclass
class RocToSktResult:
    trace: Optional[StageTrace]
    family: Optional[TestFamily]
    dyadic_shortcut: bool = False
    reason: str = ""


def roc_to_skt(
    f: NameStream,
    rate: RateSpec,
    stages: int,
    certify_levels: int = 8,
) -> RocToSktResult:
    """Run the staged interval enumeration for a certified name.

    At stage ``t+1`` the smallest pointer index ``m`` whose window weight
    ``sum(2**-f(k), p(m) <= k <= t)`` exceeds ``2**-s(m)`` is reset to
    ``t+1`` and the open interval ``]x_t, x_t + 2**-s(m)[`` is emitted.
    The returned family's level ``n`` collects all strings of length
    ``s(n)`` whose closed interval meets some emitted interval of length
    ``2**-s(n)``.
    """
    if f.finite:
        return RocToSktResult(
            None,
            None,
            dyadic_shortcut=True,
            reason="finite name denotes a dyadic value; open intervals "
            "cannot contain it",
        )
    r = rate.r
    if r.at(0) <= f.at(0):
        raise RateError(f"need r(0) > f(0): r(0)={r.at(0)}, f(0)={f.at(0)}")
    for n in range(certify_levels + 1):
        chk = roc_certificate_check(f, r, n, stages)
        if chk.status is CheckStatus.REFUTED:
            raise PreconditionRefuted(
                f"tail certificate refuted at level {n}: "
                f"tail {chk.tail.num}/2^{chk.tail.exp} > 2^-{n}"
            )

    sums = [ZERO]  # sums[i] = x_{i-1} = sum of the first i name terms
    pointers: dict[int, int] = {}
    events: list[tuple[int, int, int]] = []
    intervals: list[StageInterval] = []
    for t in range(stages):
        sums.append(sums[-1] + half_power(f.at(t)))
        x_t = sums[-1]
        m = 0
        while True:
            window = x_t - sums[pointers.get(m, 0)]
            if window > half_power(rate.s(m)):
                break
            m += 1
            if m > t:
                raise AssertionError(
                    f"no pointer index qualified at stage {t + 1}; "
                    "the certified preconditions exclude this"
                )
        pointers[m] = t + 1
        events.append((m, t + 1, t + 1))
        intervals.append(StageInterval(t=t, lo=x_t, length_exp=rate.s(m), m=m))

    trace = StageTrace(
        intervals=intervals,
        p_events=events,
        stages=stages,
        name_label=f.label,
        rate_label=r.label,
    )

    def level_fn(n: int):
        exp = rate.s(n)
        cells: set[int] = set()
        for iv in trace.intervals_of_exp(exp):
            cells.update(_cells_touching(iv.lo, exp))
        return [format(j, f"0{exp}b") for j in sorted(cells)]

    family = TestFamily(
        level_fn,
        TestKind.STRONG_KURTZ,
        label="skt-from-name",
        meta={"stages": stages, "rate": r.label, "name": f.label},
    )
    return RocToSktResult(trace=trace, family=family)


@dataclass
class BoundCheck:
    holds: bool
    count: int
    bound: int
    level: int


def count_bound_check(trace: StageTrace, rate: RateSpec, n: int) -> BoundCheck:
    """Check the per-length stage-count bound ``2**(r(n+2)+1)``."""
    count = len(trace.intervals_of_exp(rate.s(n)))
    bound = 1 << (rate.r.at(n + 2) + 1)
    return BoundCheck(holds=count <= bound, count=count, bound=bound, level=n)


# ---------------------------------------------------------------------------
# Increasing approximation -> name with computably convergent rearrangement
# ---------------------------------------------------------------------------


@dataclass
class LcToRocResult:
    s_values: list[int]
    name: Optional[NameStream]
    exhausted_at: Optional[int] = None
    dyadic_shortcut: bool = False
    reason: str = ""
    machine_id: str = ""
    rate_label: str = ""

    @property
    def complete(self) -> bool:
        return self.exhausted_at is None and not self.dyadic_shortcut


def lc_to_roc(
    xs: IncreasingDyadicStream,
    r: Modulus,
    machine: PrefixMachine,
    budget: Budget,
    stages: int,
    n_max: int,
) -> LcToRocResult:
    """Reconstruct a block name along complexity-certified stages.

    ``s(0) = 0``; ``s(n+1)`` is the least ``m > s(n)`` (searched up to
    ``stages``) all of whose prefixes ``xs(m)`` restricted to ``r(k)``
    bits certify complexity at most ``r(k) - k`` for ``k <= n``.  Budget
    complexity values are upper bounds, so the gate is sound.  Block
    ``t`` of the name lists the digit exponents of
    ``xs(s(t+1)) - xs(s(t))`` in increasing order.
    """
    if xs.eventually_constant:
        return LcToRocResult(
            [],
            None,
            dyadic_shortcut=True,
            reason="eventually constant approximation denotes a dyadic value",
        )
    if xs.at(0) != ZERO:
        raise ValueError("approximation must start at 0")
    if not r.strictly_increasing_on(n_max):
        raise RateError("rate must be strictly increasing on the search range")

    s_values = [0]
    exhausted_at: Optional[int] = None
    for n in range(n_max):
        found: Optional[int] = None
        for m in range(s_values[-1] + 1, stages + 1):
            ok = all(
                complexity(machine, xs.at(m).prefix_bits(r.at(k)), budget).at_most(
                    r.at(k) - k
                )
                for k in range(n + 1)
            )
            if ok:
                found = m
                break
        if found is None:
            exhausted_at = n + 1
            break
        s_values.append(found)

    blocks = IncreasingDyadicStream.from_list(
        [xs.at(v) for v in s_values], label=f"{xs.label}@s"
    )
    name = name_from_increasing(blocks, len(s_values) - 1, label=f"roc({xs.label})")
    return LcToRocResult(
        s_values=s_values,
        name=name,
        exhausted_at=exhausted_at,
        machine_id=getattr(machine, "id", ""),
        rate_label=r.label,
    )


@dataclass
class TailBound:
    holds: bool
    tail: Dyadic
    bound: Dyadic
    level: int
    stage: int


def tail_bound_check(
    name: NameStream, r: Modulus, n: int, upto: Optional[int] = None
) -> TailBound:
    """Check the block-name tail bound ``(n+1) * 2**-n`` beyond ``r(n)``."""
    if upto is None:
        if not name.finite:
            raise ValueError("need an explicit stage for an unbounded name")
        upto = name.length - 1
    tail = tail_weight(name, r.at(n) + 1, upto)
    bound = Dyadic.of(n + 1, n)
    return TailBound(
        holds=tail <= bound, tail=tail, bound=bound, level=n, stage=upto
    )


@dataclass
class CarryTrace:
    position: int
    values: list[int]  # R[t] for t = 0 .. block count
    carries: list[int]  # stages t with R[t+1] > R[t]

    @property
    def max_step(self) -> int:
        return max(
            (b - a for a, b in zip(self.values, self.values[1:])), default=0
        )


def carry_counter(name: NameStream, position: int, stages: Optional[int] = None) -> CarryTrace:
    """Count carries past a binary position along a block-built name.

    ``R[t]`` is the integer part of ``2**position`` times the weight the
    first ``t`` blocks place strictly beyond ``position``; a carry is a
    stage where ``R`` increases.  Each block raises any multiplicity by
    at most one, so ``R`` steps by at most one per stage.
    """
    if name.block_boundaries is None:
        raise ValueError("carry counting needs a block-built name")
    boundaries = name.block_boundaries
    if stages is None:
        stages = len(boundaries) - 1
    values = []
    for t in range(stages + 1):
        tail = tail_weight(name, position + 1, boundaries[t] - 1)
        values.append(floor_scale(tail, position))
    carries = [t for t in range(stages) if values[t + 1] > values[t]]
    return CarryTrace(position=position, values=values, carries=carries)

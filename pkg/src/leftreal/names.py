"""Dyadic-series names, multiplicity tables, convergence-rate certificates,
and constructors for increasing dyadic approximations.

A *name* of a real ``x`` is a function ``f`` with ``sum(2**-f(k)) == x``.
Checks over infinitary claims follow refutation-only semantics: a check
either refutes (soundly, finally) or reports consistency at the budget it
was given, never more.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import (
    HorizonExceeded,
    InvalidName,
    MonotonicityViolation,
    NotASet,
    RangeViolation,
)
from .foundations import Dyadic, NatSetView, ONE, ZERO, half_power


# ---------------------------------------------------------------------------
# Streams of naturals / dyadics
# ---------------------------------------------------------------------------


class NameStream:
    """Replayable name ``f : N -> N``; may be finite at desk scale."""

    def __init__(
        self,
        fn: Callable[[int], int],
        length: Optional[int] = None,
        label: str = "",
        block_boundaries: Optional[list[int]] = None,
    ):
        self._fn = fn
        self.length = length
        self.label = label
        # for names built block-wise: boundaries[t] = number of values
        # emitted by the first t blocks
        self.block_boundaries = block_boundaries
        self._cache: dict[int, int] = {}

    @property
    def finite(self) -> bool:
        return self.length is not None

    def at(self, k: int) -> int:
        if k < 0:
            raise ValueError("name index must be a natural number")
        if self.length is not None and k >= self.length:
            raise HorizonExceeded(
                f"name {self.label or '?'} queried at {k} beyond length {self.length}"
            )
        v = self._cache.get(k)
        if v is None:
            v = self._fn(k)
            if v < 0:
                raise ValueError(f"name value must be natural, got {v} at {k}")
            self._cache[k] = v
        return v

    def values(self, count: int) -> list[int]:
        return [self.at(k) for k in range(count)]

    @staticmethod
    def from_list(values: Sequence[int], label: str = "") -> "NameStream":
        vals = list(values)
        return NameStream(vals.__getitem__, length=len(vals), label=label)

    @staticmethod
    def affine(a: int, b: int) -> "NameStream":
        """The name ``f(k) = a*k + b``."""
        return NameStream(lambda k: a * k + b, label=f"{a}k+{b}")

    @staticmethod
    def from_function(fn: Callable[[int], int], label: str = "") -> "NameStream":
        return NameStream(fn, label=label)


class Modulus:
    """Replayable monotone rate ``n -> r(n)``; monotonicity is enforced."""

    def __init__(self, fn: Callable[[int], int], label: str = ""):
        self._fn = fn
        self.label = label
        self._values: list[int] = []

    def at(self, n: int) -> int:
        if n < 0:
            raise ValueError("rate index must be a natural number")
        while len(self._values) <= n:
            k = len(self._values)
            v = self._fn(k)
            if v < 0:
                raise ValueError(f"rate value must be natural, got {v} at {k}")
            if self._values and v < self._values[-1]:
                raise MonotonicityViolation(
                    f"rate {self.label or '?'} decreases at {k}: "
                    f"{self._values[-1]} -> {v}"
                )
            self._values.append(v)
        return self._values[n]

    def strictly_increasing_on(self, n_max: int) -> bool:
        return all(self.at(n) < self.at(n + 1) for n in range(n_max))

    def shifted(self, k: int) -> "Modulus":
        """The re-indexed rate ``n -> r(n + k)``."""
        return Modulus(lambda n: self.at(n + k), label=f"{self.label}>>{k}")

    @staticmethod
    def affine(a: int, b: int) -> "Modulus":
        return Modulus(lambda n: a * n + b, label=f"{a}n+{b}")

    @staticmethod
    def shift(c: int) -> "Modulus":
        """The rate ``r(n) = n + c``."""
        return Modulus(lambda n: n + c, label=f"n+{c}")

    @staticmethod
    def power2(offset: int) -> "Modulus":
        """The rate ``r(n) = 2**(n + offset)``."""
        return Modulus(lambda n: 1 << (n + offset), label=f"2^(n+{offset})")

    @staticmethod
    def from_values(values: Sequence[int], label: str = "") -> "Modulus":
        vals = list(values)

        def fn(n: int) -> int:
            if n >= len(vals):
                raise HorizonExceeded(
                    f"rate {label or '?'} defined only up to {len(vals) - 1}"
                )
            return vals[n]

        return Modulus(fn, label=label)

    @staticmethod
    def from_function(fn: Callable[[int], int], label: str = "") -> "Modulus":
        return Modulus(fn, label=label)


class IncreasingDyadicStream:
    """Replayable increasing sequence of dyadics in [0, 1]."""

    def __init__(
        self,
        fn: Callable[[int], Dyadic],
        strict: bool = False,
        eventually_constant: bool = False,
        label: str = "",
    ):
        self._fn = fn
        self.strict = strict
        self.eventually_constant = eventually_constant
        self.label = label
        self._values: list[Dyadic] = []

    def at(self, t: int) -> Dyadic:
        if t < 0:
            raise ValueError("stream index must be a natural number")
        while len(self._values) <= t:
            k = len(self._values)
            v = self._fn(k)
            if v < ZERO or v > ONE:
                raise RangeViolation(
                    f"stream {self.label or '?'} left [0,1] at {k}: {v}"
                )
            if self._values:
                prev = self._values[-1]
                if v < prev or (self.strict and v <= prev):
                    raise MonotonicityViolation(
                        f"stream {self.label or '?'} not "
                        f"{'strictly ' if self.strict else ''}increasing at {k}"
                    )
            self._values.append(v)
        return self._values[t]

    @staticmethod
    def from_list(
        values: Sequence[Dyadic],
        strict: bool = False,
        extend: bool = False,
        label: str = "",
    ) -> "IncreasingDyadicStream":
        vals = list(values)
        if not vals:
            raise ValueError("need at least one value")

        def fn(t: int) -> Dyadic:
            if t < len(vals):
                return vals[t]
            if extend:
                return vals[-1]
            raise HorizonExceeded(f"stream defined only up to {len(vals) - 1}")

        return IncreasingDyadicStream(
            fn, strict=strict and not extend, eventually_constant=extend, label=label
        )

    @staticmethod
    def from_prefix_sums(
        stream, bits_per_step: int = 1, label: str = ""
    ) -> "IncreasingDyadicStream":
        """Partial values of a bit stream: ``x_t = 0.(first bits_per_step*t bits)``."""

        def fn(t: int) -> Dyadic:
            return stream.prefix_value(bits_per_step * t)

        return IncreasingDyadicStream(fn, label=label or f"sums({stream.label})")

    @staticmethod
    def from_function(
        fn: Callable[[int], Dyadic], strict: bool = False, label: str = ""
    ) -> "IncreasingDyadicStream":
        return IncreasingDyadicStream(fn, strict=strict, label=label)


# ---------------------------------------------------------------------------
# Partial sums, multiplicities, tail weights
# ---------------------------------------------------------------------------


def partial_sum(f: NameStream, upto: int) -> Dyadic:
    """Exact ``sum(2**-f(k) for k <= upto)``; rejects sums above 1."""
    if upto < 0:
        return ZERO
    vals = f.values(upto + 1)
    e = max(vals)
    acc = sum(1 << (e - v) for v in vals)
    total = Dyadic.of(acc, e)
    if total > ONE:
        raise InvalidName(
            f"partial sum of {f.label or '?'} exceeds 1 at stage {upto}: {total}"
        )
    return total


@dataclass
class MultiplicityTable:
    """Counts ``m -> |{k <= stage : f(k) = m}|`` at a finite stage."""

    counts: dict[int, int]
    stage: int

    def count(self, m: int) -> int:
        return self.counts.get(m, 0)

    def rearranged_sum(self) -> Dyadic:
        """Exact ``sum(count(m) * 2**-m)`` over the table."""
        if not self.counts:
            return ZERO
        e = max(self.counts)
        acc = sum(c << (e - m) for m, c in self.counts.items())
        return Dyadic.of(acc, e)


def multiplicities(f: NameStream, upto: int) -> MultiplicityTable:
    return MultiplicityTable(dict(Counter(f.values(upto + 1))), stage=upto)


def tail_weight(f: NameStream, m0: int, upto: int) -> Dyadic:
    """Exact ``sum(2**-f(k) for k <= upto if f(k) >= m0)``.

    This is the stage-``upto`` lower bound of the true tail beyond ``m0``.
    """
    if upto < 0:
        return ZERO
    vals = [v for v in f.values(upto + 1) if v >= m0]
    if not vals:
        return ZERO
    e = max(vals)
    return Dyadic.of(sum(1 << (e - v) for v in vals), e)


class CheckStatus(enum.Enum):
    CONSISTENT = "consistent-at-budget"
    REFUTED = "refuted"


@dataclass
class RateCheck:
    """Outcome of a budgeted tail-rate check.

    Refutation is sound and final; consistency only says the budget found
    no counterexample.
    """

    status: CheckStatus
    level: int
    tail: Dyadic
    bound: Dyadic
    stage: int


def roc_certificate_check(
    f: NameStream, r: Modulus, n: int, upto: int
) -> RateCheck:
    """Check the rearranged-tail certificate ``tail(r(n)) <= 2**-n`` at a stage."""
    tail = tail_weight(f, r.at(n), upto)
    bound = half_power(n)
    status = CheckStatus.REFUTED if tail > bound else CheckStatus.CONSISTENT
    return RateCheck(status=status, level=n, tail=tail, bound=bound, stage=upto)


# ---------------------------------------------------------------------------
# Names from increasing approximations
# ---------------------------------------------------------------------------


def digit_exponents(d: Dyadic) -> list[int]:
    """Exponents ``e`` of the binary digits of ``d = sum(2**-e)``, increasing."""
    if d.num < 0:
        raise ValueError("expected a nonnegative dyadic")
    out = []
    num, exp = d.num, d.exp
    for q in range(num.bit_length() - 1, -1, -1):
        if (num >> q) & 1:
            out.append(exp - q)
    return out


def name_from_increasing(
    xs: IncreasingDyadicStream, steps: int, label: str = ""
) -> NameStream:
    """Read off a name from an increasing stream, one block per step.

    Block ``t`` holds the digit exponents of ``xs(t+1) - xs(t)`` in
    increasing order, so partial sums of the name hit ``xs`` values
    exactly at block boundaries.
    """
    if xs.at(0) != ZERO:
        raise ValueError("increasing stream must start at 0")
    values: list[int] = []
    boundaries = [0]
    for t in range(steps):
        d = xs.at(t + 1) - xs.at(t)
        if d.num < 0:
            raise MonotonicityViolation(f"stream decreases at step {t}")
        values.extend(digit_exponents(d))
        boundaries.append(len(values))
    return NameStream(
        values.__getitem__,
        length=len(values),
        label=label or f"name({xs.label})",
        block_boundaries=boundaries,
    )


# ---------------------------------------------------------------------------
# Strongly left-computable and regular constructors
# ---------------------------------------------------------------------------


def strongly_lc(view: NatSetView) -> IncreasingDyadicStream:
    """Partial values of ``sum(2**-(j+1))`` along an enumeration of a set.

    ``at(t)`` sums the first ``t`` enumerated elements; after the
    enumerator exhausts, the stream stays constant.
    """
    if not view.has_enumerator:
        raise ValueError("strongly_lc needs an enumerator-backed view")
    seen: set[int] = set()
    sums: list[Dyadic] = [ZERO]
    it = view.enumerate()
    exhausted = [False]

    def at(t: int) -> Dyadic:
        while len(sums) <= t and not exhausted[0]:
            try:
                j = next(it)
            except StopIteration:
                exhausted[0] = True
                break
            if j in seen:
                raise NotASet(f"enumerator of {view.label or '?'} repeated {j}")
            seen.add(j)
            sums.append(sums[-1] + half_power(j + 1))
        return sums[min(t, len(sums) - 1)]

    return IncreasingDyadicStream(at, label=f"x({view.label})" if view.label else "")


def regular_sum(
    streams: Sequence[IncreasingDyadicStream], label: str = ""
) -> IncreasingDyadicStream:
    """Pointwise sum of increasing streams (all values must stay in [0,1])."""
    if not streams:
        raise ValueError("need at least one component stream")

    def at(t: int) -> Dyadic:
        acc = ZERO
        for s in streams:
            acc = acc + s.at(t)
        return acc

    return IncreasingDyadicStream(
        at,
        eventually_constant=all(s.eventually_constant for s in streams),
        label=label or "+".join(s.label or "?" for s in streams),
    )

"""Exact dyadic arithmetic, bit strings and streams, set views, and the
standard combinatorial bijections (pairing, length-lex enumeration).

Bit strings are plain ``str`` objects over ``"0"``/``"1"``; the empty
string is a valid bit string.  All arithmetic is exact big-integer
arithmetic; nothing in this module touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

from .errors import HorizonExceeded, NotASet, RangeViolation


def check_bits(s: str) -> str:
    """Validate that ``s`` consists only of '0'/'1' characters."""
    if s.strip("01"):
        raise ValueError(f"not a bit string: {s!r}")
    return s


# ---------------------------------------------------------------------------
# Dyadic numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=False)
class Dyadic:
    """Exact dyadic rational ``num * 2**-exp``.

    Canonical form: ``num`` is odd or zero, and ``exp`` is the smallest
    natural number realizing the value (``exp == 0`` when ``num == 0`` or
    the value is an integer).  Equality on canonical values is field
    equality.
    """

    num: int
    exp: int

    @staticmethod
    def of(num: int, exp: int) -> "Dyadic":
        """Build the canonical dyadic with value ``num * 2**-exp``."""
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            return Dyadic(0, 0)
        shift = min(exp, (num & -num).bit_length() - 1)
        return Dyadic(num >> shift, exp - shift)

    @staticmethod
    def from_int(n: int) -> "Dyadic":
        return Dyadic.of(n, 0)

    @staticmethod
    def from_bits(bits: str) -> "Dyadic":
        """Value of ``0.bits`` (the empty string denotes 0)."""
        check_bits(bits)
        if not bits:
            return ZERO
        return Dyadic.of(int(bits, 2), len(bits))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic.of(
            (self.num << (e - self.exp)) + (other.num << (e - other.exp)), e
        )

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic.of(
            (self.num << (e - self.exp)) - (other.num << (e - other.exp)), e
        )

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.exp)

    def shift(self, k: int) -> "Dyadic":
        """Multiply by ``2**k`` (``k`` may be negative)."""
        return Dyadic.of(self.num, self.exp - k)

    def _cmp(self, other: "Dyadic") -> int:
        e = max(self.exp, other.exp)
        a = self.num << (e - self.exp)
        b = other.num << (e - other.exp)
        return (a > b) - (a < b)

    def __lt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "Dyadic") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "Dyadic") -> bool:
        return self._cmp(other) >= 0

    @property
    def sign(self) -> int:
        return (self.num > 0) - (self.num < 0)

    def is_zero(self) -> bool:
        return self.num == 0

    # -- binary expansion ---------------------------------------------------

    def bit(self, i: int) -> int:
        """Bit ``i`` (0-based) after the binary point, for values in [0, 1].

        Uses the trailing-zeros expansion of dyadic values; the value 1 is
        the all-ones sequence (its only expansion in ``0.xxx...`` form).
        """
        if self < ZERO or self > ONE:
            raise RangeViolation(f"binary expansion requires value in [0,1]: {self}")
        if self == ONE:
            return 1
        # floor(x * 2^(i+1)) mod 2
        return floor_scale(self, i + 1) & 1

    def prefix_bits(self, n: int) -> str:
        """First ``n`` expansion bits as a string."""
        if self < ZERO or self > ONE:
            raise RangeViolation(f"binary expansion requires value in [0,1]: {self}")
        if self == ONE:
            return "1" * n
        if n == 0:
            return ""
        return format(floor_scale(self, n), f"0{n}b")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Dyadic({self.num}/2^{self.exp})"


ZERO = Dyadic(0, 0)
ONE = Dyadic(1, 0)


def half_power(e: int) -> Dyadic:
    """The dyadic ``2**-e`` (``e`` may be negative)."""
    return Dyadic.of(1, e)


def floor_scale(y: Dyadic, r: int) -> int:
    """Exact ``floor(y * 2**r)`` for ``y >= 0``."""
    if y.num < 0:
        raise ValueError("floor_scale requires a nonnegative value")
    if r >= y.exp:
        return y.num << (r - y.exp)
    return y.num >> (y.exp - r)


@dataclass(frozen=True)
class DyadicInterval:
    """Closed interval with exact dyadic endpoints."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    def width(self) -> Dyadic:
        return self.hi - self.lo

    def contains(self, x: Dyadic) -> bool:
        return self.lo <= x <= self.hi

    def intersects(self, other: "DyadicInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi


def interval_of(tau: str) -> DyadicInterval:
    """Interval of reals in [0,1] whose expansion can start with ``tau``."""
    check_bits(tau)
    lo = Dyadic.from_bits(tau)
    return DyadicInterval(lo, lo + half_power(len(tau)))


# ---------------------------------------------------------------------------
# Pairing and length-lex enumeration
# ---------------------------------------------------------------------------


def pair(i: int, j: int) -> int:
    """Cantor pairing ``(i+j)(i+j+1)/2 + j``."""
    return (i + j) * (i + j + 1) // 2 + j


def unpair(n: int) -> tuple[int, int]:
    """Inverse of :func:`pair`."""
    w = (math.isqrt(8 * n + 1) - 1) // 2
    j = n - w * (w + 1) // 2
    return w - j, j


def lenlex(n: int) -> str:
    """The ``n``-th binary string in length-lexicographic order (0 -> '')."""
    if n < 0:
        raise ValueError("index must be a natural number")
    return bin(n + 1)[3:]


def lenlex_inv(tau: str) -> int:
    """Index of ``tau`` in the length-lexicographic enumeration."""
    check_bits(tau)
    return int("1" + tau, 2) - 1


def strings_of_length(n: int) -> Iterator[str]:
    """All bit strings of length ``n`` in lexicographic order."""
    for v in range(1 << n):
        yield format(v, f"0{n}b") if n else ""


# ---------------------------------------------------------------------------
# Bit streams
# ---------------------------------------------------------------------------


class BitStream:
    """Replayable, deterministic producer of bits.

    ``bit(i)`` is a pure function of ``i``; memoization is internal and
    invisible to callers.  Streams backed by finite data carry a horizon
    and fail loudly beyond it.
    """

    def __init__(
        self,
        fn: Callable[[int], int],
        horizon: Optional[int] = None,
        label: str = "",
    ):
        self._fn = fn
        self.horizon = horizon
        self.label = label
        self._cache: dict[int, int] = {}

    def bit(self, i: int) -> int:
        if i < 0:
            raise ValueError("bit index must be a natural number")
        if self.horizon is not None and i >= self.horizon:
            raise HorizonExceeded(
                f"stream {self.label or '?'} queried at {i} beyond horizon {self.horizon}"
            )
        b = self._cache.get(i)
        if b is None:
            b = self._fn(i)
            if b not in (0, 1):
                raise ValueError(f"stream produced non-bit {b!r} at index {i}")
            self._cache[i] = b
        return b

    def prefix(self, n: int) -> str:
        return "".join(str(self.bit(i)) for i in range(n))

    def prefix_value(self, n: int) -> Dyadic:
        """Exact value of the length-``n`` prefix read as ``0.bits``."""
        return Dyadic.from_bits(self.prefix(n))

    @staticmethod
    def from_bits(bits: str, pad_zeros: bool = False) -> "BitStream":
        check_bits(bits)
        if pad_zeros:
            return BitStream(
                lambda i: int(bits[i]) if i < len(bits) else 0, label=f"{bits}0*"
            )
        return BitStream(lambda i: int(bits[i]), horizon=len(bits), label=bits)

    @staticmethod
    def periodic(pattern: str) -> "BitStream":
        check_bits(pattern)
        if not pattern:
            raise ValueError("pattern must be nonempty")
        return BitStream(lambda i: int(pattern[i % len(pattern)]), label=f"({pattern})*")

    @staticmethod
    def constant(b: int) -> "BitStream":
        return BitStream(lambda i: b, label=str(b) * 3 + "...")


# ---------------------------------------------------------------------------
# Set views
# ---------------------------------------------------------------------------


class NatSetView:
    """A set of naturals seen through a finite window [0, horizon).

    Membership is total below the horizon.  An optional enumerator (a
    factory of fresh iterators) models computably enumerable presentation;
    its outputs below the horizon must agree with membership.
    """

    def __init__(
        self,
        member: Callable[[int], bool],
        horizon: int,
        enumerator: Optional[Callable[[], Iterator[int]]] = None,
        label: str = "",
    ):
        self._member = member
        self.horizon = horizon
        self._enumerator = enumerator
        self.label = label

    def member(self, n: int) -> bool:
        if n < 0:
            raise ValueError("elements are natural numbers")
        if n >= self.horizon:
            raise HorizonExceeded(
                f"view {self.label or '?'} queried at {n} beyond horizon {self.horizon}"
            )
        return bool(self._member(n))

    def elements(self) -> list[int]:
        """All members below the horizon, in increasing order."""
        return [n for n in range(self.horizon) if self._member(n)]

    @property
    def has_enumerator(self) -> bool:
        return self._enumerator is not None

    def enumerate(self) -> Iterator[int]:
        """A fresh enumeration pass (replayable clone)."""
        if self._enumerator is None:
            return iter(self.elements())
        return self._enumerator()

    def enumerated_below(self, bound: int, budget: Optional[int] = None) -> list[int]:
        """Elements the enumerator emits below ``bound``, in emission order."""
        out = []
        for count, n in enumerate(self.enumerate()):
            if budget is not None and count >= budget:
                break
            if n < bound:
                out.append(n)
        return out

    def complement(self) -> "NatSetView":
        return NatSetView(
            lambda n: not self._member(n),
            self.horizon,
            label=f"~{self.label}" if self.label else "",
        )

    def check_consistency(self) -> None:
        """Verify enumerator outputs agree with membership below the horizon."""
        for n in self.enumerate():
            if n < self.horizon and not self._member(n):
                raise NotASet(
                    f"enumerator of {self.label or '?'} emitted non-member {n}"
                )

    @staticmethod
    def from_elements(
        elems: Iterable[int], horizon: int, label: str = ""
    ) -> "NatSetView":
        seq = list(elems)
        members = frozenset(seq)
        return NatSetView(
            members.__contains__, horizon, enumerator=lambda: iter(seq), label=label
        )

    @staticmethod
    def from_predicate(
        fn: Callable[[int], bool], horizon: int, label: str = ""
    ) -> "NatSetView":
        return NatSetView(fn, horizon, label=label)


def evens(horizon: int) -> NatSetView:
    return NatSetView(lambda n: n % 2 == 0, horizon, label="evens")


def odds(horizon: int) -> NatSetView:
    return NatSetView(lambda n: n % 2 == 1, horizon, label="odds")


def multiples(k: int, horizon: int) -> NatSetView:
    return NatSetView(lambda n: n % k == 0, horizon, label=f"multiples-of-{k}")


def squares_shifted(horizon: int) -> NatSetView:
    """The set ``{p*p - 1 : p >= 1}`` (square positions, 0-based)."""
    return NatSetView(
        lambda n: math.isqrt(n + 1) ** 2 == n + 1,
        horizon,
        label="squares-1",
    )


def column(i: int, horizon: int) -> NatSetView:
    """The pairing column ``{pair(i, j) : j in N}`` restricted to the window."""

    def gen() -> Iterator[int]:
        j = 0
        while True:
            v = pair(i, j)
            if v >= horizon:
                return
            yield v
            j += 1

    def member(n: int) -> bool:
        a, _ = unpair(n)
        return a == i

    return NatSetView(member, horizon, enumerator=gen, label=f"column-{i}")


def charseq(view: NatSetView) -> BitStream:
    """Characteristic sequence of a set view (the expansion of its value)."""
    return BitStream(
        lambda i: 1 if view.member(i) else 0,
        horizon=view.horizon,
        label=f"chi({view.label})" if view.label else "chi",
    )


def set_value_prefix(view: NatSetView, n: int) -> Dyadic:
    """Exact partial sum ``sum(2**-(j+1) for j in view, j < n)``."""
    if n > view.horizon:
        raise HorizonExceeded(
            f"prefix {n} of {view.label or '?'} exceeds horizon {view.horizon}"
        )
    acc = 0
    for j in range(n):
        if view.member(j):
            acc += 1 << (n - 1 - j)
    return Dyadic.of(acc, n)


def join(a: NatSetView, b: NatSetView) -> NatSetView:
    """Join: evens carry ``a``, odds carry ``b``; horizon doubles."""
    n = min(a.horizon, b.horizon)

    def member(k: int) -> bool:
        return a.member(k // 2) if k % 2 == 0 else b.member(k // 2)

    enumerator = None
    if a.has_enumerator or b.has_enumerator:

        def gen() -> Iterator[int]:
            ita, itb = a.enumerate(), b.enumerate()
            done_a = done_b = False
            while not (done_a and done_b):
                if not done_a:
                    try:
                        va = next(ita)
                        if va < n:
                            yield 2 * va
                    except StopIteration:
                        done_a = True
                if not done_b:
                    try:
                        vb = next(itb)
                        if vb < n:
                            yield 2 * vb + 1
                    except StopIteration:
                        done_b = True

        enumerator = gen

    label = f"{a.label}(+){b.label}" if (a.label or b.label) else ""
    return NatSetView(member, 2 * n, enumerator=enumerator, label=label)

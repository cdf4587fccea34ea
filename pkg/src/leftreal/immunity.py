"""Bounded falsifiers for the six sparseness notions of set views.

Each notion is infinitary, so no checker ever affirms it.  The result
vocabulary is exactly two-valued: a refutation carries finitely
checkable evidence valid at the horizon, and anything else is
consistency at the horizon.  "Infinite at this scale" is approximated by
a transparent witness-count threshold, reported in every verdict.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import DisjointnessViolation, InsufficientElements
from .foundations import NatSetView

DEFAULT_THRESHOLD_DIVISOR = 4


class Property(enum.Enum):
    IMMUNE = "immune"
    HYPERIMMUNE = "hyperimmune"
    HYPERHYPERIMMUNE = "hyperhyperimmune"
    STRONGLY_HYPERHYPERIMMUNE = "strongly-hyperhyperimmune"
    COHESIVE = "cohesive"
    BI_IMMUNE = "bi-immune"


class Result(enum.Enum):
    REFUTED_AT_HORIZON = "refuted-at-horizon"
    CONSISTENT_AT_HORIZON = "consistent-at-horizon"


@dataclass
class ImmunityVerdict:
    property: Property
    result: Result
    horizon: int
    threshold: int
    witness: dict = field(default_factory=dict)

    @property
    def refuted(self) -> bool:
        return self.result is Result.REFUTED_AT_HORIZON


def _threshold(horizon: int, threshold: Optional[int]) -> int:
    if threshold is not None:
        return threshold
    return -(-horizon // DEFAULT_THRESHOLD_DIVISOR)


def principal_function(view: NatSetView, count: int) -> list[int]:
    """First ``count`` elements in increasing order (the principal values)."""
    elems = view.elements()
    if len(elems) < count:
        raise InsufficientElements(
            f"{view.label or 'view'} has only {len(elems)} elements below "
            f"{view.horizon}, need {count}"
        )
    return elems[:count]


def check_immune(
    a: NatSetView,
    w: NatSetView,
    horizon: int,
    threshold: Optional[int] = None,
) -> ImmunityVerdict:
    """Refute immunity by exhibiting an enumerable subset, large at scale.

    Refuted when every element ``w`` enumerates below the horizon lies in
    ``a`` and there are at least ``threshold`` of them.
    """
    thr = _threshold(horizon, threshold)
    enumerated = w.enumerated_below(min(horizon, a.horizon))
    inside = [n for n in enumerated if a.member(n)]
    subset = len(inside) == len(enumerated)
    refuted = subset and len(enumerated) >= thr
    return ImmunityVerdict(
        Property.IMMUNE,
        Result.REFUTED_AT_HORIZON if refuted else Result.CONSISTENT_AT_HORIZON,
        horizon=horizon,
        threshold=thr,
        witness={
            "enumerated": len(enumerated),
            "inside": len(inside),
            "subset": subset,
            "witness_set": w.label,
        },
    )


def check_hyperimmune(
    a: NatSetView,
    f,
    horizon: int,
) -> ImmunityVerdict:
    """Refute hyperimmunity by a majorizer: ``p_a(n) <= f(n)`` below the horizon."""
    p = principal_function(a, horizon)
    failures = [n for n in range(horizon) if p[n] > f.at(n)]
    refuted = not failures
    return ImmunityVerdict(
        Property.HYPERIMMUNE,
        Result.REFUTED_AT_HORIZON if refuted else Result.CONSISTENT_AT_HORIZON,
        horizon=horizon,
        threshold=horizon,
        witness={
            "majorizer": getattr(f, "label", "?"),
            "first_failure": failures[0] if failures else None,
        },
    )


def _check_blocks(
    prop: Property,
    a: NatSetView,
    blocks: Sequence[Sequence[int]],
    horizon: int,
) -> ImmunityVerdict:
    seen: set[int] = set()
    for i, block in enumerate(blocks):
        b = set(block)
        if b & seen:
            raise DisjointnessViolation(
                f"block {i} overlaps an earlier block on {sorted(b & seen)[:5]}"
            )
        seen |= b
    missed = [
        i
        for i, block in enumerate(blocks)
        if not any(n < min(horizon, a.horizon) and a.member(n) for n in block)
    ]
    refuted = not missed and len(blocks) > 0
    return ImmunityVerdict(
        prop,
        Result.REFUTED_AT_HORIZON if refuted else Result.CONSISTENT_AT_HORIZON,
        horizon=horizon,
        threshold=len(blocks),
        witness={"blocks": len(blocks), "first_missed": missed[0] if missed else None},
    )


def check_hhi(
    a: NatSetView,
    blocks: Sequence[Sequence[int]],
    horizon: int,
) -> ImmunityVerdict:
    """Refute hyperhyperimmunity: disjoint finite blocks, each meeting ``a``."""
    return _check_blocks(Property.HYPERHYPERIMMUNE, a, blocks, horizon)


def check_shhi(
    a: NatSetView,
    block_views: Sequence[NatSetView],
    horizon: int,
) -> ImmunityVerdict:
    """As :func:`check_hhi` with enumerator-backed (possibly infinite) blocks."""
    blocks = [v.enumerated_below(horizon) for v in block_views]
    return _check_blocks(Property.STRONGLY_HYPERHYPERIMMUNE, a, blocks, horizon)


def check_cohesive(
    a: NatSetView,
    w: NatSetView,
    horizon: int,
    threshold: Optional[int] = None,
) -> ImmunityVerdict:
    """Refute cohesiveness: the split along ``w`` leaves both sides large."""
    thr = _threshold(horizon, threshold)
    h = min(horizon, a.horizon, w.horizon)
    inside = sum(1 for n in range(h) if a.member(n) and w.member(n))
    outside = sum(1 for n in range(h) if a.member(n) and not w.member(n))
    refuted = inside >= thr and outside >= thr
    return ImmunityVerdict(
        Property.COHESIVE,
        Result.REFUTED_AT_HORIZON if refuted else Result.CONSISTENT_AT_HORIZON,
        horizon=horizon,
        threshold=thr,
        witness={"split": w.label, "inside": inside, "outside": outside},
    )


def check_bi_immune(
    a: NatSetView,
    w_for_a: NatSetView,
    w_for_complement: NatSetView,
    horizon: int,
    threshold: Optional[int] = None,
) -> ImmunityVerdict:
    """Refute bi-immunity by refuting immunity of either side."""
    side_a = check_immune(a, w_for_a, horizon, threshold)
    side_c = check_immune(a.complement(), w_for_complement, horizon, threshold)
    refuted = side_a.refuted or side_c.refuted
    return ImmunityVerdict(
        Property.BI_IMMUNE,
        Result.REFUTED_AT_HORIZON if refuted else Result.CONSISTENT_AT_HORIZON,
        horizon=horizon,
        threshold=side_a.threshold,
        witness={
            "set_side": side_a.witness | {"refuted": side_a.refuted},
            "complement_side": side_c.witness | {"refuted": side_c.refuted},
        },
    )

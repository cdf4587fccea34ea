"""JSON encodings and small textual spec languages for CLI inputs.

Dyadics are serialized as ``{"num": "<decimal string>", "exp": n}`` and
never as floats.  Spec strings keep pipelines one-liners:

* names: ``ap:a,b`` (``f(k) = a*k+b``), ``list:3,1,4``, or
  ``blocks:steps:<increasing-stream spec>`` (digit read-off per step)
* rates: ``shift:c`` | ``affine:a,b`` | ``pow2:k`` | ``gap:m`` |
  ``values:2,3,5`` with an optional ``>>k`` re-indexing suffix
* bit streams: ``periodic:PATTERN`` | ``bits:BITS`` | ``const:b``
* increasing streams: ``prefix-sums:PATTERN:bits_per_step`` |
  ``dyadics:1/2^1,3/2^2,...``
* set views: ``evens:H`` | ``odds:H`` | ``multiples:k:H`` | ``column:i:H``
  | ``squares-1:H`` | ``elements:1,2,3:H``
"""

from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction
from typing import Any

from . import foundations as fd
from .conversions import StageInterval, StageTrace
from .foundations import BitStream, Dyadic, NatSetView
from .immunity import ImmunityVerdict
from .machines import (
    ComplexityValue,
    Interpreter,
    PrefixMachine,
    TableMachine,
)
from .names import IncreasingDyadicStream, Modulus, NameStream
from .randomness import TestFamily, TestKind
from .spectra import ComplexityProfile, DimEstimate


class SpecError(ValueError):
    """An input spec string or JSON document is malformed."""


# ---------------------------------------------------------------------------
# dyadics
# ---------------------------------------------------------------------------


def dyadic_to_json(d: Dyadic) -> dict:
    return {"num": str(d.num), "exp": d.exp}


def dyadic_from_json(obj: dict) -> Dyadic:
    return Dyadic.of(int(obj["num"]), int(obj["exp"]))


_DYADIC_RE = re.compile(r"^(-?\d+)(?:/2\^(\d+))?$")


def parse_dyadic(text: str) -> Dyadic:
    m = _DYADIC_RE.match(text.strip())
    if not m:
        raise SpecError(f"not a dyadic literal: {text!r} (want 'num' or 'num/2^exp')")
    return Dyadic.of(int(m.group(1)), int(m.group(2) or 0))


def parse_fraction(text: str) -> Fraction:
    if "/" in text:
        a, b = text.split("/", 1)
        return Fraction(int(a), int(b))
    return Fraction(int(text))


# ---------------------------------------------------------------------------
# machines
# ---------------------------------------------------------------------------


def machine_to_json(m: PrefixMachine) -> dict:
    if isinstance(m, TableMachine):
        return {"kind": "table", "entries": [[k, v] for k, v in m.entries]}
    return {"kind": "interpreter", "aux": [machine_to_json(a) for a in m.aux]}


def machine_from_json(obj: Any, resolver=None) -> PrefixMachine:
    """Decode a machine document; ``aux`` entries may be inline documents
    or id strings handed to ``resolver``."""
    if isinstance(obj, str):
        if resolver is None:
            raise SpecError(f"machine id {obj!r} given but no registry available")
        return machine_from_json(resolver(obj), resolver)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpecError("machine document needs a 'kind' field")
    if obj["kind"] == "table":
        return TableMachine(tuple((k, v) for k, v in obj.get("entries", [])))
    if obj["kind"] == "interpreter":
        aux = []
        for sub in obj.get("aux", []):
            sub_m = machine_from_json(sub, resolver)
            if not isinstance(sub_m, TableMachine):
                raise SpecError("interpreter auxiliaries must be table machines")
            aux.append(sub_m)
        return Interpreter(aux=tuple(aux))
    raise SpecError(f"unknown machine kind {obj['kind']!r}")


# ---------------------------------------------------------------------------
# names, rates, streams, views
# ---------------------------------------------------------------------------


def _ints(csv: str) -> list[int]:
    return [int(x) for x in csv.split(",") if x != ""]


def parse_name(text: str) -> NameStream:
    kind, _, rest = text.partition(":")
    if kind == "ap":
        a, b = _ints(rest)
        return NameStream.affine(a, b)
    if kind == "list":
        return NameStream.from_list(_ints(rest), label=text)
    if kind == "blocks":
        from .names import name_from_increasing

        steps, _, source = rest.partition(":")
        return name_from_increasing(parse_increasing(source), int(steps), label=text)
    raise SpecError(f"unknown name spec {text!r}")


def parse_rate(text: str) -> Modulus:
    base, _, shift = text.partition(">>")
    kind, _, rest = base.partition(":")
    if kind == "shift":
        r = Modulus.shift(int(rest))
    elif kind == "affine":
        a, b = _ints(rest)
        r = Modulus.affine(a, b)
    elif kind == "pow2":
        r = Modulus.power2(int(rest))
    elif kind == "gap":
        from .spectra import dim_gap_rate

        r = dim_gap_rate(int(rest))
    elif kind == "values":
        r = Modulus.from_values(_ints(rest), label=base)
    else:
        raise SpecError(f"unknown rate spec {text!r}")
    if shift:
        r = r.shifted(int(shift))
    return r


def parse_stream(text: str) -> BitStream:
    kind, _, rest = text.partition(":")
    if kind == "periodic":
        return BitStream.periodic(rest)
    if kind == "bits":
        return BitStream.from_bits(rest, pad_zeros=True)
    if kind == "const":
        return BitStream.constant(int(rest))
    raise SpecError(f"unknown stream spec {text!r}")


def parse_increasing(text: str) -> IncreasingDyadicStream:
    kind, _, rest = text.partition(":")
    if kind == "prefix-sums":
        pattern, _, step = rest.partition(":")
        return IncreasingDyadicStream.from_prefix_sums(
            BitStream.periodic(pattern), bits_per_step=int(step or 1), label=text
        )
    if kind == "dyadics":
        vals = [parse_dyadic(v) for v in rest.split(",")]
        return IncreasingDyadicStream.from_list(vals, extend=True, label=text)
    raise SpecError(f"unknown increasing-stream spec {text!r}")


def parse_view(text: str) -> NatSetView:
    parts = text.split(":")
    kind = parts[0]
    if kind == "evens":
        return fd.evens(int(parts[1]))
    if kind == "odds":
        return fd.odds(int(parts[1]))
    if kind == "multiples":
        return fd.multiples(int(parts[1]), int(parts[2]))
    if kind == "column":
        return fd.column(int(parts[1]), int(parts[2]))
    if kind == "squares-1":
        return fd.squares_shifted(int(parts[1]))
    if kind == "elements":
        return NatSetView.from_elements(_ints(parts[1]), int(parts[2]), label=text)
    raise SpecError(f"unknown set spec {text!r}")


def view_to_json(v: NatSetView) -> dict:
    return {"elements": v.elements(), "horizon": v.horizon, "label": v.label}


def view_from_json(obj: dict) -> NatSetView:
    if "elements" in obj:
        return NatSetView.from_elements(
            obj["elements"], int(obj["horizon"]), label=obj.get("label", "")
        )
    if "enumerator" in obj:
        return parse_view(f"{obj['enumerator']}:{obj['horizon']}")
    raise SpecError("set document needs 'elements' or 'enumerator'")


# ---------------------------------------------------------------------------
# families, traces, profiles, verdicts
# ---------------------------------------------------------------------------


def family_to_json(fam: TestFamily, n_max: int) -> dict:
    return {
        "kind": fam.kind.value,
        "levels": [fam.level_list(n) for n in range(n_max + 1)],
        "meta": {k: v for k, v in fam.meta.items() if isinstance(v, (str, int, bool))},
    }


def family_from_json(obj: dict) -> TestFamily:
    kinds = {k.value: k for k in TestKind}
    if obj.get("kind") not in kinds:
        raise SpecError(f"unknown family kind {obj.get('kind')!r}")
    return TestFamily.explicit(obj["levels"], kinds[obj["kind"]])


def trace_to_json(trace: StageTrace) -> dict:
    return {
        "stages": trace.stages,
        "name": trace.name_label,
        "rate": trace.rate_label,
        "intervals": [
            {
                "t": iv.t,
                "lo": dyadic_to_json(iv.lo),
                "length_exp": iv.length_exp,
                "m": iv.m,
            }
            for iv in trace.intervals
        ],
        "p_events": [list(e) for e in trace.p_events],
    }


def trace_from_json(obj: dict) -> StageTrace:
    return StageTrace(
        intervals=[
            StageInterval(
                t=iv["t"],
                lo=dyadic_from_json(iv["lo"]),
                length_exp=iv["length_exp"],
                m=iv["m"],
            )
            for iv in obj["intervals"]
        ],
        p_events=[tuple(e) for e in obj["p_events"]],
        stages=obj["stages"],
        name_label=obj.get("name", ""),
        rate_label=obj.get("rate", ""),
    )


def complexity_to_json(v: ComplexityValue) -> dict:
    return {
        "value": None if not v.is_finite else int(v.value),
        "status": v.status.value,
        "witness": v.witness,
        "budget": {"L": v.budget.L, "t": v.budget.t},
    }


def profile_to_csv(p: ComplexityProfile) -> str:
    lines = ["n,K,status,L,t"]
    for n, v in p.entries:
        k = "inf" if not v.is_finite else str(int(v.value))
        lines.append(f"{n},{k},{v.status.value},{v.budget.L},{v.budget.t}")
    return "\n".join(lines) + "\n"


def dim_to_json(est: DimEstimate) -> dict:
    return {
        "window": list(est.window),
        "min_ratio": [est.min_ratio.numerator, est.min_ratio.denominator],
        "max_ratio": [est.max_ratio.numerator, est.max_ratio.denominator],
        "used": est.used,
        "excluded": est.excluded,
        "caveat": est.caveat,
    }


def verdict_to_json(v: ImmunityVerdict) -> dict:
    return {
        "property": v.property.value,
        "result": v.result.value,
        "horizon": v.horizon,
        "threshold": v.threshold,
        "witness": v.witness,
    }


# ---------------------------------------------------------------------------
# canonical dumps
# ---------------------------------------------------------------------------


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()

"""Command-line surface: reproducible pipelines over JSON/CSV artifacts.

Every artifact embeds a manifest (command line, input digests, budgets,
tool version); identical manifests produce byte-identical outputs.  Exit
codes: 0 success, 2 when a computation succeeded but a mathematical
check came back refuted/violated, 1 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .conversions import RateSpec, count_bound_check, lc_to_roc, roc_to_skt
from .errors import (
    DegenerateMachine,
    LeftrealError,
    PrefixViolation,
    PreconditionRefuted,
    WeightExceeded,
)
from .foundations import charseq, join
from .immunity import (
    check_bi_immune,
    check_cohesive,
    check_hhi,
    check_hyperimmune,
    check_immune,
    check_shhi,
)
from .jsonio import (
    SpecError,
    canonical_dumps,
    complexity_to_json,
    digest,
    dim_to_json,
    dyadic_to_json,
    family_from_json,
    family_to_json,
    machine_from_json,
    machine_to_json,
    parse_fraction,
    parse_increasing,
    parse_name,
    parse_rate,
    parse_stream,
    parse_view,
    profile_to_csv,
    trace_to_json,
    verdict_to_json,
    view_to_json,
)
from .kraft_chaitin import KCAllocator, kc_build_machine
from .machines import (
    Budget,
    ComplexityValue,
    Interpreter,
    KStatus,
    complexity,
    enumerate_domain,
    omega_lower,
    omega_s_bounds,
)
from .names import regular_sum, strongly_lc
from .randomness import covers, skt_from_rate, validate_family
from .spectra import ComplexityProfile, dim_window, profile, square_interleave

REGISTRY_ENV = "LEFTREAL_MACHINE_REGISTRY"

# errors that mean "the mathematics said no", not "the tool failed"
_REFUTATION_ERRORS = (
    WeightExceeded,
    PrefixViolation,
    PreconditionRefuted,
    DegenerateMachine,
)


def _computation_argv(argv: list[str]) -> list[str]:
    """The command line minus the artifact destination; the manifest
    describes the computation, so equal manifests mean equal bytes."""
    kept, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--out":
            skip = True
        elif a.startswith("--out="):
            pass
        else:
            kept.append(a)
    return kept


class _Output:
    def __init__(self, args: argparse.Namespace, argv: list[str]):
        self.out: Optional[str] = getattr(args, "out", None)
        self.manifest: dict = {
            "tool": f"leftreal {__version__}",
            "command": _computation_argv(argv),
            "inputs": {},
            "budgets": {},
            "seeds": {},  # no CLI path draws randomness today
        }

    def record_input(self, path: str) -> bytes:
        data = Path(path).read_bytes()
        self.manifest["inputs"][path] = digest(data)
        return data

    def record_budget(self, **kv) -> None:
        self.manifest["budgets"].update(kv)

    def emit_json(self, payload: dict) -> None:
        payload = dict(payload)
        payload["manifest"] = self.manifest
        self._write(canonical_dumps(payload))

    def emit_text(self, text: str) -> None:
        header = "# manifest " + json.dumps(self.manifest, sort_keys=True) + "\n"
        self._write(header + text)

    def _write(self, text: str) -> None:
        if self.out:
            Path(self.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)


def _load_json(out: _Output, path: str) -> Any:
    return json.loads(out.record_input(path))


def _registry_resolver(out: _Output):
    def resolve(machine_id: str):
        registry = os.environ.get(REGISTRY_ENV)
        if not registry:
            raise SpecError(f"machine id given but {REGISTRY_ENV} is not set")
        return _load_json(out, str(Path(registry) / (machine_id + ".json")))

    return resolve


def _load_machine(out: _Output, arg: str):
    if arg in ("ref", "interpreter"):
        return Interpreter()
    resolver = _registry_resolver(out)
    if arg.startswith("id:"):
        return machine_from_json(arg[3:], resolver)
    return machine_from_json(_load_json(out, arg), resolver)


def _budget(out: _Output, args: argparse.Namespace) -> Budget:
    b = Budget(args.budget_l, args.budget_t, allow_large=getattr(args, "force", False))
    out.record_budget(L=b.L, t=b.t)
    return b


def _add_budget_flags(p: argparse.ArgumentParser, l_default: int = 16, t_default: int = 10**4):
    p.add_argument("--budget-l", type=int, default=l_default, metavar="L")
    p.add_argument("--budget-t", type=int, default=t_default, metavar="T")
    p.add_argument("--force", action="store_true", help="override the length guard")


def _add_out_flag(p: argparse.ArgumentParser):
    p.add_argument("--out", help="write the artifact to this path instead of stdout")


# ---------------------------------------------------------------------------
# command handlers (each returns an exit code)
# ---------------------------------------------------------------------------


def _cmd_machine_validate(out: _Output, args) -> int:
    m = _load_machine(out, args.machine)
    out.emit_json({"valid": True, "id": m.id, "kind": machine_to_json(m)["kind"]})
    return 0


def _cmd_machine_enumerate(out: _Output, args) -> int:
    m = _load_machine(out, args.machine)
    enum = enumerate_domain(m, _budget(out, args))
    out.emit_json(
        {
            "pairs": [[p, o] for p, o in enum.pairs],
            "complete": not enum.truncated_lengths,
            "truncated_lengths": sorted(enum.truncated_lengths),
        }
    )
    return 0


def _cmd_machine_k(out: _Output, args) -> int:
    m = _load_machine(out, args.machine)
    v = complexity(m, args.target, _budget(out, args))
    out.emit_json({"target": args.target, "complexity": complexity_to_json(v)})
    return 0


def _cmd_kc_alloc(out: _Output, args) -> int:
    requests = _load_json(out, args.requests)
    alloc = KCAllocator()
    result = [[alloc.request(int(l)), payload] for l, payload in requests]
    out.emit_json({"codewords": result})
    return 0


def _cmd_kc_build(out: _Output, args) -> int:
    requests = _load_json(out, args.requests)
    m = kc_build_machine([(int(l), payload) for l, payload in requests])
    out.emit_json({"machine": machine_to_json(m), "id": m.id})
    return 0


def _cmd_skt_from_rate(out: _Output, args) -> int:
    m = _load_machine(out, args.machine)
    fam = skt_from_rate(m, parse_rate(args.rate), args.nmax, _budget(out, args))
    out.emit_json({"family": family_to_json(fam, args.nmax)})
    return 0


def _cmd_skt_validate(out: _Output, args) -> int:
    fam = family_from_json(_load_json(out, args.family)["family"])
    verdict = validate_family(fam, args.nmax, args.stage)
    out.emit_json(
        {
            "status": verdict.status.value,
            "refuted_level": verdict.refuted_level,
            "reason": verdict.reason,
        }
    )
    return 0 if verdict.consistent else 2


def _cmd_skt_covers(out: _Output, args) -> int:
    fam = family_from_json(_load_json(out, args.family)["family"])
    x = parse_stream(args.stream)
    reports = [covers(fam, x, n, args.stage) for n in range(args.nmax + 1)]
    out.emit_json(
        {
            "reports": [
                {"level": r.level, "witness": r.witness, "covered": r.covered}
                for r in reports
            ]
        }
    )
    return 0 if all(r.covered for r in reports) else 2


def _cmd_convert_roc_to_skt(out: _Output, args) -> int:
    f = parse_name(args.name)
    rate = RateSpec(parse_rate(args.rate))
    out.record_budget(stages=args.stages)
    res = roc_to_skt(f, rate, args.stages)
    if res.dyadic_shortcut:
        out.emit_json({"dyadic_shortcut": True, "reason": res.reason})
        return 0
    counts = [count_bound_check(res.trace, rate, n) for n in range(args.nmax + 1)]
    out.emit_json(
        {
            "trace": trace_to_json(res.trace),
            "family": family_to_json(res.family, args.nmax),
            "count_bounds": [
                {"level": c.level, "count": c.count, "bound": c.bound, "holds": c.holds}
                for c in counts
            ],
        }
    )
    return 0 if all(c.holds for c in counts) else 2


def _cmd_convert_lc_to_roc(out: _Output, args) -> int:
    xs = parse_increasing(args.stream)
    r = parse_rate(args.rate)
    m = _load_machine(out, args.machine)
    out.record_budget(stages=args.stages)
    res = lc_to_roc(xs, r, m, _budget(out, args), args.stages, args.nmax)
    payload: dict = {
        "dyadic_shortcut": res.dyadic_shortcut,
        "s_values": res.s_values,
        "exhausted_at": res.exhausted_at,
    }
    if res.name is not None:
        payload["name_values"] = res.name.values(res.name.length)
        payload["block_boundaries"] = res.name.block_boundaries
    out.emit_json(payload)
    return 0 if res.exhausted_at is None else 2


def _cmd_profile(out: _Output, args) -> int:
    m = _load_machine(out, args.machine)
    p = profile(m, parse_stream(args.stream), args.nmax, _budget(out, args))
    out.emit_text(profile_to_csv(p))
    return 0


def _cmd_dim(out: _Output, args) -> int:
    text = out.record_input(args.profile).decode()
    entries = []
    budget = Budget(0, 0)
    for line in text.splitlines():
        if line.startswith("#") or line.startswith("n,") or not line.strip():
            continue
        n, k, status, l, t = line.split(",")
        budget = Budget(int(l), int(t), allow_large=True)
        value: Any = float("inf") if k == "inf" else int(k)
        entries.append((int(n), ComplexityValue(value, KStatus(status), budget)))
    est = dim_window(
        ComplexityProfile("from-csv", entries, budget), args.n0, args.n1
    )
    out.emit_json({"dim_estimate": dim_to_json(est)})
    return 0


def _cmd_omega(out: _Output, args) -> int:
    m = _load_machine(out, args.machine)
    w = omega_lower(m, _budget(out, args))
    out.emit_json({"omega_lower": dyadic_to_json(w)})
    return 0


def _cmd_omega_s(out: _Output, args) -> int:
    m = _load_machine(out, args.machine)
    iv = omega_s_bounds(m, parse_fraction(args.s), _budget(out, args), args.precision)
    out.emit_json(
        {
            "interval": {"lo": dyadic_to_json(iv.lo), "hi": dyadic_to_json(iv.hi)},
            "precision": args.precision,
        }
    )
    return 0


def _cmd_immunity(out: _Output, args) -> int:
    a = parse_view(args.set)
    prop = args.property
    if prop == "immune":
        v = check_immune(a, parse_view(args.witness), args.horizon, args.threshold)
    elif prop == "hyperimmune":
        v = check_hyperimmune(a, parse_rate(args.rate), args.horizon)
    elif prop == "hhi":
        blocks = [[int(x) for x in b.split(",")] for b in args.block]
        v = check_hhi(a, blocks, args.horizon)
    elif prop == "shhi":
        v = check_shhi(a, [parse_view(s) for s in args.block], args.horizon)
    elif prop == "cohesive":
        v = check_cohesive(a, parse_view(args.witness), args.horizon, args.threshold)
    elif prop == "bi-immune":
        v = check_bi_immune(
            a,
            parse_view(args.witness),
            parse_view(args.witness_complement),
            args.horizon,
            args.threshold,
        )
    else:  # pragma: no cover - argparse restricts choices
        raise SpecError(prop)
    out.emit_json({"verdict": verdict_to_json(v)})
    return 2 if v.refuted else 0


def _cmd_construct(out: _Output, args) -> int:
    if args.what == "interleave":
        stream = square_interleave(parse_stream(args.source))
        out.emit_json({"bits": stream.prefix(args.prefix)})
        return 0
    if args.what == "join":
        j = join(parse_view(args.a), parse_view(args.b))
        out.emit_json({"join": view_to_json(j), "bits": charseq(j).prefix(j.horizon)})
        return 0
    if args.what == "regular":
        components = [strongly_lc(parse_view(s)) for s in args.component]
        xs = regular_sum(components)
        out.emit_json(
            {"values": [dyadic_to_json(xs.at(t)) for t in range(args.steps + 1)]}
        )
        return 0
    raise SpecError(args.what)  # pragma: no cover


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="leftreal",
        description="exact-arithmetic workbench for left-computable reals",
    )
    sub = top.add_subparsers(dest="group", required=True)

    machine = sub.add_parser("machine").add_subparsers(dest="cmd", required=True)
    p = machine.add_parser("validate")
    p.add_argument("machine")
    _add_out_flag(p)
    p.set_defaults(run=_cmd_machine_validate)
    p = machine.add_parser("enumerate")
    p.add_argument("machine")
    _add_budget_flags(p)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_machine_enumerate)
    p = machine.add_parser("k")
    p.add_argument("machine")
    p.add_argument("--target", required=True)
    _add_budget_flags(p)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_machine_k)

    kc = sub.add_parser("kc").add_subparsers(dest="cmd", required=True)
    p = kc.add_parser("alloc")
    p.add_argument("requests")
    _add_out_flag(p)
    p.set_defaults(run=_cmd_kc_alloc)
    p = kc.add_parser("build")
    p.add_argument("requests")
    _add_out_flag(p)
    p.set_defaults(run=_cmd_kc_build)

    skt = sub.add_parser("skt").add_subparsers(dest="cmd", required=True)
    p = skt.add_parser("from-rate")
    p.add_argument("machine")
    p.add_argument("--rate", required=True)
    p.add_argument("--nmax", type=int, required=True)
    _add_budget_flags(p)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_skt_from_rate)
    p = skt.add_parser("validate")
    p.add_argument("family")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--stage", type=int, default=None)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_skt_validate)
    p = skt.add_parser("covers")
    p.add_argument("family")
    p.add_argument("--stream", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--stage", type=int, default=None)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_skt_covers)

    convert = sub.add_parser("convert").add_subparsers(dest="cmd", required=True)
    p = convert.add_parser("roc-to-skt")
    p.add_argument("--name", required=True)
    p.add_argument("--rate", required=True)
    p.add_argument("--stages", type=int, required=True)
    p.add_argument("--nmax", type=int, default=3)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_convert_roc_to_skt)
    p = convert.add_parser("lc-to-roc")
    p.add_argument("--stream", required=True)
    p.add_argument("--rate", required=True)
    p.add_argument("--machine", default="ref")
    p.add_argument("--stages", type=int, required=True)
    p.add_argument("--nmax", type=int, default=3)
    _add_budget_flags(p, l_default=22)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_convert_lc_to_roc)

    p = sub.add_parser("profile")
    p.add_argument("--machine", default="ref")
    p.add_argument("--stream", required=True)
    p.add_argument("--nmax", type=int, required=True)
    _add_budget_flags(p, l_default=24)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_profile)

    p = sub.add_parser("dim")
    p.add_argument("profile")
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--n1", type=int, required=True)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_dim)

    p = sub.add_parser("omega")
    p.add_argument("machine")
    _add_budget_flags(p)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_omega)

    p = sub.add_parser("omega-s")
    p.add_argument("machine")
    p.add_argument("--s", required=True, help="rational in (0,1), e.g. 2/3")
    p.add_argument("--precision", type=int, default=40)
    _add_budget_flags(p)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_omega_s)

    p = sub.add_parser("immunity")
    p.add_argument(
        "property",
        choices=["immune", "hyperimmune", "hhi", "shhi", "cohesive", "bi-immune"],
    )
    p.add_argument("--set", required=True)
    p.add_argument("--witness")
    p.add_argument("--witness-complement", dest="witness_complement")
    p.add_argument("--rate")
    p.add_argument("--block", action="append", default=[])
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--threshold", type=int, default=None)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_immunity)

    p = sub.add_parser("construct")
    p.add_argument("what", choices=["interleave", "join", "regular"])
    p.add_argument("--source")
    p.add_argument("--prefix", type=int, default=64)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--component", action="append", default=[])
    p.add_argument("--steps", type=int, default=16)
    _add_out_flag(p)
    p.set_defaults(run=_cmd_construct)

    return top


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Output(args, argv)
    try:
        return args.run(out, args)
    except _REFUTATION_ERRORS as e:
        out.emit_json({"refuted": True, "error": type(e).__name__, "detail": str(e)})
        return 2
    except (SpecError, LeftrealError, OSError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

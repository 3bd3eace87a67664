"""Command-line entry point.

Subcommands: forests, nests, strata, deltafin-check, blowup-validate,
forget-centers, purity, hilbert, koszul.  Every subcommand supports
--selftest to run its module's property suite.  Reports are deterministic
JSON (sorted keys, no timestamps); exit status is 0 on success, 1 on input
errors or exceeded caps, 2 on hypothesis refusal.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass

from . import checks, confcat, forests, koszul, weights, wonderful
from .finchains import FiniteSet, SetMap

SCHEMA = "confstrata/1"

CAPS = {"n": 6, "strata_n": 5, "max_deg": 40, "max_level": 3, "max_size": 4}


@dataclass
class RunConfig:
    command: str
    params: dict
    out: str | None
    fmt: str
    unsafe_no_cap: bool
    input_digest: str | None = None


class InputError(Exception):
    pass


def _cap(config: RunConfig, name: str, value: int, cap_key: str):
    if value < 0:
        raise InputError(f"{name} must be non-negative")
    if not config.unsafe_no_cap and value > CAPS[cap_key]:
        raise InputError(
            f"{name}={value} exceeds the cap {CAPS[cap_key]} (use --unsafe-no-cap to override)")
    return value


def _read_json(path: str, config: RunConfig):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    config.input_digest = hashlib.sha256(raw).hexdigest()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: line {exc.lineno} column {exc.colno}")


def _emit(config: RunConfig, result: dict, text: str | None = None) -> None:
    payload = {
        "schema": SCHEMA,
        "command": config.command,
        "params": config.params,
        "input_digest": config.input_digest,
        "result": result,
    }
    if config.fmt == "text" and text is not None:
        body = text
    else:
        body = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _write_artifact(path: str, body: str) -> None:
    with open(path, "w") as fh:
        fh.write(body)


def _selftest(command: str) -> int:
    results = checks.run_selftest(command)
    ok = True
    for res in results:
        print(res.summary())
        for failure in res.failures[:10]:
            print(f"  counterexample: {failure}")
        ok = ok and res.ok
    return 0 if ok else 1


# -- subcommand handlers -----------------------------------------------------------


def _cmd_forests(args, config: RunConfig) -> int:
    n = _cap(config, "n", args.n, "n")
    all_forests = forests.enumerate_forests(n)
    result: dict = {"n": n, "count": len(all_forests)}
    if not args.count:
        result["forests"] = [forests.forest_to_json(f) for f in all_forests]
    if args.dot is not None:
        index = args.index if args.index is not None else len(all_forests) - 1
        if not 0 <= index < len(all_forests):
            raise InputError(f"--index out of range 0..{len(all_forests) - 1}")
        _write_artifact(args.dot, forests.forest_to_dot(all_forests[index]))
        result["dot"] = args.dot
    _emit(config, result, text=f"{len(all_forests)}\n")
    return 0


def _cmd_nests(args, config: RunConfig) -> int:
    n = _cap(config, "n", args.n, "n")
    nests = wonderful.enumerate_nests(n, args.d)
    result: dict = {"n": n, "d": args.d, "count": len(nests)}
    if not args.count:
        result["nests"] = sorted(
            [[list(b) for b in m] for m in sorted(nest)] for nest in nests)
    if args.dot is not None:
        _write_artifact(args.dot, wonderful.nest_poset_dot(n, args.d))
        result["dot"] = args.dot
    _emit(config, result, text=f"{len(nests)}\n")
    return 0


def _cmd_strata(args, config: RunConfig) -> int:
    n = _cap(config, "n", args.n, "strata_n")
    poset = confcat.strata_poset(n)
    result = {
        "n": n,
        "count": len(poset.strata),
        "by_codim": {},
    }
    for s in poset.strata:
        key = str(s.codim)
        result["by_codim"][key] = result["by_codim"].get(key, 0) + 1
    if args.dot is not None:
        _write_artifact(args.dot, poset.to_dot())
        result["dot"] = args.dot
    _emit(config, result, text=f"{len(poset.strata)}\n")
    return 0


def _cmd_deltafin_check(args, config: RunConfig) -> int:
    if args.chain:
        from . import finchains
        from .forests import forest_to_json, level_functor_object

        chain = finchains.chain_from_json(_read_json(args.chain, config))
        problems = finchains.chain_violations(chain)
        result = {"valid": not problems, "violations": problems}
        if not problems:
            result["level_forest"] = forest_to_json(level_functor_object(chain))
        _emit(config, result, text=("valid\n" if not problems else "\n".join(problems) + "\n"))
        return 0 if not problems else 1
    max_level = _cap(config, "max-level", args.max_level, "max_level")
    max_size = _cap(config, "max-size", args.max_size, "max_size")
    results = [checks.check_simplicial_identities(max_level, max_size,
                                                  samples=args.samples, seed=args.seed)]
    if args.functor:
        results.append(checks.check_level_functor(
            min(max_level, 2) if not config.unsafe_no_cap else max_level,
            max_size, pair_samples=args.samples or 300, seed=args.seed))
    ok = all(r.ok for r in results)
    result = {
        "passed": ok,
        "checks": [
            {"name": r.name, "checked": r.checked, "failures": r.failures[:20]}
            for r in results
        ],
    }
    _emit(config, result, text="".join(r.summary() + "\n" for r in results))
    return 0 if ok else 1


def _cmd_blowup_validate(args, config: RunConfig) -> int:
    n = _cap(config, "n", args.n, "n")
    bset = wonderful.diagonal_building_set(n, args.d)
    if args.order:
        data = _read_json(args.order, config)
        order = [wonderful.partition_key([tuple(b) for b in m]) for m in data]
        schedule = wonderful.BlowUpSchedule(bset, order)
    else:
        schedule = wonderful.default_order(bset)
    bad_prefix = wonderful.first_invalid_prefix(schedule)
    result = {
        "n": n,
        "d": args.d,
        "order": wonderful.schedule_to_json(schedule),
        "valid": bad_prefix is None,
        "first_invalid_prefix": bad_prefix,
        "divisors": [record.label for record in schedule.divisor_registry],
    }
    _emit(config, result, text=("valid\n" if bad_prefix is None else f"invalid at prefix {bad_prefix}\n"))
    return 0


def _cmd_forget_centers(args, config: RunConfig) -> int:
    if args.injection:
        data = _read_json(args.injection, config)
        source = FiniteSet(data["source"])
        target = FiniteSet(data["target"])
        raw = data.get("map")
        if raw is None:
            table = {k: k for k in source.labels}
        else:
            table = {k: raw.get(str(k), raw.get(k)) for k in source.labels}
        inj = SetMap(source, target, table)
    elif args.source and args.target:
        source = FiniteSet(int(x) for x in args.source.split(","))
        target = FiniteSet(int(x) for x in args.target.split(","))
        inj = SetMap(source, target, {x: x for x in source})
    else:
        raise InputError("forget-centers needs --injection or both --source and --target")
    centers = wonderful.forgetful_centers(inj, args.d)
    result = {
        "source": list(inj.source.labels),
        "target": list(inj.target.labels),
        "d": args.d,
        "centers": [[list(b) for b in c] for c in centers],
    }
    _emit(config, result,
          text="".join(wonderful.partition_label(c) + "\n" for c in centers))
    return 0


def _load_descriptor(args, config: RunConfig):
    builtin = {
        "elliptic": weights.elliptic_curve,
        "affine-line": weights.affine_line,
        "projective-line": weights.projective_line,
    }
    if args.variety in builtin:
        return builtin[args.variety]()
    data = _read_json(args.variety, config)
    try:
        return weights.descriptor_from_json(data)
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad variety descriptor: {exc}")


def _cmd_purity(args, config: RunConfig) -> int:
    x = _load_descriptor(args, config)
    n = _cap(config, "n", args.n, "n")
    max_deg = _cap(config, "max-deg", args.max_deg, "max_deg")
    verdict = weights.purity_theorem_check(x, n, max_deg)
    conf2 = weights.conf2_purity_report(x)
    result = {
        "variety": x.name,
        "n": n,
        "verdict": verdict.to_json()["verdict"],
        "purity": verdict.to_json(),
        "conf2": conf2.to_json(),
    }
    _emit(config, result, text=f"{result['verdict']}\n")
    return 0


def _cmd_hilbert(args, config: RunConfig) -> int:
    x = _load_descriptor(args, config)
    n = _cap(config, "n", args.n, "n")
    max_deg = _cap(config, "max-deg", args.max_deg, "max_deg")
    algebra = weights.presentation(x, n, args.relations)
    report = weights.hilbert_series(algebra, max_deg)
    result = {
        "variety": x.name,
        "n": n,
        "relation_set": args.relations,
        "dims": report.dims(),
        "report": report.to_json(),
    }
    _emit(config, result, text=" ".join(str(d) for d in report.dims()) + "\n")
    return 0


def _cmd_koszul(args, config: RunConfig) -> int:
    if args.presentation == "genus-1":
        p = koszul.genus_one_presentation()
    elif args.presentation.startswith("exterior-"):
        p = koszul.exterior_presentation(int(args.presentation.split("-")[1]))
    elif args.presentation.startswith("symmetric-"):
        p = koszul.symmetric_presentation(int(args.presentation.split("-")[1]))
    else:
        data = _read_json(args.presentation, config)
        try:
            p = koszul.presentation_from_json(data)
        except (KeyError, ValueError) as exc:
            raise InputError(f"bad presentation: {exc}")
    order = args.max_deg
    if order > koszul.MAX_KOSZUL_DEGREE and not config.unsafe_no_cap:
        raise InputError(f"--max-deg exceeds cap {koszul.MAX_KOSZUL_DEGREE}")
    verdict = koszul.koszul_criterion(p, order)
    result = verdict.to_json()
    _emit(config, result, text=verdict.note + "\n")
    return 0


# -- argument parsing ---------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confstrata",
        description="Symbolic calculus for strata of compactified configuration spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the JSON report to this path")
        p.add_argument("--format", dest="fmt", choices=["json", "text"], default=None)
        p.add_argument("--unsafe-no-cap", action="store_true",
                       help="override the hard size caps")
        p.add_argument("--selftest", action="store_true",
                       help="run this subcommand's property suite and exit")
        p.add_argument("--log", help="append a timestamped line to this sidecar log")

    p = sub.add_parser("forests", help="enumerate forests on {1..n}")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--count", action="store_true", help="emit the count only")
    p.add_argument("--dot", help="write the graph of one forest to this DOT file")
    p.add_argument("--index", type=int, help="which forest to export with --dot")
    common(p)

    p = sub.add_parser("nests", help="enumerate nests of the diagonal building set")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--count", action="store_true")
    p.add_argument("--dot", help="write the nest poset to this DOT file")
    common(p)

    p = sub.add_parser("strata", help="the poset of strata for n points")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--dot", help="write the strata poset to this DOT file")
    common(p)

    p = sub.add_parser("deltafin-check", help="simplicial identities and functor laws")
    p.add_argument("--max-level", type=int, default=2)
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("--functor", action="store_true",
                   help="also check the level/configuration functor composition laws")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chain", help="validate a single chain JSON file instead")
    common(p)

    p = sub.add_parser("blowup-validate", help="prefix-validate a blow-up order")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--order", help="JSON file with an ordered member list")
    common(p)

    p = sub.add_parser("forget-centers", help="blow-up centers of a point-forgetting map")
    p.add_argument("--source", help="comma-separated labels, e.g. 1,2")
    p.add_argument("--target", help="comma-separated labels, e.g. 1,2,3")
    p.add_argument("--injection", help="JSON file {source, target, map}")
    p.add_argument("--d", type=int, default=1)
    common(p)

    p = sub.add_parser("purity", help="weight purity for n points in X x R")
    p.add_argument("--variety", required=False, default="elliptic",
                   help="descriptor JSON path or builtin name")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-deg", type=int, default=6)
    common(p)

    p = sub.add_parser("hilbert", help="Hilbert series with weight decomposition")
    p.add_argument("--variety", required=False, default="affine-line")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-deg", type=int, default=8)
    p.add_argument("--relations", default="default", choices=["default", "none"])
    common(p)

    p = sub.add_parser("koszul", help="quadratic dual and the Hilbert-series criterion")
    p.add_argument("--presentation", default="genus-1",
                   help="presentation JSON path or builtin (genus-1, exterior-N, symmetric-N)")
    p.add_argument("--max-deg", type=int, default=10)
    common(p)

    return parser


HANDLERS = {
    "forests": _cmd_forests,
    "nests": _cmd_nests,
    "strata": _cmd_strata,
    "deltafin-check": _cmd_deltafin_check,
    "blowup-validate": _cmd_blowup_validate,
    "forget-centers": _cmd_forget_centers,
    "purity": _cmd_purity,
    "hilbert": _cmd_hilbert,
    "koszul": _cmd_koszul,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.log:
        import datetime

        with open(args.log, "a") as fh:
            fh.write(f"{datetime.datetime.now().isoformat()} {args.command}\n")
    if args.selftest:
        return _selftest(args.command)
    fmt = args.fmt
    if fmt is None:
        # bare counts read better as plain text; everything else defaults to JSON
        fmt = "text" if getattr(args, "count", False) else "json"
    params = {
        k: v for k, v in vars(args).items()
        if k not in {"command", "out", "fmt", "unsafe_no_cap", "selftest", "log"} and v is not None
    }
    config = RunConfig(args.command, params, args.out, fmt, args.unsafe_no_cap)
    try:
        return HANDLERS[args.command](args, config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except weights.HypothesisRefusal as exc:
        body = json.dumps({"schema": SCHEMA, "command": args.command,
                           "refusal": exc.to_json()}, sort_keys=True, indent=2)
        print(body)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

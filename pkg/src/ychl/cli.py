"""Command-line front end: ``ychl <command> ...``.

Exit codes: 0 success / inside / feasible / passed, 1 outside / infeasible /
failed, 2 usage or internal error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import allocation, gaussian, regions, scheme, sweep
from .deterministic import DycParams

EXIT_OK, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _triple(text: str, kind=int) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise UsageError(f"expected three comma-separated values, got {text!r}")
    try:
        return tuple(kind(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"bad value in {text!r}: {exc}") from None


def _params(text: str) -> DycParams:
    try:
        return DycParams(*_triple(text, int))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _rates(text: str, exact: bool) -> regions.RateTuple:
    try:
        return regions.parse_rates(text, exact=exact)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad --rates {text!r}: {exc}") from None


def _gaussian(args) -> gaussian.ChannelConfig:
    gains = _triple(args.gains, float)
    try:
        return gaussian.ChannelConfig.normalize(gains, float(args.power))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _num(v):
    return str(v) if isinstance(v, Fraction) else v


def _emit(out, fmt: str, payload: dict, text: str, rows: list[list] | None = None, header=None):
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, default=_num) + "\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        if header:
            writer.writerow(header)
        for row in rows if rows is not None else [[k, _num(v)] for k, v in payload.items()]:
            writer.writerow(row)
    else:
        out.write(text.rstrip("\n") + "\n")


def _region_rows(region: regions.LinearRegion):
    header = ["tag", *regions.VARS, "rhs"]
    rows = [[ineq.tag, *ineq.coeffs, _num(ineq.rhs)] for ineq in region]
    return header, rows


def cmd_region(args, out) -> int:
    if args.channel == "dyc":
        if args.levels is None:
            raise UsageError("region dyc needs --levels")
        params = _params(args.levels)
        bound = args.bound or "outer"
        if bound == "outer":
            region = regions.build_outer_region_d(params)
        elif bound == "cutset":
            region = regions.build_cutset_region(params)
        else:
            raise UsageError(f"region dyc supports --bound outer|cutset, got {bound}")
        title = f"{bound} bound of {params}"
    else:
        if args.gains is None or args.power is None:
            raise UsageError("region gyc needs --gains and --power")
        cfg = _gaussian(args)
        bound = args.bound or "outer"
        if bound == "outer":
            region = gaussian.build_outer_region_g(cfg)
        elif bound == "inner-target":
            region = gaussian.build_inner_target_region(cfg)
        else:
            raise UsageError(f"region gyc supports --bound outer|inner-target, got {bound}")
        title = f"{bound} region, h²P = {tuple(round(s, 6) for s in cfg.snr)}"
    header, rows = _region_rows(region)
    text = "\n".join([title] + [f"  {ineq.describe()}   [{ineq.tag}]" for ineq in region])
    _emit(out, args.format, region.to_dict(), text, rows, header)
    return EXIT_OK


def _load_region(path: str) -> regions.LinearRegion:
    try:
        with open(path) as fh:
            return regions.LinearRegion.from_json(fh.read())
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read region {path!r}: {exc}") from None


def cmd_check(args, out) -> int:
    if args.region:
        region = _load_region(args.region)
        label = args.region
    elif args.levels:
        region = regions.build_outer_region_d(_params(args.levels))
        label = str(_params(args.levels))
    else:
        raise UsageError("check needs --levels or --region")
    exact = region.is_exact()
    r = _rates(args.rates, exact=exact)
    tol = 0 if exact else gaussian.TOL
    inside = regions.contains(region, r, tol)
    violated = [ineq.tag for ineq in region.violated(r, tol)]
    if any(v < -tol for v in r):
        violated.append("non-negativity")
    payload = {"region": label, "rates": list(r), "inside": inside, "violated": violated}
    text = f"{'inside' if inside else 'outside'} {label}"
    if violated:
        text += "\nviolated: " + ", ".join(violated)
    _emit(out, args.format, payload, text)
    return EXIT_OK if inside else EXIT_FALSE


def _plan_for(params: DycParams, r: regions.RateTuple):
    """Plan an exact tuple, expanding rational rates over several channel uses."""
    if all(Fraction(v).denominator == 1 for v in r):
        return 1, params, scheme.build_plan(params, [int(v) for v in r])
    q, big, scaled = scheme.expand_rational(params, r)
    return q, big, scheme.build_plan(big, scaled)


def cmd_plan(args, out) -> int:
    params = _params(args.levels)
    r = _rates(args.rates, exact=True)
    try:
        q, big, plan = _plan_for(params, r)
    except scheme.Infeasible as exc:
        payload = {"feasible": False, "resource": exc.resource}
        _emit(out, args.format, payload, f"infeasible: {exc}")
        return EXIT_FALSE
    except ValueError as exc:
        _emit(out, args.format, {"feasible": False, "reason": str(exc)}, f"infeasible: {exc}")
        return EXIT_FALSE
    payload = {"feasible": True, "channel_uses": q, **plan.to_dict()}
    header = ["id", "kind", "users", "rate", "uplink_lo", "uplink_hi", "downlink_lo", "downlink_hi"]
    rows = [
        [c.id, c.kind, "-".join(map(str, c.users)), c.rate, *c.uplink, *c.downlink] for c in plan.chunks
    ]
    lines = [f"plan for {big} rates {tuple(int(v) for v in plan.rates)}" + (f" ({q} channel uses)" if q > 1 else "")]
    for c in plan.chunks:
        lines.append(
            f"  {c.id:<10} {c.kind:<7} users {'-'.join(map(str, c.users))}  rate {c.rate}  "
            f"up {c.uplink[0]}..{c.uplink[1]}  down {c.downlink[0]}..{c.downlink[1]}"
        )
    lines.append("  relay map: " + ", ".join(f"{a}->{b}" for a, b in plan.relay_map.pairs()))
    _emit(out, args.format, payload, "\n".join(lines), rows, header)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    params = _params(args.levels)
    r = _rates(args.rates, exact=True)
    try:
        _, big, plan = _plan_for(params, r)
    except (scheme.Infeasible, ValueError) as exc:
        _emit(out, args.format, {"feasible": False, "reason": str(exc)}, f"infeasible: {exc}")
        return EXIT_FALSE
    if args.exhaustive:
        try:
            payloads = scheme.exhaustive_payloads(plan)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        payloads = scheme.random_payloads(plan, args.trials, args.seed)
    report = scheme.simulate_end_to_end(big, plan, payloads)
    text = f"{report.decoded}/{report.payloads} payloads decoded"
    if not report.ok:
        text += "\nerrors: " + ", ".join(f"R{j}{k}={n}" for (j, k), n in report.errors.items() if n)
    _emit(out, args.format, report.to_dict(), text)
    return EXIT_OK if report.ok else EXIT_FALSE


def cmd_verify(args, out) -> int:
    cfg = _gaussian(args)
    r = cfg.to_normalized_rates(_rates(args.rates, exact=False))
    report = allocation.verify_achievability(cfg, r)
    payload = {"normalized_order": list(cfg.perm), **report.to_dict()}
    lines = [f"{'pass' if report.passed else 'fail'} (sector {report.sector})"]
    if report.allocation is not None:
        lines.append(f"relay power {report.allocation.beta_sigma:.6g}, "
                     f"source powers {', '.join(f'{report.allocation.source_sum(u):.6g}' for u in (1, 2, 3))}")
    if report.failures():
        lines.append("violated: " + ", ".join(report.failures()))
    _emit(out, args.format, payload, "\n".join(lines))
    return EXIT_OK if report.passed else EXIT_FALSE


def cmd_sweep_gap(args, out) -> int:
    lo, hi = (float(v) for v in args.hp_range.split(","))
    if not 0 < lo <= hi:
        raise UsageError(f"--hp-range needs 0 < lo <= hi, got {args.hp_range}")
    try:
        records = sweep.sweep_gap(args.samples, args.seed, (lo, hi))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.out:
        try:
            sweep.write_sweep(records, args.out)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from None
    passed = sum(r.verdict == "pass" for r in records)
    summary = {"samples": len(records), "passed": passed, "out": args.out}
    if args.format == "csv" and not args.out:
        out.write(sweep.sweep_csv(records))
    else:
        _emit(out, args.format, summary, f"{passed}/{len(records)} samples pass the gap check")
    return EXIT_OK if passed == len(records) else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ychl", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("region", parents=[common], help="export an outer or target region")
    p.add_argument("channel", choices=("dyc", "gyc"))
    p.add_argument("--levels")
    p.add_argument("--gains")
    p.add_argument("--power", type=float)
    p.add_argument("--bound", choices=("outer", "cutset", "inner-target"))
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("check", parents=[common], help="membership of a rate tuple")
    p.add_argument("--levels")
    p.add_argument("--region", help="region JSON file from 'region --format json'")
    p.add_argument("--rates", required=True)
    p.set_defaults(func=cmd_check)

    for name, func, helptext in (
        ("plan", cmd_plan, "relay-level plan for a rate tuple"),
        ("simulate", cmd_simulate, "bit-exact end-to-end simulation"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--levels", required=True)
        p.add_argument("--rates", required=True)
        if name == "simulate":
            mode = p.add_mutually_exclusive_group()
            mode.add_argument("--exhaustive", action="store_true")
            mode.add_argument("--trials", type=int, default=1000)
            p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="constructive achievability on the Gaussian channel")
    p.add_argument("--gains", required=True)
    p.add_argument("--power", required=True, type=float)
    p.add_argument("--rates", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep-gap", parents=[common], help="random gap-check sweep")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hp-range", default="1e-2,1e8")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep_gap)
    return parser


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"ychl: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001
        print(f"ychl: internal error: {exc!r}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

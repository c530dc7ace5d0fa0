"""Command-line surface: generate, analyze and verify sequence families.

Subcommands
-----------
gen           write a family to the one-line-per-member text format
spectrum      exact correlation spectrum as CSV rows or a JSON report
verify        run a verification suite (or all of them); exit 0 iff green
lincomp       measured vs. formula linear complexity per member
kernel-count  tabulate solution counts of the shift kernel equation
ring-info     parameters of the underlying ring as JSON

Exit codes: 0 success / all checks passed, 1 verification failure,
2 configuration or argument error, 3 I/O error.  Reports never embed
wall-clock data, so identical configurations reproduce byte-identical
output.  The environment variable QUADSEQ_POLY_TABLE may point to a file
overriding the built-in primitive-polynomial table.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import analysis, families, lincomp, suites
from .errors import ConfigurationError, StabilityError
from .families import FamilyConfig
from .ring import build_ring_context


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _config_from_args(args) -> FamilyConfig:
    ring = build_ring_context(args.e, args.m)
    return FamilyConfig(ring, args.family, rho=args.rho, lambda_log=args.lambda_log)


def _strip_elapsed(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "elapsed"}


# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    config = _config_from_args(args)
    fam = families.gen_family(config)
    out = args.out or f"quadseq-{config.kind}-n{config.ring.n}-rho{config.rho}.seq"
    families.write_family(out, config, fam)
    ring = config.ring
    info = {
        "family": config.kind,
        "n": ring.n,
        "e": ring.e,
        "m": ring.m,
        "rho": config.rho,
        "lambda_log": config.lambda_log,
        "period": config.period,
        "count": config.size,
        "rmax_bound": analysis.rmax_bound(ring.n, ring.e, config.rho),
        "out": out,
    }
    sys.stdout.write(_json_text(info) + "\n")
    return 0


def cmd_spectrum(args) -> int:
    config = _config_from_args(args)
    fam = families.gen_family(config)
    report = analysis.full_spectrum(fam, jobs=args.jobs)
    if args.format == "csv":
        _emit("\n".join(report.csv_rows()), args.out)
        return 0
    violations: list = []
    if config.kind == "V":
        _, raw = analysis.verify_value_set(report, analysis.family_v_value_set(config.ring.n, config.ring.e))
        violations = [{"i": v.i, "j": v.j, "tau": v.tau, "re": v.value.re, "im": v.value.im} for v in raw]
    elif config.kind == "W":
        violations = analysis.w_value_violations(
            report, config.ring.n, config.ring.e, config.size // 2
        )
    payload = {
        "family": config.kind,
        "params": {
            "n": config.ring.n, "e": config.ring.e, "m": config.ring.m,
            "rho": config.rho, "lambda_log": config.lambda_log,
            "period": config.period, "count": config.size,
        },
        "histogram": report.histogram_rows(),
        "r_max": report.r_max,
        "violations": violations,
    }
    _emit(_json_text(payload), args.out)
    return 0


def cmd_verify(args) -> int:
    names = list(suites.SUITE_NAMES) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        kwargs = {}
        if args.suite != "all":
            if name in ("identity", "values-v", "values-w", "span-w", "kernel", "bounds"):
                kwargs.update(e=args.e, m=args.m)
            if name == "identity" and args.samples:
                kwargs.update(pairs=args.samples, seed=args.seed)
            if name in ("values-v", "values-w") and args.jobs > 1:
                kwargs.update(jobs=args.jobs)
            if name == "span-l":
                kwargs.update(e=args.e, m=args.m, rho=args.rho, seed=args.seed)
                if args.samples:
                    kwargs.update(per_class=args.samples)
            if name == "bounds":
                kwargs.update(rho=args.rho, seed=args.seed)
                if args.samples:
                    kwargs.update(samples=args.samples)
        reports.append(_strip_elapsed(suites.RUNNERS[name](**kwargs)))
    payload = reports[0] if len(reports) == 1 else reports
    _emit(_json_text(payload), args.out)
    return 0 if all(r["passed"] for r in reports) else 1


def cmd_lincomp(args) -> int:
    config = _config_from_args(args)
    fam = families.gen_family(config)
    if args.indices:
        wanted = set(args.indices)
        fam = [s for s in fam if s.index in wanted]
        missing = wanted - {s.index for s in fam}
        if missing:
            raise ConfigurationError(f"indices not in family: {sorted(missing)}")
    elif args.samples and args.samples < len(fam):
        import random

        rng = random.Random(args.seed)
        fam = sorted(rng.sample(fam, args.samples), key=lambda s: s.index)
    rows = []
    for s in fam:
        if config.kind == "W":
            formula = lincomp.span_formula_w(config.ring.n, config.ring.e, s.label[0])
        elif s.coeffs is None:
            formula = config.ring.n
        else:
            _, _, formula = families.classify_span(s.coeffs, config)
        measured = lincomp.linear_complexity_periodic(s).complexity
        rows.append(
            {"index": s.index, "label": s.label, "measured": measured,
             "formula": formula, "match": measured == formula}
        )
    if args.format == "csv":
        lines = ["index,label,measured,formula,match"]
        lines += [f"{r['index']},{r['label']},{r['measured']},{r['formula']},{int(r['match'])}" for r in rows]
        _emit("\n".join(lines), args.out)
    else:
        _emit(_json_text(rows), args.out)
    return 0 if all(r["match"] for r in rows) else 1


def cmd_kernel_count(args) -> int:
    ring = build_ring_context(args.e, args.m)
    kind = "V" if ring.m % 2 == 0 else "L"
    config = FamilyConfig(ring, kind if args.rho == 1 else "L", rho=args.rho,
                          lambda_log=args.lambda_log)
    f = ring.field
    lam_bar = f.exp[config.lambda_log]
    etas = tuple(f.exp[k % (f.order - 1)] for k in args.eta_logs or ())
    if len(etas) != args.rho - 1:
        raise ConfigurationError(
            f"rho={args.rho} needs {args.rho - 1} eta logs, got {len(etas)}"
        )
    rows = []
    histogram: dict[int, int] = {}
    for delta in f.nonzero():
        if delta == 1:
            continue
        count = analysis.count_L_kernel(f, ring.e, delta, lam_bar, etas, args.interpretation)
        histogram[count] = histogram.get(count, 0) + 1
        rows.append({"delta_log": f.log[delta], "count": count})
    rows.sort(key=lambda r: r["delta_log"])
    full = analysis.count_L_kernel(f, ring.e, 1, lam_bar, etas, args.interpretation)
    if args.format == "csv":
        lines = ["delta_log,count"] + [f"{r['delta_log']},{r['count']}" for r in rows]
        _emit("\n".join(lines), args.out)
    else:
        payload = {
            "params": {
                "n": ring.n, "e": ring.e, "m": ring.m, "rho": args.rho,
                "lambda_log": config.lambda_log,
                "eta_logs": list(args.eta_logs or ()),
                "interpretation": args.interpretation,
            },
            "histogram": {str(k): v for k, v in sorted(histogram.items())},
            "rows": rows,
            "notes": [f"delta=1 excluded from rows: kernel is all of GF(2^n) ({full} solutions)"],
        }
        _emit(_json_text(payload), args.out)
    return 0


def cmd_ring_info(args) -> int:
    ring = build_ring_context(args.e, args.m)
    lam = families.select_lambda(ring)
    payload = {
        "n": ring.n,
        "e": ring.e,
        "m": ring.m,
        "binary_modulus": ",".join(str((ring.g_mask >> i) & 1) for i in range(ring.n + 1)),
        "lifted_modulus": ring.poly_to_str(),
        "unit_group_order": (1 << ring.n) - 1,
        "teichmuller_size": 1 << ring.n,
        "default_lambda_log": ((1 << ring.n) - 1) // ((1 << ring.e) - 1),
        "default_lambda": ring.element_to_str(lam),
        "index_set_size": 1 << (ring.n - 1),
    }
    _emit(_json_text(payload), args.out)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadseq",
        description="Quadriphase sequence families over GR(4,n): generation and verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_ring_args(p, family=True):
        p.add_argument("--e", type=int, default=2, help="subring degree (>= 2)")
        p.add_argument("--m", type=int, default=2, help="extension factor (>= 2); n = e*m")
        if family:
            p.add_argument("--family", choices=families.FAMILY_KINDS, default="V")
            p.add_argument("--rho", type=int, default=1, help="tuple length for family L")
            p.add_argument("--lambda-log", dest="lambda_log", type=int, default=None,
                           help="discrete log of the subring unit lambda (default generator)")

    p = sub.add_parser("gen", help="generate a family to a sequence file")
    add_ring_args(p)
    p.add_argument("--out", required=False, help="output path")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("spectrum", help="exact correlation spectrum")
    add_ring_args(p)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for pair chunks")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=suites.SUITE_NAMES + ("all",), default="all")
    p.add_argument("--e", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--rho", type=int, default=1)
    p.add_argument("--samples", type=int, default=None,
                   help="sample count for sampled suites (identity pairs, span-l per-class, bounds)")
    p.add_argument("--seed", type=int, default=20240810)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lincomp", help="linear complexity audit (oracle vs formula)")
    add_ring_args(p)
    p.add_argument("--indices", type=lambda s: [int(x) for x in s.split(",")], default=None,
                   help="comma-separated member indices (default: whole family)")
    p.add_argument("--samples", type=int, default=None, help="audit a random sample instead")
    p.add_argument("--seed", type=int, default=20240810)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_lincomp)

    p = sub.add_parser("kernel-count", help="solution counts of the shift kernel equation")
    p.add_argument("--e", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--rho", type=int, default=1)
    p.add_argument("--lambda-log", dest="lambda_log", type=int, default=None)
    p.add_argument("--eta-logs", dest="eta_logs", type=lambda s: [int(x) for x in s.split(",")],
                   default=None, help="discrete logs of the rho-1 eta coefficients")
    p.add_argument("--interpretation", choices=("literal", "linearized"), default="literal")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_kernel_count)

    p = sub.add_parser("ring-info", help="ring parameters as JSON")
    p.add_argument("--e", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ring_info)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except StabilityError as exc:
        print(f"verification error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"argument error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

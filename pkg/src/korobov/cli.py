"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 an enumeration cap was hit (partial
results are still written, with ``capped`` set), 4 the question is outside
what the theory answers (standard information, open criteria, truncated
weights).

Thresholds that land within one ulp of an eigenvalue are resolved by plain
double comparison; such results are implementation-defined.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import complexity as cx
from .errors import CapExceeded, DomainError, Unsupported
from .harness import CSV_HEADER, brute_force_spectrum, run_curve, verify_bounds
from .spectrum import DEFAULT_CAP, ProblemSpec
from .tractability import DEFAULT_SIGMAS, classify
from .weights import FamilySyntaxError, parse_family

EXIT_OK, EXIT_USAGE, EXIT_CAPPED, EXIT_UNSUPPORTED = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _num(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "inf" if math.isinf(x) else repr(x)
    return str(x)


def _render(rows, fmt, header=None, doc=None):
    """Rows are dicts with identical keys; ``doc`` overrides the JSON payload."""
    keys = header or (list(rows[0]) if rows else [])
    if fmt == "json":
        payload = doc if doc is not None else [{k: _num(r[k]) for k in keys} for r in rows]
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(keys) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        for r in rows:
            w.writerow([_cell(r[k]) for k in keys])
        return buf.getvalue()
    return "".join(" ".join(f"{k}={_cell(r[k])}" for k in keys) + "\n" for r in rows)


def _p_value(text, allow_mid=False):
    t = text.strip().lower()
    if t in ("inf", "infinity"):
        return math.inf
    try:
        p = float(t)
    except ValueError:
        raise UsageError(f"--p: expected 2 or inf, got {text!r}") from None
    if p == 2 or (allow_mid and p > 2 and math.isfinite(p)):
        return 2 if p == 2 else p
    raise UsageError(f"--p: expected 2 or inf{' or a real > 2' if allow_mid else ''}, got {text!r}")


def _family(text):
    try:
        return parse_family(text)
    except FamilySyntaxError as exc:
        raise UsageError(f"--weights: {exc}") from None


def _check_alpha(a):
    if not a > 1 or math.isinf(a):
        raise UsageError(f"--alpha must be a real > 1, got {a}")


def _check_eps(eps_list):
    if not eps_list:
        raise UsageError("--eps is required")
    for e in eps_list:
        if not 0 < e < 1:
            raise UsageError(f"--eps must lie in (0, 1), got {e}")


def _check_d(ds):
    for d in ds:
        if d < 1:
            raise UsageError(f"--d must be a positive integer, got {d}")


def _spec(args, d=None):
    _check_alpha(args.alpha)
    d = args.d if d is None else d
    _check_d([d])
    fam = _family(args.weights)
    try:
        return ProblemSpec(d, args.alpha, fam, _p_value(args.p), args.info_class, args.criterion)
    except IndexError as exc:
        raise UsageError(f"--weights: {exc}") from None


def cmd_complexity(args, out):
    _check_eps(args.eps)
    spec = _spec(args)
    rows, capped = [], False
    for eps in args.eps:
        r = cx.info_complexity(spec, eps, cap=args.cap)
        capped |= r.capped
        rows.append({
            "d": spec.d, "eps": eps, "n": r.n, "capped": r.capped,
            "lam_n": r.lam_n, "lam_next": r.lam_next,
            "tail": r.tail, "tail_prev": r.tail_prev, "target": r.target,
        })
    if args.format == "table":
        rows = [{k: v for k, v in r.items() if v is not None} for r in rows]
        out.write("".join(" ".join(f"{k}={_cell(v)}" for k, v in r.items()) + "\n" for r in rows))
    else:
        out.write(_render(rows, args.format))
    return EXIT_CAPPED if capped else EXIT_OK


def cmd_error(args, out):
    spec = _spec(args)
    if not args.n:
        raise UsageError("--n is required")
    if any(n < 0 for n in args.n):
        raise UsageError("--n must be non-negative")
    init = cx.initial_error(spec)
    rows = []
    for n in args.n:
        rows.append({"d": spec.d, "n": n, "error": cx.minimal_error_all(spec, n, cap=args.cap),
                     "initial_error": init})
    out.write(_render(rows, args.format))
    return EXIT_OK


def cmd_classify(args, out, err):
    _check_alpha(args.alpha)
    fam = _family(args.weights)
    p = _p_value(args.p, allow_mid=True)
    sigmas = args.sigma or list(DEFAULT_SIGMAS)
    for s in sigmas:
        if not 0 < s <= 1:
            raise UsageError(f"--sigma must lie in (0, 1], got {s}")
    if args.tau:
        err.write("notice: --tau is ignored; the (sigma,tau)-WT conditions do not depend on tau\n")
    rep = classify(fam, args.alpha, p, args.info_class, sigmas, args.criterion)
    if args.format == "json":
        out.write(json.dumps(rep.to_json(), indent=2) + "\n")
    elif args.format == "csv":
        rows = [{"notion": k, "verdict": v.status, "nec": v.nec, "suff": v.suff}
                for k, v in rep.verdicts.items()]
        rows += [{"notion": "tau_star", "verdict": rep.spt_exponent, "nec": None, "suff": None},
                 {"notion": "t_star", "verdict": rep.qpt_exponent, "nec": None, "suff": None}]
        out.write(_render(rows, "csv"))
    else:
        for k, v in rep.verdicts.items():
            out.write(f"{k}: {v}\n")
        out.write(f"tau_star: {_cell(rep.spt_exponent) or '-'}\n")
        out.write(f"t_star: {_cell(rep.qpt_exponent) or '-'}\n")
    return EXIT_OK


def cmd_curve(args, out):
    _check_eps(args.eps)
    _check_alpha(args.alpha)
    ds = args.d or [1]
    _check_d(ds)
    tmpl = _spec(args, d=max(ds))
    curve = run_curve(tmpl, args.eps, ds, cap=args.cap, workers=args.workers)
    timing = not args.no_timing
    if args.format == "json":
        out.write(json.dumps(curve.to_json(timing), indent=2) + "\n")
    elif args.format == "csv":
        out.write(curve.to_csv(timing))
    else:
        rows = [dict(zip(CSV_HEADER.split(","), r)) for r in curve.rows(timing)]
        out.write(_render(rows, "table", header=CSV_HEADER.split(",")))
    for d, eps, msg in curve.errors:
        print(f"cell d={d} eps={eps}: {msg}", file=sys.stderr)
    if any(v is not None and v.capped for v in curve.values):
        return EXIT_CAPPED
    return EXIT_OK


def cmd_bounds(args, out):
    _check_eps(args.eps)
    ds = args.d or [1]
    _check_d(ds)
    tmpl = _spec(args, d=max(ds))
    checks = verify_bounds(tmpl, args.eps, ds, cap=args.cap)
    rows = [{
        "d": c.d, "eps": c.eps, "lower": c.lower, "n_norm": c.n_norm, "n_abs": c.n_abs,
        "log_spline_m": c.log_upper, "n_spline": c.upper, "lambda": c.lam, "status": c.status,
    } for c in checks]
    out.write(_render(rows, args.format))
    return EXIT_CAPPED if any(c.status == "skipped" for c in checks) else EXIT_OK


def cmd_oracle(args, out):
    spec = _spec(args)
    if args.box < 1:
        raise UsageError("--box must be a positive integer")
    try:
        spectrum = brute_force_spectrum(spec, args.box)
    except CapExceeded as exc:
        raise UsageError(f"--box: {exc}") from None
    rows = [{"value": v, "count": c} for v, c in spectrum]
    out.write(_render(rows, args.format))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="korobov",
        description="Worst-case approximation complexity and tractability in weighted Korobov spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def spec_flags(p, multi_d=False, need_d=True):
        if multi_d:
            p.add_argument("--d", type=int, action="append", help="dimension (repeatable)")
        elif need_d:
            p.add_argument("--d", type=int, required=True, help="dimension")
        p.add_argument("--alpha", type=float, required=True, help="smoothness, > 1")
        p.add_argument("--weights", required=True, help="e.g. poly:c=1,beta=2 | geo:c=1,q=0.5 | const:g=0.5 | explicit:1,0.5;repeat-last")
        p.add_argument("--p", default="2", help="2 or inf")
        p.add_argument("--class", dest="info_class", choices=["all", "std"], default="all")
        p.add_argument("--criterion", choices=["abs", "norm"], default="abs")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max eigenvalues enumerated")
        p.add_argument("--format", choices=["csv", "json", "table"], default="table")
        p.add_argument("--out", help="write results here instead of stdout")

    p = sub.add_parser("complexity", help="information complexity n(eps, d)")
    spec_flags(p)
    p.add_argument("--eps", type=float, action="append")

    p = sub.add_parser("error", help="n-th minimal error for arbitrary linear information")
    spec_flags(p)
    p.add_argument("--n", type=int, action="append")

    p = sub.add_parser("classify", help="tractability verdicts for a weight family")
    spec_flags(p, need_d=False)
    p.add_argument("--sigma", type=float, action="append")
    p.add_argument("--tau", type=float, action="append")

    p = sub.add_parser("curve", help="complexity over an (eps, d) grid")
    spec_flags(p, multi_d=True)
    p.add_argument("--eps", type=float, action="append")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="write runtime_ms as 0 for reproducible output")

    p = sub.add_parser("bounds", help="verify lower/upper complexity bounds for p = inf")
    spec_flags(p, multi_d=True)
    p.add_argument("--eps", type=float, action="append")

    p = sub.add_parser("oracle", help="brute-force spectrum over a box")
    spec_flags(p)
    p.add_argument("--box", type=int, required=True)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        if args.command == "classify":
            code = cmd_classify(args, buf, stderr)
        else:
            code = globals()[f"cmd_{args.command}"](args, buf)
    except UsageError as exc:
        stderr.write(f"{parser.prog} {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        stderr.write(f"{parser.prog} {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except Unsupported as exc:
        stderr.write(f"{parser.prog} {args.command}: unsupported: {exc}\n")
        return EXIT_UNSUPPORTED
    except CapExceeded as exc:
        stderr.write(f"{parser.prog} {args.command}: cap exceeded: {exc}\n")
        code = EXIT_CAPPED
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        stdout.write(buf.getvalue())
    if code == EXIT_CAPPED:
        stderr.write("warning: enumeration cap reached; capped values are lower bounds\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

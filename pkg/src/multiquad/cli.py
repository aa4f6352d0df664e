"""Command-line interface.

CSV column orders (first line of every CSV output is the header):

    count      k,x,totally_real,value,sum_11,sum_31,sum_21,sum_23[,oracle,match]
    count --dump              D,key
    radical    D,key
    normalize  input,normal,key
    disc       key,presentation,mod4_class,r,radical,discriminant
    formula    k,kind,formula,leading_base,leading_coef,zero_value,zero_override
    constant   k,prime_bound,value,lower,upper,value_alt,consistency_residual,prefactor
    fit        x,count,relative_residual  (summary values in the JSON params)
    verify     suite,check,status,cases,detail
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__, config
from .asymptotics import constant_Ck, fit_leading
from .countform import Kind, derive_family
from .errors import MultiquadError
from .fields import FieldKey, Presentation, discriminant, field_key, mod4_class, normalize, to_mod4_presentation
from .globalcount import count_N_many
from .oracle import FieldFilter, count_upto, dump_rows, enumerate_by_discriminant, enumerate_by_radical
from .report import CountReport

COLUMNS = {
    "count": ["k", "x", "totally_real", "value", "sum_11", "sum_31", "sum_21", "sum_23"],
    "dump": ["D", "key"],
    "radical": ["D", "key"],
    "normalize": ["input", "normal", "key"],
    "disc": ["key", "presentation", "mod4_class", "r", "radical", "discriminant"],
    "formula": ["k", "kind", "formula", "leading_base", "leading_coef", "zero_value", "zero_override"],
    "constant": ["k", "prime_bound", "value", "lower", "upper", "value_alt", "consistency_residual", "prefactor"],
    "fit": ["x", "count", "relative_residual"],
    "verify": ["suite", "check", "status", "cases", "detail"],
}


def _int_list(text: str) -> list[int]:
    out = []
    for t in text.replace(" ", "").split(","):
        if not t:
            continue
        if "e" in t.lower():
            # 1e8 style shorthand, exact integers only
            m, e = t.lower().split("e")
            if int(e) < 0:
                raise ValueError(f"{t!r} is not an integer")
            out.append(int(m) * 10 ** int(e))
        elif "^" in t:
            b, e = t.split("^")
            out.append(int(b) ** int(e))
        else:
            out.append(int(t))
    return out


def _positive_int(text: str) -> int:
    vals = _int_list(text)
    if len(vals) != 1:
        raise argparse.ArgumentTypeError(f"expected one integer, got {text!r}")
    return vals[0]


def cmd_count(args) -> CountReport:
    xs = args.x
    rep = CountReport("count", {"k": args.k, "x": ",".join(map(str, xs)), "totally_real": args.totally_real})
    filt = FieldFilter(totally_real_only=args.totally_real)
    if args.dump:
        fields = enumerate_by_discriminant(max(xs), args.k, filt)
        rep.columns = COLUMNS["dump"]
        rep.rows = dump_rows(fields)
        return rep
    rep.columns = list(COLUMNS["count"])
    detail = count_N_many(args.k, xs, args.totally_real, detail=True, threads=args.threads)
    fields = enumerate_by_discriminant(max(xs), args.k, filt) if args.oracle else None
    if args.oracle:
        rep.columns += ["oracle", "match"]
    for x in xs:
        parts = detail[x]
        row = dict(k=args.k, x=x, totally_real=args.totally_real, value=sum(parts))
        row.update(zip(COLUMNS["count"][4:], parts))
        if fields is not None:
            row["oracle"] = count_upto(fields, x)
            row["match"] = row["oracle"] == row["value"]
        rep.add(**row)
    return rep


def cmd_radical(args) -> CountReport:
    filt = FieldFilter.parse(args.filter)
    keys = sorted(enumerate_by_radical(args.P, args.k, filt), key=lambda key: key.elements)
    # discriminants here are defined for k >= 2; quadratic fields list keys only
    rows = [(discriminant(key) if args.k >= 2 else None, key) for key in keys]
    rows.sort(key=lambda t: (t[0] or 0, t[1].elements))
    params = {"k": args.k, "P": args.P, "filter": str(filt), "count": len(rows)}
    rep = CountReport("radical", params, columns=COLUMNS["radical"])
    rep.rows = [{"D": D, "key": str(key)} for D, key in rows]
    return rep


def cmd_normalize(args) -> CountReport:
    rep = CountReport("normalize", {}, columns=COLUMNS["normalize"])
    for text in args.presentation:
        p = Presentation.parse(text)
        rep.add(input=str(p), normal=str(normalize(p)), key=str(field_key(p)))
    return rep


def cmd_disc(args) -> CountReport:
    if args.key is not None:
        key = FieldKey.parse(args.key)
    else:
        key = field_key(Presentation.parse(args.presentation))
    pres = to_mod4_presentation(key)
    cls4 = mod4_class(key)
    rep = CountReport("disc", {}, columns=COLUMNS["disc"])
    rep.add(
        key=str(key),
        presentation=str(pres),
        mod4_class=cls4.value,
        r=cls4.r,
        radical=key.radical,
        discriminant=discriminant(key),
    )
    return rep


def cmd_formula(args) -> CountReport:
    fam = derive_family(args.k, Kind.parse(args.kind))
    bases, coef = fam.poly.leading()
    rep = CountReport("formula", {"k": args.k, "kind": fam.kind.value}, columns=COLUMNS["formula"])
    rep.add(
        k=args.k,
        kind=fam.kind.value,
        formula=str(fam.poly),
        leading_base=",".join(map(str, bases)),
        leading_coef=coef,
        zero_value=fam.zero_value,
        zero_override=fam.zero_override,
    )
    rep.extra["terms"] = fam.poly.to_json()
    return rep


def cmd_constant(args) -> CountReport:
    rep = CountReport("constant", {"prime_bound": args.prime_bound}, columns=COLUMNS["constant"])
    for k in args.k:
        res = constant_Ck(k, args.prime_bound)
        rep.add(
            k=k,
            prime_bound=args.prime_bound,
            value=res.value,
            lower=res.lower,
            upper=res.upper,
            value_alt=res.value_alt,
            consistency_residual=res.residual,
            prefactor=res.prefactor,
        )
    return rep


def cmd_fit(args) -> CountReport:
    fit = fit_leading(args.k, args.grid, totally_real=args.totally_real, prime_bound=args.prime_bound, threads=args.threads)
    params = {
        "k": args.k,
        "totally_real": args.totally_real,
        "alpha_hat": fit.alpha_hat,
        "reference": fit.reference,
        "ratio": fit.ratio,
        "residuals_shrink": fit.residuals_shrink,
    }
    rep = CountReport("fit", params, columns=COLUMNS["fit"])
    for x, c, r in zip(fit.grid, fit.counts, fit.relative_residuals):
        rep.add(x=x, count=c, relative_residual=r)
    return rep


def cmd_verify(args) -> CountReport:
    from .verify import run_suite

    checks = run_suite(args.suite, seed=args.seed, max_omega=args.max_omega, threads=args.threads)
    failed = [c for c in checks if not c.passed]
    params = {"suite": args.suite, "seed": args.seed, "max_omega": args.max_omega, "passed": not failed}
    rep = CountReport("verify", params, columns=COLUMNS["verify"])
    for c in checks:
        rep.add(**c.row())
    if failed:
        c = failed[0]
        rep.failure = f"verify failed: {c.suite}/{c.name}: {c.detail}"
    return rep


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--threads", type=int, default=None, help="worker threads for sieve passes")
    common.add_argument("--timing", action="store_true", help="record wall time in the report")

    p = argparse.ArgumentParser(prog="multiquad", description="Exact counts of multi-quadratic number fields.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("count", parents=[common], help="N_k(x) from the radical sums")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--x", type=_int_list, required=True, help="one or more bounds, comma separated")
    s.add_argument("--totally-real", action="store_true")
    s.add_argument("--oracle", action="store_true", help="also count by brute-force enumeration")
    s.add_argument("--dump", action="store_true", help="list the fields (D,key) instead of counting")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("radical", parents=[common], help="fields with a given radical")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--P", type=_positive_int, required=True)
    s.add_argument("--filter", default=None, help="tr, ifree, a class like (1,1), or a +-joined mix")
    s.set_defaults(func=cmd_radical)

    s = sub.add_parser("normalize", parents=[common], help="normal presentation of an i-free field")
    s.add_argument("--presentation", required=True, action="append", help="e.g. 6,10; may repeat")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("disc", parents=[common], help="discriminant of a field")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--presentation")
    g.add_argument("--key")
    s.set_defaults(func=cmd_disc)

    s = sub.add_parser("formula", parents=[common], help="closed form of a count family")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--kind", required=True, help="R, Q, R(1,1), Q(2,3), ... (R11 also accepted)")
    s.set_defaults(func=cmd_formula)

    s = sub.add_parser("constant", parents=[common], help="leading constant C_k")
    s.add_argument("--k", type=_int_list, required=True)
    s.add_argument("--prime-bound", type=_positive_int, default=10**7)
    s.set_defaults(func=cmd_constant)

    s = sub.add_parser("fit", parents=[common], help="fit the leading coefficient from exact counts")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--grid", type=_int_list, required=True, help="e.g. 1e8,1e9,1e10 or 10^8,10^9")
    s.add_argument("--totally-real", action="store_true")
    s.add_argument("--prime-bound", type=_positive_int, default=10**7)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("--suite", choices=("formulas", "global", "asymptotics", "all"), default="all")
    s.add_argument("--max-omega", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)
    return p


# options whose values often start with a minus sign, e.g. --key -6,-3,2
_SIGNED_OPTIONS = ("--presentation", "--key")


def _glue_signed(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _SIGNED_OPTIONS and i + 1 < len(argv) and argv[i + 1][:1] == "-" and argv[i + 1][1:2].isdigit():
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_signed(argv))
    if args.threads is not None:
        config.set_threads(args.threads)
    start = time.perf_counter()
    try:
        rep = args.func(args)
    except MultiquadError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # malformed presentations, keys or kinds
        parser.error(str(exc))
    if args.timing:
        rep.wall_time = time.perf_counter() - start
    text = rep.render(args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if rep.failure:
        print(rep.failure, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

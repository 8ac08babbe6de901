"""Command-line interface: ``fibdens <subcommand> ...``.

Exit codes: 0 success, 1 usage, 2 resource or exponent cap,
3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import density as _density
from . import padic as _padic
from . import scan as _scan
from . import tree as _tree
from .errors import (
    ExponentCapError,
    FibDensError,
    InternalInconsistencyError,
    InvalidArgumentError,
    ResourceError,
)
from .modfib import fib_mod, period_info
from .primes import require_prime

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def frac_json(x: Fraction, with_float: bool) -> dict:
    out = {"num": str(x.numerator), "den": str(x.denominator)}
    if with_float:
        out["float"] = float(f"{float(x):.15g}")
    return out


def _fmt(x: Fraction, with_float: bool) -> str:
    s = frac_str(x)
    return f"{s} ({float(x):.15g})" if with_float else s


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


# -- subcommands ----------------------------------------------------------


def cmd_dens(args) -> int:
    rep = _density.dens(args.p, max_e=args.max_e)
    data = rep.to_dict()
    data["dens"] = frac_json(rep.dens, args.float)
    lines = [
        f"dens({rep.p}) = {_fmt(rep.dens, args.float)}",
        f"  epsilon={rep.epsilon} alpha={rep.alpha} pi={rep.pi} e={rep.e}",
        f"  lucas_zeros={list(rep.lucas_zeros.zeros)} N={rep.N} Z={rep.Z}",
    ]
    if rep.special_case:
        lines.append(f"  special case {rep.special_case}")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_table(args) -> int:
    if args.upto < 2:
        raise InvalidArgumentError("--upto must be at least 2")
    sink = _scan.MemorySink()
    summary = _scan.scan_range(2, args.upto, sink, max_e=args.max_e)
    rows = [
        {"p": r.p, "dens": frac_json(r.dens, args.float), "e": r.e, "N": r.N, "Z": r.Z}
        for r in sink.records
    ]
    text = "\n".join(f"{r.p:>8}  {_fmt(r.dens, args.float)}" for r in sink.records)
    _emit(args, {"rows": rows, "cap_errors": summary.cap_errors}, text)
    return EXIT_RESOURCE if summary.cap_errors else EXIT_OK


def _attained(p: int, lam: int, mode: str):
    if mode == "fast" or (mode == "auto" and p not in (2, 5)):
        return _tree.fast_attained(p, lam)
    return _tree.brute_attained(p, lam)


def cmd_tree(args) -> int:
    require_prime(args.p)
    aset = _attained(args.p, args.level, args.mode)
    if args.dot:
        sys.stdout.write(_tree.export_tree(aset, "dot").decode())
        return EXIT_OK
    data = _tree.tree_to_dict(aset)
    if args.json or args.tree_json:
        data["count"] = str(aset.count())
        data["density"] = frac_json(aset.density(), args.float)
        print(json.dumps(data, sort_keys=True))
        return EXIT_OK
    lines = [
        f"p={aset.p} level={aset.lam} form={aset.form}",
        f"count={aset.count()} density={_fmt(aset.density(), args.float)}",
    ]
    if aset.form == _tree.COMPRESSED:
        lines.append(f"cylinders mod {aset.p}^{aset.e}: {' '.join(map(str, aset.cylinders))}")
        for z in aset.zeros:
            lines.append(
                f"zero i={z.i}: path {' '.join(map(str, z.path))}; {len(z.subtrees)} full subtrees"
            )
    print("\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    p, lam = require_prime(args.p), args.level
    brute = _tree.brute_attained(p, lam)
    if p in (2, 5):
        fast_set = brute
    else:
        fast_set = _tree.fast_attained(p, lam)
    equal = fast_set.expand() == brute.expand()
    d = brute.density()
    data = {
        "p": p,
        "level": lam,
        "equal": equal,
        "brute_count": len(brute.residues),
        "fast_count": fast_set.count(),
        "density": frac_json(d, args.float),
    }
    _emit(args, data, f"{'EQUAL' if equal else 'DIFFERENT'}, density {_fmt(d, args.float)}")
    if not equal:
        print(f"fast and brute attained sets differ for p = {p}, level {lam}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_interp(args) -> int:
    p, n, k = require_prime(args.p), args.n, args.prec
    if n < 0 or k < 1:
        raise InvalidArgumentError("need n >= 0 and --prec >= 1")
    if p == 2:
        val = _padic.fib_2adic(n, k)
        label = f"F_{{{n % 3},{n % 2}}}({n})"
    else:
        val = _padic.interp_F(n, _padic.zp(p, n, k), k)
        label = f"F_{n % period_info(p).pi}({n})"
    exact = fib_mod(n, p**k) if p**k > 1 else 0
    got = val.digits(k)
    want = _padic.int_digits(exact, p, k)
    match = got == want
    data = {"p": p, "n": n, "prec": k, "interp_digits": got, "exact_digits": want, "match": match}
    text = (
        f"{label}  = {' '.join(map(str, got))}\n"
        f"F({n}) mod {p}^{k} = {' '.join(map(str, want))}\n"
        f"{'MATCH' if match else 'MISMATCH'}"
    )
    _emit(args, data, text)
    if not match:
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_digits(args) -> int:
    p, i, depth = require_prime(args.p), args.i, args.depth
    if p == 5:
        raise InvalidArgumentError("the expansion needs p != 5")
    if depth < 1:
        raise InvalidArgumentError("--depth must be positive")
    g = _padic.golden_data(p, depth + 2)
    c = (2 * g.omega_phi**i / g.sqrt5).with_prec(depth)
    if c.in_zp():
        digits = c.to_zp().digits(depth)
        data = {"p": p, "i": i, "depth": depth, "digits": digits}
        text = " ".join(map(str, digits))
    else:
        a, b = c.digits(depth)
        data = {"p": p, "i": i, "depth": depth, "digits": a, "digits_b": b, "basis": c.basis.name}
        text = _padic.render_digits(c, depth)
    _emit(args, data, text)
    return EXIT_OK


def _progress(done, total):
    print(f"scan: {done} records", file=sys.stderr)


def cmd_scan(args) -> int:
    checkpoint = args.resume or args.checkpoint
    if args.resume and not (args.csv or args.jsonl):
        raise InvalidArgumentError("--resume needs the --csv/--jsonl files of the interrupted run")
    if args.csv or args.jsonl:
        sink = _scan.FileSink(args.csv, args.jsonl)
    else:
        if checkpoint:
            raise InvalidArgumentError("checkpointing needs --csv or --jsonl output files")
        sink = _scan.StreamSink(sys.stdout, "jsonl" if args.json else "csv")
    try:
        summary = _scan.scan_range(
            args.lo,
            args.hi,
            sink,
            checkpoint,
            resume=bool(args.resume),
            workers=args.workers,
            checkpoint_every=args.every,
            max_e=args.max_e,
            timing=args.timing,
            progress=_progress if args.progress else None,
        )
    finally:
        sink.close()
    data = summary.to_dict()
    if args.float:
        for key in ("min", "max"):
            if data[key]:
                data[key]["float"] = float(f"{float(Fraction(data[key]['dens'])):.15g}")
    out = sys.stdout if (args.csv or args.jsonl) else sys.stderr
    if args.json:
        print(json.dumps({"summary": data}, sort_keys=True), file=out)
    else:
        lines = [f"primes in [{args.lo}, {args.hi}]: {summary.count}"]
        if summary.min:
            lines.append(f"min dens({summary.min[0]}) = {_fmt(summary.min[1], args.float)}")
            lines.append(f"max dens({summary.max[0]}) = {_fmt(summary.max[1], args.float)}")
        lines.append(f"e >= 2: {summary.wss_hits or 'none'}")
        if summary.cap_errors:
            lines.append(f"exponent cap reached: {summary.cap_errors}")
        print("\n".join(lines), file=out)
    return EXIT_RESOURCE if summary.cap_errors else EXIT_OK


def cmd_wss(args) -> int:
    hits = _scan.wss_sweep(args.lo, args.hi, workers=args.workers, max_e=args.max_e)
    data = {"range": [args.lo, args.hi], "hits": hits}
    _emit(args, data, " ".join(map(str, hits)) if hits else "none")
    return EXIT_OK


def cmd_square_cal(args) -> int:
    p, lam = require_prime(args.p), args.level
    if p == 2:
        raise InvalidArgumentError("square-cal is for odd primes")
    limit = _density.square_density(p)
    rows, ok, prev = [], True, None
    for ell in range(lam + 1):
        brute = Fraction(len(_tree.squares_brute(p, ell)), p**ell)
        closed = _tree.squares_partial_sum(p, ell)
        good = brute == closed and brute >= limit and (prev is None or brute <= prev)
        ok &= good
        prev = brute
        rows.append({"level": ell, "brute": frac_json(brute, args.float), "series": frac_json(closed, args.float), "ok": good})
    data = {"p": p, "limit": frac_json(limit, args.float), "levels": rows, "ok": ok}
    lines = [f"limit p/(2(p+1)) = {_fmt(limit, args.float)}"]
    for r in rows:
        lines.append(
            f"level {r['level']}: {r['brute']['num']}/{r['brute']['den']}"
            f" series {r['series']['num']}/{r['series']['den']} {'ok' if r['ok'] else 'FAIL'}"
        )
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if ok else EXIT_INTERNAL


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--float", action="store_true", help="add 15-digit decimals")

    parser = _Parser(prog="fibdens", description="Densities of Fibonacci residues in Z_p.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("dens", cmd_dens, "limiting density of one prime")
    sp.add_argument("p", type=int)
    sp.add_argument("--max-e", type=int, default=_density.DEFAULT_MAX_E)

    sp = add("table", cmd_table, "densities of all primes up to a bound")
    sp.add_argument("--upto", type=int, required=True)
    sp.add_argument("--max-e", type=int, default=_density.DEFAULT_MAX_E)

    sp = add("tree", cmd_tree, "attained residues mod p^level")
    sp.add_argument("p", type=int)
    sp.add_argument("--level", type=int, required=True)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--fast", dest="mode", action="store_const", const="fast")
    mode.add_argument("--brute", dest="mode", action="store_const", const="brute")
    out = sp.add_mutually_exclusive_group()
    out.add_argument("--dot", action="store_true", help="Graphviz output")
    out.add_argument("--tree-json", action="store_true", help="tree JSON (same as --json)")
    sp.set_defaults(mode="auto")

    sp = add("verify", cmd_verify, "compare fast and brute attained sets")
    sp.add_argument("p", type=int)
    sp.add_argument("--level", type=int, required=True)

    sp = add("interp", cmd_interp, "p-adic interpolation of F(n) vs exact value")
    sp.add_argument("p", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("--prec", type=int, default=8)

    sp = add("digits", cmd_digits, "p-adic digits of 2 omega(phi)^i / sqrt 5")
    sp.add_argument("p", type=int)
    sp.add_argument("i", type=int)
    sp.add_argument("--depth", type=int, default=8)

    sp = add("scan", cmd_scan, "densities over a prime range, resumable")
    sp.add_argument("lo", type=int)
    sp.add_argument("hi", type=int)
    sp.add_argument("--csv", metavar="FILE")
    sp.add_argument("--jsonl", metavar="FILE")
    sp.add_argument("--checkpoint", metavar="FILE")
    sp.add_argument("--resume", metavar="FILE", help="continue from this checkpoint")
    sp.add_argument("--every", type=int, default=256, help="checkpoint interval in primes")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--max-e", type=int, default=_density.DEFAULT_MAX_E)
    sp.add_argument("--timing", action="store_true", help="fill the ms column")
    sp.add_argument("--progress", action="store_true")

    sp = add("wss", cmd_wss, "search for primes with Wall exponent >= 2")
    sp.add_argument("lo", type=int)
    sp.add_argument("hi", type=int)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--max-e", type=int, default=_density.DEFAULT_MAX_E)

    sp = add("square-cal", cmd_square_cal, "density of squares mod p^level vs closed form")
    sp.add_argument("p", type=int)
    sp.add_argument("--level", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ResourceError, ExponentCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except FibDensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())

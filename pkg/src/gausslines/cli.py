"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 resource cap exceeded, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Callable

from . import construct as cons
from . import crt, pillai
from .errors import CapExceeded, DomainError
from .line import Line, member_index, parse_line, prime_in_divisor_set
from .zi import (
    GaussInt,
    canonical_associate,
    divides,
    format_gauss,
    gcd,
    is_gaussian_prime,
    norm,
    nu,
    parse_gauss,
    primes_over,
)

EXIT_OK, EXIT_DOMAIN, EXIT_CAP, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, which means "cap exceeded" here
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _gauss(text: str) -> GaussInt:
    try:
        return parse_gauss(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _pair(text: str) -> tuple[GaussInt, GaussInt]:
    a, sep, b = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected LEFT:RIGHT, got {text!r}")
    return _gauss(a), _gauss(b)


def _div(text: str) -> tuple[GaussInt, int]:
    a, sep, b = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected MU:B, got {text!r}")
    try:
        return _gauss(a), int(b)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    def dflt(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--format", choices=("text", "machine"), default=dflt("text"))
    p.add_argument("--threads", type=int, default=dflt(1))
    p.add_argument("--scan-cap", type=int, default=dflt(pillai.DEFAULT_SCAN_CAP))
    p.add_argument("--budget", type=int, default=dflt(pillai.DEFAULT_BUDGET))
    p.add_argument("--seed", type=int, default=dflt(0))


def _add_line_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--points", help='two points "z1;z2"')
    g.add_argument("--canon", help='canonical pair "alpha0;delta"')
    g.add_argument("--line", help='"points: z1 ; z2" or "canon: alpha0 ; delta"')


def _line_from(args) -> Line:
    try:
        if args.points is not None:
            return parse_line("points: " + args.points)
        if args.canon is not None:
            return parse_line("canon: " + args.canon)
        return parse_line(args.line)
    except DomainError:
        raise
    except ValueError as e:
        raise UsageError(str(e))


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="gausslines", description=__doc__)
    _add_globals(root, suppress=False)
    sub = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(parent, name, help_text):
        p = parent.add_parser(name, help=help_text)
        _add_globals(p, suppress=True)
        return p

    zi = sub.add_parser("zi", help="Gaussian integer arithmetic")
    zsub = zi.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name in ("norm", "nu", "canon", "prime"):
        leaf(zsub, name, f"{name} of a Gaussian integer").add_argument("z", type=_gauss)
    for name in ("gcd", "divides"):
        p = leaf(zsub, name, f"{name} of two Gaussian integers")
        p.add_argument("z", type=_gauss)
        p.add_argument("w", type=_gauss)
    leaf(zsub, "primes-over", "Gaussian primes over a rational prime").add_argument("p", type=int)

    ln = sub.add_parser("line", help="Gaussian line operations")
    lsub = ln.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(lsub, "info", "canonical form, Delta, primitivity, norm polynomial")
    _add_line_args(p)
    p = leaf(lsub, "divisor-test", "is a Gaussian prime in the divisor set")
    _add_line_args(p)
    p.add_argument("--prime", type=_gauss, required=True)
    p = leaf(lsub, "member", "residue t with beta | alpha_t")
    _add_line_args(p)
    p.add_argument("--beta", type=_gauss, required=True)

    p = leaf(sub, "crt", "CRT in Z[i] (--pair) or along a line (--constraint)")
    p.add_argument("--pair", type=_pair, action="append", default=[], metavar="R:M")
    p.add_argument("--constraint", type=_div, action="append", default=[], metavar="MU:B")
    p.add_argument("--points")
    p.add_argument("--canon")
    p.add_argument("--line")

    p = leaf(sub, "construct", "build primitive lines with prescribed divisibility")
    p.add_argument("--div", type=_div, action="append", default=[], metavar="MU:B")
    p.add_argument("--exclude-inert", type=int, action="append", default=[], metavar="P")
    p.add_argument("--exclude-split", type=_gauss, action="append", default=[], metavar="PI")
    p.add_argument("--request", help="JSON request document (overrides the flags above)")
    p.add_argument("--count", type=int, default=1)

    pl = sub.add_parser("pillai", help="coprimality windows")
    psub = pl.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(psub, "report", "partner structure of one window")
    _add_line_args(p)
    p.add_argument("--k", type=int, required=True, help="window covers alpha_{k+1}..alpha_{k+n}")
    p.add_argument("--n", type=int, required=True)
    for name, text in (("certify", "exhaustive scan of one period"), ("find", "search for a bad window")):
        p = leaf(psub, name, text)
        _add_line_args(p)
        p.add_argument("--n", type=int, required=True)
    p = leaf(psub, "g", "smallest bad window length")
    _add_line_args(p)
    p.add_argument("--n-max", type=int, required=True)
    p = leaf(psub, "explore-g", "best certificate per n in a range")
    _add_line_args(p)
    p.add_argument("--n-lo", type=int, required=True)
    p.add_argument("--n-hi", type=int, required=True)
    p = leaf(psub, "bound", "overcount bound B_t or a table of it")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--t", type=int)
    g.add_argument("--limit", type=int)
    p.add_argument("--table", action="store_true", help="include every B_t in the output")
    return root


# each handler returns (inputs, result payload, text lines)
Handler = Callable[[argparse.Namespace], tuple[dict, Any, list[str]]]


def _zi(args):
    z = args.z if hasattr(args, "z") else None
    if args.cmd == "norm":
        v = norm(z)
        return {"z": str(z)}, v, [f"N({z}) = {v}"]
    if args.cmd == "nu":
        v = nu(z)
        return {"z": str(z)}, v, [f"nu({z}) = {v}"]
    if args.cmd == "canon":
        v = canonical_associate(z)
        return {"z": str(z)}, str(v), [f"canonical associate of {z}: {v}"]
    if args.cmd == "prime":
        v = is_gaussian_prime(z)
        return {"z": str(z)}, v, [f"{z} is {'' if v else 'not '}a Gaussian prime"]
    if args.cmd == "gcd":
        v = gcd(args.z, args.w)
        return {"z": str(args.z), "w": str(args.w)}, str(v), [f"gcd({args.z}, {args.w}) = {v}"]
    if args.cmd == "divides":
        v = divides(args.z, args.w)
        return {"d": str(args.z), "z": str(args.w)}, v, [f"{args.z} {'divides' if v else 'does not divide'} {args.w}"]
    v = [str(pi) for pi in primes_over(args.p)]
    return {"p": args.p}, v, [f"primes over {args.p}: {', '.join(v)}"]


def _line(args):
    line = _line_from(args)
    inputs = {"line": line.spec()}
    if args.cmd == "info":
        poly = line.norm_poly()
        res = {**line.to_dict(), "norm_poly": poly.to_dict(), "discriminant": poly.discriminant}
        text = [
            f"alpha0 = {line.alpha0}",
            f"delta = {line.delta}",
            f"Delta = {line.big_delta}",
            f"primitive = {str(line.primitive).lower()}",
            f"N(alpha_x) = {poly.a2}x^2 + {poly.a1}x + {poly.a0} (discriminant {poly.discriminant})",
        ]
        return inputs, res, text
    if args.cmd == "divisor-test":
        v = prime_in_divisor_set(line, args.prime)
        inputs["prime"] = str(args.prime)
        return inputs, v, [f"{args.prime} {'is' if v else 'is not'} in the divisor set"]
    t = member_index(line, args.beta, args.scan_cap)
    inputs["beta"] = str(args.beta)
    msg = f"{args.beta} divides no point of the line" if t is None else f"{args.beta} | alpha_k iff k = {t} (mod {nu(args.beta)})"
    return inputs, {"index": t, "period": nu(args.beta)}, [msg]


def _crt(args):
    if args.constraint:
        if args.pair:
            raise UsageError("use either --pair or --constraint, not both")
        if sum(x is not None for x in (args.points, args.canon, args.line)) != 1:
            raise UsageError("line CRT needs exactly one of --points/--canon/--line")
        line = _line_from(args)
        system = crt.LineCongruenceSystem(args.constraint)
        t, mod = crt.crt_line(line, system, args.scan_cap)
        inputs = {"line": line.spec(), **system.to_dict()}
        return inputs, {"t": t, "modulus": mod}, [f"t = {t} (mod {mod})"]
    if not args.pair:
        raise UsageError("crt needs --pair or --constraint arguments")
    x, m = crt.crt_zi(args.pair)
    inputs = {"pairs": [[str(r), str(mm)] for r, mm in args.pair]}
    return inputs, {"residue": str(x), "modulus": str(m)}, [f"x = {x} (mod {m})"]


def _construct(args):
    if args.request:
        try:
            with open(args.request) as fh:
                req = cons.ConstructionRequest.from_dict(json.load(fh))
        except DomainError:
            raise
        except (OSError, ValueError, KeyError, TypeError) as e:
            raise UsageError(f"bad request document {args.request!r}: {e}")
    else:
        req = cons.ConstructionRequest(args.div, args.exclude_inert, args.exclude_split, args.seed)
    traces = cons.construct_stream(req, args.count, args.scan_cap)
    text = []
    for tr in traces:
        text.append(f"{tr.line.spec()}  Delta={tr.line.big_delta}  lambda={tr.lam}  M={tr.modulus}  tau={tr.tau}")
    return {"request": req.to_dict(), "count": args.count}, [tr.to_dict() for tr in traces], text


def _cert_text(c: pillai.Certificate) -> str:
    if c.kind == "witness":
        return f"n={c.n}: witness, window alpha_{c.first_index}..alpha_{c.first_index + c.n - 1}"
    if c.kind == "none-in-period":
        return f"n={c.n}: none in period {c.period}"
    return f"n={c.n}: unknown after {c.budget_spent} evaluations (period {c.period})"


def _pillai(args):
    if args.cmd == "bound":
        if args.t is not None:
            v = pillai.bound_B(args.t)
            return {"t": args.t}, v, [f"B_{args.t} = {v}"]
        bt = pillai.bound_table(args.limit)
        text = [
            f"limit = {bt.limit}",
            f"threshold (B_t < t for all t <= threshold) = {bt.threshold}",
            f"first t with B_t > t = {bt.first_exceed}",
            f"B_{bt.limit} = {bt.B(bt.limit)}",
        ]
        if args.table:
            text += ["t,B_t"] + [f"{t},{bt.B(t)}" for t in range(2, bt.limit + 1)]
        return {"limit": args.limit}, bt.to_dict(include_values=args.table), text

    line = _line_from(args)
    inputs: dict = {"line": line.spec()}
    if args.cmd == "report":
        inputs.update(k=args.k, n=args.n)
        rep = pillai.window_report(line, args.k, args.n)
        text = [f"window alpha_{args.k + 1}..alpha_{args.k + args.n}"]
        for j, row in enumerate(rep.partners, 1):
            shared = ", ".join(f"{b}:{pi}" for b, pi in row) or "lonely"
            text.append(f"  {j}: {shared}")
        text.append(f"bad = {str(rep.bad).lower()}")
        return inputs, rep.to_dict(), text
    if args.cmd == "certify":
        inputs["n"] = args.n
        c = pillai.certify_no_bad_window(line, args.n, args.scan_cap, args.threads)
        return inputs, c.to_dict(), [_cert_text(c)]
    if args.cmd == "find":
        inputs["n"] = args.n
        c = pillai.find_bad_window(line, args.n, args.budget, args.threads)
        return inputs, c.to_dict(), [_cert_text(c)]
    if args.cmd == "g":
        inputs["n_max"] = args.n_max
        r = pillai.g_of_line(line, args.n_max, args.budget, args.threads)
        text = [_cert_text(c) for c in r.certificates]
        if r.g is None:
            text.append(f"g > {r.n_max}" if r.status == "lower-bound" else f"g unresolved up to {r.n_max}")
        else:
            text.append(f"g = {r.g} ({r.status}), witness first element {r.witness.first_index}")
        return inputs, r.to_dict(), text
    inputs.update(n_lo=args.n_lo, n_hi=args.n_hi)
    certs = pillai.explore_G(line, args.n_lo, args.n_hi, args.budget, args.threads)
    return inputs, [c.to_dict() for c in certs], [_cert_text(c) for c in certs]


def _dispatch(args) -> tuple[str, dict, Any, list[str]]:
    group = args.group
    if group == "zi":
        return ("zi " + args.cmd, *_zi(args))
    if group == "line":
        return ("line " + args.cmd, *_line(args))
    if group == "crt":
        return ("crt", *_crt(args))
    if group == "construct":
        return ("construct", *_construct(args))
    return ("pillai " + args.cmd, *_pillai(args))


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        start = time.perf_counter()
        command, inputs, result, text = _dispatch(args)
        elapsed = time.perf_counter() - start
    except UsageError as e:
        print(f"usage error: {e}", file=err)
        return EXIT_USAGE
    except DomainError as e:
        print(f"domain error: {e}", file=err)
        return EXIT_DOMAIN
    except CapExceeded as e:
        print(f"cap exceeded: {e}", file=err)
        return EXIT_CAP
    if args.format == "machine":
        envelope = {
            "command": command,
            "inputs": inputs,
            "result": result,
            "caps": {"scan_cap": args.scan_cap, "budget": args.budget, "threads": args.threads, "seed": args.seed},
            "elapsed": round(elapsed, 6),
        }
        print(json.dumps(envelope, sort_keys=True), file=out)
    else:
        for line in text:
            print(line, file=out)
    return EXIT_OK


def parse_output(text: str) -> dict:
    """Inverse of machine-format printing."""
    return json.loads(text)


def main() -> None:
    sys.exit(run())

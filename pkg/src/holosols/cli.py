"""Command dispatcher and renderers for the holosols command line tool.

Every subcommand reads a problem file, runs one computation, and prints
either a plain text report or a JSON document conforming to the shipped
schema (docs/result.schema.json, schema_version 1).  Output is
deterministic for fixed inputs and flags; rational numbers are always
rendered exactly as p/q, never as decimals.

Exit codes: 0 success, 2 parse error (files, expressions, or command
line), 3 non-holonomic input, 4 degree cap or time limit exceeded,
5 missing required presentation.
"""

import argparse
import hashlib
import json
import os
import signal
import sys
import time

from .bfunctions import global_bfunction, weight_bfunction
from .errors import (DegreeCapError, HoloError, MissingPresentationError,
                     NotHolonomicError, ParseError)
from .groebner import holonomic_rank
from .homology import (brute_force_solutions, d_ext, holonomic_dual,
                       poly_ext, ratl_ext)
from .parser import (parse_operator, parse_problem_file, render_element,
                     render_poly)
from .polys import factor_linear
from .polysols import polynomial_solutions
from .ratsols import rational_solutions, singular_locus


class _TimeLimit(Exception):
    pass


_VALUE_FLAGS = ("--weight", "--factors", "--f", "--with", "--dim",
                "--degree-cap", "--time-limit")


def _merge_flag_values(argv):
    """Join '--flag value' into '--flag=value' so values that start with a
    minus sign (negative weights, expressions) survive argparse."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def _build_argparser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", metavar="FILE")
    common.add_argument("--json", action="store_true")
    common.add_argument("--degree-cap", type=int, metavar="K")
    common.add_argument("--time-limit", type=float, metavar="SECONDS")

    ap = argparse.ArgumentParser(
        prog="holosols",
        description="Exact solution spaces and Ext tables of holonomic "
                    "systems.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polysols", parents=[common])
    p.add_argument("--weight", metavar="w1,...,wn")
    p = sub.add_parser("ratsols", parents=[common])
    p.add_argument("--factors", metavar="f1;f2;...")
    p = sub.add_parser("bfun", parents=[common])
    p.add_argument("--weight", metavar="w1,...,wn", required=True)
    p = sub.add_parser("globalb", parents=[common])
    p.add_argument("--f", metavar="EXPR", required=True)
    sub.add_parser("singlocus", parents=[common])
    sub.add_parser("rank", parents=[common])
    sub.add_parser("dual", parents=[common])
    p = sub.add_parser("polyext", parents=[common])
    p.add_argument("--weight", metavar="w1,...,wn")
    p = sub.add_parser("dext", parents=[common])
    p.add_argument("--with", dest="with_file", metavar="NFILE")
    p.add_argument("--weight", metavar="w1,...,wn")
    p = sub.add_parser("ratlext", parents=[common])
    p.add_argument("--f", metavar="EXPR", required=True)
    p.add_argument("--with", dest="with_file", metavar="NFILE")
    p.add_argument("--weight", metavar="w1,...,wn")
    p = sub.add_parser("solve-in", parents=[common])
    p.add_argument("--with", dest="with_file", metavar="NFILE")
    p.add_argument("--dim", type=int, required=True)
    return ap


def _load_file(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as ex:
        raise ParseError(f"cannot read {path}: {ex.strerror}")
    pf = parse_problem_file(raw.decode("utf-8"))
    digest = hashlib.sha256(raw).hexdigest()
    return pf, {"path": path, "sha256": digest}


def _parse_weight(text, ring, positive=None):
    parts = text.replace("−", "-").split(",")
    try:
        w = tuple(int(p.strip()) for p in parts)
    except ValueError:
        raise ParseError(f"weight {text!r} is not a comma-separated "
                         "integer list")
    if len(w) != ring.nx:
        raise ParseError(f"weight has {len(w)} entries for {ring.nx} "
                         "variables")
    if positive is True and not all(wi > 0 for wi in w):
        raise ParseError("integration weight must be strictly positive")
    if positive is False and not all(wi < 0 for wi in w):
        raise ParseError("solution weight must be strictly negative")
    return w


def _parse_poly_arg(text, ring, what):
    el = parse_operator(text.replace("−", "-"), ring)
    nx, nd = ring.nx, ring.nd
    if any(any(e[nx:nx + nd]) for e in el.terms):
        raise ParseError(f"{what} must be a polynomial in "
                         f"{', '.join(ring.xnames)}")
    from .polys import CommPoly
    return CommPoly(nx, {e[:nx]: c for e, c in el.terms.items()})


def _require_with(args):
    if not args.with_file:
        raise MissingPresentationError(
            f"{args.command} needs a coefficient presentation: --with NFILE")
    pf, digest = _load_file(args.with_file)
    return pf, digest


def _same_ring(a, b):
    if a != b:
        raise ParseError("both files must declare the same ring")


# JSON payload helpers; every rational becomes the exact string p/q

def _frac(c):
    return str(c.numerator) if c.denominator == 1 else \
        f"{c.numerator}/{c.denominator}"


def _op_payload(el):
    from .polys import _drl_key
    items = sorted(el.terms.items(), key=lambda t: _drl_key(t[0]),
                   reverse=True)
    return {"string": render_element(el),
            "terms": [{"coefficient": _frac(c), "exponents": list(e)}
                      for e, c in items]}


def _poly_payload(p, names):
    return {"string": render_poly(p, names),
            "terms": [{"coefficient": _frac(c), "exponents": list(e)}
                      for e, c in p.sort_terms()]}


def _bfun_payload(res):
    return {"string": res.b.render(),
            "coefficients": [_frac(c) for c in res.b.coeffs],
            "integer_roots": list(res.integer_roots)}


def _table_payload(table):
    return {str(i): table.dims[i] for i in sorted(table.dims)}


def _wrap(s, multi):
    return f"({s})" if multi else s


def _ratsol_strings(sol, names):
    num = render_poly(sol.numerator, names)
    dens = [(f, e) for f, e in sol.exponents.items() if e > 0]
    if not dens:
        return num
    parts = []
    for f, e in dens:
        fs = _wrap(render_poly(f, names), len(f.terms) > 1)
        parts.append(fs if e == 1 else f"{fs}^{e}")
    den = "*".join(parts)
    if len(parts) > 1:
        den = f"({den})"
    return f"{_wrap(num, len(sol.numerator.terms) > 1)}/{den}"


# subcommand bodies: each returns (result payload, text lines)

def _cmd_polysols(args, pf):
    ring = pf.ring
    w = _parse_weight(args.weight, ring, positive=False) if args.weight \
        else (-1,) * ring.nx
    pres = pf.ideal_presentation()
    bres = weight_bfunction(pres, w)
    basis = polynomial_solutions(pres, w, check=False)
    sols = [_poly_payload(p, ring.xnames) for p in basis]
    payload = {"weight": list(w), "bfunction": _bfun_payload(bres),
               "dimension": len(basis), "solutions": sols}
    lines = [f"weight: {', '.join(str(wi) for wi in w)}",
             f"b-function: {bres.b.render()}",
             f"integer roots: {', '.join(str(r) for r in bres.integer_roots)}",
             f"dimension: {len(basis)}"]
    for i, s in enumerate(sols, 1):
        lines.append(f"solution {i}: {s['string']}")
    return payload, lines


def _cmd_ratsols(args, pf):
    ring = pf.ring
    factors = None
    if args.factors:
        factors = [_parse_poly_arg(part, ring, "factor")
                   for part in args.factors.split(";") if part.strip()]
    sols = rational_solutions(pf.ideal_presentation(), factors=factors)
    used = factors
    if used is None:
        sing = singular_locus(pf.ideal_presentation())
        found, _ = factor_linear(sing)
        used = [f for f, _ in found]
    strs = [_ratsol_strings(s, ring.xnames) for s in sols]
    payload = {"factors": [_poly_payload(f, ring.xnames)["string"]
                           for f in used],
               "count": len(sols),
               "solutions": [
                   {"string": strs[i],
                    "numerator": _poly_payload(s.numerator, ring.xnames),
                    "denominator": [
                        {"factor": _poly_payload(f, ring.xnames)["string"],
                         "power": e}
                        for f, e in s.exponents.items() if e > 0]}
                   for i, s in enumerate(sols)]}
    lines = [f"factors: {'; '.join(payload['factors'])}",
             f"count: {len(sols)}"]
    for i, s in enumerate(strs, 1):
        lines.append(f"solution {i}: {s}")
    return payload, lines


def _cmd_bfun(args, pf):
    w = _parse_weight(args.weight, pf.ring)
    res = weight_bfunction(pf.ideal_presentation(), w)
    payload = {"weight": list(w), "bfunction": _bfun_payload(res)}
    lines = [f"weight: {', '.join(str(wi) for wi in w)}",
             f"b-function: {res.b.render()}",
             f"integer roots: {', '.join(str(r) for r in res.integer_roots)}"]
    return payload, lines


def _cmd_globalb(args, pf):
    f = _parse_poly_arg(args.f, pf.ring, "--f")
    res = global_bfunction(pf.ideal_presentation(), f)
    payload = {"f": render_poly(f, pf.ring.xnames),
               "bfunction": _bfun_payload(res)}
    lines = [f"f: {payload['f']}",
             f"b-function: {res.b.render()}",
             f"integer roots: {', '.join(str(r) for r in res.integer_roots)}"]
    return payload, lines


def _cmd_singlocus(args, pf):
    sing = singular_locus(pf.ideal_presentation())
    found, residual = factor_linear(sing)
    split = residual.is_constant()
    names = pf.ring.xnames
    payload = {"polynomial": _poly_payload(sing, names),
               "factors": [render_poly(f, names) for f, _ in found]
               if split else None}
    lines = [f"singular locus: {payload['polynomial']['string']}"]
    if split:
        lines.append(f"factors: {'; '.join(payload['factors'])}")
    else:
        lines.append("factors: not fully split over Q")
    return payload, lines


def _cmd_rank(args, pf):
    r = holonomic_rank(pf.ideal_presentation())
    if r is None:
        raise NotHolonomicError("input not holonomic")
    return {"rank": r}, [f"rank: {r}"]


def _cmd_dual(args, pf):
    dual = holonomic_dual(pf.ideal_presentation())
    rows = [[_op_payload(row.component(j)) for j in range(dual.rank)]
            for row in dual.rows]
    payload = {"rank": dual.rank,
               "relations": rows}
    lines = [f"rank: {dual.rank}"]
    for i, row in enumerate(rows, 1):
        if dual.rank == 1:
            lines.append(f"relation {i}: {row[0]['string']}")
        else:
            lines.append(f"relation {i}: [{', '.join(c['string'] for c in row)}]")
    return payload, lines


def _ext_output(table, label):
    payload = {"table": _table_payload(table), "euler": table.euler(),
               "bfunction": _bfun_payload(table.bfunction)
               if table.bfunction else None}
    lines = [f"ext {i}: {table.dims[i]}" for i in sorted(table.dims)]
    lines.append(f"euler: {table.euler()}")
    if table.bfunction is not None:
        lines.append(f"{label}: {table.bfunction.b.render()}")
    return payload, lines


def _cmd_polyext(args, pf):
    ring = pf.ring
    w = _parse_weight(args.weight, ring, positive=True) if args.weight \
        else (1,) * ring.nx
    table = poly_ext(pf.ideal_presentation(), w)
    payload, lines = _ext_output(table, "integration b-function")
    payload["weight"] = list(w)
    return payload, lines


def _cmd_dext(args, pf):
    nf, digest = _require_with(args)
    _same_ring(pf.ring, nf.ring)
    ring = pf.ring
    w = _parse_weight(args.weight, ring, positive=True) if args.weight \
        else (1,) * ring.nx
    table = d_ext(pf.ideal_presentation(), nf.presentation(), w)
    payload, lines = _ext_output(table, "restriction b-function")
    payload["weight"] = list(w)
    return payload, lines, digest


def _cmd_ratlext(args, pf):
    nf, digest = _require_with(args)
    _same_ring(pf.ring, nf.ring)
    ring = pf.ring
    f = _parse_poly_arg(args.f, ring, "--f")
    w = _parse_weight(args.weight, ring, positive=True) if args.weight \
        else (1,) * ring.nx
    table = ratl_ext(pf.ideal_presentation(), f, localized=nf.presentation(),
                     w=w)
    payload, lines = _ext_output(table, "restriction b-function")
    payload["weight"] = list(w)
    payload["f"] = render_poly(f, ring.xnames)
    lines.insert(0, f"f: {payload['f']}")
    return payload, lines, digest


def _cmd_solve_in(args, pf):
    nf, digest = _require_with(args)
    _same_ring(pf.ring, nf.ring)
    if args.dim < 0:
        raise ParseError("--dim must be nonnegative")
    sols = brute_force_solutions(pf.ideal_presentation(), nf.presentation(),
                                 args.dim)
    payload = {"dimension": args.dim,
               "solutions": [_op_payload(s) for s in sols]}
    lines = [f"dimension: {args.dim}"]
    for i, s in enumerate(payload["solutions"], 1):
        lines.append(f"solution {i}: {s['string']}")
    return payload, lines


_HANDLERS = {
    "polysols": _cmd_polysols,
    "ratsols": _cmd_ratsols,
    "bfun": _cmd_bfun,
    "globalb": _cmd_globalb,
    "singlocus": _cmd_singlocus,
    "rank": _cmd_rank,
    "dual": _cmd_dual,
    "polyext": _cmd_polyext,
    "dext": _cmd_dext,
    "ratlext": _cmd_ratlext,
    "solve-in": _cmd_solve_in,
}


def _flags_payload(args):
    return {
        "weight": getattr(args, "weight", None),
        "factors": getattr(args, "factors", None),
        "f": getattr(args, "f", None),
        "with": getattr(args, "with_file", None),
        "dim": getattr(args, "dim", None),
        "degree_cap": args.degree_cap,
        "time_limit": args.time_limit,
    }


def run_command(argv, out=None):
    """Run one subcommand; returns (exit code, result document or None)."""
    out = out if out is not None else sys.stdout
    try:
        args = _build_argparser().parse_args(_merge_flag_values(list(argv)))
    except SystemExit as ex:
        return (int(ex.code) if ex.code else 0), None

    old_cap = os.environ.get("HOLO_DEGREE_CAP")
    old_handler = None
    started = time.monotonic()
    try:
        if args.degree_cap is not None:
            if args.degree_cap <= 0:
                raise ParseError("--degree-cap must be positive")
            os.environ["HOLO_DEGREE_CAP"] = str(args.degree_cap)
        if args.time_limit is not None:
            def _on_alarm(signum, frame):
                raise _TimeLimit()
            old_handler = signal.signal(signal.SIGALRM, _on_alarm)
            signal.setitimer(signal.ITIMER_REAL, args.time_limit)

        pf, digest = _load_file(args.file)
        result = _HANDLERS[args.command](args, pf)
        inputs = [digest]
        if len(result) == 3:
            payload, lines, with_digest = result
            inputs.append(with_digest)
        else:
            payload, lines = result
    except ParseError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2, None
    except NotHolonomicError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 3, None
    except (DegreeCapError, _TimeLimit) as ex:
        msg = str(ex) or "time limit exceeded"
        print(f"error: {msg}", file=sys.stderr)
        return 4, None
    except MissingPresentationError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 5, None
    finally:
        if args.time_limit is not None and old_handler is not None:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old_handler)
        if args.degree_cap is not None:
            if old_cap is None:
                os.environ.pop("HOLO_DEGREE_CAP", None)
            else:
                os.environ["HOLO_DEGREE_CAP"] = old_cap

    doc = {
        "schema_version": 1,
        "command": args.command,
        "inputs": inputs,
        "flags": _flags_payload(args),
        "result": payload,
        "timing_ms": int(1000 * (time.monotonic() - started))
        if args.time_limit is not None else None,
    }
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True), file=out)
    else:
        for line in lines:
            print(line, file=out)
    return 0, doc


def main(argv=None):
    code, _ = run_command(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())

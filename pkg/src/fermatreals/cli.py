"""Command-line front end.

Exit codes: 0 success, 1 domain errors, 2 parse errors (including argparse
usage errors).  ``--json`` switches every command to structured output.
Backend selection: ``--backend exact|float --precision N``, the
FERMAT_BACKEND environment variable, or a ``key=value`` config file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .core import FermatReal, Ordering, format_fermat
from .dsl import parse, parse_polynomial, parse_value
from .errors import FermatError, ParseError
from .extension import fermat_extend
from .oracles import oracle_from_descriptor
from .scalars import field_by_name, set_precision
from .solver import (
    ivp_solve,
    slice_image_contains,
    solution_family,
    solve_slice,
    split_domain,
    extrema_on_interval,
)
from .topology import (
    cauchy_check_prefix,
    d_omega,
    euclid_norm_sq,
    make_counterexample,
    omega_limit_decompose,
    order_limit_decompose,
)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="fermatreals",
        description="Exact arithmetic, solving and topology demos for Fermat reals.",
    )
    top.add_argument("--version", action="version", version=__version__)
    top.add_argument("--json", action="store_true", help="emit JSON output")
    top.add_argument("--backend", choices=["exact", "float"], default=None)
    top.add_argument("--precision", type=int, default=None,
                     help="decimal digits for the float backend")
    top.add_argument("--config", default=None, help="key=value config file")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an expression to canonical form")
    p.add_argument("expr")

    p = sub.add_parser("decompose", help="canonical parts of a value")
    p.add_argument("expr")

    p = sub.add_parser("compare", help="dictionary-order comparison")
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("omega", help="order of the infinitesimal part")
    p.add_argument("expr")

    p = sub.add_parser("extend", help="apply a smooth function to a value")
    p.add_argument("--f", required=True, help="oracle descriptor")
    p.add_argument("expr")

    for name in ("solve", "member", "family"):
        p = sub.add_parser(name)
        p.add_argument("--f", required=True, help="oracle descriptor")
        p.add_argument("--at", required=True, help="real slice point (rational)")
        p.add_argument("--rhs", required=True, help="target value expression")
        if name == "solve":
            p.add_argument("--neg-branch", action="store_true",
                           help="other fundamental solution (even case)")

    p = sub.add_parser("ivp-split", help="split a domain for the IVP criterion")
    p.add_argument("--h", required=True, help="polynomial in parameters and one variable")
    p.add_argument("--v", required=True, help="comma-separated parameter values")
    p.add_argument("--interval", default=None, help="lo,hi (defaults to all reals)")

    p = sub.add_parser("ivp-solve", help="intermediate-value solve on [a, b]")
    p.add_argument("--f", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--rhs", required=True)

    p = sub.add_parser("extrema", help="min/max of an extension on [a, b]")
    p.add_argument("--f", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = sub.add_parser("demo", help="counterexample sequence lab")
    p.add_argument("name")
    p.add_argument("--n", type=int, default=6)

    return top


def _load_config(args) -> tuple:
    backend = args.backend
    precision = args.precision
    if args.config:
        with open(args.config) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#") or "=" not in line:
                    continue
                key, _, value = line.partition("=")
                key, value = key.strip(), value.strip()
                if key == "backend" and backend is None:
                    backend = value
                elif key == "precision" and precision is None:
                    precision = int(value)
    if backend is None:
        backend = os.environ.get("FERMAT_BACKEND", "exact")
    if precision is not None:
        set_precision(precision)
    return field_by_name(backend)


def _fmt_endpoint(x) -> str:
    if x is None:
        return "inf"
    if isinstance(x, Fraction):
        return str(x)
    return repr(x)


def _fmt_interval(iv) -> str:
    lo, hi = iv
    lo_s = "-inf" if lo is None else _fmt_endpoint(lo)
    hi_s = _fmt_endpoint(hi)
    return f"({lo_s}, {hi_s})"


_PARSER_CACHE = None


def main(argv=None) -> int:
    global _PARSER_CACHE
    if _PARSER_CACHE is None:
        _PARSER_CACHE = _build_parser()
    try:
        args = _PARSER_CACHE.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors map to parse errors
        return int(exc.code or 0)
    try:
        field = _load_config(args)
        out = _dispatch(args, field)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except FermatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, NotImplementedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if out is not None:
        print(out)
    return 0


def _dispatch(args, field):
    emit_json = args.json
    cmd = args.command

    if cmd == "eval":
        value = parse_value(args.expr, field)
        return json.dumps(value.json_obj()) if emit_json else format_fermat(value)

    if cmd == "decompose":
        value = parse_value(args.expr, field)
        if emit_json:
            obj = value.json_obj()
            obj["omega"] = str(value.order_omega())
            obj["nilpotency"] = value.nilpotency_index()
            return json.dumps(obj)
        lines = [f"std: {value.field.format(value.std)}"]
        for e, c in value.terms:
            lines.append(f"term: {value.field.format(c)} * t^({e})")
        lines.append(f"omega: {value.order_omega()}")
        lines.append(f"nilpotency: {value.nilpotency_index()}")
        return "\n".join(lines)

    if cmd == "compare":
        left = parse_value(args.left, field)
        right = parse_value(args.right, field)
        verdict = left.compare(right)
        symbol = {Ordering.LESS: "<", Ordering.EQUAL: "=", Ordering.GREATER: ">"}[verdict]
        return json.dumps({"compare": symbol}) if emit_json else symbol

    if cmd == "omega":
        value = parse_value(args.expr, field)
        w = value.order_omega()
        return json.dumps({"omega": str(w)}) if emit_json else str(w)

    if cmd == "extend":
        oracle = oracle_from_descriptor(args.f)
        value = fermat_extend(oracle, parse_value(args.expr, field))
        return json.dumps(value.json_obj()) if emit_json else format_fermat(value)

    if cmd in ("solve", "member", "family"):
        oracle = oracle_from_descriptor(args.f)
        at = field.convert(Fraction(args.at))
        rhs = parse_value(args.rhs, field)
        if cmd == "member":
            ok = slice_image_contains(oracle, at, rhs)
            return json.dumps({"member": ok}) if emit_json else str(ok).lower()
        if cmd == "solve":
            sol = solve_slice(oracle, at, rhs, negative_branch=args.neg_branch)
            return json.dumps(sol.json_obj()) if emit_json else format_fermat(sol)
        fam = solution_family(oracle, at, rhs)
        if emit_json:
            return json.dumps(
                {"fundamental": fam.fundamental.json_obj(), "threshold": str(fam.threshold)}
            )
        return f"{format_fermat(fam.fundamental)}\nthreshold: {fam.threshold}"

    if cmd == "ivp-split":
        h = parse_polynomial(args.h)
        params = [parse_value(piece, field) for piece in args.v.split(",")]
        interval = (None, None)
        if args.interval:
            lo_s, _, hi_s = args.interval.partition(",")
            interval = (
                None if lo_s.strip() in ("", "-inf") else Fraction(lo_s),
                None if hi_s.strip() in ("", "inf") else Fraction(hi_s),
            )
        result = split_domain(h, params, interval)
        if emit_json:
            return json.dumps(
                {
                    "split_points": [_fmt_endpoint(s) for s in result.split_points],
                    "intervals": [
                        [_fmt_endpoint(iv[0]) if iv[0] is not None else "-inf",
                         _fmt_endpoint(iv[1]) if iv[1] is not None else "inf"]
                        for iv in result.intervals
                    ],
                }
            )
        return ", ".join(_fmt_interval(iv) for iv in result.intervals)

    if cmd == "ivp-solve":
        oracle = oracle_from_descriptor(args.f)
        a = parse_value(args.a, field)
        b = parse_value(args.b, field)
        rhs = parse_value(args.rhs, field)
        c = ivp_solve(oracle, a, b, rhs)
        return json.dumps(c.json_obj()) if emit_json else format_fermat(c)

    if cmd == "extrema":
        oracle = oracle_from_descriptor(args.f)
        a = parse_value(args.a, field)
        b = parse_value(args.b, field)
        res = extrema_on_interval(oracle, a, b)
        if emit_json:
            return json.dumps(
                {
                    "min": res.minimum.json_obj(),
                    "max": res.maximum.json_obj(),
                    "argmin": str(res.argmin),
                    "argmax": str(res.argmax),
                }
            )
        return (
            f"min: {format_fermat(res.minimum)} at {res.argmin}\n"
            f"max: {format_fermat(res.maximum)} at {res.argmax}"
        )

    if cmd == "demo":
        return _demo(args.name, args.n, emit_json)

    raise FermatError(f"unknown command {cmd!r}")


def _demo(name: str, n: int, emit_json: bool):
    kwargs = {}
    if name == "lebesgue_partial_integrals":
        kwargs["deltas"] = [
            FermatReal.t_power(Fraction(1, i), 1) for i in range(1, n + 1)
        ]
    elif name in ("euclid_cauchy_divergent",):
        kwargs["m"] = n
    else:
        kwargs["n"] = n
    prefix = make_counterexample(name, **kwargs)
    values = prefix.values
    omega_v = omega_limit_decompose(prefix)
    order_v = order_limit_decompose(prefix)

    if emit_json:
        return json.dumps(
            {
                "name": prefix.name,
                "values": [v.json_obj() for v in values],
                "omega_characterized": omega_v.characterized,
                "order_characterized": order_v.characterized,
            }
        )
    lines = [f"{prefix.name} (n = {len(values)})"]
    for k, v in enumerate(values, start=1):
        lines.append(f"  a_{k} = {format_fermat(v)}")
    lines.append("  pairwise metrics (last vs earlier):")
    last = values[-1]
    for k, v in enumerate(values[:-1], start=1):
        lines.append(
            f"    d_omega(a_{len(values)}, a_{k}) = {d_omega(last, v)}"
            f"   |a_{len(values)} - a_{k}|^2_euclid = {euclid_norm_sq(last - v)}"
        )
    lines.append(f"  omega-tail characterized: {omega_v.characterized}")
    lines.append(f"  order-tail characterized: {order_v.characterized}")
    return "\n".join(lines)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

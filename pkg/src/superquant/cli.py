"""Command-line driver: ``gamma-table``, ``verify`` and ``roundtrip``.

Exit codes: 0 pass, 1 identity failure, 2 resonance or shape failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from .equivariant import (
    ResonantDelta,
    first_resonant_pivot,
    gamma_table,
    invert_gamma,
    quantize,
    solve_varpi,
    symbol_map,
    table_to_json,
)
from .nary import operator_to_json, random_operator
from .supermath import format_rational, rational
from .verify import WeightSystem, default_sweep, first_difference, parse_lambdas, run_suites

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION = 0, 1, 2


class UsageError(ValueError):
    pass


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SUPERQUANT_SEED")
    if env is None:
        return 0
    try:
        value = int(env)
    except ValueError:
        raise UsageError(f"SUPERQUANT_SEED must be a nonnegative integer, got {env!r}") from None
    if value < 0:
        raise UsageError("SUPERQUANT_SEED must be nonnegative")
    return value


def _weights(args) -> WeightSystem:
    if args.n is None or args.n < 1:
        raise UsageError("-n must be a positive integer")
    if args.order2 is None or args.order2 < 0:
        raise UsageError("--order2 must be a nonnegative integer")
    if args.lambdas is None or args.mu is None:
        raise UsageError("--lambdas and --mu are required")
    try:
        lambdas = parse_lambdas(args.lambdas)
        mu = rational(args.mu)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational: {exc}") from None
    if len(lambdas) != args.n:
        raise UsageError(f"expected {args.n} lambdas, got {len(lambdas)}")
    return WeightSystem(lambdas, mu, args.order2)


def _emit(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(data: dict) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _header_lines(ws: WeightSystem) -> list[str]:
    h = ws.header()
    return [
        f"n = {h['n']}, order2 = {h['order2']}",
        f"lambdas = {', '.join(h['lambdas'])}; mu = {h['mu']}; delta = {h['delta']}",
    ]


# -- commands -------------------------------------------------------------------------

def cmd_gamma_table(args) -> int:
    ws = _weights(args)
    hit = first_resonant_pivot(ws.delta, ws.order2)
    if hit is not None and not args.allow_partial:
        print(str(ResonantDelta(ws.delta, *hit)), file=sys.stderr)
        return EXIT_PRECONDITION
    if hit is not None or args.method == "recursion":
        table = solve_varpi(ws.lambdas, ws.delta, ws.order2, partial=args.allow_partial)
    else:
        table = gamma_table(ws.lambdas, ws.mu, ws.order2)
    data = table_to_json(table)
    if hit is not None:
        data["partial"] = True
        data["resonant_pivot"] = {"ell": hit[0], "p": hit[1]}
    if args.format == "json":
        text = _dump(data)
    else:
        lines = [f"{table.kind} table"] + _header_lines(ws)
        if hit is not None:
            lines.append(f"partial: pivot vanishes at (ell, p) = {hit}")
        lines += [f"s={tuple(e['s'])} i={tuple(e['i'])} {e['value']}" for e in data["entries"]]
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = _seed(args)
    if args.n is None:
        systems = default_sweep(seed)
    else:
        systems = [_weights(args)]
    blocks = run_suites(systems, seed, inject_sign_flip=args.inject_sign_flip)
    ok = all(b["ok"] for b in blocks)
    report = {"command": "verify", "seed": seed, "inject_sign_flip": args.inject_sign_flip,
              "ok": ok, "blocks": blocks}
    if args.format == "json":
        text = _dump(report)
    else:
        lines = [f"verify seed={seed}" + (" (sign flip injected)" if args.inject_sign_flip else "")]
        for block in blocks:
            w = block["weights"]
            lines.append(f"[n={w['n']} order2={w['order2']} lambdas={','.join(w['lambdas'])} "
                         f"mu={w['mu']} delta={w['delta']}]")
            for r in block["results"]:
                line = f"  {r['name']}: {r['status']} ({r['cases']} cases)"
                if r.get("detail"):
                    line += f" {r['detail']}"
                lines.append(line)
                if "counterexample" in r:
                    lines.append("    counterexample: " + json.dumps(r["counterexample"], ensure_ascii=False))
        lines.append("PASS" if ok else "FAIL")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_roundtrip(args) -> int:
    ws = _weights(args)
    seed = _seed(args)
    try:
        gamma_t = gamma_table(ws.lambdas, ws.mu, ws.order2)
        beta_t = invert_gamma(gamma_t)
    except ResonantDelta as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PRECONDITION
    rng = random.Random(seed)
    A = random_operator(rng, ws.n, ws.order2, ws.lambdas, ws.mu)
    back = quantize(symbol_map(A, gamma_t), beta_t)
    ok = back == A
    report = {"command": "roundtrip", "seed": seed, "weights": ws.header(), "ok": ok,
              "operator": operator_to_json(A)}
    if not ok:
        report["difference"] = first_difference(A, back)
    if args.format == "json":
        text = _dump(report)
    else:
        lines = [f"roundtrip seed={seed}"] + _header_lines(ws)
        lines.append("PASS" if ok else f"FAIL {report['difference']}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superquant",
                                     description="Exact osp(1|2)-equivariant symbol calculus on S^{1|1}.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, weights_required: bool):
        p.add_argument("-n", type=int, required=weights_required, help="number of arguments")
        p.add_argument("--order2", type=int, required=weights_required, help="twice the order, 2k")
        p.add_argument("--lambdas", required=weights_required, help="comma-separated rationals")
        p.add_argument("--mu", required=weights_required, help="target weight (rational)")
        p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "text"), default="json")

    g = sub.add_parser("gamma-table", help="materialize the normalized coefficient table")
    common(g, True)
    g.add_argument("--method", choices=("closed", "recursion"), default="closed")
    g.add_argument("--allow-partial", action="store_true",
                   help="on a resonant shift, emit the entries that are still determined")
    g.set_defaults(func=cmd_gamma_table)

    v = sub.add_parser("verify", help="run the identity suites")
    common(v, False)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--inject-sign-flip", action="store_true",
                   help="negate off-diagonal table entries (negative control)")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("roundtrip", help="check quantize(symbol_map(A)) == A on a random operator")
    common(r, True)
    r.add_argument("--seed", type=int, default=None)
    r.set_defaults(func=cmd_roundtrip)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is not None and args.seed < 0:
        parser.error("--seed must be nonnegative")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ResonantDelta as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())

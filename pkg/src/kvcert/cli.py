"""Command-line front end.

Exit codes: 0 success (for ``check``, a counterexample), 3 hypotheses
evaluated and not satisfied, 2 usage or input error, 1 internal failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Any, Sequence

from . import __version__
from .carlitz import BudgetExceeded, beta, beta_mod, gamma, gamma_mod, i_of
from .fields import FieldError, FieldSpec, field_of_order, prime_power
from .lfunc import LContext, TrivialCharacterError
from .polyring import Poly, PolyParseError, ResidueCtx, format_poly, is_irreducible, parse_fp_poly, parse_poly
from .search import (
    SearchConfig,
    census,
    header_record,
    hunt,
    run_table1,
    table1_config,
    table_row_record,
    write_jsonl,
)
from .vandiver import Certificate, HypothesisError, check_kv, verify_report
from .witt import WittElem, norm_to_witt

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_HYPOTHESES = 0, 1, 2, 3


@dataclass
class CommandOutcome:
    code: int
    text: str
    payload: Any = None


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- argument helpers --------------------------------------------------------------

def _field(args) -> FieldSpec:
    p, _ = prime_power(args.q)
    g = parse_fp_poly(args.modulus, p) if args.modulus else None
    return field_of_order(args.q, g)


def _prime(text: str, field: FieldSpec, what: str = "P") -> Poly:
    P = parse_poly(text, field)
    if P.degree < 1 or not P.is_monic():
        raise UsageError(f"{what} must be monic of positive degree")
    if not is_irreducible(P):
        raise UsageError(f"{what} = {format_poly(P)} is not irreducible")
    return P


def _degrees(text: str) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad degree list {text!r}") from None
    if not out or min(out) < 1:
        raise UsageError("degrees must be positive integers")
    return out


def _field_line(field: FieldSpec) -> str:
    if field.s == 1:
        return f"F_{field.q}"
    return f"F_{field.q} = F_{field.p}[a]/({field.modulus_text()})"


# -- element reports ----------------------------------------------------------------

def p_valuation(x: WittElem) -> int | None:
    """Largest e <= k with p^e | x, or None when x vanishes at this precision."""
    if x.is_zero():
        return None
    e = 0
    while e < x.ctx.k and x.divisible_by_p_power(e + 1):
        e += 1
    return e


def _witt_payload(x: WittElem) -> dict:
    v = p_valuation(x)
    return {
        "modulus": x.ctx.pk,
        "coeffs": x.coeffs.tolist(),
        "zero": v is None,
        "p_valuation": v,
        "reduction": format_poly(x.reduce_mod_p()),
    }


def _witt_text(label: str, x: WittElem) -> list[str]:
    info = _witt_payload(x)
    v = info["p_valuation"]
    val = f">= {x.ctx.k} (zero mod {x.ctx.pk})" if v is None else str(v)
    return [
        f"{label} mod {x.ctx.pk}: {info['coeffs']}",
        f"  reduction mod p: {info['reduction']}",
        f"  p-adic valuation: {val}",
    ]


# -- subcommands ----------------------------------------------------------------------

def cmd_field(args) -> CommandOutcome:
    field = _field(args)
    elements = [field.format_index(i) for i in range(field.q)]
    payload = {
        "q": field.q,
        "p": field.p,
        "s": field.s,
        "field_modulus": field.modulus_text(),
        "elements": elements,
        "trace": [int(t) for t in field.trace_table],
    }
    lines = [_field_line(field), f"p = {field.p}, s = {field.s}"]
    if field.q <= 64:
        lines.append("element  trace")
        lines += [f"{e:>7}  {t}" for e, t in zip(elements, payload["trace"])]
    return CommandOutcome(EXIT_OK, "\n".join(lines), payload)


def _sum_cmd(args, weighted: bool) -> CommandOutcome:
    field = _field(args)
    name = "gamma" if weighted else "beta"
    n = args.n
    if n < 1:
        raise UsageError("n must be >= 1")
    if not weighted and n % (field.q - 1) == 0:
        raise UsageError(f"n divisible by q-1 (n = {n}, q-1 = {field.q - 1}): beta(n) is undefined")
    payload: dict = {"q": field.q, "field_modulus": field.modulus_text(), "n": str(n), "function": name}
    if args.mod:
        P = _prime(args.mod, field)
        ctx = ResidueCtx(P)
        if n % (field.q**P.degree - 1) == 0:
            # trivial character: reduce the exact sum instead of the truncated one
            value = divmod((gamma if weighted else beta)(field, n), P)[1]
        else:
            value = (gamma_mod if weighted else beta_mod)(n, ctx)
        payload.update(P=format_poly(P), value=format_poly(value), divisible=value.is_zero())
        text = f"{name}({n}) mod {payload['P']} = {payload['value']}\ndivisible by P: {'yes' if value.is_zero() else 'no'}"
    else:
        value = (gamma if weighted else beta)(field, n)
        payload.update(value=format_poly(value), degree=value.degree)
        text = f"{name}({n}) = {payload['value']}"
    return CommandOutcome(EXIT_OK, text, payload)


def cmd_beta(args) -> CommandOutcome:
    return _sum_cmd(args, False)


def cmd_gamma(args) -> CommandOutcome:
    return _sum_cmd(args, True)


def cmd_lvalue(args) -> CommandOutcome:
    field = _field(args)
    P = _prime(args.P, field)
    if args.precision < 1:
        raise UsageError("precision must be >= 1")
    lctx = LContext(P, args.n, args.precision)
    head = f"P = {format_poly(P)}, n = {args.n}, precision p^{args.precision}"
    payload: dict = {"q": field.q, "P": format_poly(P), "n": str(args.n), "k": args.precision}
    if args.psi is not None:
        j = args.psi % field.p
        x = lctx.lvalue_psi(j)
        norm = norm_to_witt(x)
        payload.update(kind=f"psi^{j}", coeffs=x.arr.tolist(), norm=_witt_payload(norm))
        lines = [head, f"L(1, psi^{j} omega^n) in W_0[z]/Phi_p, rows = powers of z:"]
        lines += [f"  z^{t}: {row}" for t, row in enumerate(x.arr.tolist())]
        lines += _witt_text("norm to W_0", norm)
        if field.p > 2:
            v = payload["norm"]["p_valuation"]
            payload["pi_valuation"] = v
            lines.append(f"  (zeta_p - 1)-adic valuation: {'>= %d' % args.precision if v is None else v}")
        return CommandOutcome(EXIT_OK, "\n".join(lines), payload)
    if args.tilde:
        x = lctx.lvalue_tilde()
        payload.update(kind="tilde", value=_witt_payload(x))
        return CommandOutcome(EXIT_OK, "\n".join([head, *_witt_text("L(1, tilde omega^n)", x)]), payload)
    x = lctx.lvalue_base()
    payload.update(kind="base", value=_witt_payload(x))
    return CommandOutcome(EXIT_OK, "\n".join([head, *_witt_text("L(1, omega^n)", x)]), payload)


def _fmt_condition(c) -> str:
    if c is True:
        return "yes"
    if c is False:
        return "no"
    return "n/a" if c is None else str(c)


def certificate_text(cert: Certificate) -> str:
    lines = [
        f"field      {'F_%d' % cert.q}{'' if cert.field_modulus is None else ' = F_%d[a]/(%s)' % (cert.p, cert.field_modulus)}",
        f"P          {cert.P}   (degree {cert.d})",
        f"n          {cert.n}" + ("" if cert.m is None else f"   (m = {cert.m})"),
        f"i(P)       {cert.i_P}",
    ]
    if cert.p == 2:
        lines.append(f"4 | L(1, omega_P^n)   {_fmt_condition(cert.l4_divisible)}")
    else:
        lines.append(f"P | beta(n)          {_fmt_condition(cert.beta_divisible)}")
    lines += [
        f"P | gamma(n)         {_fmt_condition(cert.gamma_divisible)}",
        f"Q          {cert.Q}   (irreducible, degree {cert.p * cert.d})",
        f"N          {cert.N}",
        f"modulus    {cert.modulus}",
        f"index      {cert.index}",
        f"theorem    {cert.theorem}",
        f"verdict    {cert.verdict}",
    ]
    return "\n".join(lines)


def cmd_check(args) -> CommandOutcome:
    field = _field(args)
    P = parse_poly(args.P, field)
    cert = check_kv(P, args.n)
    code = EXIT_OK if cert.is_counterexample else EXIT_HYPOTHESES
    return CommandOutcome(code, certificate_text(cert), cert.to_dict())


def cmd_census(args) -> CommandOutcome:
    field = _field(args)
    n = args.m * (field.q**args.d - 1) // (field.q - 1)
    entries = census(field, args.d, args.m)
    rows = [
        {"P": format_poly(e.P), "beta_divisible": e.beta_divisible, "gamma_divisible": e.gamma_divisible}
        for e in entries
    ]
    lines = [f"{_field_line(field)}, d = {args.d}, m = {args.m}, n = {n}: {len(rows)} primes with i(P) != 0"]
    lines += [
        f"  {r['P']:<32} beta {'0' if r['beta_divisible'] else '-'}  gamma {'0' if r['gamma_divisible'] else '-'}"
        for r in rows
    ]
    both = sum(r["beta_divisible"] and r["gamma_divisible"] for r in rows)
    lines.append(f"both divisible: {both}")
    return CommandOutcome(EXIT_OK, "\n".join(lines), {"n": str(n), "entries": rows})


def cmd_table1(args) -> CommandOutcome:
    field = _field(args)
    configs = [table1_config(field, d, args.samples, args.seed, args.threads) for d in _degrees(args.degrees)]
    records, lines = [], ["   d  samples   beta  gamma   both  i=0 rejected"]
    for cfg in configs:
        t0 = time.perf_counter()
        row = run_table1(cfg)
        records.append(table_row_record(row, cfg.exponent))
        lines.append(
            f"{row.d:>4} {row.samples:>8} {row.count_beta:>6} {row.count_gamma:>6} {row.count_both:>6}"
            f" {row.count_i_zero_rejected:>13}   ({time.perf_counter() - t0:.1f}s)"
        )
    if args.out:
        echo = {**configs[0].echo(), "degrees": [c.d for c in configs]}
        echo.pop("d")
        echo.pop("n")
        with open(args.out, "w") as fh:
            write_jsonl(fh, [header_record("table1", echo, args.seed), *records])
        lines.append(f"wrote {args.out}")
    return CommandOutcome(EXIT_OK, "\n".join(lines), records)


def cmd_hunt(args) -> CommandOutcome:
    field = _field(args)
    config = SearchConfig(field, args.d, args.samples, args.seed, n=args.n, m=args.m, threads=args.threads)
    certs = list(hunt(config))
    payload = [c.to_dict() for c in certs]
    lines = [f"{_field_line(field)}, d = {args.d}, n = {config.exponent}: {len(certs)} counterexamples in {args.samples} samples"]
    lines += [f"  P = {c.P}   Q = {c.Q}   index = {c.index}" for c in certs]
    if args.out:
        with open(args.out, "w") as fh:
            write_jsonl(fh, [header_record("hunt", config.echo(), args.seed), *payload])
        lines.append(f"wrote {args.out}")
    return CommandOutcome(EXIT_OK, "\n".join(lines), payload)


# -- built-in worked examples ---------------------------------------------------------

_EX1 = {
    "q": 3,
    "P": "T^3-T^2+1",
    "n": 13,
    "beta": "-T^9-T^3-T+1",
    "gamma": "-T^12-T^10+T^9-T^4+T^3+T-1",
    "Q": "T^9-T^6-T^4-T^3-T^2+1",
    "N": 9841,
    "index": 9840,
}
_EX2 = {
    "q": 4,
    "P": "T^5+a^2*T^4+T^3+a*T^2+a^2",
    "n": 341,
    "k": 2,
    "N": 349525,
    "index": 699049,
}


def _verify_example_odd(lines: list[str]) -> list[str]:
    ex = _EX1
    field = field_of_order(ex["q"])
    P = parse_poly(ex["P"], field)
    bad = []

    def expect(label, ok, shown):
        lines.append(f"  [{'ok' if ok else 'MISMATCH'}] {label}: {shown}")
        if not ok:
            bad.append(label)

    b, g = beta(field, ex["n"]), gamma(field, ex["n"])
    expect(f"beta({ex['n']})", b == parse_poly(ex["beta"], field), format_poly(b))
    expect(f"gamma({ex['n']})", g == parse_poly(ex["gamma"], field), format_poly(g))
    expect("P | beta", divmod(b, P)[1].is_zero(), "yes" if divmod(b, P)[1].is_zero() else "no")
    expect("P | gamma", divmod(g, P)[1].is_zero(), "yes" if divmod(g, P)[1].is_zero() else "no")
    cert = check_kv(P, ex["n"])
    Q = parse_poly(cert.Q, field)
    expect("Q", Q == parse_poly(ex["Q"], field) and is_irreducible(Q), cert.Q)
    expect("N", cert.N == ex["N"], cert.N)
    expect("index", cert.index == ex["index"], cert.index)
    expect("verdict", cert.is_counterexample and not verify_report(cert), cert.verdict)
    return bad


def _verify_example_char2(lines: list[str]) -> list[str]:
    ex = _EX2
    field = field_of_order(ex["q"])
    P = parse_poly(ex["P"], field)
    bad = []

    def expect(label, ok, shown):
        lines.append(f"  [{'ok' if ok else 'MISMATCH'}] {label}: {shown}")
        if not ok:
            bad.append(label)

    n = ex["n"]
    expect("P irreducible", is_irreducible(P), format_poly(P))
    expect("i(P) != 0", i_of(P) != 0, i_of(P))
    g = gamma_mod(n, ResidueCtx(P))
    expect(f"gamma({n}) mod P", g.is_zero(), format_poly(g))
    L = LContext(P, n, ex["k"]).lvalue_base()
    expect(f"L(1, omega^{n}) mod 4", L.is_zero(), L.coeffs.tolist())
    cert = check_kv(P, n)
    Q = parse_poly(cert.Q, field)
    expect("Q irreducible of degree 10", Q.degree == 10 and is_irreducible(Q), cert.Q)
    expect("N", cert.N == ex["N"], cert.N)
    expect("index", cert.index == ex["index"], cert.index)
    expect("verdict", cert.is_counterexample and not verify_report(cert), cert.verdict)
    return bad


def cmd_verify_paper(args) -> CommandOutcome:
    lines, report = [], {}
    for name, fn in (("odd characteristic, q = 3", _verify_example_odd), ("characteristic 2, q = 4", _verify_example_char2)):
        lines.append(f"{name}:")
        t0 = time.perf_counter()
        bad = fn(lines)
        lines.append(f"  ({time.perf_counter() - t0:.2f}s)")
        report[name] = {"mismatches": bad}
    failed = [k for k, v in report.items() if v["mismatches"]]
    lines.append("all worked examples reproduced" if not failed else f"FAILED: {', '.join(failed)}")
    return CommandOutcome(EXIT_INTERNAL if failed else EXIT_OK, "\n".join(lines), report)


# -- parser and dispatch ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--modulus", help="defining polynomial of F_q over F_p, in the variable a")
    common.add_argument("--json", action="store_true", help="print the JSON payload instead of the report")

    parser = _Parser(prog="kvcert", description="Kummer-Vandiver counterexample certificates over F_q[T].")
    parser.add_argument("--version", action="version", version=f"kvcert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("field", parents=[common], help="describe F_q")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_field)

    for name, func in (("beta", cmd_beta), ("gamma", cmd_gamma)):
        p = sub.add_parser(name, parents=[common], help=f"exact {name}(n), or {name}(n) mod P")
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--mod", metavar="P")
        p.set_defaults(func=func)

    p = sub.add_parser("lvalue", parents=[common], help="L-values at X = 1")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--P", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--precision", type=int, required=True, metavar="K")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--psi", type=int, metavar="J")
    which.add_argument("--tilde", action="store_true")
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("check", parents=[common], help="evaluate the criterion for (P, n)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--P", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("census", parents=[common], help="all primes of degree d at n = m(q^d-1)/(q-1)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("table1", parents=[common], help="sampled counts at n = (q^d-1)/2")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--degrees", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("hunt", parents=[common], help="sample primes and emit counterexample certificates")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    exp = p.add_mutually_exclusive_group(required=True)
    exp.add_argument("--m", type=int)
    exp.add_argument("--n", type=int)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hunt)

    p = sub.add_parser("verify-paper", parents=[common], help="replay the two built-in worked examples")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def run(argv: Sequence[str] | None = None) -> CommandOutcome:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, PolyParseError, FieldError, HypothesisError, TrivialCharacterError, BudgetExceeded, ValueError) as exc:
        return CommandOutcome(EXIT_USAGE, f"error: {exc}")
    except OSError as exc:
        return CommandOutcome(EXIT_USAGE, f"error: {exc}")
    except Exception as exc:  # invariant failures land here
        return CommandOutcome(EXIT_INTERNAL, f"internal error: {type(exc).__name__}: {exc}")


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        outcome = run(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    as_json = "--json" in argv and outcome.payload is not None
    stream = sys.stderr if outcome.code in (EXIT_USAGE, EXIT_INTERNAL) and outcome.payload is None else sys.stdout
    if as_json:
        print(json.dumps(outcome.payload, separators=(",", ":")), file=stream)
    elif outcome.text:
        print(outcome.text, file=stream)
    return outcome.code

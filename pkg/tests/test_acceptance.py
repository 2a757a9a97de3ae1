"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run under pytest (lines are printed in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
import itertools
import time

import numpy as np
import pytest

from kvcert import cli
from kvcert.carlitz import beta, beta_mod, gamma, gamma_mod, i_of
from kvcert.fields import field_of_order
from kvcert.lfunc import LContext, prop31_check
from kvcert.polyring import (
    Poly,
    ResidueCtx,
    enumerate_monic,
    is_irreducible,
    is_irreducible_bruteforce,
    parse_poly,
    substitute_artin_schreier,
)
from kvcert.search import SplitMix64, random_monic_irreducible, run_table1, sample_stream, table1_config
from kvcert.witt import WittCtx, teichmuller

RESULTS: list[str] = []

SEED = 20240601


def report(num: int, title: str, ok: bool, detail: str) -> None:
    RESULTS.append(f"{'PASS' if ok else 'FAIL'}  criterion {num}: {title} ({detail})")
    assert ok, detail


def primes(F, d, need_i=False):
    return [P for P in enumerate_monic(F, d) if is_irreducible(P) and (not need_i or i_of(P))]


def test_criterion_1_cubic_example():
    lines: list[str] = []
    t0 = time.perf_counter()
    bad = cli._verify_example_odd(lines)
    dt = time.perf_counter() - t0
    report(1, "cubic worked example over F_3", not bad and dt < 5, f"mismatches={bad}, {dt:.2f}s < 5s")


def test_criterion_2_char2_example():
    lines: list[str] = []
    t0 = time.perf_counter()
    bad = cli._verify_example_char2(lines)
    dt = time.perf_counter() - t0
    report(2, "quintic worked example over F_4", not bad and dt < 60, f"mismatches={bad}, {dt:.2f}s < 60s")


def test_criterion_3_table1_d9():
    F = field_of_order(3)
    t0 = time.perf_counter()
    row = run_table1(table1_config(F, 9, 1000, SEED))
    dt = time.perf_counter() - t0
    ok = 378 <= row.count_beta <= 478 and 273 <= row.count_gamma <= 363 and 107 <= row.count_both <= 177
    report(
        3,
        "Table 1 row d = 9",
        ok and dt < 900,
        f"beta={row.count_beta} gamma={row.count_gamma} both={row.count_both}, {dt:.1f}s",
    )


def test_criterion_4_prop31_exhaustive():
    F = field_of_order(3)
    cases = disagreements = 0
    for d in (2, 3):
        for P in primes(F, d, need_i=True):
            for n in range(1, 3**d - 1):
                if n % 2 == 0:
                    continue
                cases += 1
                disagreements += not prop31_check(LContext(P, n, 2)).agree
    report(4, "L-value criterion vs beta/gamma divisibility", disagreements == 0 and cases > 0,
           f"{disagreements} disagreements in {cases} cases")


def test_criterion_5_product_decomposition():
    rng = SplitMix64(SEED)
    instances = [(3, 2), (3, 2), (3, 3), (3, 3), (4, 2), (4, 3), (5, 1)]
    mismatches = 0
    seen = []
    for q, d in instances:
        F = field_of_order(q)
        P = random_monic_irreducible(F, d, rng)
        while True:
            n = 1 + rng.below(q**d - 2)
            if n % (q**d - 1):
                break
        lctx = LContext(P, n, 2)
        prod = lctx.lvalue_psi(0)
        for j in range(1, F.p):
            prod = prod * lctx.lvalue_psi(j)
        mismatches += prod != lctx.cyclo.embed(lctx.lvalue_tilde(check_top=True))
        seen.append((q, d, n))
    report(5, "product of psi-twisted values equals the theta-ring value", mismatches == 0,
           f"{mismatches} mismatches over {len(seen)} instances")


def test_criterion_6_fast_paths():
    F = field_of_order(3)
    prs = [P for d in range(1, 5) for P in primes(F, d)]
    ctxs = [ResidueCtx(P) for P in prs]
    mismatches = checks = 0
    for n in range(1, 101):
        g = gamma(F, n)
        b = beta(F, n) if n % 2 else None  # beta(n) is only defined for (q-1) not dividing n
        for P, ctx in zip(prs, ctxs):
            if n % (3**P.degree - 1) == 0:
                continue
            checks += 1
            mismatches += gamma_mod(n, ctx) != divmod(g, P)[1]
            if b is not None:
                mismatches += beta_mod(n, ctx) != divmod(b, P)[1]
    report(6, "beta_mod/gamma_mod agree with exact reductions", mismatches == 0,
           f"{mismatches} mismatches, {len(prs)} primes, {checks} (P, n) pairs")


def test_criterion_7_constant_residues():
    F = field_of_order(3)
    violations = 0
    for j in range(100):
        d = 1 + j % 7
        P = random_monic_irreducible(F, d, sample_stream(SEED, d, j), require_i_nonzero=False)
        n = (3**d - 1) // 2
        ctx = ResidueCtx(P)
        violations += gamma_mod(n, ctx).degree > 0
        if n % 2:
            violations += beta_mod(n, ctx).degree > 0
    report(7, "beta/gamma mod P constant at n = m(q^d-1)/(q-1)", violations == 0, f"{violations} violations")


def test_criterion_8_irreducibility_transfer():
    F = field_of_order(3)
    failures = 0
    for j in range(500):
        d = 1 + j % 9
        P = random_monic_irreducible(F, d, sample_stream(SEED, d, j))
        failures += not is_irreducible(substitute_artin_schreier(P))
    report(8, "P(T^3-T) irreducible for 500 sampled primes", failures == 0, f"{failures} failures")


def test_criterion_9_kernel_conformance():
    failures = 0
    counted = 0
    for q, top in ((3, 6), (4, 4)):
        F = field_of_order(q)
        for d in range(1, top + 1):
            for P in enumerate_monic(F, d):
                counted += 1
                failures += is_irreducible(P) != is_irreducible_bruteforce(P)
    F3 = field_of_order(3)
    for d in (1, 2):
        for P in primes(F3, d):
            for k in (1, 2, 3):
                ctx = WittCtx(F3, P, k)
                rs = [Poly(F3, list(c)) for c in itertools.product(range(3), repeat=d)]
                lift = {r: teichmuller(r, ctx) for r in rs}
                for r in rs:
                    failures += lift[r] ** ctx.qd != lift[r]
                    failures += lift[r].reduce_mod_p() != r
                for r1, r2 in itertools.product(rs, repeat=2):
                    failures += lift[divmod(r1 * r2, P)[1]] != lift[r1] * lift[r2]
    rng = np.random.default_rng(SEED)
    for t in range(10_000):
        F = F3 if t % 2 else field_of_order(4)
        a = Poly(F, rng.integers(0, F.q, size=rng.integers(0, 16)))
        b = Poly(F, rng.integers(0, F.q, size=rng.integers(1, 9)))
        if b.is_zero():
            b = Poly.constant(F, 1)
        qt, r = divmod(a, b)
        failures += (qt * b + r != a) or (r.degree >= b.degree)
    report(9, "kernel conformance (Rabin, Teichmueller, divmod)", failures == 0,
           f"{failures} failures, {counted} polynomials classified")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    print("\n".join(RESULTS))

import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kvcert.carlitz import (
    BudgetExceeded,
    CutoffPolicy,
    CutoffWarning,
    beta,
    beta_gamma_mod,
    beta_mod,
    digit_sum,
    gamma,
    gamma_mod,
    i_of,
    power_sum,
    weighted_power_sum,
)
from kvcert.fields import field_of_order
from kvcert.polyring import Poly, ResidueCtx, enumerate_monic, is_irreducible, parse_poly
from oracles import sp_power_sum, sp_sum


def P_(text, F):
    return parse_poly(text, F)


# -- i(a) ---------------------------------------------------------------------------

def test_i_examples(F3, P3, F4, P4):
    assert i_of(Poly.constant(F3, 1)) == 0
    assert i_of(P3) == 2
    assert i_of(P4) == 1
    assert [i_of(P_(f"T+{c}", F3)) for c in range(3)] == [0, 1, 2]
    with pytest.raises(ValueError):
        i_of(P_("2*T+1", F3))


@settings(max_examples=500)
@given(
    st.sampled_from([3, 4, 9]).flatmap(
        lambda q: st.tuples(
            st.just(q),
            st.lists(st.integers(0, q - 1), min_size=0, max_size=7),
            st.lists(st.integers(0, q - 1), min_size=0, max_size=7),
        )
    )
)
def test_i_additive_on_products(data):
    q, a, b = data
    F = field_of_order(q)
    A, B = Poly(F, a + [1]), Poly(F, b + [1])
    assert i_of(A * B) == (i_of(A) + i_of(B)) % F.p


# -- digit sums, cutoffs ------------------------------------------------------------------

def test_digit_sum():
    assert digit_sum(13, 3) == 3
    assert digit_sum((3**9 - 1) // 2, 3) == 9
    assert digit_sum(0, 5) == 0
    with pytest.raises(ValueError):
        digit_sum(-1, 3)


def test_cutoff_bounds(F3):
    assert CutoffPolicy.exact(F3, 13, weighted=False).bound == 1
    assert CutoffPolicy.exact(F3, 13, weighted=True).bound == 2
    assert CutoffPolicy.mod_p(F3, 13, 3, weighted=True).bound == 2
    assert CutoffPolicy.mod_p(F3, (3**9 - 1) // 2, 9, weighted=False).bound == 4
    assert CutoffPolicy.mod_p(F3, 3**9 - 2, 2, weighted=True).bound == 2


# -- exact power sums against sympy ----------------------------------------------------------

def test_power_sum_examples(F3):
    assert power_sum(F3, 0, 7) == Poly.constant(F3, 1)
    assert power_sum(F3, 1, 13) == P_("2*T^9+2*T^3+2*T", F3)
    assert power_sum(F3, 2, 13).is_zero()
    assert weighted_power_sum(F3, 0, 13).is_zero()
    assert weighted_power_sum(F3, 1, 13) == P_("-T^12-T^10-T^4-1", F3)
    assert weighted_power_sum(F3, 2, 13) == P_("T^9+T^3+T", F3)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
@pytest.mark.parametrize("n", [1, 5, 13, 22, 40])
def test_power_sums_match_sympy(F3, m, n):
    assert power_sum(F3, m, n).coeffs.tolist() == sp_power_sum(3, m, n)
    assert weighted_power_sum(F3, m, n).coeffs.tolist() == sp_power_sum(3, m, n, weighted=True)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 9, 11, 17, 24, 31])
def test_power_sums_match_sympy_f5(F5, n):
    for m in range(3):
        assert power_sum(F5, m, n).coeffs.tolist() == sp_power_sum(5, m, n)
        assert weighted_power_sum(F5, m, n).coeffs.tolist() == sp_power_sum(5, m, n, weighted=True)


def test_extension_field_power_sum_matches_poly_arithmetic(F4):
    # direct Poly arithmetic is an independent route from the Frobenius-digit path
    for m in range(3):
        for n in (1, 5, 10, 21):
            total, wtotal = Poly(F4, []), Poly(F4, [])
            for a in enumerate_monic(F4, m):
                an = a**n
                total = total + an
                if i_of(a):
                    wtotal = wtotal + an
            assert power_sum(F4, m, n) == total
            assert weighted_power_sum(F4, m, n) == wtotal  # i(a) in F_2, weight is 0 or 1


# -- beta and gamma ------------------------------------------------------------------------

def test_beta_gamma_worked_example(F3):
    b, g = beta(F3, 13), gamma(F3, 13)
    assert b == P_("-T^9-T^3-T+1", F3)
    assert g == P_("-T^12-T^10+T^9-T^4+T^3+T-1", F3)
    assert b.degree == 9 and g.degree == 12
    assert g == weighted_power_sum(F3, 1, 13) + weighted_power_sum(F3, 2, 13)


def test_beta_gamma_small(F3):
    assert beta(F3, 1) == Poly.constant(F3, 1)
    assert gamma(F3, 1) == P_("-1", F3)
    with pytest.raises(ValueError, match="divisible by q-1"):
        beta(F3, 2)
    with pytest.raises(ValueError):
        gamma(F3, 0)


@pytest.mark.parametrize("n", [1, 3, 5, 7, 11, 13, 17, 19, 25, 29])
def test_beta_gamma_match_brute_force(F3, n):
    # the oracle sums two strata past the largest possible contribution
    top = digit_sum(n, 3) // 2 + 3
    assert beta(F3, n).coeffs.tolist() == sp_sum(3, n, False, top)
    assert gamma(F3, n).coeffs.tolist() == sp_sum(3, n, True, top)


def test_exact_sums_never_warn(F3, F4):
    with warnings.catch_warnings():
        warnings.simplefilter("error", CutoffWarning)
        for n in range(1, 60):
            gamma(F3, n)
            if n % 2:
                beta(F3, n)
            if n % 3:
                beta(F4, n)
                gamma(F4, n)


def test_budget_guard(F3):
    with pytest.raises(BudgetExceeded):
        power_sum(F3, 6, 10**6, budget=10**5)


# -- fast paths ------------------------------------------------------------------------

def test_fast_paths_worked_example(P3):
    ctx = ResidueCtx(P3)
    assert beta_mod(13, ctx).is_zero()
    assert gamma_mod(13, ctx).is_zero()
    with pytest.raises(ValueError):
        beta_mod(26, ctx)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_fast_paths_match_exact(F3, d):
    primes = [P for P in enumerate_monic(F3, d) if is_irreducible(P)]
    for n in range(1, 60):
        g = gamma(F3, n)
        b = beta(F3, n) if n % 2 else None
        for P in primes:
            if n % (3**d - 1) == 0:
                continue
            ctx = ResidueCtx(P)
            assert gamma_mod(n, ctx) == divmod(g, P)[1]
            if b is not None:
                assert beta_mod(n, ctx) == divmod(b, P)[1]


def test_fast_paths_extension_field(F4):
    primes = [P for P in enumerate_monic(F4, 2) if is_irreducible(P)]
    for n in range(1, 40):
        g = gamma(F4, n)
        b = beta(F4, n) if n % 3 else None
        for P in primes:
            if n % 15 == 0:
                continue
            ctx = ResidueCtx(P)
            assert gamma_mod(n, ctx) == divmod(g, P)[1]
            if b is not None:
                assert beta_mod(n, ctx) == divmod(b, P)[1]


def test_combined_fast_path(F3):
    rng = np.random.default_rng(2)
    for _ in range(20):
        d = int(rng.integers(2, 6))
        while True:
            P = Poly(F3, list(rng.integers(0, 3, size=d)) + [1])
            if is_irreducible(P):
                break
        n = int(rng.integers(1, 3**d - 1))
        ctx = ResidueCtx(P)
        assert beta_gamma_mod(n, ctx) == (beta_mod(n, ctx), gamma_mod(n, ctx))


def test_constants_at_full_period_exponents(F3):
    rng = np.random.default_rng(7)
    for _ in range(20):
        d = int(rng.integers(2, 8))
        while True:
            P = Poly(F3, list(rng.integers(0, 3, size=d)) + [1])
            if is_irreducible(P):
                break
        n = (3**d - 1) // 2
        b, g = beta_gamma_mod(n, ResidueCtx(P))
        assert b.degree <= 0 and g.degree <= 0

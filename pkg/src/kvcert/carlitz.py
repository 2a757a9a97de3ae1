"""Power sums over monic polynomials: i(a), S_m(n), the Bernoulli-Goss
polynomial beta(n) and its i-weighted companion gamma(n).

Exact sums stop at a degree bound derived from the base-q digit sum of ``n``
and verify that two further strata vanish.  The fast paths work modulo a prime
``P`` and only ever raise reduced residues to the ``n``-th power.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .fields import FieldSpec
from .polyring import Poly, ResidueCtx, monic_array

# Upper bound on (number of monics) * (length of a^n) handled by the exact path.
DEFAULT_BUDGET = 50_000_000


class BudgetExceeded(RuntimeError):
    pass


class CutoffWarning(UserWarning):
    pass


def i_of(a: Poly) -> int:
    """Trace to F_p of the coefficient of ``T^(deg a - 1)`` of a monic ``a``."""
    if not a.is_monic():
        raise ValueError("i(a) is defined on monic polynomials only")
    if a.degree < 1:
        return 0
    return int(a.field.trace_table[a.coeffs[-2]])


def i_values(field: FieldSpec, rows: np.ndarray) -> np.ndarray:
    """``i`` of every monic row in an ``(N, m + 1)`` array."""
    m = rows.shape[1] - 1
    if m < 1:
        return np.zeros(rows.shape[0], dtype=np.int64)
    return field.trace_table[rows[:, m - 1]]


def digit_sum(n: int, q: int) -> int:
    if n < 0:
        raise ValueError("digit sum of a negative integer")
    total = 0
    while n:
        n, r = divmod(n, q)
        total += r
    return total


@dataclass(frozen=True)
class CutoffPolicy:
    """Largest stratum degree that can contribute to beta(n) / gamma(n).

    ``exact`` bounds (sum through ``bound``, then check ``margin`` more strata):
    ``floor(l/(q-1))`` for beta and one more for gamma, where ``l`` is the
    base-q digit sum of ``n``.  ``mod_p`` additionally caps the bound at ``d``.
    """

    kind: str
    weighted: bool
    digit_sum: int
    q: int
    d: int | None = None
    margin: int = 2

    @property
    def bound(self) -> int:
        b = self.digit_sum // (self.q - 1) + (1 if self.weighted else 0)
        if self.kind == "mod-P":
            b = min(self.d, b)
        return b

    @classmethod
    def exact(cls, field: FieldSpec, n: int, weighted: bool) -> "CutoffPolicy":
        return cls("exact", weighted, digit_sum(n, field.q), field.q)

    @classmethod
    def mod_p(cls, field: FieldSpec, n: int, d: int, weighted: bool) -> "CutoffPolicy":
        return cls("mod-P", weighted, digit_sum(n, field.q), field.q, d, margin=0)


# -- exact strata ---------------------------------------------------------------

def _batch_mul_sparse(field: FieldSpec, acc: np.ndarray, factor: np.ndarray, stride: int) -> np.ndarray:
    """Row-wise ``acc[r] * sum_i factor[r, i] T^(i*stride)``."""
    n_rows, length = acc.shape
    k = factor.shape[1]
    out_len = length + (k - 1) * stride
    if field.s == 1:
        out = np.zeros((n_rows, out_len), dtype=np.int64)
        for i in range(k):
            out[:, i * stride : i * stride + length] += acc * factor[:, i : i + 1]
        return out % field.p
    out = np.zeros((n_rows, out_len), dtype=np.int64)
    add, mul = field.add_table, field.mul_table
    for i in range(k):
        sl = slice(i * stride, i * stride + length)
        out[:, sl] = add[out[:, sl], mul[acc, factor[:, i : i + 1]]]
    return out


def _frobenius_table(field: FieldSpec, j: int) -> np.ndarray:
    idx = np.arange(field.q)
    for _ in range(j % field.s):
        idx = np.array([field._pow_idx(int(x), field.p) for x in idx], dtype=np.int64)
    return idx


def _stratum(field: FieldSpec, m: int, n: int, weighted: bool, budget: int) -> Poly:
    """Exact ``sum_{a in A_m} w(a) a^n`` with ``w = i`` or ``w = 1``."""
    rows = monic_array(field, m)
    if weighted:
        w = i_values(field, rows)
        keep = w != 0
        rows, w = rows[keep], w[keep]
    if rows.shape[0] == 0:
        return Poly(field, [])
    if rows.shape[0] * (m * n + 1) > budget:
        raise BudgetExceeded(
            f"exact power sum over {rows.shape[0]} monics of degree {m} with n = {n} exceeds the budget"
        )
    acc = np.ones((rows.shape[0], 1), dtype=np.int64)
    e, j = n, 0
    while e:
        e, digit = divmod(e, field.p)
        if digit:
            frob = _frobenius_table(field, j)[rows]
            for _ in range(digit):
                acc = _batch_mul_sparse(field, acc, frob, field.p**j)
        j += 1
    total = field.sum(acc, axis=0, weights=w if weighted else None)
    return Poly(field, total)


def power_sum(field: FieldSpec, m: int, n: int, budget: int = DEFAULT_BUDGET) -> Poly:
    """S_m(n) = sum of a^n over the monic a of degree m."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _stratum(field, m, n, False, budget)


def weighted_power_sum(field: FieldSpec, m: int, n: int, budget: int = DEFAULT_BUDGET) -> Poly:
    """S'_m(n) = sum of i(a) a^n over the monic a of degree m."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _stratum(field, m, n, True, budget)


def _exact_sum(field: FieldSpec, n: int, weighted: bool, budget: int) -> Poly:
    policy = CutoffPolicy.exact(field, n, weighted)
    total = Poly(field, [])
    m, zeros_in_a_row = 0, 0
    last = policy.bound + policy.margin
    while m <= last or zeros_in_a_row < policy.margin:
        term = _stratum(field, m, n, weighted, budget)
        if m > policy.bound:
            if term.is_zero():
                zeros_in_a_row += 1
            else:
                warnings.warn(
                    f"stratum m={m} beyond the cutoff {policy.bound} is nonzero (n={n}); extending",
                    CutoffWarning,
                    stacklevel=3,
                )
                zeros_in_a_row = 0
                last = m + policy.margin
        total = total + term
        m += 1
    return total


def beta(field: FieldSpec, n: int, budget: int = DEFAULT_BUDGET) -> Poly:
    """Exact Bernoulli-Goss polynomial ``sum_m S_m(n)``; needs ``(q-1) ∤ n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % (field.q - 1) == 0:
        raise ValueError(f"n = {n} is divisible by q-1 = {field.q - 1}")
    return _exact_sum(field, n, False, budget)


def gamma(field: FieldSpec, n: int, budget: int = DEFAULT_BUDGET) -> Poly:
    """Exact ``sum_m S'_m(n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _exact_sum(field, n, True, budget)


# -- mod P fast paths -------------------------------------------------------------

def residue_strata(ctx: ResidueCtx, max_m: int) -> tuple[np.ndarray, np.ndarray]:
    """Residues mod P (rows of length d) and i-values of every monic of degree <= max_m.

    ``max_m`` must not exceed ``d``; the degree-d monics are reduced by
    subtracting ``P``.
    """
    field, d = ctx.field, ctx.d
    if max_m > d:
        raise ValueError("strata above deg P are not needed modulo P")
    res, iv = [], []
    for m in range(max_m + 1):
        rows = monic_array(field, m)
        iv.append(i_values(field, rows))
        if m < d:
            r = np.zeros((rows.shape[0], d), dtype=np.int64)
            r[:, : m + 1] = rows
        else:
            r = field.sub_table[rows[:, :d], ctx.P.coeffs[:d][None, :]]
        res.append(r)
    return np.concatenate(res), np.concatenate(iv)


def _check_mod_args(n: int, ctx: ResidueCtx) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % (ctx.field.q**ctx.d - 1) == 0:
        raise ValueError("n is a multiple of q^d - 1: the character is trivial")


def beta_mod(n: int, ctx: ResidueCtx) -> Poly:
    """beta(n) mod P, summing the strata m <= min(d, floor(l_q(n)/(q-1)))."""
    _check_mod_args(n, ctx)
    bound = CutoffPolicy.mod_p(ctx.field, n, ctx.d, weighted=False).bound
    res, _ = residue_strata(ctx, bound)
    powered = ctx.batch_powmod(res, n)
    return ctx.to_poly(ctx.field.sum(powered, axis=0))


def gamma_mod(n: int, ctx: ResidueCtx) -> Poly:
    """gamma(n) mod P, summing the strata m <= min(d, floor(l_q(n)/(q-1)) + 1)."""
    _check_mod_args(n, ctx)
    bound = CutoffPolicy.mod_p(ctx.field, n, ctx.d, weighted=True).bound
    res, iv = residue_strata(ctx, bound)
    keep = iv != 0
    powered = ctx.batch_powmod(res[keep], n)
    return ctx.to_poly(ctx.field.sum(powered, axis=0, weights=iv[keep]))


def beta_gamma_mod(n: int, ctx: ResidueCtx, strata: tuple[np.ndarray, np.ndarray] | None = None) -> tuple[Poly, Poly]:
    """Both fast paths from a single batch of powers.

    ``strata`` may carry precomputed :func:`residue_strata` output covering at
    least the gamma bound (reusable across primes of one degree when that
    bound is below ``d``).
    """
    _check_mod_args(n, ctx)
    field = ctx.field
    b_bound = CutoffPolicy.mod_p(field, n, ctx.d, weighted=False).bound
    g_bound = CutoffPolicy.mod_p(field, n, ctx.d, weighted=True).bound
    if strata is None:
        strata = residue_strata(ctx, g_bound)
    res, iv = strata
    count_b = sum(field.q**m for m in range(b_bound + 1))
    count_g = sum(field.q**m for m in range(g_bound + 1))
    powered = ctx.batch_powmod(res[:count_g], n)
    b = field.sum(powered[:count_b], axis=0)
    g = field.sum(powered, axis=0, weights=iv[:count_g])
    return ctx.to_poly(b), ctx.to_poly(g)

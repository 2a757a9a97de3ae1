"""L-values at X = 1 of Teichmueller characters, as finite character sums.

For a monic irreducible ``P`` of degree ``d`` and an exponent ``n`` with
``(q^d - 1) ∤ n``:

* ``lvalue_base``    sum over monic a with deg a < d of omega_P(a)^n
* ``gamma_witt_sum`` sum over deg a <= d of i(a) omega_P(a)^n
* ``lvalue_psi(j)``  sum over deg a <= d of zeta_p^(j i(a)) omega_P(a)^n
* ``lvalue_tilde``   sum over monic b in F_q[theta] of omega_P(N(b))^n

All values live in W_0 (or W) at precision p^k.  Sums are evaluated by
grouping the monic strata by their residue a^n mod P, so each distinct
residue is lifted only once.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .carlitz import beta_mod, gamma_mod, i_of, i_values
from .polyring import (
    Poly,
    ResidueCtx,
    monic_array,
    norm_theta,
    norm_theta_rows,
    substitute_artin_schreier,
)
from .witt import CycloCtx, CycloElem, WittCtx, WittElem, pi_divisible

# Largest number of theta-monics lvalue_tilde will enumerate by default.
TILDE_BUDGET = 200_000


class TrivialCharacterError(ValueError):
    pass


class LContext:
    """Everything needed to evaluate character sums for ``omega_P^n``."""

    def __init__(self, P: Poly, n: int, k: int = 2, *, witt: WittCtx | None = None):
        field = P.field
        if n < 1:
            raise ValueError("n must be >= 1")
        if n % (field.q**P.degree - 1) == 0:
            raise TrivialCharacterError("omega_P^n is the trivial character")
        self.field = field
        self.P = P
        self.d = P.degree
        self.n = n
        self.residue = ResidueCtx(P)
        self.witt = witt if witt is not None else WittCtx(field, P, k)
        self.k = self.witt.k
        self.cyclo = CycloCtx(self.witt)
        self.i_P = i_of(P)
        self._strata: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def _require_i_nonzero(self):
        if self.i_P == 0:
            raise ValueError("i(P) = 0: psi-twists and theta-ring values need i(P) != 0")

    # -- building blocks -----------------------------------------------------------
    def stratum(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        """(a^n mod P rows, i-values) for the monic a of degree m, cached."""
        if m not in self._strata:
            field, d = self.field, self.d
            rows = monic_array(field, m)
            iv = i_values(field, rows)
            if m > d:
                raise ValueError("strata above deg P are not needed")
            if m < d:
                res = np.zeros((rows.shape[0], d), dtype=np.int64)
                res[:, : m + 1] = rows
            else:
                res = field.sub_table[rows[:, :d], self.P.coeffs[:d][None, :]]
            self._strata[m] = (self.residue.batch_powmod(res, self.n), iv)
        return self._strata[m]

    def _teich_sum(self, powered: np.ndarray) -> np.ndarray:
        """sum of teich(r) over residue rows, as a W_0 vector."""
        pk = self.witt.pk
        if powered.shape[0] == 0:
            return np.zeros(self.witt.D, dtype=np.int64)
        uniq, inv = np.unique(powered, axis=0, return_inverse=True)
        counts = np.bincount(inv.reshape(-1), minlength=uniq.shape[0]).astype(np.int64)
        teich = self.witt.teichmuller_rows(uniq)
        return (counts % pk) @ teich % pk

    def omega_pow(self, a: Poly) -> WittElem:
        """omega_P(a)^n, computed as the Teichmueller lift of a^n mod P."""
        r = self.residue.residue(a)
        if not r.any():
            return self.witt.zero()
        powered = self.residue.batch_powmod(r[None, :], self.n)
        return WittElem(self.witt, self.witt.teichmuller_rows(powered)[0])

    # -- the sums -------------------------------------------------------------------
    def lvalue_base(self) -> WittElem:
        """L(1, K_P/k, omega_P^n); asserts that the degree-d stratum adds zero."""
        total = np.zeros(self.witt.D, dtype=np.int64)
        for m in range(self.d):
            total = (total + self._teich_sum(self.stratum(m)[0])) % self.witt.pk
        top = self._teich_sum(self.stratum(self.d)[0])
        assert not top.any(), "degree-d stratum of a nontrivial character sum is nonzero"
        return WittElem(self.witt, total)

    def _by_i(self, max_m: int) -> np.ndarray:
        """``(p, D)``: row t = sum of omega(a)^n over deg a <= max_m with i(a) = t."""
        p, pk = self.field.p, self.witt.pk
        out = np.zeros((p, self.witt.D), dtype=np.int64)
        for m in range(max_m + 1):
            powered, iv = self.stratum(m)
            for t in range(p):
                sel = iv == t
                if sel.any():
                    out[t] = (out[t] + self._teich_sum(powered[sel])) % pk
        return out

    def gamma_witt_sum(self) -> WittElem:
        by_i = self._by_i(self.d)
        t = np.arange(self.field.p, dtype=np.int64)[:, None]
        return WittElem(self.witt, (t * by_i).sum(axis=0) % self.witt.pk)

    def lvalue_psi_coefficients(self, j: int) -> list[CycloElem]:
        """The d+1 coefficients c_m (X^m) of L(X, L/k, psi^j omega_P^n)."""
        if j % self.field.p:
            self._require_i_nonzero()
        p = self.field.p
        coeffs = []
        for m in range(self.d + 1):
            parts = np.zeros((p, self.witt.D), dtype=np.int64)
            powered, iv = self.stratum(m)
            for t in range(p):
                sel = iv == t
                if sel.any():
                    parts[(j * t) % p] += self._teich_sum(powered[sel])
            coeffs.append(self.cyclo.from_z_sum(parts % self.witt.pk))
        return coeffs

    def lvalue_psi(self, j: int) -> CycloElem:
        """L(1, L/k, psi^j omega_P^n) with psi(1) = zeta_p."""
        if j % self.field.p:
            self._require_i_nonzero()
        p = self.field.p
        by_i = self._by_i(self.d)
        parts = np.zeros_like(by_i)
        for t in range(p):
            parts[(j * t) % p] += by_i[t]
        return self.cyclo.from_z_sum(parts % self.witt.pk)

    def lvalue_tilde(self, budget: int = TILDE_BUDGET, *, check_top: bool = False, spot_checks: int = 10) -> WittElem:
        """L(1, L/k~, omega~_P^n), summing omega_P(N(b))^n over monic b in F_q[theta].

        Strata run through degree pd - 1.  ``check_top`` also evaluates the
        degree-pd stratum and asserts it vanishes.  ``spot_checks`` random b
        re-verify that the norm agrees with the power map into F_q[theta]/(Q).
        """
        self._require_i_nonzero()
        field, pk = self.field, self.witt.pk
        top = field.p * self.d
        strata = range(top + 1) if check_top else range(top)
        count = sum(field.q**m for m in strata)
        if count > budget:
            raise ValueError(f"theta-ring sum over {count} monics exceeds the budget {budget}")
        self._check_norm_compatibility(spot_checks)
        total = np.zeros(self.witt.D, dtype=np.int64)
        for m in strata:
            rows = monic_array(field, m)
            res = self.residue.reduce_rows(norm_theta_rows(field, rows))
            part = self._teich_sum(self.residue.batch_powmod(res, self.n))
            if m == top:
                assert not part.any(), "degree-pd stratum of the theta-ring sum is nonzero"
            total = (total + part) % pk
        return WittElem(self.witt, total)

    def _check_norm_compatibility(self, count: int) -> None:
        if count <= 0:
            return
        field = self.field
        Q = substitute_artin_schreier(self.P)
        qctx = ResidueCtx(Q)
        exponent = (field.q ** (field.p * self.d) - 1) // (field.q**self.d - 1)
        rng = np.random.default_rng(self.d * 1_000_003 + self.n)
        checked = 0
        while checked < count:
            deg = int(rng.integers(0, Q.degree))
            b = Poly(field, list(rng.integers(0, field.q, size=deg)) + [1], "theta")
            if qctx.reduce(b).is_zero():
                continue
            nb = self.residue.reduce(norm_theta(b))
            lhs = qctx.reduce(substitute_artin_schreier(nb))
            rhs = qctx.powmod(b, exponent)
            assert lhs == rhs, "norm map disagrees with the power map modulo Q"
            checked += 1


@dataclass(frozen=True)
class Prop31Report:
    lhs: bool
    rhs: bool

    @property
    def agree(self) -> bool:
        return self.lhs == self.rhs


def prop31_check(lctx: LContext) -> Prop31Report:
    """Compare (zeta_p - 1)^2 | L(1, psi omega^n) with P | beta(n) and P | gamma(n)."""
    field = lctx.field
    if field.p == 2:
        raise ValueError("the criterion needs p odd")
    if lctx.n % (field.q - 1) == 0:
        raise ValueError("n must not be divisible by q-1")
    lctx._require_i_nonzero()
    if lctx.k < 2:
        raise ValueError("precision k >= 2 is needed to test divisibility by (zeta_p - 1)^2")
    lhs = pi_divisible(lctx.lvalue_psi(1), 2)
    rhs = beta_mod(lctx.n, lctx.residue).is_zero() and gamma_mod(lctx.n, lctx.residue).is_zero()
    return Prop31Report(lhs, rhs)


def omega_pow(a: Poly, lctx: LContext) -> WittElem:
    return lctx.omega_pow(a)


def lvalue_base(lctx: LContext) -> WittElem:
    return lctx.lvalue_base()


def gamma_witt_sum(lctx: LContext) -> WittElem:
    return lctx.gamma_witt_sum()


def lvalue_psi(lctx: LContext, j: int) -> CycloElem:
    return lctx.lvalue_psi(j)


def lvalue_tilde(lctx: LContext, budget: int = TILDE_BUDGET, **kw) -> WittElem:
    return lctx.lvalue_tilde(budget, **kw)

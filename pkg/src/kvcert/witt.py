"""Truncated Witt vectors of A/P and their extension by a p-th root of unity.

The ring W_0 / p^k is modelled as the unramified tower

    B = (Z/p^k)[x] / (g~),    W_0 = B[T] / (P~),

where ``g~`` and ``P~`` are the coefficientwise minimal lifts of the field
modulus ``g`` and of ``P``.  An element is a flat integer vector of length
``D = d*s`` (index ``i*s + u`` holds the coefficient of ``T^i x^u``).
Multiplication uses structure constants computed once per context.

``W = W_0[z] / (1 + z + ... + z^(p-1))`` carries ``zeta_p = z``; elements are
``(p-1, D)`` arrays.  For ``p = 2`` this collapses to W_0 with ``zeta = -1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .fields import FieldSpec
from .polyring import Poly, is_irreducible


class PrecisionError(ValueError):
    pass


class WittCtx:
    def __init__(self, field: FieldSpec, P: Poly, k: int = 2):
        if k < 1:
            raise PrecisionError("precision k must be >= 1")
        if not P.is_monic() or P.degree < 1 or not is_irreducible(P):
            raise ValueError("P must be monic irreducible")
        if P.field != field:
            raise ValueError("P is defined over a different field")
        self.field = field
        self.P = P
        self.p = field.p
        self.s = field.s
        self.d = P.degree
        self.k = k
        self.pk = self.p**k
        self.D = self.d * self.s
        self.qd = field.q**self.d
        self.g_lift = np.array(field.modulus if field.modulus else (0, 1), dtype=np.int64)
        self.P_lift = field.coords(P.coeffs)  # (d+1, s), entries in [0, p)
        if self.pk**3 * self.D**2 >= 2**62:
            raise PrecisionError("p^k too large for int64 structure-constant products")

    def __repr__(self):
        return f"WittCtx(q={self.field.q}, d={self.d}, k={self.k})"

    def __eq__(self, other):
        return isinstance(other, WittCtx) and (self.field, self.P, self.k) == (other.field, other.P, other.k)

    def __hash__(self):
        return hash((self.field, self.P, self.k))

    def with_precision(self, k: int) -> "WittCtx":
        return WittCtx(self.field, self.P, k)

    # -- multiplication ------------------------------------------------------------
    def _base_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        s, pk = self.s, self.pk
        c = np.convolve(a, b)
        for t in range(2 * s - 2, s - 1, -1):
            c[t - s : t] -= c[t] * self.g_lift[:s]
            c[t] = 0
        return c[:s] % pk

    def _tower_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Schoolbook product of two ``(d, s)`` arrays; used to derive structure constants."""
        d, s = self.d, self.s
        C = np.zeros((2 * d - 1, s), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                C[i + j] = (C[i + j] + self._base_mul(A[i], B[j])) % self.pk
        for t in range(2 * d - 2, d - 1, -1):
            lead = C[t].copy()
            for j in range(d):
                C[t - d + j] = (C[t - d + j] - self._base_mul(lead, self.P_lift[j])) % self.pk
            C[t] = 0
        return C[:d]

    @cached_property
    def _structure(self) -> np.ndarray:
        D = self.D
        M = np.zeros((D, D, D), dtype=np.int64)
        basis = np.eye(D, dtype=np.int64).reshape(D, self.d, self.s)
        for a in range(D):
            for b in range(a, D):
                prod = self._tower_mul(basis[a], basis[b]).reshape(D)
                M[a, b] = M[b, a] = prod
        return M.reshape(D * D, D)

    def mul_vec(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Batched product of ``(..., D)`` arrays."""
        outer = (A[..., :, None] * B[..., None, :]) % self.pk
        flat = outer.reshape(*outer.shape[:-2], self.D * self.D)
        return (flat @ self._structure) % self.pk

    def pow_vec(self, A: np.ndarray, e: int) -> np.ndarray:
        if e < 0:
            raise ValueError("negative exponent")
        result = np.broadcast_to(self.one().vec, A.shape).copy()
        base = A.copy()
        while e:
            if e & 1:
                result = self.mul_vec(result, base)
            e >>= 1
            if e:
                base = self.mul_vec(base, base)
        return result

    # -- elements ----------------------------------------------------------------
    def elem(self, vec) -> "WittElem":
        v = np.asarray(vec, dtype=np.int64).reshape(self.D) % self.pk
        return WittElem(self, v)

    def zero(self) -> "WittElem":
        return WittElem(self, np.zeros(self.D, dtype=np.int64))

    def one(self) -> "WittElem":
        v = np.zeros(self.D, dtype=np.int64)
        v[0] = 1
        return WittElem(self, v)

    def from_int(self, n: int) -> "WittElem":
        v = np.zeros(self.D, dtype=np.int64)
        v[0] = n % self.pk
        return WittElem(self, v)

    def lift_rows(self, rows: np.ndarray) -> np.ndarray:
        """Coefficientwise minimal lift of residue rows ``(..., d)`` to ``(..., D)``."""
        rows = np.asarray(rows, dtype=np.int64)
        return self.field.coords(rows).reshape(*rows.shape[:-1], self.D)

    def lift(self, r: Poly) -> "WittElem":
        if r.degree >= self.d:
            raise ValueError("residue must have degree < d")
        return WittElem(self, self.lift_rows(r.padded(self.d)))

    def teichmuller_rows(self, rows: np.ndarray) -> np.ndarray:
        """Teichmueller lifts of residue rows: lift, then k-1 times x -> x^(q^d)."""
        x = self.lift_rows(rows)
        for _ in range(self.k - 1):
            x = self.pow_vec(x, self.qd)
        return x

    def teichmuller(self, r: Poly) -> "WittElem":
        if r.degree >= self.d:
            r = divmod(r, self.P)[1]
        return WittElem(self, self.teichmuller_rows(r.padded(self.d)[None, :])[0])

    def reduce_rows_mod_p(self, vecs: np.ndarray) -> np.ndarray:
        co = (vecs % self.p).reshape(*vecs.shape[:-1], self.d, self.s)
        return self.field.index(co)


@dataclass(frozen=True, eq=False)
class WittElem:
    ctx: WittCtx
    vec: np.ndarray

    @property
    def coeffs(self) -> np.ndarray:
        """``(d, s)`` view: coefficient of ``T^i`` as a vector over Z/p^k."""
        return self.vec.reshape(self.ctx.d, self.ctx.s)

    def _other(self, other) -> np.ndarray:
        if isinstance(other, WittElem):
            if other.ctx != self.ctx:
                raise ValueError("mixed Witt contexts")
            return other.vec
        if isinstance(other, (int, np.integer)):
            return self.ctx.from_int(int(other)).vec
        raise TypeError(f"cannot combine WittElem with {type(other).__name__}")

    def __add__(self, other):
        return WittElem(self.ctx, (self.vec + self._other(other)) % self.ctx.pk)

    __radd__ = __add__

    def __sub__(self, other):
        return WittElem(self.ctx, (self.vec - self._other(other)) % self.ctx.pk)

    def __rsub__(self, other):
        return WittElem(self.ctx, (self._other(other) - self.vec) % self.ctx.pk)

    def __neg__(self):
        return WittElem(self.ctx, (-self.vec) % self.ctx.pk)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return WittElem(self.ctx, (self.vec * (int(other) % self.ctx.pk)) % self.ctx.pk)
        return WittElem(self.ctx, self.ctx.mul_vec(self.vec, self._other(other)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return WittElem(self.ctx, self.ctx.pow_vec(self.vec, e))

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.ctx.from_int(int(other))
        if not isinstance(other, WittElem):
            return NotImplemented
        return self.ctx == other.ctx and np.array_equal(self.vec, other.vec)

    def __hash__(self):
        return hash((self.ctx, self.vec.tobytes()))

    def is_zero(self) -> bool:
        return not self.vec.any()

    def divisible_by_p_power(self, e: int) -> bool:
        if e > self.ctx.k:
            raise PrecisionError(f"cannot test divisibility by p^{e} at precision p^{self.ctx.k}")
        return not (self.vec % self.ctx.p**e).any()

    def reduce_mod_p(self) -> Poly:
        return Poly(self.ctx.field, self.ctx.reduce_rows_mod_p(self.vec), self.ctx.P.var)

    def reduce_precision(self, ctx: WittCtx) -> "WittElem":
        if ctx.field != self.ctx.field or ctx.P != self.ctx.P or ctx.k > self.ctx.k:
            raise PrecisionError("can only reduce to a lower precision of the same ring")
        return WittElem(ctx, self.vec % ctx.pk)

    def __repr__(self):
        return f"WittElem({self.coeffs.tolist()}, mod {self.ctx.pk})"


def make_witt_ctx(field: FieldSpec, P: Poly, k: int = 2) -> WittCtx:
    return WittCtx(field, P, k)


def teichmuller(r: Poly, ctx: WittCtx) -> WittElem:
    return ctx.teichmuller(r)


# -- the p-th cyclotomic extension ----------------------------------------------------

class CycloCtx:
    """W = W_0[z]/(1 + z + ... + z^(p-1)) over a :class:`WittCtx`."""

    def __init__(self, witt: WittCtx):
        self.witt = witt
        self.p = witt.p
        self.r = self.p - 1  # rank over W_0

    def __eq__(self, other):
        return isinstance(other, CycloCtx) and self.witt == other.witt

    def __hash__(self):
        return hash(("cyclo", self.witt))

    @cached_property
    def _zpow(self) -> np.ndarray:
        """Row t = coordinates of z^t (t in [0, p)) in the basis z^0..z^(p-2)."""
        p, r = self.p, self.r
        Z = np.zeros((p, r), dtype=np.int64)
        for t in range(r):
            Z[t, t] = 1
        Z[p - 1, :] = -1
        return Z % self.witt.pk

    def zpow_coords(self, t: int) -> np.ndarray:
        return self._zpow[t % self.p]

    def elem(self, arr) -> "CycloElem":
        a = np.asarray(arr, dtype=np.int64).reshape(self.r, self.witt.D) % self.witt.pk
        return CycloElem(self, a)

    def embed(self, w: WittElem) -> "CycloElem":
        if w.ctx != self.witt:
            raise ValueError("mixed Witt contexts")
        a = np.zeros((self.r, self.witt.D), dtype=np.int64)
        a[0] = w.vec
        return CycloElem(self, a)

    def zeta(self) -> "CycloElem":
        a = np.zeros((self.r, self.witt.D), dtype=np.int64)
        a[:, 0] = self.zpow_coords(1)
        return CycloElem(self, a % self.witt.pk)

    def one(self) -> "CycloElem":
        return self.embed(self.witt.one())

    def from_z_sum(self, parts: np.ndarray) -> "CycloElem":
        """``sum_t z^t * parts[t]`` for a ``(p, D)`` array of W_0 vectors."""
        arr = np.einsum("tr,td->rd", self._zpow, parts) % self.witt.pk
        return CycloElem(self, arr)

    def mul_arr(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        r = self.r
        prod = self.witt.mul_vec(A[:, None, :], B[None, :, :])  # (r, r, D)
        parts = np.zeros((self.p, self.witt.D), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                parts[(i + j) % self.p] += prod[i, j]
        return np.einsum("tr,td->rd", self._zpow, parts % self.witt.pk) % self.witt.pk

    def conjugate_arr(self, A: np.ndarray, j: int) -> np.ndarray:
        """Image under the automorphism z -> z^j."""
        parts = np.zeros((self.p, self.witt.D), dtype=np.int64)
        for t in range(self.r):
            parts[(t * j) % self.p] += A[t]
        return np.einsum("tr,td->rd", self._zpow, parts % self.witt.pk) % self.witt.pk


@dataclass(frozen=True, eq=False)
class CycloElem:
    ctx: CycloCtx
    arr: np.ndarray  # (p-1, D)

    def _other(self, other) -> np.ndarray:
        if isinstance(other, CycloElem):
            if other.ctx != self.ctx:
                raise ValueError("mixed contexts")
            return other.arr
        if isinstance(other, WittElem):
            return self.ctx.embed(other).arr
        if isinstance(other, (int, np.integer)):
            return self.ctx.embed(self.ctx.witt.from_int(int(other))).arr
        raise TypeError(f"cannot combine CycloElem with {type(other).__name__}")

    def __add__(self, other):
        return CycloElem(self.ctx, (self.arr + self._other(other)) % self.ctx.witt.pk)

    __radd__ = __add__

    def __sub__(self, other):
        return CycloElem(self.ctx, (self.arr - self._other(other)) % self.ctx.witt.pk)

    def __rsub__(self, other):
        return CycloElem(self.ctx, (self._other(other) - self.arr) % self.ctx.witt.pk)

    def __neg__(self):
        return CycloElem(self.ctx, (-self.arr) % self.ctx.witt.pk)

    def __mul__(self, other):
        return CycloElem(self.ctx, self.ctx.mul_arr(self.arr, self._other(other)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result, base = self.ctx.one(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, CycloElem):
            return NotImplemented
        return self.ctx == other.ctx and np.array_equal(self.arr, other.arr)

    def __hash__(self):
        return hash((self.ctx, self.arr.tobytes()))

    def is_zero(self) -> bool:
        return not self.arr.any()

    def conjugate(self, j: int) -> "CycloElem":
        return CycloElem(self.ctx, self.ctx.conjugate_arr(self.arr, j))

    def __repr__(self):
        return f"CycloElem({self.arr.tolist()}, mod {self.ctx.witt.pk})"


def norm_to_witt(x: CycloElem) -> WittElem:
    """Norm from W down to W_0: the product of the p-1 conjugates of ``x``."""
    ctx = x.ctx
    acc = ctx.one().arr
    for j in range(1, ctx.p):
        acc = ctx.mul_arr(acc, ctx.conjugate_arr(x.arr, j))
    assert not acc[1:].any(), "norm left W_0"
    return WittElem(ctx.witt, acc[0])


def pi_divisible(x: CycloElem, e: int) -> bool:
    """Whether ``(zeta_p - 1)^e`` divides ``x``, for e <= k and odd p.

    W/W_0 is totally ramified of degree p-1 with uniformizer zeta_p - 1 of
    norm p (up to a unit), so the test reduces to ``p^e | N(x)``.
    """
    if x.ctx.p == 2:
        raise ValueError("pi-divisibility is only defined here for odd p")
    if e > x.ctx.witt.k:
        raise PrecisionError(f"need precision k >= {e}, have {x.ctx.witt.k}")
    return norm_to_witt(x).divisible_by_p_power(e)

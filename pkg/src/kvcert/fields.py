"""Finite fields F_q = F_p[x]/(g) with table-driven arithmetic.

Elements are addressed two ways.  The public :class:`FqElem` carries its
coordinates ``(c_0, ..., c_{s-1})`` with respect to the power basis
``1, a, ..., a^{s-1}``.  Internally every element is a small integer *index*
``c_0 + c_1 p + ... + c_{s-1} p^{s-1}``; the addition, multiplication and
negation tables are indexed by it, which is what the numeric kernels consume.

``enumerate()`` yields elements in index order, i.e. ``c_0`` varies fastest.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

GENERATOR_SYMBOL = "a"

# q x q int64 tables; above this the memory cost stops being negligible.
MAX_TABLE_ORDER = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p^s``; raises :class:`FieldError` if ``q`` is no prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    s, r = 0, q
    while r % p == 0:
        r //= p
        s += 1
    if r != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, s


# -- tiny dense polynomial helpers over F_p (ascending int tuples) --------------

def _fp_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _fp_trim([x % p for x in a])
    b = _fp_trim([x % p for x in b])
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for j, bj in enumerate(b):
            a[shift + j] = (a[shift + j] - c * bj) % p
        _fp_trim(a)
    return a


def _fp_is_irreducible(g: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(g)/2."""
    n = len(g) - 1
    if n < 1:
        return False
    for deg in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not _fp_mod(g, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, s: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``s`` over F_p.

    Coefficients are compared low-to-high: ``c_0`` is the most significant key.
    """
    for low in itertools.product(range(p), repeat=s):
        g = tuple(low) + (1,)
        if _fp_is_irreducible(g, p):
            return g
    raise FieldError(f"no irreducible polynomial of degree {s} over F_{p}")  # unreachable


# -- the field ----------------------------------------------------------------

class FieldSpec:
    """The finite field with ``q = p^s`` elements.

    ``modulus`` is the ascending coefficient tuple of the defining polynomial
    ``g`` (length ``s + 1``), or ``None`` for a prime field.
    """

    generator_symbol = GENERATOR_SYMBOL

    def __init__(self, p: int, s: int, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if s < 1:
            raise FieldError("extension degree must be >= 1")
        self.p = p
        self.s = s
        self.q = p**s
        if self.q > MAX_TABLE_ORDER:
            raise FieldError(f"q = {self.q} exceeds the supported order {MAX_TABLE_ORDER}")
        if s == 1:
            if modulus is not None and len(modulus) != 2:
                raise FieldError("a prime field takes no modulus (or a monic linear one)")
            self.modulus: tuple[int, ...] | None = None
        else:
            if modulus is None:
                modulus = smallest_irreducible(p, s)
            g = tuple(int(c) % p for c in modulus)
            if len(g) != s + 1 or g[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {s}")
            if not _fp_is_irreducible(g, p):
                raise FieldError("modulus is reducible over F_p")
            self.modulus = g

    # identity
    def _key(self):
        return (self.p, self.s, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.modulus is None:
            return f"FieldSpec(F_{self.p})"
        return f"FieldSpec(F_{self.q} = F_{self.p}[a]/({self.modulus_text()}))"

    def modulus_text(self) -> str | None:
        if self.modulus is None:
            return None
        return _format_fp_poly(self.modulus, GENERATOR_SYMBOL)

    # coordinates <-> indices
    @cached_property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.s, dtype=np.int64)

    def coords(self, idx):
        """Coordinates of index array ``idx``; appends a trailing axis of length s."""
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._powers) % self.p

    def index(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64) % self.p
        return coords @ self._powers

    # tables
    @cached_property
    def _mul_table_raw(self) -> np.ndarray:
        q, p, s = self.q, self.p, self.s
        co = self.coords(np.arange(q))
        if s == 1:
            return np.outer(np.arange(q), np.arange(q)) % p
        prod = np.zeros((q, q, 2 * s - 1), dtype=np.int64)
        for u in range(s):
            for v in range(s):
                prod[:, :, u + v] += np.outer(co[:, u], co[:, v])
        g = np.array(self.modulus, dtype=np.int64)
        for t in range(2 * s - 2, s - 1, -1):
            lead = prod[:, :, t] % p
            prod[:, :, t - s : t] -= lead[:, :, None] * g[:s]
            prod[:, :, t] = 0
        return self.index(prod[:, :, :s] % p)

    @cached_property
    def add_table(self) -> np.ndarray:
        co = self.coords(np.arange(self.q))
        return self.index(co[:, None, :] + co[None, :, :])

    @cached_property
    def mul_table(self) -> np.ndarray:
        return np.ascontiguousarray(self._mul_table_raw, dtype=np.int64)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.index(-self.coords(np.arange(self.q)))

    @cached_property
    def sub_table(self) -> np.ndarray:
        return np.ascontiguousarray(self.add_table[:, self.neg_table])

    @cached_property
    def inv_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        rows, cols = np.nonzero(self.mul_table == 1)
        inv[rows] = cols
        return inv

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Absolute trace of every element, as residues in [0, p)."""
        out = np.zeros(self.q, dtype=np.int64)
        for x in range(self.q):
            acc, y = 0, x
            for _ in range(self.s):
                acc = self.add_table[acc, y]
                y = self._pow_idx(y, self.p)
            c = self.coords(acc)
            assert not c[1:].any(), "trace left the prime field"
            out[x] = c[0]
        return out

    def _pow_idx(self, x: int, e: int) -> int:
        r, b = 1, int(x)
        while e:
            if e & 1:
                r = int(self.mul_table[r, b])
            b = int(self.mul_table[b, b])
            e >>= 1
        return r

    def from_int(self, n: int) -> int:
        """Index of the prime-field image of the integer ``n``."""
        return int(n) % self.p

    # vectorized reductions over index arrays
    def sum(self, idx, axis=0, weights=None) -> np.ndarray:
        """Field sum of ``idx`` along ``axis``; optional integer weights (embedded via F_p)."""
        co = self.coords(idx)
        if weights is not None:
            w = np.asarray(weights, dtype=np.int64)
            shape = [1] * co.ndim
            shape[axis] = -1
            co = co * w.reshape(shape)
        return self.index(co.sum(axis=axis) % self.p)

    # element constructors
    def element(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            return FqElem(self, tuple(int(c) for c in self.coords(self.from_int(value))))
        coords = tuple(int(c) % self.p for c in value)
        if len(coords) != self.s:
            raise FieldError(f"expected {self.s} coordinates")
        return FqElem(self, coords)

    def from_index(self, idx: int) -> "FqElem":
        return FqElem(self, tuple(int(c) for c in self.coords(int(idx))))

    def zero(self) -> "FqElem":
        return self.from_index(0)

    def one(self) -> "FqElem":
        return self.from_index(1)

    def gen(self) -> "FqElem":
        """The class of ``a`` in F_p[a]/(g)."""
        if self.s == 1:
            raise FieldError("a prime field has no generator symbol")
        return self.from_index(self.p)

    def enumerate(self) -> Iterator["FqElem"]:
        for i in range(self.q):
            yield self.from_index(i)

    # text
    def format_index(self, idx: int) -> str:
        c = [int(x) for x in self.coords(int(idx))]
        if self.s == 1:
            return str(c[0])
        return _format_fp_poly(c, GENERATOR_SYMBOL)

    def parse_element(self, text: str) -> int:
        """Parse ``"2"``, ``"a^2"``, ``"a+1"`` ...; returns the element index."""
        from .polyring import parse_fp_poly  # local import, the grammar lives there

        coeffs = parse_fp_poly(text, self.p, GENERATOR_SYMBOL)
        if self.s == 1:
            if len(coeffs) > 1:
                raise FieldError(f"'{GENERATOR_SYMBOL}' is not defined in a prime field")
            return coeffs[0] if coeffs else 0
        reduced = _fp_mod(coeffs, self.modulus, self.p) if coeffs else []
        reduced = list(reduced) + [0] * (self.s - len(reduced))
        return int(self.index(reduced))


def _format_fp_poly(coeffs: Sequence[int], var: str) -> str:
    terms = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = int(coeffs[e])
        if c == 0:
            continue
        if e == 0:
            terms.append(str(c))
            continue
        mono = var if e == 1 else f"{var}^{e}"
        terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


def make_field(p: int, s: int = 1, g: Sequence[int] | None = None) -> FieldSpec:
    return FieldSpec(p, s, g)


def field_of_order(q: int, g: Sequence[int] | None = None) -> FieldSpec:
    p, s = prime_power(q)
    return FieldSpec(p, s, g)


@dataclass(frozen=True)
class FqElem:
    field: FieldSpec
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.field.s or not all(0 <= c < self.field.p for c in self.coords):
            raise FieldError(f"invalid coordinates {self.coords} for {self.field}")

    @property
    def index(self) -> int:
        return int(self.field.index(self.coords))

    def _other(self, other) -> int:
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise FieldError("mixed-field operands")
            return other.index
        return self.field.from_int(other)

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return self.field.from_index(self.field.sub_table[self.index, self._other(other)])

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)

    def __pow__(self, e: int):
        return power(self, e)

    def __truediv__(self, other):
        return mul(self, inv(self.field.element(other)))

    def __bool__(self):
        return any(self.coords)

    def __str__(self):
        return self.field.format_index(self.index)


def _check_same(a: FqElem, b) -> None:
    if isinstance(b, FqElem) and a.field != b.field:
        raise FieldError("mixed-field operands")


def add(a: FqElem, b) -> FqElem:
    _check_same(a, b)
    return a.field.from_index(a.field.add_table[a.index, a._other(b)])


def mul(a: FqElem, b) -> FqElem:
    _check_same(a, b)
    return a.field.from_index(a.field.mul_table[a.index, a._other(b)])


def neg(a: FqElem) -> FqElem:
    return a.field.from_index(a.field.neg_table[a.index])


def inv(a: FqElem) -> FqElem:
    if not a:
        raise ZeroDivisionError("inverse of zero in a finite field")
    return a.field.from_index(a.field.inv_table[a.index])


def power(a: FqElem, e: int) -> FqElem:
    if e < 0:
        a, e = inv(a), -e
    return a.field.from_index(a.field._pow_idx(a.index, e))


def trace(a: FqElem) -> int:
    """Tr_{F_q/F_p}(a) as a residue in [0, p)."""
    return int(a.field.trace_table[a.index])

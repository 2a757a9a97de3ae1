"""Dense univariate polynomials over F_q, in the variable ``T`` or ``theta``.

Coefficients are stored as an ascending int64 array of field-element indices
(see :mod:`kvcert.fields`).  The zero polynomial has an empty array and degree
``-1``.  :class:`ResidueCtx` fixes a monic modulus ``P`` and offers
reduction, multiplication and exponentiation in ``F_q[T]/(P)``, backed by
the batched kernels.
"""
from __future__ import annotations

import re
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .fields import FieldError, FieldSpec, FqElem, GENERATOR_SYMBOL

VARIABLES = ("T", "theta")


class PolyParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int | None = None):
        if pos is not None:
            message = f"{message} at position {pos}: {text!r}"
        super().__init__(message)
        self.pos = pos


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(c)
    return c[: nz[-1] + 1] if nz.size else c[:0]


class Poly:
    """An element of F_q[T] (or F_q[theta]); immutable."""

    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field: FieldSpec, coeffs: Sequence[int] | np.ndarray = (), var: str = "T"):
        if var not in VARIABLES:
            raise ValueError(f"unknown variable {var!r}")
        arr = np.array(coeffs, dtype=np.int64).reshape(-1)
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise FieldError("coefficient index outside the field")
        arr = _trim(arr)
        arr.setflags(write=False)
        self.field = field
        self.coeffs = arr
        self.var = var

    # constructors
    @classmethod
    def constant(cls, field: FieldSpec, c: int | FqElem, var: str = "T") -> "Poly":
        idx = c.index if isinstance(c, FqElem) else field.from_int(c)
        return cls(field, [idx], var)

    @classmethod
    def monomial(cls, field: FieldSpec, e: int, c: int = 1, var: str = "T") -> "Poly":
        arr = np.zeros(e + 1, dtype=np.int64)
        arr[e] = c
        return cls(field, arr, var)

    @classmethod
    def gen(cls, field: FieldSpec, var: str = "T") -> "Poly":
        return cls.monomial(field, 1, var=var)

    def _like(self, coeffs) -> "Poly":
        return Poly(self.field, coeffs, self.var)

    # basic properties
    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def is_monic(self) -> bool:
        return self.coeffs.size > 0 and self.coeffs[-1] == 1

    @property
    def lead(self) -> int:
        return int(self.coeffs[-1]) if self.coeffs.size else 0

    def coeff(self, i: int) -> FqElem:
        c = int(self.coeffs[i]) if 0 <= i < self.coeffs.size else 0
        return self.field.from_index(c)

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=np.int64)
        out[: self.coeffs.size] = self.coeffs
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (
            self.field == other.field
            and self.var == other.var
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.field, self.var, self.coeffs.tobytes()))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, q={self.field.q})"

    def __str__(self):
        return format_poly(self)

    # ring operations
    def _check(self, other: "Poly") -> None:
        if self.field != other.field or self.var != other.var:
            raise FieldError("mixed-ring operands")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, FqElem):
            return Poly.constant(self.field, other, self.var)
        if isinstance(other, (int, np.integer)):
            return Poly.constant(self.field, int(other), self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(self.coeffs.size, other.coeffs.size)
        return self._like(self.field.add_table[self.padded(n), other.padded(n)])

    __radd__ = __add__

    def __neg__(self):
        return self._like(self.field.neg_table[self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(self.coeffs.size, other.coeffs.size)
        return self._like(self.field.sub_table[self.padded(n), other.padded(n)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._like(poly_mul_coeffs(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        """Multiply by the field element with index ``c``."""
        return self._like(self.field.mul_table[c, self.coeffs])

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        return self._like(poly_pow_coeffs(self.field, self.coeffs, e))

    def __divmod__(self, other):
        return poly_divmod(self, self._coerce(other))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(int(self.field.inv_table[self.lead]))

    def __call__(self, u: "Poly") -> "Poly":
        return compose(self, u)

    def with_var(self, var: str) -> "Poly":
        return Poly(self.field, self.coeffs, var)


# -- coefficient-array arithmetic -----------------------------------------------

def poly_mul_coeffs(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    p, s = field.p, field.s
    if s == 1:
        return np.convolve(a, b) % p
    A, B = field.coords(a), field.coords(b)
    C = np.zeros((a.size + b.size - 1, 2 * s - 1), dtype=np.int64)
    for u in range(s):
        for v in range(s):
            C[:, u + v] += np.convolve(A[:, u], B[:, v])
    g = np.array(field.modulus, dtype=np.int64)
    for t in range(2 * s - 2, s - 1, -1):
        lead = C[:, t] % p
        C[:, t - s : t] -= lead[:, None] * g[:s]
    return field.index(C[:, :s] % p)


def frobenius_coeffs(field: FieldSpec, a: np.ndarray, j: int) -> np.ndarray:
    """Coefficients of ``a^(p^j)``: Frobenius on coefficients, ``T -> T^(p^j)``."""
    if a.size == 0:
        return a
    stride = field.p**j
    c = a.copy()
    for _ in range(j % field.s):
        c = np.array([field._pow_idx(int(x), field.p) for x in c], dtype=np.int64)
    out = np.zeros((a.size - 1) * stride + 1, dtype=np.int64)
    out[::stride] = c
    return out


def poly_pow_coeffs(field: FieldSpec, a: np.ndarray, e: int) -> np.ndarray:
    """Exact ``a^e`` using the base-p digits of ``e`` and the Frobenius."""
    result = np.ones(1, dtype=np.int64)
    j = 0
    while e:
        e, digit = divmod(e, field.p)
        if digit:
            f = frobenius_coeffs(field, a, j)
            for _ in range(digit):
                result = poly_mul_coeffs(field, result, f)
        j += 1
    return _trim(result)


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    field = a.field
    rem = a.coeffs.copy()
    db = b.degree
    if a.degree < db:
        return a._like([]), a
    quot = np.zeros(a.degree - db + 1, dtype=np.int64)
    inv_lead = int(field.inv_table[b.lead])
    bc = b.coeffs
    for t in range(a.degree, db - 1, -1):
        c = int(rem[t])
        if c == 0:
            continue
        c = int(field.mul_table[c, inv_lead])
        quot[t - db] = c
        rem[t - db : t + 1] = field.sub_table[rem[t - db : t + 1], field.mul_table[c, bc]]
    return a._like(quot), a._like(rem[:db])


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, divmod(a, b)[1]
    return a.monic()


def compose(P: Poly, u: Poly) -> Poly:
    """``P(u)`` by Horner's rule; the result lives in ``u``'s variable."""
    if P.field != u.field:
        raise FieldError("mixed-field operands")
    acc = u._like([])
    for c in P.coeffs[::-1]:
        acc = acc * u + u._like([int(c)])
    return acc


# -- residue rings ----------------------------------------------------------------

class ResidueCtx:
    """Arithmetic in ``F_q[T]/(P)`` for a monic ``P`` of degree ``d >= 1``.

    Residues are length-``d`` int64 rows; the batch methods take ``(N, d)``.
    """

    def __init__(self, P: Poly):
        if P.degree < 1 or not P.is_monic():
            raise ValueError("modulus must be monic of degree >= 1")
        self.P = P
        self.field = P.field
        self.d = P.degree
        self._modulus = np.ascontiguousarray(P.coeffs, dtype=np.int64)
        f = self.field
        self._tables = (f.add_table, f.mul_table, f.sub_table)

    def residue(self, a: Poly) -> np.ndarray:
        """Row of ``a mod P``."""
        if a.degree >= self.d:
            a = divmod(a, self.P)[1]
        return a.padded(self.d)

    def reduce_rows(self, rows: np.ndarray) -> np.ndarray:
        """Batched reduction of coefficient rows ``(N, L)`` to ``(N, d)``."""
        d, f = self.d, self.field
        work = np.array(rows, dtype=np.int64)
        if work.shape[1] < d:
            out = np.zeros((work.shape[0], d), dtype=np.int64)
            out[:, : work.shape[1]] = work
            return out
        low = self._modulus[:d][None, :]
        for top in range(work.shape[1] - 1, d - 1, -1):
            lead = work[:, top : top + 1]
            work[:, top - d : top] = f.sub_table[work[:, top - d : top], f.mul_table[lead, low]]
        return work[:, :d].copy()

    def to_poly(self, row: np.ndarray) -> Poly:
        return Poly(self.field, row, self.P.var)

    def reduce(self, a: Poly) -> Poly:
        return self.to_poly(self.residue(a))

    def mul(self, a: Poly, b: Poly) -> Poly:
        out = self.batch_mulmod(self.residue(a)[None, :], self.residue(b)[None, :])
        return self.to_poly(out[0])

    def powmod(self, a: Poly, e: int) -> Poly:
        return self.to_poly(self.batch_powmod(self.residue(a)[None, :], e)[0])

    def batch_mulmod(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return _kernels.batch_mulmod(a, b, self._modulus, *self._tables)

    def batch_powmod(self, base: np.ndarray, e: int) -> np.ndarray:
        return _kernels.batch_powmod(base, e, self._modulus, *self._tables)


def powmod(a: Poly, e: int, ctx: ResidueCtx) -> Poly:
    return ctx.powmod(a, e)


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: Poly) -> bool:
    """Rabin's irreducibility test for a monic polynomial of degree >= 1."""
    if f.degree < 1 or not f.is_monic():
        raise ValueError("Rabin's test needs a monic non-constant polynomial")
    n = f.degree
    ctx = ResidueCtx(f)
    q = f.field.q
    x = ctx.reduce(Poly.gen(f.field, f.var))
    # frob[j] = T^(q^j) mod f
    frob = [x]
    for _ in range(n):
        frob.append(ctx.powmod(frob[-1], q))
    if frob[n] != x:
        return False
    for r in _prime_factors(n):
        g = gcd(frob[n // r] - x, f)
        if g.degree != 0:
            return False
    return True


def is_irreducible_bruteforce(f: Poly) -> bool:
    """Trial division by every monic of degree <= deg(f)/2 (test oracle)."""
    for m in range(1, f.degree // 2 + 1):
        for g in enumerate_monic(f.field, m, f.var):
            if divmod(f, g)[1].is_zero():
                return False
    return f.degree >= 1


# -- enumeration ----------------------------------------------------------------

def monic_array(field: FieldSpec, m: int) -> np.ndarray:
    """All ``q^m`` monic polynomials of degree ``m`` as rows of length ``m + 1``.

    Row ``j`` has low coefficients equal to the base-q digits of ``j``, so the
    constant coefficient varies fastest.
    """
    q = field.q
    j = np.arange(q**m, dtype=np.int64)
    out = np.empty((q**m, m + 1), dtype=np.int64)
    for i in range(m):
        out[:, i] = (j // q**i) % q
    out[:, m] = 1
    return out


def enumerate_monic(field: FieldSpec, m: int, var: str = "T") -> Iterator[Poly]:
    for row in monic_array(field, m):
        yield Poly(field, row, var)


# -- Artin-Schreier norm ------------------------------------------------------------

def norm_theta(a: Poly, p: int | None = None) -> Poly:
    """Norm from F_q[theta] to F_q[T] where ``theta^p - theta = T``.

    Forms ``prod_{c in F_p} a(theta - c)`` and rewrites it in base
    ``theta^p - theta``; every digit must be constant.
    """
    field = a.field
    if p is not None and p != field.p:
        raise ValueError("p must be the characteristic of the coefficient field")
    p = field.p
    theta = Poly.gen(field, "theta")
    a = a.with_var("theta")
    prod = Poly.constant(field, 1, "theta")
    for c in range(p):
        prod = prod * compose(a, theta - c)
    base = Poly.monomial(field, p, var="theta") - theta
    digits = []
    rest = prod
    while not rest.is_zero():
        rest, digit = divmod(rest, base)
        assert digit.degree <= 0, "digit not constant"
        digits.append(int(digit.coeffs[0]) if digit.degree == 0 else 0)
    return Poly(field, digits, "T")


def _batch_mul_rows(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, la = a.shape
    lb = b.shape[1]
    out = np.zeros((n, la + lb - 1), dtype=np.int64)
    add, mul = field.add_table, field.mul_table
    for i in range(la):
        out[:, i : i + lb] = add[out[:, i : i + lb], mul[a[:, i : i + 1], b]]
    return out


def norm_theta_rows(field: FieldSpec, rows: np.ndarray) -> np.ndarray:
    """Batched :func:`norm_theta` for the theta-polynomials in ``rows`` (N, m+1).

    Returns ``(N, m+1)`` T-coefficients.  Same construction as the scalar
    version: product of the p shifts, then base ``theta^p - theta`` digits.
    """
    add, mul, sub = field.add_table, field.mul_table, field.sub_table
    p = field.p
    n, width = rows.shape
    prod = np.ones((n, 1), dtype=np.int64)
    for c in range(p):
        negc = field.neg_table[field.from_int(c)]
        # Horner: shifted = a(theta - c)
        acc = np.zeros((n, width), dtype=np.int64)
        for i in range(width - 1, -1, -1):
            nxt = np.zeros((n, width), dtype=np.int64)
            nxt[:, 1:] = acc[:, :-1]
            nxt = add[nxt, mul[negc, acc]]
            nxt[:, 0] = add[nxt[:, 0], rows[:, i]]
            acc = nxt
        prod = _batch_mul_rows(field, prod, acc)
    one = 1
    digits = np.zeros((n, width), dtype=np.int64)
    rest = prod
    for t in range(width):
        # rest = quot * (theta^p - theta) + digit
        length = rest.shape[1]
        work = rest.copy()
        quot = np.zeros((n, max(length - p, 1)), dtype=np.int64)
        for top in range(length - 1, p - 1, -1):
            lead = work[:, top]
            quot[:, top - p] = lead
            work[:, top - p + 1] = add[work[:, top - p + 1], mul[lead, one]]
            work[:, top] = 0
        assert not work[:, 1:].any(), "digit not constant"
        digits[:, t] = work[:, 0]
        rest = quot
    assert not rest.any(), "norm has unexpected degree"
    return digits


def substitute_artin_schreier(a: Poly) -> Poly:
    """Image of ``a(T)`` in F_q[theta] under ``T -> theta^p - theta``."""
    theta = Poly.gen(a.field, "theta")
    return compose(a.with_var("T"), Poly.monomial(a.field, a.field.p, var="theta") - theta)


# -- text ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(.))")


class _Parser:
    """Recursive descent for ``poly := term (('+'|'-') term)*``.

    A term is a ``*``-product of factors; a factor is an unsigned integer,
    the variable (optionally ``^k``), the field generator ``a`` (optionally
    ``^k``) or a parenthesized field element such as ``(a+1)``.
    """

    def __init__(self, text: str, field: FieldSpec, var: str):
        self.text = text
        self.field = field
        self.var = var
        self.tokens = []
        for m in _TOKEN.finditer(text):
            if m.group(0).strip() == "":
                continue
            kind = "num" if m.group(1) else "id" if m.group(2) else "sym"
            self.tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        self.i = 0

    def error(self, msg: str, pos: int | None = None):
        if pos is None:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise PolyParseError(msg, self.text, pos)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_sym(self, s: str):
        kind, val, pos = self.take()
        if kind != "sym" or val != s:
            self.error(f"expected '{s}'", pos)

    def uint(self) -> int:
        kind, val, pos = self.take()
        if kind != "num":
            self.error("expected an unsigned integer", pos)
        return int(val)

    def parse(self) -> dict[int, int]:
        if not self.tokens:
            self.error("empty polynomial", 0)
        terms: dict[int, int] = {}
        sign = 1
        kind, val, _ = self.peek()
        if kind == "sym" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        while True:
            e, c = self.term()
            if sign < 0:
                c = int(self.field.neg_table[c])
            terms[e] = int(self.field.add_table[terms.get(e, 0), c])
            kind, val, pos = self.peek()
            if kind is None or (kind == "sym" and val == ")"):
                return terms
            if kind == "sym" and val in "+-":
                self.take()
                sign = -1 if val == "-" else 1
                continue
            self.error("unexpected token", pos)

    def term(self) -> tuple[int, int]:
        e, c = self.factor()
        while self.peek()[0] == "sym" and self.peek()[1] == "*":
            self.take()
            e2, c2 = self.factor()
            e, c = e + e2, int(self.field.mul_table[c, c2])
        return e, c

    def _exponent(self) -> int:
        if self.peek()[0] == "sym" and self.peek()[1] == "^":
            self.take()
            return self.uint()
        return 1

    def factor(self) -> tuple[int, int]:
        kind, val, pos = self.take()
        if kind == "num":
            return 0, self.field.from_int(int(val))
        if kind == "id" and val == self.var:
            return self._exponent(), 1
        if kind == "id" and val == GENERATOR_SYMBOL:
            if self.field.s == 1:
                self.error("coefficient not in field ('a' is undefined over a prime field)", pos)
            k = self._exponent()
            return 0, self.field._pow_idx(self.field.p, k)
        if kind == "sym" and val == "(" and self.var != GENERATOR_SYMBOL:
            terms = self.parse_inner()
            self.expect_sym(")")
            acc = 0
            for e, c in terms.items():
                if self.field.s == 1 and e != 0:
                    self.error("coefficient not in field ('a' is undefined over a prime field)", pos)
                term = int(self.field.mul_table[c, self.field._pow_idx(self.field.p, e)]) if e else c
                acc = int(self.field.add_table[acc, term])
            return 0, acc
        self.error("unexpected token", pos)

    def parse_inner(self) -> dict[int, int]:
        # field element inside parentheses: 'a' is the variable, no further nesting
        terms: dict[int, int] = {}
        sign = 1
        kind, val, _ = self.peek()
        if kind == "sym" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        while True:
            e, c = self.inner_term()
            if sign < 0:
                c = int(self.field.neg_table[c])
            terms[e] = int(self.field.add_table[terms.get(e, 0), c])
            kind, val, pos = self.peek()
            if kind == "sym" and val == ")":
                return terms
            if kind == "sym" and val in "+-":
                self.take()
                sign = -1 if val == "-" else 1
                continue
            self.error("unexpected token in field element", pos)

    def inner_term(self) -> tuple[int, int]:
        e, c = 0, 1
        while True:
            kind, val, pos = self.take()
            if kind == "num":
                c = int(self.field.mul_table[c, self.field.from_int(int(val))])
            elif kind == "id" and val == GENERATOR_SYMBOL:
                e += self._exponent()
            else:
                self.error("unexpected token in field element", pos)
            if self.peek()[0] == "sym" and self.peek()[1] == "*":
                self.take()
                continue
            return e, c


def parse_poly(text: str, field: FieldSpec, var: str = "T") -> Poly:
    """Parse a polynomial such as ``"T^5+a^2*T^4+T^3+a*T^2+a^2"``."""
    if var not in VARIABLES:
        raise ValueError(f"unknown variable {var!r}")
    terms = _Parser(text, field, var).parse()
    if not terms:
        return Poly(field, [], var)
    arr = np.zeros(max(terms) + 1, dtype=np.int64)
    for e, c in terms.items():
        arr[e] = c
    return Poly(field, arr, var)


def parse_fp_poly(text: str, p: int, var: str = GENERATOR_SYMBOL) -> list[int]:
    """Parse a polynomial over the prime field F_p; ascending residues, trimmed."""
    prime = FieldSpec(p, 1)
    terms = _Parser(text, prime, var).parse()
    if not terms:
        return []
    out = [0] * (max(terms) + 1)
    for e, c in terms.items():
        out[e] = c
    while out and out[-1] == 0:
        out.pop()
    return out


def format_poly(f: Poly) -> str:
    """Canonical text: descending powers, canonical coefficients, no '-' signs."""
    if f.is_zero():
        return "0"
    field = f.field
    parts = []
    for e in range(f.degree, -1, -1):
        c = int(f.coeffs[e])
        if c == 0:
            continue
        ctext = field.format_index(c)
        if "+" in ctext:
            ctext = f"({ctext})"
        if e == 0:
            parts.append(ctext)
            continue
        mono = f.var if e == 1 else f"{f.var}^{e}"
        parts.append(mono if c == 1 else f"{ctext}*{mono}")
    return "+".join(parts)

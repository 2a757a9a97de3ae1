"""Counterexample certificates from Artin-Schreier base change.

Given a monic irreducible ``P`` of degree ``d`` over F_q with ``i(P) != 0``
and an exponent ``n``, the prime ``Q(T) = P(T^p - T)`` of degree ``pd`` has a
nonzero ``omega_Q^(-N-1)`` component, ``N = n (q^(pd) - 1)/(q^d - 1)``,
as soon as

* p odd:  P | beta(n) (unless (q-1) | n) and P | gamma(n);
* p = 2:  4 | L(1, omega_P^n) (unless (q-1) | n) and P | gamma(n).

A :class:`Certificate` records every evaluated condition plus the derived
``Q``, ``N`` and character index, and :func:`verify` recomputes all of it.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields as dc_fields
from typing import Union

from .carlitz import beta_mod, gamma, gamma_mod, i_of
from .fields import FieldSpec, field_of_order
from .lfunc import LContext
from .polyring import Poly, ResidueCtx, compose, format_poly, is_irreducible, parse_fp_poly, parse_poly

SKIPPED = "skipped: (q-1)|n"
VACUOUS = "vacuous"

Condition = Union[bool, str, None]


class HypothesisError(ValueError):
    """Malformed input to a theorem engine (not a failed hypothesis)."""


@dataclass
class Certificate:
    q: int
    p: int
    s: int
    field_modulus: str | None
    P: str
    d: int
    n: int
    m: int | None
    i_P: int
    beta_divisible: Condition
    gamma_divisible: bool
    l4_divisible: Condition
    Q: str
    N: int
    modulus: int
    index: int
    theorem: str
    verdict: str

    _BIG = ("n", "N", "modulus", "index")

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in self._BIG:
            out[key] = str(out[key])
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        names = {f.name for f in dc_fields(cls)}
        missing = names - set(data)
        if missing:
            raise ValueError(f"certificate is missing keys: {sorted(missing)}")
        kw = {k: data[k] for k in names}
        for key in cls._BIG:
            kw[key] = int(kw[key])
        return cls(**kw)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))

    @property
    def is_counterexample(self) -> bool:
        return self.verdict == "counterexample"


def normalize_index(N: int, modulus: int) -> int:
    """The representative of ``-N-1`` in ``[0, modulus)``."""
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    return (-N - 1) % modulus


def _validate(P: Poly, n: int) -> None:
    if n < 1:
        raise HypothesisError("n must be >= 1")
    if not P.is_monic() or P.degree < 1:
        raise HypothesisError("P must be monic of positive degree")
    if not is_irreducible(P):
        raise HypothesisError(f"P = {format_poly(P)} is reducible")
    if i_of(P) == 0:
        raise HypothesisError("i(P) = 0; the base change needs i(P) != 0")


def _gamma_divisible(P: Poly, n: int, ctx: ResidueCtx) -> bool:
    if n % (P.field.q**P.degree - 1) == 0:
        # trivial character: the truncated fast path does not apply
        return divmod(gamma(P.field, n), P)[1].is_zero()
    return gamma_mod(n, ctx).is_zero()


def _base_change(P: Poly, n: int) -> tuple[Poly, int, int]:
    field = P.field
    T = Poly.gen(field)
    Q = compose(P, Poly.monomial(field, field.p) - T)
    assert is_irreducible(Q), "Q reducible"
    d = P.degree
    modulus = field.q ** (field.p * d) - 1
    N = n * modulus // (field.q**d - 1)
    assert N * (field.q**d - 1) == n * modulus
    return Q, N, modulus


def _m_of(field: FieldSpec, d: int, n: int) -> int | None:
    unit = (field.q**d - 1) // (field.q - 1)
    return n // unit if n % unit == 0 else None


def _certificate(P: Poly, n: int, beta_c: Condition, gamma_c: bool, l4_c: Condition, theorem: str) -> Certificate:
    field = P.field
    Q, N, modulus = _base_change(P, n)
    conditions = [c for c in (beta_c, gamma_c, l4_c) if isinstance(c, bool)]
    return Certificate(
        q=field.q,
        p=field.p,
        s=field.s,
        field_modulus=field.modulus_text(),
        P=format_poly(P),
        d=P.degree,
        n=n,
        m=_m_of(field, P.degree, n),
        i_P=i_of(P),
        beta_divisible=beta_c,
        gamma_divisible=gamma_c,
        l4_divisible=l4_c,
        Q=format_poly(Q),
        N=N,
        modulus=modulus,
        index=normalize_index(N, modulus),
        theorem=theorem,
        verdict="counterexample" if all(conditions) else "hypotheses-not-satisfied",
    )


def check_kv_odd(P: Poly, n: int) -> Certificate:
    """Evaluate the odd-characteristic criterion for ``(P, n)``."""
    field = P.field
    if field.p == 2:
        raise HypothesisError("check_kv_odd needs odd characteristic")
    _validate(P, n)
    ctx = ResidueCtx(P)
    if n % (field.q - 1) == 0:
        beta_c: Condition = SKIPPED
    else:
        beta_c = beta_mod(n, ctx).is_zero()
    return _certificate(P, n, beta_c, _gamma_divisible(P, n, ctx), None, "4.1")


def check_kv_char2(P: Poly, n: int) -> Certificate:
    """Evaluate the characteristic-2 criterion (4 | L(1, omega_P^n)) for ``(P, n)``."""
    field = P.field
    if field.p != 2:
        raise HypothesisError("check_kv_char2 needs characteristic 2")
    _validate(P, n)
    ctx = ResidueCtx(P)
    if field.q == 2:
        l4: Condition = VACUOUS
    elif n % (field.q - 1) == 0:
        l4 = SKIPPED
    else:
        l4 = LContext(P, n, k=2).lvalue_base().is_zero()
    return _certificate(P, n, None, _gamma_divisible(P, n, ctx), l4, "5.2")


def check_kv(P: Poly, n: int) -> Certificate:
    """Route to the odd or characteristic-2 engine."""
    return check_kv_char2(P, n) if P.field.p == 2 else check_kv_odd(P, n)


def field_from_certificate(cert: Certificate) -> FieldSpec:
    g = parse_fp_poly(cert.field_modulus, cert.p) if cert.field_modulus else None
    field = field_of_order(cert.q, g)
    if (field.p, field.s) != (cert.p, cert.s):
        raise ValueError("inconsistent field description")
    return field


def verify_report(cert: Certificate) -> dict[str, tuple]:
    """Recompute a certificate from (q, field modulus, P, n); returns the mismatches."""
    field = field_from_certificate(cert)
    P = parse_poly(cert.P, field)
    fresh = check_kv(P, cert.n)
    mismatches = {}
    old, new = cert.to_dict(), fresh.to_dict()
    for key in old:
        if key in ("P", "Q"):
            same = parse_poly(old[key], field) == parse_poly(new[key], field)
        else:
            same = old[key] == new[key]
        if not same:
            mismatches[key] = (old[key], new[key])
    if (cert.index + cert.N + 1) % cert.modulus != 0 or not 0 <= cert.index < cert.modulus:
        mismatches["index_congruence"] = (cert.index, cert.N, cert.modulus)
    return mismatches


def verify(cert: Certificate) -> bool:
    return not verify_report(cert)

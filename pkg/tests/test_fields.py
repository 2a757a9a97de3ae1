import itertools

import numpy as np
import pytest
from sympy import Poly as SPoly, symbols

from kvcert.fields import (
    FieldError,
    FieldSpec,
    field_of_order,
    inv,
    make_field,
    prime_power,
    smallest_irreducible,
    trace,
)
from oracles import NaiveField

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64]


def test_prime_power():
    assert prime_power(4) == (2, 2)
    assert prime_power(27) == (3, 3)
    assert prime_power(7) == (7, 1)
    for bad in (0, 1, 6, 12, 100):
        with pytest.raises(FieldError):
            prime_power(bad)


def test_f4_default_modulus_and_arithmetic(F4):
    assert F4.modulus == (1, 1, 1)
    assert F4.modulus_text() == "a^2+a+1"
    a = F4.gen()
    assert str(a * a) == "a+1"
    assert str(inv(a)) == "a+1"
    assert trace(a) == 1
    assert trace(F4.one()) == 0


def test_prime_field_trace_is_identity(F3):
    assert trace(F3.element(2)) == 2
    assert F3.modulus is None


@pytest.mark.parametrize("p,s", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_smallest_irreducible_is_smallest(p, s):
    x = symbols("x")
    g = smallest_irreducible(p, s)
    assert len(g) == s + 1 and g[-1] == 1
    assert SPoly(list(reversed(g)), x, modulus=p).is_irreducible
    # every monic degree-s polynomial earlier in the ordering (c_0 most significant) is reducible
    for low in itertools.product(range(p), repeat=s):
        cand = tuple(low) + (1,)
        if cand < g:
            assert not SPoly(list(reversed(cand)), x, modulus=p).is_irreducible


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27])
def test_tables_match_naive_model(q):
    F = field_of_order(q)
    N = NaiveField(F.p, F.modulus)
    for i in range(q):
        for j in range(q):
            assert F.mul_table[i, j] == N.idx(N.mul(N.elem(i), N.elem(j)))
            assert F.add_table[i, j] == N.idx(N.add(N.elem(i), N.elem(j)))


@pytest.mark.parametrize("q", SMALL_Q)
def test_trace_additive_and_frobenius_invariant(q):
    F = field_of_order(q)
    tr = F.trace_table
    assert np.array_equal(tr[F.add_table], (tr[:, None] + tr[None, :]) % F.p)
    frob = np.array([F._pow_idx(x, F.p) for x in range(q)])
    assert np.array_equal(tr[frob], tr)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_inverse_multiplicative(q):
    F = field_of_order(q)
    nz = np.arange(1, q)
    invt, mul = F.inv_table, F.mul_table
    assert np.all(mul[nz, invt[nz]] == 1)
    assert np.array_equal(invt[mul[nz[:, None], nz[None, :]]], mul[invt[nz][:, None], invt[nz][None, :]])


@pytest.mark.parametrize("q", SMALL_Q)
def test_enumerate(q):
    F = field_of_order(q)
    elems = list(F.enumerate())
    assert len(elems) == q
    assert F.zero() in elems and F.one() in elems


def test_element_text_round_trip():
    for q in (4, 8, 9, 25):
        F = field_of_order(q)
        for i in range(q):
            assert F.parse_element(F.format_index(i)) == i


def test_parse_element_reduces_modulo_g(F4):
    assert F4.format_index(F4.parse_element("a^2")) == "a+1"
    assert F4.format_index(F4.parse_element("a^3")) == "1"


def test_custom_modulus_and_rejection():
    F = make_field(2, 3, (1, 1, 0, 1))
    assert F.modulus_text() == "a^3+a+1"
    with pytest.raises(FieldError):
        make_field(2, 2, (1, 0, 1))  # a^2 + 1 = (a+1)^2


def test_table_cap():
    with pytest.raises(FieldError):
        field_of_order(2**11)


def test_elements_mixed_fields_rejected(F3, F4):
    with pytest.raises(FieldError):
        F3.one() + F4.one()
    with pytest.raises(ZeroDivisionError):
        inv(F4.zero())


def test_field_sum_with_weights(F4):
    idx = np.array([[2], [3], [1]])
    # a + (a+1) + 1 = 0 ; a + 0*(a+1) + 1 = a+1
    assert F4.sum(idx, axis=0)[0] == 0
    assert F4.format_index(int(F4.sum(idx, axis=0, weights=[1, 2, 1])[0])) == "a+1"


def test_fieldspec_equality_and_hash():
    assert field_of_order(9) == FieldSpec(3, 2)
    assert len({field_of_order(9), FieldSpec(3, 2)}) == 1
    assert field_of_order(8) != make_field(2, 3, (1, 1, 0, 1))

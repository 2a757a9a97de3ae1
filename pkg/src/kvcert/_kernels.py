"""Hot loops: batched multiplication and exponentiation in F_q[T]/(P).

Polynomials are int64 rows of field-element indices (ascending degree, length
``d = deg P``); field arithmetic goes through the ``add``/``mul``/``sub``
tables of :class:`~kvcert.fields.FieldSpec`.

Two interchangeable backends exist.  The numba one compiles row-at-a-time
loops; the numpy one vectorizes over the batch axis instead.  Setting
``KVCERT_DISABLE_NUMBA=1`` (or running without numba installed) selects the
numpy path.  Both must return identical arrays.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("KVCERT_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def exponent_bits(e: int) -> np.ndarray:
    """Binary digits of a nonnegative (arbitrary size) integer, most significant first."""
    if e < 0:
        raise ValueError("negative exponent")
    if e == 0:
        return np.zeros(0, dtype=np.uint8)
    return np.frombuffer(bin(e)[2:].encode(), dtype=np.uint8) - ord("0")


# -- numpy backend --------------------------------------------------------------

def _mulmod_np(a, b, modulus, add, mul, sub):
    n, d = a.shape
    tmp = np.zeros((n, 2 * d - 1), dtype=np.int64)
    for i in range(d):
        tmp[:, i : i + d] = add[tmp[:, i : i + d], mul[a[:, i : i + 1], b]]
    low = modulus[:d][None, :]
    for t in range(2 * d - 2, d - 1, -1):
        c = tmp[:, t : t + 1]
        tmp[:, t - d : t] = sub[tmp[:, t - d : t], mul[c, low]]
    return tmp[:, :d].copy()


def _powmod_np(base, bits, modulus, add, mul, sub):
    n, d = base.shape
    acc = np.zeros((n, d), dtype=np.int64)
    acc[:, 0] = 1
    for bit in bits:
        acc = _mulmod_np(acc, acc, modulus, add, mul, sub)
        if bit:
            acc = _mulmod_np(acc, base, modulus, add, mul, sub)
    return acc


# -- numba backend ----------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _mulmod_row(a, b, modulus, add, mul, sub, tmp, out):
        d = a.shape[0]
        for t in range(2 * d - 1):
            tmp[t] = 0
        for i in range(d):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(d):
                bj = b[j]
                if bj != 0:
                    tmp[i + j] = add[tmp[i + j], mul[ai, bj]]
        for t in range(2 * d - 2, d - 1, -1):
            c = tmp[t]
            if c != 0:
                for j in range(d):
                    tmp[t - d + j] = sub[tmp[t - d + j], mul[c, modulus[j]]]
        for t in range(d):
            out[t] = tmp[t]

    @njit(cache=True, nogil=True)
    def _mulmod_nb(a, b, modulus, add, mul, sub):
        n, d = a.shape
        out = np.empty((n, d), dtype=np.int64)
        tmp = np.empty(2 * d - 1, dtype=np.int64)
        for r in range(n):
            _mulmod_row(a[r], b[r], modulus, add, mul, sub, tmp, out[r])
        return out

    @njit(cache=True, nogil=True)
    def _powmod_nb(base, bits, modulus, add, mul, sub):
        n, d = base.shape
        out = np.zeros((n, d), dtype=np.int64)
        tmp = np.empty(2 * d - 1, dtype=np.int64)
        acc = np.empty(d, dtype=np.int64)
        sq = np.empty(d, dtype=np.int64)
        for r in range(n):
            for t in range(d):
                acc[t] = 0
            acc[0] = 1
            b = base[r]
            for k in range(bits.shape[0]):
                _mulmod_row(acc, acc, modulus, add, mul, sub, tmp, sq)
                if bits[k]:
                    _mulmod_row(sq, b, modulus, add, mul, sub, tmp, acc)
                else:
                    for t in range(d):
                        acc[t] = sq[t]
            for t in range(d):
                out[r, t] = acc[t]
        return out


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def _prep(x):
    return np.ascontiguousarray(x, dtype=np.int64)


def batch_mulmod(a, b, modulus, add, mul, sub, *, use_numba: bool | None = None) -> np.ndarray:
    """Row-wise ``a[r] * b[r] mod P`` for reduced rows of length ``deg P``."""
    a, b, modulus = _prep(a), _prep(b), _prep(modulus)
    if a.shape[1] == 0:
        return a.copy()
    if (HAVE_NUMBA if use_numba is None else use_numba and HAVE_NUMBA):
        return _mulmod_nb(a, b, modulus, add, mul, sub)
    return _mulmod_np(a, b, modulus, add, mul, sub)


def batch_powmod(base, e: int, modulus, add, mul, sub, *, use_numba: bool | None = None) -> np.ndarray:
    """Row-wise ``base[r] ** e mod P``; ``e`` may be any nonnegative Python int."""
    base, modulus = _prep(base), _prep(modulus)
    bits = exponent_bits(e)
    if base.shape[1] == 0:
        return base.copy()
    if (HAVE_NUMBA if use_numba is None else use_numba and HAVE_NUMBA):
        return _powmod_nb(base, bits, modulus, add, mul, sub)
    return _powmod_np(base, bits, modulus, add, mul, sub)

"""Fallback kernels for dense polynomial arithmetic over F_p.

Same contract as the compiled module ``_fastpoly``: polynomials are
ascending coefficient lists of ints in [0, p), the zero polynomial is the
empty list.  Uses numpy vector arithmetic when coefficients fit int64
without overflow, plain big-int loops otherwise.
"""

from __future__ import annotations

import numpy as np

_I64_MAX = 2**63 - 1


def _small(p: int, terms: int) -> bool:
    return (p - 1) * (p - 1) * max(terms, 1) <= _I64_MAX


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def mul(a: list, b: list, p: int) -> list:
    """Product of two polynomials mod p."""
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return []
    if _small(p, min(la, lb)):
        prod = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return _trim([int(v) for v in prod % p])
    acc = [0] * (la + lb - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            acc[i + j] = (acc[i + j] + ai * bj) % p
    return _trim(acc)


def divmod_poly(a: list, m: list, p: int) -> tuple[list, list]:
    """Quotient and remainder of a by m, both mod p; m must be nonzero."""
    la, lm = len(a), len(m)
    if lm == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if la < lm:
        return [], list(a)
    inv_lead = pow(m[-1], p - 2, p)
    if _small(p, 2):
        buf = np.asarray(a, dtype=np.int64)
        mv = np.asarray(m[:-1], dtype=np.int64)
        quo = np.zeros(la - lm + 1, dtype=np.int64)
        for k in range(la - 1, lm - 2, -1):
            c = int(buf[k]) % p
            if c == 0:
                continue
            c = c * inv_lead % p
            quo[k - lm + 1] = c
            buf[k] = 0
            if lm > 1:
                buf[k - lm + 1 : k] = (buf[k - lm + 1 : k] - c * mv) % p
        return _trim([int(v) for v in quo]), _trim([int(v) % p for v in buf[: lm - 1]])
    buf = list(a)
    quo_l = [0] * (la - lm + 1)
    for k in range(la - 1, lm - 2, -1):
        c = buf[k] % p
        if c == 0:
            continue
        c = c * inv_lead % p
        quo_l[k - lm + 1] = c
        buf[k] = 0
        for j in range(lm - 1):
            buf[k - lm + 1 + j] = (buf[k - lm + 1 + j] - c * m[j]) % p
    return _trim(quo_l), _trim([v % p for v in buf[: lm - 1]])


def rem(a: list, m: list, p: int) -> list:
    """Remainder of a mod m (coefficients mod p)."""
    return divmod_poly(a, m, p)[1]


def gcd(a: list, b: list, p: int) -> list:
    """Monic gcd of a and b mod p; gcd(0, 0) = 0."""
    r0, r1 = list(a), list(b)
    while r1:
        r0, r1 = r1, rem(r0, r1, p)
    if not r0:
        return []
    if r0[-1] != 1:
        inv = pow(r0[-1], p - 2, p)
        r0 = [c * inv % p for c in r0]
    return r0


def powmod(base: list, exponent: int, m: list, p: int) -> list:
    """base**exponent mod m via square-and-multiply; exponent >= 0."""
    if len(m) == 0:
        raise ZeroDivisionError("polynomial powmod with zero modulus")
    if exponent < 0:
        raise ValueError("negative exponent")
    if len(m) == 1:
        return []
    result = [1]
    acc = rem(base, m, p)
    e = exponent
    while e:
        if e & 1:
            result = rem(mul(result, acc, p), m, p)
        e >>= 1
        if e:
            acc = rem(mul(acc, acc, p), m, p)
    return result

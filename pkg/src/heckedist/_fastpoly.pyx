# cython: language_level=3
"""Compiled kernels for dense univariate polynomial arithmetic over F_p.

Polynomials are ascending coefficient lists of Python ints already reduced
into [0, p).  The zero polynomial is the empty list.  Primes up to 2^62 are
supported: products are taken in 128-bit intermediates, with a no-overflow
fast path (accumulate first, reduce once) when deg * (p-1)^2 fits in 64 bits.
"""

from libc.stdlib cimport free, malloc

ctypedef unsigned long long u64

cdef extern from *:
    ctypedef unsigned long long u128 "__uint128_t"


cdef u64* _tobuf(list a) except NULL:
    cdef Py_ssize_t n = len(a)
    cdef u64* buf = <u64*> malloc((n if n > 0 else 1) * sizeof(u64))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        buf[i] = <u64> a[i]
    return buf


cdef list _tolist(u64* buf, Py_ssize_t n):
    cdef Py_ssize_t top = n
    while top > 0 and buf[top - 1] == 0:
        top -= 1
    cdef list out = [0] * top
    cdef Py_ssize_t i
    for i in range(top):
        out[i] = buf[i]
    return out


cdef inline bint _smallcase(u64 p, Py_ssize_t terms):
    # safe to accumulate `terms` products of values < p in a u64
    if p >= (<u64> 1) << 31:
        return False
    return (<u128> (p - 1)) * (p - 1) * terms < ((<u128> 1) << 64)


def mul(list a, list b, p_obj):
    """Product of two polynomials mod p."""
    cdef u64 p = <u64> p_obj
    cdef Py_ssize_t la = len(a), lb = len(b)
    if la == 0 or lb == 0:
        return []
    cdef Py_ssize_t n = la + lb - 1
    cdef u64* ab = _tobuf(a)
    cdef u64* bb = _tobuf(b)
    cdef u64* acc = <u64*> malloc(n * sizeof(u64))
    if acc == NULL:
        free(ab); free(bb)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef u64 ai
    cdef u128 t
    for i in range(n):
        acc[i] = 0
    if _smallcase(p, min(la, lb)):
        for i in range(la):
            ai = ab[i]
            if ai == 0:
                continue
            for j in range(lb):
                acc[i + j] += ai * bb[j]
        for i in range(n):
            acc[i] = acc[i] % p
    else:
        for i in range(la):
            ai = ab[i]
            if ai == 0:
                continue
            for j in range(lb):
                t = <u128> acc[i + j] + <u128> ai * bb[j]
                acc[i + j] = <u64> (t % p)
    out = _tolist(acc, n)
    free(ab); free(bb); free(acc)
    return out


cdef u64 _invmod(u64 a, u64 p):
    # extended Euclid; a != 0 mod p, p prime
    cdef long long t = 0, newt = 1
    cdef long long r = <long long> p, newr = <long long> (a % p)
    cdef long long q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt; t = newt; newt = tmp
        tmp = r - q * newr; r = newr; newr = tmp
    if t < 0:
        t += <long long> p
    return <u64> t


cdef int _reduce_inplace(u64* buf, Py_ssize_t la, u64* mb, Py_ssize_t lm,
                         u64 inv_lead, u64 p, bint small, u64** qout) except -1:
    # in-place remainder of buf (length la) by m (length lm); optionally
    # collect the quotient into *qout (length la - lm + 1, caller frees)
    cdef Py_ssize_t k, j, nq = la - lm + 1
    cdef u64 c, f
    cdef u128 t
    cdef u64* q = NULL
    if qout != NULL:
        q = <u64*> malloc((nq if nq > 0 else 1) * sizeof(u64))
        if q == NULL:
            raise MemoryError()
        for k in range(nq if nq > 0 else 0):
            q[k] = 0
        qout[0] = q
    for k in range(la - 1, lm - 2, -1):
        c = buf[k] % p
        buf[k] = c
        if c == 0:
            continue
        c = <u64> ((<u128> c * inv_lead) % p)
        if q != NULL:
            q[k - lm + 1] = c
        buf[k] = 0
        if small:
            for j in range(lm - 1):
                f = mb[j]
                if f:
                    buf[k - lm + 1 + j] += c * (p - f)
        else:
            for j in range(lm - 1):
                f = mb[j]
                if f:
                    t = <u128> buf[k - lm + 1 + j] + <u128> c * (p - f)
                    buf[k - lm + 1 + j] = <u64> (t % p)
    for k in range(lm - 1):
        buf[k] = buf[k] % p
    return 0


def divmod_poly(list a, list m, p_obj):
    """Quotient and remainder of a by m, both mod p; m must be nonzero."""
    cdef u64 p = <u64> p_obj
    cdef Py_ssize_t la = len(a), lm = len(m)
    if lm == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if la < lm:
        return [], list(a)
    cdef u64* ab = _tobuf(a)
    cdef u64* mb = _tobuf(m)
    cdef u64* qb = NULL
    cdef u64 inv_lead = _invmod(mb[lm - 1], p)
    # growth bound: each slot receives < la additions of (p-1)^2
    cdef bint small = _smallcase(p, la + 1)
    try:
        _reduce_inplace(ab, la, mb, lm, inv_lead, p, small, &qb)
        quo = _tolist(qb, la - lm + 1)
        rem_ = _tolist(ab, lm - 1)
    finally:
        free(ab); free(mb)
        if qb != NULL:
            free(qb)
    return quo, rem_


def rem(list a, list m, p_obj):
    """Remainder of a mod m (coefficients mod p)."""
    cdef u64 p = <u64> p_obj
    cdef Py_ssize_t la = len(a), lm = len(m)
    if lm == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if la < lm:
        return list(a)
    cdef u64* ab = _tobuf(a)
    cdef u64* mb = _tobuf(m)
    cdef u64 inv_lead = _invmod(mb[lm - 1], p)
    cdef bint small = _smallcase(p, la + 1)
    try:
        _reduce_inplace(ab, la, mb, lm, inv_lead, p, small, NULL)
        out = _tolist(ab, lm - 1)
    finally:
        free(ab); free(mb)
    return out


def gcd(list a, list b, p_obj):
    """Monic gcd of a and b mod p; gcd(0, 0) = 0."""
    cdef u64 p = <u64> p_obj
    cdef list r0 = list(a), r1 = list(b)
    while r1:
        r0, r1 = r1, rem(r0, r1, p_obj)
    if not r0:
        return []
    cdef u64 lead = <u64> r0[len(r0) - 1]
    if lead == 1:
        return r0
    cdef u64 inv = _invmod(lead, p)
    cdef Py_ssize_t i
    for i in range(len(r0)):
        r0[i] = <u64> ((<u128> (<u64> r0[i]) * inv) % p)
    return r0


def powmod(list base, exponent, list m, p_obj):
    """base**exponent mod m via square-and-multiply; exponent >= 0."""
    if len(m) == 0:
        raise ZeroDivisionError("polynomial powmod with zero modulus")
    if exponent < 0:
        raise ValueError("negative exponent")
    if len(m) == 1:
        return []
    result = [1]
    acc = rem(base, m, p_obj)
    e = exponent
    while e:
        if e & 1:
            result = rem(mul(result, acc, p_obj), m, p_obj)
        e >>= 1
        if e:
            acc = rem(mul(acc, acc, p_obj), m, p_obj)
    return result

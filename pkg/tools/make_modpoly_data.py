#!/usr/bin/env python3
"""Generate classical modular polynomial data files for the package.

Writes src/heckedist/data/modpoly_ell{L}.txt for L in {2, 3, 5, 7, 11, 13}.

Method (exact integer arithmetic throughout): for prime L, the L+1
functions j(L*tau) and j((tau + k)/L), 0 <= k < L, are the roots of
Phi_L(X, j(tau)).  Their power sums have integer q-expansions obtained
from powers of the j-series alone - summing over k kills every
coefficient whose exponent is not a multiple of L - so Newton's
identities give the elementary symmetric functions, each a polynomial in
j recovered by peeling off powers of the j-series.  The result is
validated against the symmetry Phi(X, Y) = Phi(Y, X), the Kronecker
congruence mod L, and (for L = 2) the classical coefficient table.
"""

from __future__ import annotations

import sys
from pathlib import Path

LEVELS = (2, 3, 5, 7, 11, 13)
GUARD = 8  # extra q-precision used purely as a zero-remainder check

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "heckedist" / "data"

PHI2_CLASSICAL = {
    (3, 0): 1,
    (2, 2): -1,
    (2, 1): 1488,
    (2, 0): -162000,
    (1, 1): 40773375,
    (1, 0): 8748000000,
    (0, 0): -157464000000000,
}


def jseries(hi: int) -> dict[int, int]:
    """q-expansion of j as {exponent: coefficient}, exponents -1..hi."""
    n = hi + 2  # working length for the positive-power series

    sigma3 = [0] * (n + 1)
    for d in range(1, n + 1):
        cube = d * d * d
        for mult in range(d, n + 1, d):
            sigma3[mult] += cube
    e4 = [1] + [240 * sigma3[k] for k in range(1, n + 1)]

    # eta-product (1 - q^k) via Euler's pentagonal theorem
    eta = [0] * (n + 1)
    eta[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > n and g2 > n:
            break
        sign = -1 if k % 2 else 1
        if g1 <= n:
            eta[g1] += sign
        if g2 <= n:
            eta[g2] += sign
        k += 1

    def mul_trunc(a: list[int], b: list[int]) -> list[int]:
        out = [0] * (n + 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            top = n - i
            for j, bj in enumerate(b[: top + 1]):
                if bj:
                    out[i + j] += ai * bj
        return out

    eta24 = eta
    for _ in range(3):  # eta^2, eta^4, eta^8
        eta24 = mul_trunc(eta24, eta24)
    eta24 = mul_trunc(mul_trunc(eta24, eta24), eta24)  # eta^24 = (eta^8)^3

    inv = [0] * (n + 1)  # inverse of eta24 (constant term 1)
    inv[0] = 1
    for m in range(1, n + 1):
        acc = 0
        for t in range(1, m + 1):
            if eta24[t]:
                acc += eta24[t] * inv[m - t]
        inv[m] = -acc

    jq = mul_trunc(mul_trunc(mul_trunc(e4, e4), e4), inv)  # j * q
    series = {m - 1: jq[m] for m in range(n + 1) if jq[m]}
    assert series[-1] == 1 and series[0] == 744 and series[1] == 196884
    return {k: v for k, v in series.items() if k <= hi}


def smul(a: dict[int, int], b: dict[int, int], hi: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            if k <= hi:
                out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def sadd(a: dict[int, int], b: dict[int, int], scale: int = 1) -> dict[int, int]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + scale * v
    return {k: v for k, v in out.items() if v}


def modular_polynomial(ell: int) -> dict[tuple[int, int], int]:
    d = ell + 1
    # The d roots of Phi(X, j) split as j(ell*tau) (pole ell) plus the ell
    # functions j((tau+k)/ell) (poles 1/ell).  Power sums of the latter have
    # shallow poles, so Newton's identities stay numerically exact inside a
    # narrow exponent window; j(ell*tau) re-enters by one multiplication.
    window = GUARD + 3 * ell + 2  # validity window for the epsilon chain
    hi = ell * window  # q-precision of j-powers feeding the k-sums
    j = jseries(hi)

    jpow: list[dict[int, int]] = [{0: 1}, dict(j)]
    for _ in range(2, d + 1):
        jpow.append(smul(jpow[-1], j, hi))

    # power sums f_t = sum_k j((tau+k)/ell)^t: pick every ell-th coefficient
    fsums: list[dict[int, int]] = [{}]
    for t in range(1, ell + 1):
        ps = {
            k // ell: ell * v
            for k, v in jpow[t].items()
            if k % ell == 0 and k // ell <= window
        }
        fsums.append(ps)

    # Newton's identities for the ell shallow roots:
    # i eps_i = sum_{t=1..i} (-1)^{t-1} eps_{i-t} f_t
    eps: list[dict[int, int]] = [{0: 1}]
    for i in range(1, ell + 1):
        acc: dict[int, int] = {}
        for t in range(1, i + 1):
            term = smul(eps[i - t], fsums[t], window)
            acc = sadd(acc, term, 1 if t % 2 else -1)
        # each level loses one exponent of validity (poles are depth <= 1)
        valid = window - i
        e_i = {}
        for k, v in acc.items():
            if k > valid:
                continue
            q, r = divmod(v, i)
            assert r == 0, f"ell={ell}: Newton identity not integral at level {i}"
            if q:
                e_i[k] = q
        eps.append(e_i)
    eps.append({})  # eps_{ell+1} = 0: there are only ell shallow roots

    # j(ell*tau), truncated to what the single multiplication below needs
    deep = {ell * k: v for k, v in j.items() if ell * k <= GUARD + 2}

    # elementary symmetric functions of all d roots, windowed to the guard
    elem: list[dict[int, int]] = [{0: 1}]
    for i in range(1, d + 1):
        full = sadd(eps[i], smul(deep, eps[i - 1], GUARD))
        elem.append({k: v for k, v in full.items() if k <= GUARD})

    # each e_i is a polynomial in j of degree <= d: peel off j-powers
    jpow_short = [{k: v for k, v in pw.items() if k <= GUARD} for pw in jpow]
    coeffs: dict[tuple[int, int], int] = {(d, 0): 1}
    for i in range(1, d + 1):
        work = dict(elem[i])
        poly: dict[int, int] = {}
        for deg in range(d, 0, -1):
            c = work.get(-deg, 0)
            if c:
                poly[deg] = c
                work = sadd(work, jpow_short[deg], -c)
        assert all(k >= 0 for k in work), f"ell={ell}: pole left over in e_{i}"
        c0 = work.get(0, 0)
        if c0:
            poly[0] = c0
            work = sadd(work, {0: 1}, -c0)
        assert not work, f"ell={ell}: e_{i} is not a polynomial in j (remainder {work})"
        sign = -1 if i % 2 else 1
        for deg, c in poly.items():
            coeffs[(d - i, deg)] = sign * c

    # symmetry is not built in, so it is a strong correctness check
    for (u, v), c in coeffs.items():
        assert coeffs.get((v, u), 0) == c, f"ell={ell}: asymmetry at {(u, v)}"

    # Kronecker congruence mod ell
    expected = {(d, 0): 1 % ell, (0, d): 1 % ell, (ell, ell): -1 % ell, (1, 1): -1 % ell}
    for (u, v), c in coeffs.items():
        assert c % ell == expected.get((u, v), 0), f"ell={ell}: Kronecker fails at {(u, v)}"

    return {(u, v): c for (u, v), c in coeffs.items() if u >= v and c}


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for ell in LEVELS:
        coeffs = modular_polynomial(ell)
        if ell == 2:
            assert coeffs == PHI2_CLASSICAL, "ell=2 disagrees with the classical table"
        lines = [f"MODPOLY ell={ell}"]
        for (u, v) in sorted(coeffs, reverse=True):
            lines.append(f"{u} {v} {coeffs[(u, v)]}")
        path = OUT_DIR / f"modpoly_ell{ell}.txt"
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path} ({len(coeffs)} coefficients)")
    return 0


if __name__ == "__main__":
    sys.exit(main())

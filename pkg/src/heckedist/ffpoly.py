"""Finite fields F_p and F_{p^2} with dense univariate polynomial arithmetic.

The computational substrate for everything else: gcds, modular powers,
distinct-degree / Cantor-Zassenhaus factorization and root finding with
multiplicity.  Elements of F_p are ints in [0, p); elements of F_{p^2} are
pairs (a, b) meaning a + b*t where t^2 = ns and ns is the smallest
quadratic non-residue mod p.  That basis is fixed so caches and reports
are reproducible across runs.

Polynomials over F_p route their inner loops through the compiled kernels
(see ``kernels``); everything over F_{p^2} stays in plain Python, which is
fine because those polynomials are small in practice.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from . import kernels

MAX_PRIME = 2**62


class FieldMismatchError(ValueError):
    """Operands live over different field specs."""


class NonSquarefreeError(ValueError):
    """Input polynomial was required to be squarefree but is not."""


# deterministic Miller-Rabin, valid for all n < 3.3 * 10^24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n == b:
            return True
        if n % b == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def smallest_nonresidue(p: int) -> int:
    """Smallest quadratic non-residue mod an odd prime p."""
    n = 2
    while pow(n, (p - 1) // 2, p) != p - 1:
        n += 1
    return n


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a mod an odd prime p, or None if a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = smallest_nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@dataclass(frozen=True)
class FiniteFieldSpec:
    """F_p (e=1) or F_{p^2} = F_p[t]/(t^2 - ns) (e=2), p an odd prime < 2^62."""

    p: int
    e: int = 1
    ns: int = 0

    def __post_init__(self):
        if not (1 < self.p < MAX_PRIME and is_prime(self.p)):
            raise ValueError(f"p = {self.p} is not a prime below 2^62")
        if self.e == 1:
            # p = 2 is tolerated for plain factorization work (splitting data
            # for even moduli); the quadratic extension machinery is odd-only
            if self.ns != 0:
                raise ValueError("ns must be 0 for a prime field")
        elif self.e == 2:
            if self.p == 2:
                raise ValueError("quadratic extensions require odd characteristic")
            if not (1 < self.ns < self.p) or pow(self.ns, (self.p - 1) // 2, self.p) != self.p - 1:
                raise ValueError(f"ns = {self.ns} is not a non-residue mod {self.p}")
        else:
            raise ValueError("only extension degrees 1 and 2 are supported")

    @classmethod
    def prime(cls, p: int) -> "FiniteFieldSpec":
        return cls(p, 1, 0)

    @classmethod
    def quadratic(cls, p: int) -> "FiniteFieldSpec":
        return cls(p, 2, smallest_nonresidue(p))

    @property
    def order(self) -> int:
        return self.p**self.e

    # -- element operations; elements are ints (e=1) or (a, b) pairs (e=2) --

    def coerce(self, v):
        p = self.p
        if self.e == 1:
            if isinstance(v, tuple):
                if v[1] % p:
                    raise ValueError("cannot coerce a proper extension element into F_p")
                return v[0] % p
            return int(v) % p
        if isinstance(v, tuple):
            return (v[0] % p, v[1] % p)
        return (int(v) % p, 0)

    def zero(self):
        return 0 if self.e == 1 else (0, 0)

    def one(self):
        return 1 if self.e == 1 else (1, 0)

    def is_zero(self, a) -> bool:
        return a == 0 if self.e == 1 else a == (0, 0)

    def add(self, a, b):
        p = self.p
        if self.e == 1:
            return (a + b) % p
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p)

    def sub(self, a, b):
        p = self.p
        if self.e == 1:
            return (a - b) % p
        return ((a[0] - b[0]) % p, (a[1] - b[1]) % p)

    def neg(self, a):
        p = self.p
        if self.e == 1:
            return (-a) % p
        return ((-a[0]) % p, (-a[1]) % p)

    def mul(self, a, b):
        p = self.p
        if self.e == 1:
            return a * b % p
        # (a0 + a1 t)(b0 + b1 t) with t^2 = ns
        return (
            (a[0] * b[0] + self.ns * (a[1] * b[1] % p)) % p,
            (a[0] * b[1] + a[1] * b[0]) % p,
        )

    def inv(self, a):
        p = self.p
        if self.e == 1:
            if a % p == 0:
                raise ZeroDivisionError("inverse of 0")
            return pow(a, p - 2, p)
        n = (a[0] * a[0] - self.ns * (a[1] * a[1] % p)) % p  # norm a * conj(a)
        if n == 0:
            raise ZeroDivisionError("inverse of 0")
        ninv = pow(n, p - 2, p)
        return (a[0] * ninv % p, (-a[1]) * ninv % p)

    def elt_pow(self, a, k: int):
        if k < 0:
            return self.elt_pow(self.inv(a), -k)
        acc, base = self.one(), a
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return acc

    def conj(self, a):
        """Frobenius x -> x^p; on F_{p^2} this is (a, b) -> (a, -b)."""
        if self.e == 1:
            return a
        return (a[0], (-a[1]) % self.p)

    def random_element(self, rng: random.Random):
        if self.e == 1:
            return rng.randrange(self.p)
        return (rng.randrange(self.p), rng.randrange(self.p))


@dataclass(frozen=True)
class DensePoly:
    """Dense polynomial, ascending coefficients, no trailing zeros."""

    field: FiniteFieldSpec
    coeffs: tuple

    @classmethod
    def make(cls, field: FiniteFieldSpec, coeffs) -> "DensePoly":
        cs = [field.coerce(c) for c in coeffs]
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        return cls(field, tuple(cs))

    @classmethod
    def zero(cls, field) -> "DensePoly":
        return cls(field, ())

    @classmethod
    def one(cls, field) -> "DensePoly":
        return cls(field, (field.one(),))

    @classmethod
    def x(cls, field) -> "DensePoly":
        return cls(field, (field.zero(), field.one()))

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one()

    def monic(self) -> "DensePoly":
        if self.is_zero() or self.is_monic():
            return self
        inv = self.field.inv(self.leading())
        return DensePoly.make(self.field, [self.field.mul(c, inv) for c in self.coeffs])

    def map_field(self, target: FiniteFieldSpec) -> "DensePoly":
        """Reinterpret coefficients in a compatible field (same p)."""
        if target.p != self.field.p:
            raise FieldMismatchError("different characteristic")
        return DensePoly.make(target, self.coeffs)

    def _check(self, other: "DensePoly"):
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other: "DensePoly") -> "DensePoly":
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return DensePoly.make(f, out)

    def __neg__(self) -> "DensePoly":
        f = self.field
        return DensePoly(f, tuple(f.neg(c) for c in self.coeffs))

    def __sub__(self, other: "DensePoly") -> "DensePoly":
        return self + (-other)

    def __mul__(self, other: "DensePoly") -> "DensePoly":
        self._check(other)
        f = self.field
        if self.is_zero() or other.is_zero():
            return DensePoly.zero(f)
        if f.e == 1:
            return DensePoly(f, tuple(kernels.mul(list(self.coeffs), list(other.coeffs), f.p)))
        out = [f.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if f.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return DensePoly.make(f, out)

    def scaled(self, c) -> "DensePoly":
        f = self.field
        c = f.coerce(c)
        return DensePoly.make(f, [f.mul(a, c) for a in self.coeffs])

    def __divmod__(self, other: "DensePoly"):
        self._check(other)
        f = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if f.e == 1:
            q, r = kernels.divmod_poly(list(self.coeffs), list(other.coeffs), f.p)
            return DensePoly(f, tuple(q)), DensePoly(f, tuple(r))
        rem_ = list(self.coeffs)
        dq = len(rem_) - len(other.coeffs)
        if dq < 0:
            return DensePoly.zero(f), self
        quo = [f.zero()] * (dq + 1)
        inv_lead = f.inv(other.leading())
        for k in range(len(rem_) - 1, len(other.coeffs) - 2, -1):
            c = rem_[k]
            if f.is_zero(c):
                continue
            c = f.mul(c, inv_lead)
            quo[k - len(other.coeffs) + 1] = c
            for j, m in enumerate(other.coeffs):
                rem_[k - len(other.coeffs) + 1 + j] = f.sub(
                    rem_[k - len(other.coeffs) + 1 + j], f.mul(c, m)
                )
        return DensePoly.make(f, quo), DensePoly.make(f, rem_[: len(other.coeffs) - 1])

    def __floordiv__(self, other: "DensePoly") -> "DensePoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "DensePoly") -> "DensePoly":
        return divmod(self, other)[1]

    def exact_div(self, other: "DensePoly") -> "DensePoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("division was expected to be exact")
        return q

    def derivative(self) -> "DensePoly":
        f = self.field
        out = []
        for k, c in enumerate(self.coeffs[1:], start=1):
            out.append(f.mul(c, f.coerce(k)))
        return DensePoly.make(f, out)

    def evaluate(self, x):
        """Horner evaluation at x (an element of self.field)."""
        f = self.field
        x = f.coerce(x)
        acc = f.zero()
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def __repr__(self) -> str:
        return f"DensePoly(p={self.field.p}^{self.field.e}, coeffs={list(self.coeffs)})"


def poly_gcd(a: DensePoly, b: DensePoly) -> DensePoly:
    """Monic gcd; poly_gcd(0, 0) = 0."""
    a._check(b)
    f = a.field
    if f.e == 1:
        return DensePoly(f, tuple(kernels.gcd(list(a.coeffs), list(b.coeffs), f.p)))
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_powmod(base: DensePoly, exponent: int, modulus: DensePoly) -> DensePoly:
    """base**exponent mod modulus by square-and-multiply; exponent >= 0."""
    base._check(modulus)
    if modulus.is_zero():
        raise ZeroDivisionError("zero modulus")
    if exponent < 0:
        raise ValueError("negative exponent")
    f = base.field
    if f.e == 1:
        return DensePoly(
            f, tuple(kernels.powmod(list(base.coeffs), exponent, list(modulus.coeffs), f.p))
        )
    result = DensePoly.one(f) % modulus
    acc = base % modulus
    e = exponent
    while e:
        if e & 1:
            result = (result * acc) % modulus
        e >>= 1
        if e:
            acc = (acc * acc) % modulus
    return result


def _pth_root(f: DensePoly) -> DensePoly:
    """For f with f' = 0 (so f = h(x^p)), return h with h^p = f."""
    fld = f.field
    p = fld.p
    out = []
    for k in range(0, f.degree() + 1, p):
        c = f.coeffs[k]
        # p-th root of a coefficient: identity on F_p, Frobenius conj on F_{p^2}
        out.append(c if fld.e == 1 else fld.conj(c))
    return DensePoly.make(fld, out)


def squarefree_part(f: DensePoly) -> DensePoly:
    """Monic radical of f: the product of its distinct irreducible factors."""
    f = f.monic()
    if f.degree() <= 0:
        return f
    d = f.derivative()
    if d.is_zero():
        return squarefree_part(_pth_root(f))
    g = poly_gcd(f, d)
    u = f.exact_div(g)
    if g.degree() == 0:
        return u
    w = g
    while True:
        h = poly_gcd(w, u)
        if h.degree() == 0:
            break
        w = w.exact_div(h)
    if w.degree() == 0:
        return u
    return u * squarefree_part(w)


def _default_seed(g: DensePoly) -> int:
    h = hashlib.sha256(repr((g.field.p, g.field.e, g.coeffs)).encode()).digest()
    return int.from_bytes(h[:8], "big")


def equal_degree_factorize(g: DensePoly, d: int, seed: int | None = None) -> list[DensePoly]:
    """Cantor-Zassenhaus split of a monic squarefree g whose irreducible
    factors all have degree d.  Randomized but deterministic for a fixed
    seed; the default seed is derived from (p, e, coefficients)."""
    if d < 1:
        raise ValueError("factor degree must be positive")
    if g.field.p == 2:
        raise ValueError("equal-degree splitting requires odd characteristic")
    g = g.monic()
    n = g.degree()
    if n < 0:
        raise ValueError("zero polynomial")
    if n == 0:
        return []
    if n % d != 0:
        raise ValueError(f"degree {n} is not a multiple of the factor degree {d}")
    if n == d:
        return [g]
    fld = g.field
    rng = random.Random(_default_seed(g) if seed is None else seed)
    exp = (fld.order**d - 1) // 2
    one = DensePoly.one(fld)
    out: list[DensePoly] = []
    stack = [g]
    while stack:
        h = stack.pop()
        if h.degree() == d:
            out.append(h)
            continue
        if h.degree() % d != 0:
            raise ValueError("split produced a factor of incompatible degree; "
                             "input was not a product of degree-%d irreducibles" % d)
        while True:
            r = DensePoly.make(fld, [fld.random_element(rng) for _ in range(h.degree())])
            if r.degree() < 1:
                continue
            w = poly_powmod(r, exp, h) - one
            u = poly_gcd(w, h)
            if 0 < u.degree() < h.degree():
                break
        stack.append(u)
        stack.append(h.exact_div(u))
    out.sort(key=lambda q: (q.degree(), q.coeffs))
    return out


def distinct_degree_factorize(f: DensePoly) -> list[tuple[int, DensePoly]]:
    """Partition a monic squarefree f into products g_d of its irreducible
    factors of degree exactly d; returns the nonempty (d, g_d) ascending."""
    f = f.monic()
    if f.degree() < 1:
        raise ValueError("input must be nonconstant")
    if poly_gcd(f, f.derivative()).degree() != 0:
        raise NonSquarefreeError("input has a repeated factor")
    fld = f.field
    q = fld.order
    x = DensePoly.x(fld)
    out = []
    w = x % f
    d = 0
    while f.degree() > 0:
        d += 1
        if f.degree() < 2 * d:
            # whatever is left is irreducible of its own degree
            out.append((f.degree(), f))
            break
        w = poly_powmod(w, q, f)
        g = poly_gcd(w - x, f)
        if g.degree() > 0:
            out.append((d, g))
            f = f.exact_div(g)
            w = w % f
    return out


def _roots_linear_factors(g: DensePoly, seed: int | None) -> list:
    """Roots of a monic squarefree product of linear factors."""
    fld = g.field
    return [fld.neg(q.coeffs[0]) for q in equal_degree_factorize(g, 1, seed=seed)]


def _synthetic_div(coeffs: list, root, fld: FiniteFieldSpec):
    """Divide by (x - root); returns (quotient coeffs, remainder)."""
    acc = fld.zero()
    out = [fld.zero()] * (len(coeffs) - 1)
    for k in range(len(coeffs) - 1, -1, -1):
        acc = fld.add(fld.mul(acc, root), coeffs[k])
        if k > 0:
            out[k - 1] = acc
    return out, acc


def roots_in_field(f: DensePoly, target: FiniteFieldSpec, seed: int | None = None) -> list:
    """All roots of f in the target field, with multiplicity, sorted.

    f may live over F_p or F_{p^2}; the target must share the
    characteristic.  Multiplicities are extracted by repeated synthetic
    division (skipped when f is squarefree)."""
    if f.is_zero():
        raise ValueError("the zero polynomial has every element as a root")
    base = f.field
    if base.p != target.p:
        raise FieldMismatchError("target field has different characteristic")
    if base.p == 2:
        raise ValueError("root finding requires odd characteristic")
    if f.degree() < 1:
        return []
    p = base.p
    rad = squarefree_part(f)
    x = DensePoly.x(base)

    roots: list = []
    if base.e == 1:
        xp = poly_powmod(x, p, rad)
        g1 = poly_gcd(xp - x, rad)
        base_roots = _roots_linear_factors(g1, seed)
        if target.e == 1:
            roots = base_roots
        else:
            roots = [(r, 0) for r in base_roots]
            h = rad.exact_div(g1) if g1.degree() > 0 else rad
            if h.degree() > 1:
                xp2 = poly_powmod(poly_powmod(x, p, h), p, h)
                g2 = poly_gcd(xp2 - x, h)
                inv2 = pow(2, p - 2, p)
                inv_ns = pow(target.ns, p - 2, p)
                for quad in equal_degree_factorize(g2, 2, seed=seed):
                    b, c = quad.coeffs[1], quad.coeffs[0]
                    disc = (b * b - 4 * c) % p
                    u = sqrt_mod(disc * inv_ns % p, p)
                    if u is None:  # disc a residue would contradict irreducibility
                        raise ArithmeticError("inconsistent quadratic factor")
                    a0 = (-b) * inv2 % p
                    b0 = u * inv2 % p
                    roots.extend([(a0, b0), (a0, (-b0) % p)])
    else:
        if target.e == 2:
            if target.ns != base.ns:
                raise FieldMismatchError("incompatible F_{p^2} bases")
            xq = poly_powmod(poly_powmod(x, p, rad), p, rad)
            g1 = poly_gcd(xq - x, rad)
            roots = _roots_linear_factors(g1, seed)
        else:
            xp = poly_powmod(x, p, rad)
            g1 = poly_gcd(xp - x, rad)
            roots = [r[0] for r in _roots_linear_factors(g1, seed)]

    if rad.degree() == f.degree():
        return sorted(roots)

    # multiplicities by repeated division in the target field
    lifted = f.map_field(target) if (base.e == 1 and target.e == 2) else f
    out = []
    for r in sorted(set(roots)):
        work = list(lifted.coeffs)
        fld = lifted.field
        rr = fld.coerce(r)
        while len(work) > 1:
            quo, remv = _synthetic_div(work, rr, fld)
            if not fld.is_zero(remv):
                break
            out.append(r)
            work = quo
    return sorted(out)

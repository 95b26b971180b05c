"""Exact calculus for the minuscule Hecke operators on GL_n.

Everything is symbolic over Z[Q, Q^{-1}] with Q = q^{1/2}, so half-integral
powers of residue cardinalities never touch floating point; quantities that
carry half powers are compared through their squares.  The two key numbers
attached to an operator indexed by (n, r, squarefree m) over a totally real
field F are

    degree = prod over primes l | m, places v | l of the local degree,
             the evaluation of the Satake polynomial at the eigenvalues of
             the trivial representation (a Gaussian binomial in q), and
    norm   = C(n, r)^{#places} * prod q_v^{r(n-r)/2},
             the coefficient mass of the Satake transform.

Their ratio controls the equidistribution rate; the ratio/bound comparison
is exact with constant 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .ffpoly import is_prime
from .number_field import NumberFieldSpec, factor_squarefree, splitting_data


class HalfPowerLaurent:
    """Laurent polynomial sum_k c_k Q^k with integer c_k, Q = q^{1/2}."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        self._c = {int(k): int(v) for k, v in dict(coeffs or {}).items() if v != 0}

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "HalfPowerLaurent":
        return cls({exponent: coefficient})

    @classmethod
    def zero(cls) -> "HalfPowerLaurent":
        return cls()

    @classmethod
    def one(cls) -> "HalfPowerLaurent":
        return cls({0: 1})

    def items(self):
        return sorted(self._c.items())

    def coeff(self, k: int) -> int:
        return self._c.get(k, 0)

    def is_zero(self) -> bool:
        return not self._c

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, HalfPowerLaurent) and self._c == other._c

    def __hash__(self):
        return hash(tuple(self.items()))

    def __add__(self, other: "HalfPowerLaurent") -> "HalfPowerLaurent":
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return HalfPowerLaurent(out)

    def __neg__(self) -> "HalfPowerLaurent":
        return HalfPowerLaurent({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "HalfPowerLaurent") -> "HalfPowerLaurent":
        return self + (-other)

    def __mul__(self, other) -> "HalfPowerLaurent":
        if isinstance(other, int):
            return HalfPowerLaurent({k: v * other for k, v in self._c.items()})
        out: dict[int, int] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                out[k] = out.get(k, 0) + v1 * v2
        return HalfPowerLaurent(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HalfPowerLaurent":
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative powers exist only for monomials")
            ((e, c),) = self._c.items()
            if c not in (1, -1):
                raise ValueError("cannot invert a non-unit coefficient exactly")
            return HalfPowerLaurent({e * k: c if k % 2 else 1})
        acc = HalfPowerLaurent.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            k >>= 1
            if k:
                base = base * base
        return acc

    def specialize(self, q: int) -> Fraction:
        """Exact value at Q^2 = q; requires every exponent to be even."""
        total = Fraction(0)
        for k, v in self._c.items():
            if k % 2:
                raise ValueError(f"odd half-power exponent {k} cannot be specialized exactly")
            total += v * Fraction(q) ** (k // 2)
        return total

    def to_float(self, q: float) -> float:
        return sum(v * float(q) ** (k / 2) for k, v in self._c.items())

    def sum_abs(self) -> "HalfPowerLaurent":
        return HalfPowerLaurent({k: abs(v) for k, v in self._c.items()})

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        return " + ".join(f"{v}*Q^{k}" for k, v in self.items())


class SymmetricMonomialSum:
    """S_n-invariant Laurent polynomial in X_1..X_n, stored one orbit per
    weakly decreasing exponent vector, coefficients in Z[Q, Q^{-1}]."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self._terms: dict[tuple[int, ...], HalfPowerLaurent] = {}
        for key, val in (terms or {}).items():
            key = tuple(key)
            if len(key) != n or tuple(sorted(key, reverse=True)) != key:
                raise ValueError(f"orbit key {key} is not weakly decreasing of length {n}")
            if not val.is_zero():
                self._terms[key] = val

    def terms(self):
        return sorted(self._terms.items())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymmetricMonomialSum)
            and self.n == other.n
            and self._terms == other._terms
        )

    def evaluate_at(self, eigenvalues: list[HalfPowerLaurent]) -> HalfPowerLaurent:
        """Expand every orbit over its distinct permutations and evaluate."""
        if len(eigenvalues) != self.n:
            raise ValueError(f"expected {self.n} eigenvalues, got {len(eigenvalues)}")
        total = HalfPowerLaurent.zero()
        for key, coeff in self._terms.items():
            orbit_val = HalfPowerLaurent.zero()
            for perm in set(itertools.permutations(key)):
                term = HalfPowerLaurent.one()
                for ev, e in zip(eigenvalues, perm):
                    if e:
                        term = term * ev**e
                orbit_val = orbit_val + term
            total = total + coeff * orbit_val
        return total


def satake_minuscule(n: int, r: int) -> SymmetricMonomialSum:
    """Satake transform of the minuscule double coset diag(l x r, 1 x (n-r)):
    Q^{r(n-r)} times the elementary symmetric orbit of degree r."""
    if not 0 <= r <= n:
        raise ValueError(f"index r = {r} out of range 0..{n}")
    key = (1,) * r + (0,) * (n - r)
    return SymmetricMonomialSum(n, {key: HalfPowerLaurent.monomial(r * (n - r))})


def trivial_eigenvalues(n: int) -> list[HalfPowerLaurent]:
    """Eigenvalue list Q^{n-1}, Q^{n-3}, ..., Q^{-(n-1)} of the trivial
    representation's Hecke matrix."""
    if n < 1:
        raise ValueError("rank must be positive")
    return [HalfPowerLaurent.monomial(n + 1 - 2 * i) for i in range(1, n + 1)]


def evaluate_at(s: SymmetricMonomialSum, eigenvalues: list[HalfPowerLaurent]) -> HalfPowerLaurent:
    return s.evaluate_at(eigenvalues)


def degree_local(n: int, r: int, q: int) -> int:
    """Local degree at residue cardinality q: the Satake polynomial of
    (n, r) evaluated at the trivial eigenvalues, specialized at Q^2 = q.
    Equals the Gaussian binomial [n choose r]_q; in particular q + 1 for
    (n, r) = (2, 1)."""
    if q < 2:
        raise ValueError("q must be a prime power >= 2")
    hl = satake_minuscule(n, r).evaluate_at(trivial_eigenvalues(n))
    val = hl.specialize(q)
    assert val.denominator == 1 and val >= 1
    return int(val)


def norm_local(n: int, r: int, q: int) -> tuple[int, HalfPowerLaurent]:
    """Per-place coefficient mass: C(n, r) together with Q^{r(n-r)}
    (numerically C(n, r) * q^{r(n-r)/2})."""
    if not 0 <= r <= n:
        raise ValueError(f"index r = {r} out of range 0..{n}")
    if q < 2:
        raise ValueError("q must be a prime power >= 2")
    return comb(n, r), HalfPowerLaurent.monomial(r * (n - r))


@dataclass(frozen=True)
class GlobalOperatorSpec:
    """Operator indexed by rank n, minuscule index r, squarefree modulus m,
    over the totally real field given by `field`."""

    n: int
    r: int
    m: int
    field: NumberFieldSpec

    def __post_init__(self):
        if not 0 <= self.r <= self.n:
            raise ValueError(f"index r = {self.r} out of range 0..{self.n}")
        for ell in factor_squarefree(self.m):  # also validates squarefreeness
            if self.field.is_excluded(ell):
                raise ValueError(f"modulus {self.m} meets an excluded prime ({ell})")


@dataclass(frozen=True)
class GlobalNorm:
    """Exact norm count * m^{half_exponent/2}."""

    count: int
    m: int
    half_exponent: int

    def squared(self) -> int:
        return self.count**2 * self.m**self.half_exponent

    def to_float(self) -> float:
        return self.count * float(self.m) ** (self.half_exponent / 2)


def degree_global(spec: GlobalOperatorSpec) -> int:
    """Product of local degrees over every place above every l | m."""
    total = 1
    for ell in factor_squarefree(spec.m):
        for q in splitting_data(spec.field, ell).residue_cardinalities:
            total *= degree_local(spec.n, spec.r, q)
    return total


def norm_global(spec: GlobalOperatorSpec) -> GlobalNorm:
    """C(n,r)^{#places above m} * prod_v q_v^{r(n-r)/2}; the q_v product
    collapses to m^{d r(n-r)/2} with d the field degree."""
    places = sum(splitting_data(spec.field, ell).c for ell in factor_squarefree(spec.m))
    he = spec.field.degree * spec.r * (spec.n - spec.r)
    return GlobalNorm(comb(spec.n, spec.r) ** places, spec.m, he)


@dataclass(frozen=True)
class RatioBound:
    """Exact comparison of norm/degree against the closed-form bound
    C(n,r)^{#places} * m^{-d r(n-r)/2}; both sides squared to stay in Q."""

    spec: GlobalOperatorSpec
    degree: int
    norm: GlobalNorm
    ratio_squared: Fraction
    bound_squared: Fraction
    satisfied: bool


def ratio_and_bound(spec: GlobalOperatorSpec) -> RatioBound:
    if not 1 <= spec.r <= spec.n - 1:
        raise ValueError("bound requires 1 <= r <= n-1")
    if spec.m <= 1:
        raise ValueError("bound requires a squarefree modulus m > 1")
    deg = degree_global(spec)
    norm = norm_global(spec)
    ratio_sq = Fraction(norm.squared(), deg * deg)
    bound_sq = Fraction(norm.count**2, spec.m**norm.half_exponent)
    return RatioBound(spec, deg, norm, ratio_sq, bound_sq, ratio_sq <= bound_sq)


# ---------------------------------------------------------------------------
# threshold for C(n,r)^{omega(m)} <= m^eps over squarefree m (F = Q)


class _PrimeStream:
    """Lazily extended list of primes."""

    def __init__(self):
        self._primes = [2, 3, 5, 7, 11, 13]

    def __getitem__(self, idx: int) -> int:
        while len(self._primes) <= idx:
            n = self._primes[-1] + 2
            while not is_prime(n):
                n += 2
            self._primes.append(n)
        return self._primes[idx]


def _max_product_of_primes(k: int, a: int, cap: int, primes: _PrimeStream) -> int:
    """Largest product of k distinct primes with product**a < cap; 0 if none."""
    best = 0

    def dfs(idx: int, slots: int, cur: int):
        nonlocal best
        if slots == 0:
            if cur > best:
                best = cur
            return
        i = idx
        while True:
            tail = cur
            for t in range(slots):
                tail *= primes[i + t]
            if tail**a >= cap:
                return  # larger starting primes only increase the minimum
            dfs(i + 1, slots - 1, cur * primes[i])
            i += 1

    dfs(0, k, 1)
    return best


def stirling_threshold(n: int, r: int, eps) -> int:
    """Smallest M such that C(n,r)^{omega(m)} <= m^eps for every squarefree
    m > M (field Q).  Exact: failures at omega(m) = k exist only while the
    k-th primorial stays below C(n,r)^{k/eps}, and within a level the
    largest failure is found by a pruned search over prime subsets."""
    if not 1 <= r <= n - 1:
        raise ValueError("requires 1 <= r <= n-1")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    a, b = eps.numerator, eps.denominator
    c = comb(n, r)
    primes = _PrimeStream()

    feasible: list[int] = []
    k, primorial = 0, 1
    while True:
        primorial *= primes[k]
        k += 1
        if primorial**a < c ** (b * k):
            feasible.append(k)
        elif primes[k] ** a >= c**b:
            # inequality holds at this primorial and every later prime keeps
            # the margin growing, so no level beyond k can fail
            break

    best = 1
    for lvl in reversed(feasible):
        cap = c ** (b * lvl)
        if best**a >= cap:
            break  # failures at this and all lower levels are below best
        cand = _max_product_of_primes(lvl, a, cap, primes)
        best = max(best, cand)
    return best

"""Totally real number field F given by a monic integer defining polynomial.

Splitting data at an unramified prime l is read off from the factorization
of the defining polynomial mod l: the residue degrees are the degrees of
the irreducible factors and the residue cardinalities are q = l^f.  Primes
dividing the discriminant (resultant of g and g') are rejected outright,
a safe over-exclusion that avoids maximal-order computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .ffpoly import DensePoly, FiniteFieldSpec, distinct_degree_factorize, is_prime


class RamifiedPrimeError(ValueError):
    """Prime divides the discriminant of the defining polynomial."""


def _det_fraction(rows: list[list[int]]) -> int:
    """Exact determinant of a small integer matrix (Gauss over Q)."""
    n = len(rows)
    m = [[Fraction(v) for v in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor:
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    assert det.denominator == 1
    return det.numerator


def _resultant(f: list[int], g: list[int]) -> int:
    """Resultant of two integer polynomials (ascending coefficients)."""
    df, dg = len(f) - 1, len(g) - 1
    if df < 0 or dg < 0:
        return 0
    if df == 0:
        return f[0] ** dg
    if dg == 0:
        return g[0] ** df
    size = df + dg
    rows = []
    frev, grev = f[::-1], g[::-1]
    for i in range(dg):
        rows.append([0] * i + frev + [0] * (size - df - 1 - i))
    for i in range(df):
        rows.append([0] * i + grev + [0] * (size - dg - 1 - i))
    return _det_fraction(rows)


_SANITY_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                  59, 61, 67, 71, 73, 79, 83, 89, 97, 101)


@dataclass(frozen=True)
class NumberFieldSpec:
    """Monic irreducible g in Z[x], ascending coefficients (constant first)."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise ValueError("defining polynomial must have degree >= 1")
        if self.coeffs[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        if any(not isinstance(c, int) for c in self.coeffs):
            raise ValueError("coefficients must be integers")
        if self.degree > 1:
            if self.coeffs[0] == 0:
                raise ValueError("defining polynomial is divisible by x")
            for root in self._small_rational_roots():
                raise ValueError(f"defining polynomial has the rational root {root}")

    @classmethod
    def rationals(cls) -> "NumberFieldSpec":
        return cls((0, 1))

    @classmethod
    def from_list(cls, coeffs) -> "NumberFieldSpec":
        return cls(tuple(int(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _small_rational_roots(self):
        # integer roots divide the constant term (monic); search desk-scale divisors
        c0 = abs(self.coeffs[0])
        divisors = set()
        d = 1
        while d * d <= c0 and d <= 10**6:
            if c0 % d == 0:
                divisors.update((d, c0 // d))
            d += 1
        roots = []
        for d in sorted(divisors):
            for cand in (d, -d):
                if self.evaluate_int(cand) == 0:
                    roots.append(cand)
        return roots

    def evaluate_int(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    @cached_property
    def disc_resultant(self) -> int:
        """|res(g, g')|; its prime divisors are the excluded primes."""
        g = list(self.coeffs)
        gp = [k * c for k, c in enumerate(g)][1:]
        r = _resultant(g, gp)
        return abs(r) if r else 0

    def is_excluded(self, ell: int) -> bool:
        d = self.disc_resultant
        return d == 0 or d % ell == 0

    def excluded_small_primes(self, bound: int = 1000) -> list[int]:
        return [ell for ell in range(2, bound + 1) if is_prime(ell) and self.is_excluded(ell)]

    @cached_property
    def irreducible_verified(self) -> bool:
        """True if g is irreducible mod some small prime (a proof); the user
        asserts irreducibility either way."""
        if self.degree == 1:
            return True
        for ell in _SANITY_PRIMES:
            if self.is_excluded(ell):
                continue
            bar = DensePoly.make(FiniteFieldSpec.prime(ell), self.coeffs)
            parts = distinct_degree_factorize(bar)
            if len(parts) == 1 and parts[0][1].degree() == parts[0][0] == self.degree:
                return True
        return False


@dataclass(frozen=True)
class SplittingData:
    """Residue degrees and cardinalities of an unramified prime l."""

    ell: int
    residue_degrees: tuple[int, ...]  # sorted, with multiplicity

    @property
    def residue_cardinalities(self) -> tuple[int, ...]:
        return tuple(self.ell**f for f in self.residue_degrees)

    @property
    def c(self) -> int:
        """Number of primes above l."""
        return len(self.residue_degrees)


def splitting_data(field: NumberFieldSpec, ell: int) -> SplittingData:
    """Factor the defining polynomial mod l; degrees give the splitting."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if field.is_excluded(ell):
        raise RamifiedPrimeError(f"{ell} divides disc of the defining polynomial")
    bar = DensePoly.make(FiniteFieldSpec.prime(ell), field.coeffs)
    if bar.degree() != field.degree:
        raise RamifiedPrimeError(f"defining polynomial degenerates mod {ell}")
    degrees: list[int] = []
    for d, part in distinct_degree_factorize(bar):
        count, r = divmod(part.degree(), d)
        assert r == 0
        degrees.extend([d] * count)
    degrees.sort()
    assert sum(degrees) == field.degree
    return SplittingData(ell, tuple(degrees))


def factor_squarefree(m: int) -> list[int]:
    """Prime divisors of a squarefree positive integer, ascending."""
    if m < 1:
        raise ValueError("m must be positive")
    primes = []
    rest = m
    d = 2
    while d * d <= rest and d <= 10**7:
        if rest % d == 0:
            rest //= d
            if rest % d == 0:
                raise ValueError(f"{m} is not squarefree (divisible by {d}^2)")
            primes.append(d)
        d += 1 if d == 2 else 2
    if rest > 1:
        if not is_prime(rest):
            raise ValueError(f"cannot certify the cofactor {rest} of {m}")
        primes.append(rest)
    return primes


def omega_F(field: NumberFieldSpec, m: int) -> int:
    """Number of primes of O_F above a squarefree m (omega(m) for F = Q)."""
    return sum(splitting_data(field, ell).c for ell in factor_squarefree(m))


def residue_cardinalities(field: NumberFieldSpec, m: int) -> list[tuple[int, list[int]]]:
    """For each prime l | m, the residue cardinalities q above l."""
    return [
        (ell, list(splitting_data(field, ell).residue_cardinalities))
        for ell in factor_squarefree(m)
    ]

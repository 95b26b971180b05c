import itertools
from fractions import Fraction
from math import comb

import pytest

from heckedist.number_field import NumberFieldSpec
from heckedist.satake import (
    GlobalOperatorSpec,
    HalfPowerLaurent,
    SymmetricMonomialSum,
    degree_global,
    degree_local,
    evaluate_at,
    norm_global,
    norm_local,
    ratio_and_bound,
    satake_minuscule,
    stirling_threshold,
    trivial_eigenvalues,
)

Q = NumberFieldSpec.rationals()
Q_SQRT5 = NumberFieldSpec.from_list([-5, 0, 1])

HPL = HalfPowerLaurent


def test_half_power_arithmetic():
    a = HPL({2: 1, 0: 1})
    b = HPL.monomial(-1, 3)
    assert a + b == HPL({2: 1, 0: 1, -1: 3})
    assert a - a == HPL.zero()
    assert a * b == HPL({1: 3, -1: 3})
    assert b**2 == HPL.monomial(-2, 9)
    assert HPL.monomial(3) ** -2 == HPL.monomial(-6)
    assert HPL.monomial(1, -1) ** -3 == HPL.monomial(-3, -1)
    with pytest.raises(ValueError):
        a**-1
    assert a.specialize(4) == Fraction(5)
    with pytest.raises(ValueError):
        HPL.monomial(1).specialize(4)
    assert HPL({-2: 1}).specialize(3) == Fraction(1, 3)


def test_orbit_key_validation():
    with pytest.raises(ValueError):
        SymmetricMonomialSum(3, {(0, 1, 1): HPL.one()})
    s = SymmetricMonomialSum(2, {(1, 0): HPL.one(), (2, 2): HPL.zero()})
    assert s.terms() == [((1, 0), HPL.one())]


def test_satake_minuscule_examples():
    s = satake_minuscule(2, 1)
    assert s.terms() == [((1, 0), HPL.monomial(1))]
    assert satake_minuscule(4, 0).terms() == [((0, 0, 0, 0), HPL.one())]
    assert satake_minuscule(3, 3).terms() == [((1, 1, 1), HPL.one())]
    with pytest.raises(ValueError):
        satake_minuscule(3, 4)


def test_trivial_eigenvalues_examples():
    assert trivial_eigenvalues(2) == [HPL.monomial(1), HPL.monomial(-1)]
    assert trivial_eigenvalues(1) == [HPL.one()]
    assert trivial_eigenvalues(3) == [HPL.monomial(2), HPL.one(), HPL.monomial(-2)]


def test_evaluate_at_examples():
    assert evaluate_at(satake_minuscule(2, 1), trivial_eigenvalues(2)) == HPL({2: 1, 0: 1})
    assert evaluate_at(satake_minuscule(3, 1), trivial_eigenvalues(3)) == HPL({4: 1, 2: 1, 0: 1})
    const = SymmetricMonomialSum(3, {(0, 0, 0): HPL.one()})
    assert evaluate_at(const, trivial_eigenvalues(3)) == HPL.one()
    with pytest.raises(ValueError):
        evaluate_at(satake_minuscule(2, 1), trivial_eigenvalues(3))


def test_degree_local_examples():
    for ell in (2, 3, 5, 97):
        assert degree_local(2, 1, ell) == ell + 1
    assert degree_local(5, 0, 9) == 1
    assert degree_local(3, 1, 2) == 7


def _subset_sum_oracle(n, r, q):
    """Brute force: sum over r-subsets of q^{r(n-r)/2} * prod q^{(n+1-2i)/2},
    tracked as integer exponents of q^{1/2}."""
    total = 0
    for subset in itertools.combinations(range(1, n + 1), r):
        e = r * (n - r) + sum(n + 1 - 2 * i for i in subset)
        assert e % 2 == 0 and e >= 0
        total += q ** (e // 2)
    return total


def _gaussian_binomial(n, r, q):
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
def test_degree_local_against_oracles(q):
    for n in range(1, 9):
        for r in range(n + 1):
            d = degree_local(n, r, q)
            assert d == _subset_sum_oracle(n, r, q)
            assert d == _gaussian_binomial(n, r, q)


def test_degree_local_even_exponents():
    # integrality: only even half-power exponents appear before specializing
    for n in range(1, 9):
        for r in range(n + 1):
            hl = evaluate_at(satake_minuscule(n, r), trivial_eigenvalues(n))
            assert all(k % 2 == 0 and k >= 0 for k, _ in hl.items())


def test_degree_local_dominance():
    for n in range(2, 9):
        for r in range(n + 1):
            for q in (2, 3, 5, 9):
                d = degree_local(n, r, q)
                assert q ** (r * (n - r)) <= d <= comb(n, r) * q ** (r * (n - r))


def test_norm_local_examples():
    assert norm_local(2, 1, 7) == (2, HPL.monomial(1))
    assert norm_local(4, 0, 3) == (1, HPL.one())
    assert norm_local(3, 1, 5) == (3, HPL.monomial(2))


def test_degree_global_examples():
    assert degree_global(GlobalOperatorSpec(2, 1, 11, Q_SQRT5)) == 144
    assert degree_global(GlobalOperatorSpec(2, 1, 1, Q_SQRT5)) == 1
    assert degree_global(GlobalOperatorSpec(2, 1, 6, Q)) == 12


def test_norm_global_examples():
    norm = norm_global(GlobalOperatorSpec(2, 1, 11, Q_SQRT5))
    assert (norm.count, norm.half_exponent) == (4, 2)
    assert norm.squared() == 44**2
    assert norm_global(GlobalOperatorSpec(2, 1, 1, Q)).squared() == 1
    norm = norm_global(GlobalOperatorSpec(2, 1, 2, Q))
    assert (norm.count, norm.m, norm.half_exponent) == (2, 2, 1)
    assert norm.squared() == 8  # (2 sqrt 2)^2


def test_ratio_and_bound_examples():
    rb = ratio_and_bound(GlobalOperatorSpec(2, 1, 11, Q_SQRT5))
    assert rb.ratio_squared == Fraction(11, 36) ** 2
    assert rb.bound_squared == Fraction(4, 11) ** 2
    assert rb.satisfied
    rb = ratio_and_bound(GlobalOperatorSpec(3, 1, 2, Q))
    assert rb.ratio_squared == Fraction(6, 7) ** 2
    assert rb.bound_squared == Fraction(3, 2) ** 2
    assert rb.satisfied
    rb = ratio_and_bound(GlobalOperatorSpec(2, 1, 2, Q))
    assert rb.ratio_squared == Fraction(8, 9)
    assert rb.bound_squared == Fraction(2)
    assert rb.satisfied


def test_ratio_and_bound_range_checks():
    with pytest.raises(ValueError):
        ratio_and_bound(GlobalOperatorSpec(3, 0, 2, Q))
    with pytest.raises(ValueError):
        ratio_and_bound(GlobalOperatorSpec(3, 3, 2, Q))
    with pytest.raises(ValueError):
        ratio_and_bound(GlobalOperatorSpec(2, 1, 1, Q))
    with pytest.raises(ValueError):
        GlobalOperatorSpec(2, 1, 10, Q_SQRT5)  # 2 and 5 are excluded


def test_global_multiplicativity():
    for field in (Q, Q_SQRT5):
        for n, r in ((2, 1), (3, 1), (4, 2)):
            for m1, m2 in ((3, 7), (11, 13), (3, 77)):
                whole = GlobalOperatorSpec(n, r, m1 * m2, field)
                a = GlobalOperatorSpec(n, r, m1, field)
                b = GlobalOperatorSpec(n, r, m2, field)
                assert degree_global(whole) == degree_global(a) * degree_global(b)
                assert norm_global(whole).squared() == (
                    norm_global(a).squared() * norm_global(b).squared()
                )


def test_stirling_threshold_exact_value():
    assert stirling_threshold(2, 1, Fraction(1, 2)) == 210


def test_stirling_threshold_trivial():
    # with C(n,r) <= 2^eps every squarefree m works (2^omega(m) <= m)
    assert stirling_threshold(2, 1, 1) == 1
    assert stirling_threshold(2, 1, 2) == 1
    assert stirling_threshold(4, 2, 3) == 1


def test_stirling_threshold_validation():
    with pytest.raises(ValueError):
        stirling_threshold(2, 1, 0)
    with pytest.raises(ValueError):
        stirling_threshold(2, 1, Fraction(-1, 2))
    with pytest.raises(ValueError):
        stirling_threshold(3, 3, 1)


def _brute_failures(n, r, eps: Fraction, bound: int):
    """All squarefree m <= bound violating C^omega(m) <= m^eps; plain sieve."""
    c = comb(n, r)
    a, b = eps.numerator, eps.denominator
    omega = [0] * (bound + 1)
    squarefree = [True] * (bound + 1)
    for p in range(2, bound + 1):
        if omega[p] == 0:
            for k in range(p, bound + 1, p):
                omega[k] += 1
            if p * p <= bound:
                for k in range(p * p, bound + 1, p * p):
                    squarefree[k] = False
    return [
        m
        for m in range(2, bound + 1)
        if squarefree[m] and m**a < c ** (b * omega[m])
    ]


def test_stirling_failure_set_matches_brute_force():
    fails = _brute_failures(2, 1, Fraction(1, 2), 3000)
    assert fails == [2, 3, 6, 10, 14, 15, 30, 42, 210]
    assert stirling_threshold(2, 1, Fraction(1, 2)) == max(fails)
    fails31 = _brute_failures(3, 1, Fraction(1), 1000)
    assert stirling_threshold(3, 1, 1) == max(fails31) == 6
    fails42 = _brute_failures(4, 2, Fraction(1), 100000)
    assert stirling_threshold(4, 2, 1) == max(fails42) == 46410

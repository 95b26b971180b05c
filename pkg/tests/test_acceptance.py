"""Acceptance suite: the exit criteria for this artifact.

Each test prints one `[acceptance] criterion N (...): PASS/FAIL` line
(run pytest with -s to see the lines for passing tests).  Tolerances are
stated inline: structural identities are exact integer/rational checks,
spectral and norm inequalities carry the documented 1e-9 slack.
"""

import itertools
import math
from contextlib import contextmanager
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from heckedist import equidist
from heckedist.equidist import StratumFunction, contraction_factors
from heckedist.ffpoly import is_prime
from heckedist.number_field import NumberFieldSpec
from heckedist.satake import (
    GlobalOperatorSpec,
    degree_local,
    ratio_and_bound,
    stirling_threshold,
)
from heckedist.supersingular import enumerate_locus

from conftest import HECKE_LEVELS, SAMPLE_PRIMES


@contextmanager
def criterion(num, label):
    try:
        yield
    except BaseException:
        print(f"\n[acceptance] criterion {num} ({label}): FAIL")
        raise
    print(f"\n[acceptance] criterion {num} ({label}): PASS")


def test_criterion_1_mass_formula():
    with criterion(1, "Eichler-Deuring mass formula, primes 5..2000, exact"):
        checked = 0
        for p in range(5, 2001):
            if not is_prime(p):
                continue
            locus = enumerate_locus(p)  # raises MassFormulaError on violation
            assert sum(locus.masses) == Fraction(p - 1, 24)
            checked += 1
        assert checked == 301


def test_criterion_2_structural_identities(store):
    with criterion(2, "row sums, weighted symmetry, commutation, exact"):
        for p in SAMPLE_PRIMES:
            locus = store.locus(p)
            w = np.asarray(locus.weights, dtype=np.int64)
            mats = store.matrices(p, HECKE_LEVELS)
            for ell, t in mats.items():
                assert np.all(t.entries.sum(axis=1) == ell + 1)
                weighted = t.entries * w[None, :]
                assert np.array_equal(weighted, weighted.T)
            for ell_a, ell_b in itertools.combinations(sorted(mats), 2):
                ab = mats[ell_a].entries @ mats[ell_b].entries
                ba = mats[ell_b].entries @ mats[ell_a].entries
                assert np.array_equal(ab, ba)


def test_criterion_3_ramanujan_spectral_bound(store):
    with criterion(3, "nontrivial spectrum within 2 sqrt(ell), tol 1e-9"):
        for p in SAMPLE_PRIMES:
            locus = store.locus(p)
            for ell, t in store.matrices(p, HECKE_LEVELS).items():
                rep = equidist.spectrum(locus, t)
                assert abs(rep.eigenvalues[0] - (ell + 1)) <= 1e-9 * (ell + 1)
                if rep.max_nontrivial is not None:
                    assert rep.max_nontrivial <= 2 * math.sqrt(ell) + 1e-9


def test_criterion_4_main_inequality(store, library):
    with criterion(4, "weighted-2 error <= prod 2 sqrt(l)/(l+1), 100 random v"):
        p = 1009
        locus = store.locus(p)
        mats = store.matrices(p, HECKE_LEVELS)
        mu = 1.0 / np.asarray(locus.weights, dtype=float)
        mass = np.array([float(m) for m in locus.masses])
        mass = mass / mass.sum()
        moduli = equidist.squarefree_moduli(list(HECKE_LEVELS))
        assert len(moduli) == 63
        operators = []
        for m in moduli:
            primes = [ell for ell in HECKE_LEVELS if m % ell == 0]
            t = np.eye(locus.size, dtype=np.int64)
            deg = 1
            for ell in primes:
                t = t @ mats[ell].entries
                deg *= ell + 1
            bound = math.prod(2.0 * math.sqrt(ell) / (ell + 1) for ell in primes)
            operators.append((t, deg, bound))
        rng = np.random.default_rng(20260810)
        for _ in range(100):
            v = rng.standard_normal(locus.size)
            avg = float(mass @ v)
            base = math.sqrt(float(mu @ (v - avg) ** 2))
            for t, deg, bound in operators:
                w = (t @ v) / deg
                err = math.sqrt(float(mu @ (w - avg) ** 2))
                assert err <= bound * base * (1.0 + 1e-9)


def test_criterion_5_rate_reproduction(store, library):
    with criterion(5, "fitted sup-norm slope <= -0.45 for p in {1009, 2003, 2999}"):
        for p in (1009, 2003, 2999):
            locus = store.locus(p)
            mats = store.matrices(p, HECKE_LEVELS)
            rng = np.random.default_rng(20260810)
            v = StratumFunction.random_unit(locus, rng)
            rep = equidist.run_squarefree_experiment(
                locus, list(HECKE_LEVELS), v, library, initial="random", matrices=mats
            )
            assert len(rep.rows) == 63
            assert rep.slope is not None and rep.slope <= -0.45


def test_criterion_6_power_contraction(store, library):
    with criterion(6, "per-step contraction <= 2 sqrt(2)/3 + 1e-9 over 400 steps"):
        p, ell, count = 1009, 2, 400
        locus = store.locus(p)
        rng = np.random.default_rng(20260810)
        v = StratumFunction.random_unit(locus, rng)
        rep = equidist.run_power_experiment(
            locus, ell, v, count, library, initial="random",
            matrices=store.matrices(p, (ell,)),
        )
        assert len(rep.rows) == count
        assert rep.inequality_ok
        avg = equidist.mass_average(locus, v)
        _, base = equidist.error_norms(locus, v, avg)
        factors = contraction_factors(rep, base)
        assert factors, "error hit the floor immediately"
        ratio = 2.0 * math.sqrt(2.0) / 3.0
        for _step, factor in factors:
            assert factor <= ratio + 1e-9


def test_criterion_7_satake_exactness():
    with criterion(7, "local degrees: classical values, subset oracle, dominance"):
        for ell in range(2, 101):
            if is_prime(ell):
                assert degree_local(2, 1, ell) == ell + 1
        for q in (2, 3, 4, 5, 9):
            for n in range(1, 9):
                for r in range(n + 1):
                    oracle = 0
                    for subset in itertools.combinations(range(1, n + 1), r):
                        e = r * (n - r) + sum(n + 1 - 2 * i for i in subset)
                        assert e % 2 == 0 and e >= 0
                        oracle += q ** (e // 2)
                    d = degree_local(n, r, q)
                    assert d == oracle
                    assert q ** (r * (n - r)) <= d <= comb(n, r) * q ** (r * (n - r))


def test_criterion_8_norm_degree_bound():
    with criterion(8, "exact N/deg <= C(n,r)^places * m^{-d r(n-r)/2}, m <= 1000"):
        fields = [
            NumberFieldSpec.rationals(),
            NumberFieldSpec.from_list([-5, 0, 1]),
            NumberFieldSpec.from_list([-13, 0, 1]),
        ]
        checked = 0
        total_moduli = 0
        for field in fields:
            moduli = [
                m
                for m in range(2, 1001)
                if _is_squarefree_unramified(m, field)
            ]
            total_moduli += len(moduli)
            for n in range(2, 7):
                for r in range(1, n):
                    for m in moduli:
                        rb = ratio_and_bound(GlobalOperatorSpec(n, r, m, field))
                        assert rb.satisfied, (field.coeffs, n, r, m)
                        checked += 1
        # 15 (n, r) pairs per field; every admissible modulus was exercised
        assert checked == 15 * total_moduli and checked > 15000


def _is_squarefree_unramified(m, field):
    from heckedist.number_field import factor_squarefree

    try:
        primes = factor_squarefree(m)
    except ValueError:
        return False
    return all(not field.is_excluded(ell) for ell in primes)


def _brute_stirling_max_failure(n, r, eps: Fraction, bound: int) -> int:
    """Sieve oracle: the largest squarefree m <= bound with
    C(n,r)^omega(m) > m^eps (1 if none)."""
    c = comb(n, r)
    a, b = eps.numerator, eps.denominator
    flags = np.ones(bound + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, int(math.isqrt(bound)) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    primes = np.nonzero(flags)[0]
    omega = np.zeros(bound + 1, dtype=np.int8)
    squarefree = np.ones(bound + 1, dtype=bool)
    for p in primes:
        omega[p::p] += 1
        if p * p <= bound:
            squarefree[p * p :: p * p] = False
    best = 1
    for k in np.unique(omega[2:]):
        if k == 0:
            continue
        # failures at level k: m^a < c^(b k); find the integer cutoff exactly
        cap = c ** (b * int(k))
        hi = _int_nth_root(cap - 1, a)  # largest m with m^a < cap
        hi = min(hi, bound)
        if hi < 2:
            continue
        sel = np.nonzero((omega[: hi + 1] == k) & squarefree[: hi + 1])[0]
        if len(sel):
            best = max(best, int(sel.max()))
    return best


def _int_nth_root(x: int, n: int) -> int:
    if x < 0:
        return 0
    if n == 1:
        return x
    if n == 2:
        return math.isqrt(x)
    r = int(round(x ** (1.0 / n)))
    while r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def test_criterion_9_stirling_thresholds():
    with criterion(9, "threshold scan vs brute force (exact)"):
        assert stirling_threshold(2, 1, Fraction(1, 2)) == 210
        assert _brute_stirling_max_failure(2, 1, Fraction(1, 2), 10**7) == 210
        for n, r, eps in ((3, 1, Fraction(1)), (4, 2, Fraction(1))):
            scanned = stirling_threshold(n, r, eps)
            brute = _brute_stirling_max_failure(n, r, eps, 10**7)
            assert scanned == brute, (n, r, scanned, brute)

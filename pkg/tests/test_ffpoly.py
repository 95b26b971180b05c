import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckedist.ffpoly import (
    DensePoly,
    FieldMismatchError,
    FiniteFieldSpec,
    NonSquarefreeError,
    distinct_degree_factorize,
    equal_degree_factorize,
    is_prime,
    poly_gcd,
    poly_powmod,
    roots_in_field,
    smallest_nonresidue,
    sqrt_mod,
    squarefree_part,
)

F3 = FiniteFieldSpec.prime(3)
F5 = FiniteFieldSpec.prime(5)
F11 = FiniteFieldSpec.prime(11)


def poly(field, *coeffs):
    return DensePoly.make(field, coeffs)


# ------------------------------------------------------------------ fields


def test_field_validation():
    with pytest.raises(ValueError):
        FiniteFieldSpec.prime(9)
    with pytest.raises(ValueError):
        FiniteFieldSpec(5, 2, 4)  # 4 = 2^2 is a residue
    with pytest.raises(ValueError):
        FiniteFieldSpec(5, 3, 0)
    f25 = FiniteFieldSpec.quadratic(5)
    assert f25.ns == smallest_nonresidue(5) == 2
    assert f25.order == 25


def test_quadratic_arithmetic():
    f9 = FiniteFieldSpec.quadratic(3)
    t = (0, 1)
    assert f9.mul(t, t) == (f9.ns, 0)
    x = (1, 2)
    assert f9.mul(x, f9.inv(x)) == f9.one()
    assert f9.conj(x) == (1, 1)
    # Frobenius has order 2
    assert f9.elt_pow(x, 9) == x
    assert f9.elt_pow(x, 3) == f9.conj(x)


def test_sqrt_mod():
    for p in (3, 5, 11, 97, 1009):
        squares = {pow(a, 2, p) for a in range(p)}
        for a in range(p):
            r = sqrt_mod(a, p)
            if a in squares:
                assert r is not None and r * r % p == a
            else:
                assert r is None


# -------------------------------------------------------------------- gcd


def test_gcd_examples():
    # (x-1)(x+1) vs (x+1)^2 over F_5
    assert poly_gcd(poly(F5, -1, 0, 1), poly(F5, 1, 2, 1)) == poly(F5, 1, 1)
    f = poly(F5, 2, 4, 2)
    assert poly_gcd(f, DensePoly.zero(F5)) == f.monic()
    assert poly_gcd(DensePoly.zero(F5), DensePoly.zero(F5)).is_zero()
    # 4^2 = 5 mod 11, so x - 4 divides x^2 - 5
    assert poly_gcd(poly(F11, -5, 0, 1), poly(F11, -4, 1)) == poly(F11, 7, 1)


def test_gcd_field_mismatch():
    with pytest.raises(FieldMismatchError):
        poly_gcd(poly(F5, 1, 1), poly(F3, 1, 1))


def test_gcd_contains_known_common_divisor():
    rng = random.Random(2)
    for _ in range(20):
        c = poly(F11, rng.randrange(11), rng.randrange(11), 1)
        a = poly(F11, rng.randrange(11), 1) * c
        b = poly(F11, rng.randrange(11), rng.randrange(11), rng.randrange(1, 11)) * c
        g = poly_gcd(a, b)
        assert (a % g).is_zero() and (b % g).is_zero()
        assert (g % c.monic()).is_zero()


# ----------------------------------------------------------------- powmod


def test_powmod_examples():
    x = DensePoly.x(F3)
    mod = poly(F3, 1, 0, 1)  # x^2 + 1
    assert poly_powmod(x, 0, mod) == DensePoly.one(F3)
    assert poly_powmod(x, 3, mod) == poly(F3, 0, 2)  # x^3 = -x
    with pytest.raises(ZeroDivisionError):
        poly_powmod(x, 2, DensePoly.zero(F3))


@pytest.mark.parametrize("p", [3, 11, 101])
def test_powmod_frobenius_order(p):
    field = FiniteFieldSpec.prime(p)
    x = DensePoly.x(field)
    # an irreducible quadratic: x^2 - ns
    mod = DensePoly.make(field, [-smallest_nonresidue(p), 0, 1])
    frob = poly_powmod(x, p, mod)
    assert frob != x
    assert poly_powmod(x, p * p, mod) == x
    assert poly_powmod(frob, p, mod) == x


# ---------------------------------------------------------- factorization


def test_ddf_examples():
    parts = distinct_degree_factorize(poly(F3, 1, 0, 0, 0, 1))  # x^4 + 1
    assert [(d, g.coeffs) for d, g in parts] == [(2, (1, 0, 0, 0, 1))]
    parts = distinct_degree_factorize(poly(F11, -5, 0, 1))
    assert [(d, g.degree()) for d, g in parts] == [(1, 2)]
    parts = distinct_degree_factorize(poly(F3, 1, 0, 1))
    assert [(d, g.degree()) for d, g in parts] == [(2, 2)]


def test_ddf_rejects_repeated_factors():
    with pytest.raises(NonSquarefreeError):
        distinct_degree_factorize(poly(F5, 1, 2, 1))  # (x+1)^2


def test_edf_examples():
    facs = equal_degree_factorize(poly(F3, 1, 0, 0, 0, 1), 2)
    assert [f.coeffs for f in facs] == [(2, 1, 1), (2, 2, 1)]  # x^2+x+2, x^2+2x+2
    irr = poly(F3, 1, 0, 1)
    assert equal_degree_factorize(irr, 2) == [irr]
    facs = equal_degree_factorize(poly(F11, 28, -11, 1), 1)  # (x-4)(x-7)
    assert [f.coeffs for f in facs] == [(4, 1), (7, 1)]


def test_edf_degree_bookkeeping():
    # an irreducible quadratic times a linear factor is not equal-degree 2
    bad = poly(F3, 1, 0, 1) * poly(F3, 1, 1)
    with pytest.raises(ValueError):
        equal_degree_factorize(bad, 2)


def test_edf_deterministic_for_fixed_seed():
    g = poly(F11, 28, -11, 1)
    assert equal_degree_factorize(g, 1, seed=5) == equal_degree_factorize(g, 1, seed=5)
    assert equal_degree_factorize(g, 1) == equal_degree_factorize(g, 1)


# -------------------------------------------------------------------- roots


def test_roots_examples():
    assert roots_in_field(poly(F11, -5, 0, 1), F11) == [4, 7]
    cube = poly(F5, -1, 1) * poly(F5, -1, 1) * poly(F5, -1, 1)
    assert roots_in_field(cube, F5) == [1, 1, 1]
    f9 = FiniteFieldSpec.quadratic(3)
    roots = roots_in_field(poly(F3, 1, 0, 1), f9)
    assert roots == [(0, 1), (0, 2)]
    for r in roots:
        # t^2 = -1 in the fixed basis (ns = 2 = -1 mod 3)
        assert f9.mul(r, r) == (2, 0)


def test_roots_of_extension_polynomials():
    f9 = FiniteFieldSpec.quadratic(3)
    t = (0, 1)
    f = DensePoly.make(f9, [f9.neg(t), f9.one()]) * DensePoly.make(f9, [(1, 0), f9.one()])
    assert roots_in_field(f, f9) == sorted([t, (2, 0)])
    assert roots_in_field(f, F3) == [2]


def test_roots_rejects_zero():
    with pytest.raises(ValueError):
        roots_in_field(DensePoly.zero(F5), F5)


def test_radical_with_pth_power_factors():
    x1 = poly(F3, 1, 1)
    x2 = poly(F3, 2, 1)
    cube = x1 * x1 * x1  # derivative vanishes identically
    assert squarefree_part(cube) == x1
    mixed = cube * x2 * x2
    assert squarefree_part(mixed) == x1 * x2
    assert roots_in_field(mixed, F3) == [1, 1, 2, 2, 2]
    f9 = FiniteFieldSpec.quadratic(3)
    quad = poly(F3, 1, 0, 1)
    assert roots_in_field(quad * quad * x1, f9) == [(0, 1), (0, 1), (0, 2), (0, 2), (2, 0)]


_PRIMES = [p for p in range(3, 10000) if is_prime(p)]


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_factorization_pipeline_roundtrip(data):
    p = data.draw(st.sampled_from(_PRIMES))
    field = FiniteFieldSpec.prime(p)
    deg = data.draw(st.integers(min_value=1, max_value=12))
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=deg, max_size=deg))
    f = DensePoly.make(field, coeffs + [1])
    rad = squarefree_part(f)
    parts = distinct_degree_factorize(rad)
    assert sum(g.degree() for _, g in parts) == rad.degree()
    x = DensePoly.x(field)
    product = DensePoly.one(field)
    for d, g in parts:
        for factor in equal_degree_factorize(g, d):
            assert factor.degree() == d
            # irreducible: fixed by Frobenius^d and by no smaller power
            assert poly_powmod(x, p**d, factor) == x % factor
            for e in range(1, d):
                assert poly_powmod(x, p**e, factor) != x % factor
            product = product * factor
    assert product == rad


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_roots_property(data):
    p = data.draw(st.sampled_from([3, 5, 11, 31, 101]))
    base = FiniteFieldSpec.prime(p)
    target = data.draw(st.sampled_from(["prime", "quadratic"]))
    fld = base if target == "prime" else FiniteFieldSpec.quadratic(p)
    deg = data.draw(st.integers(min_value=1, max_value=8))
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=deg, max_size=deg))
    f = DensePoly.make(base, coeffs + [1])
    roots = roots_in_field(f, fld)
    assert len(roots) <= f.degree()
    lifted = f.map_field(fld)
    for r in roots:
        assert fld.is_zero(lifted.evaluate(r))
    # multiset characterization: dividing out all reported roots leaves a
    # polynomial with no roots in the target field
    work = lifted
    for r in roots:
        work = work.exact_div(DensePoly.make(fld, [fld.neg(fld.coerce(r)), fld.one()]))
    if work.degree() >= 1:
        assert roots_in_field(work, fld) == []

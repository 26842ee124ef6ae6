import random
from math import gcd

import pytest
from hypothesis import given, strategies as st

from zerosum import InvalidInput, crt_combine, factor, jacobi, legendre, natural_map
from zerosum.residue import as_modulus


def jacobi_reciprocity(a, n):
    """Binary quadratic-reciprocity algorithm, used as an independent oracle."""
    a %= n
    s = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                s = -s
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            s = -s
        a %= n
    return s if n == 1 else 0


def legendre_by_squares(a, p):
    return 1 if a % p in {x * x % p for x in range(1, p)} else -1


def test_factor_small():
    assert factor(1001).factors == ((7, 1), (11, 1), (13, 1))
    assert factor(539).factors == ((7, 2), (11, 1))
    assert factor(49).big_omega == 2 and factor(49).small_omega == 1
    assert factor(13).is_prime


@pytest.mark.parametrize("bad", [0, 1, -5, 2.5, "7", 1 << 70])
def test_factor_rejects(bad):
    with pytest.raises(InvalidInput):
        factor(bad)


@given(st.integers(min_value=2, max_value=10**6))
def test_factor_roundtrip(n):
    fm = factor(n)
    prod = 1
    for p, r in fm.factors:
        assert all(p % d for d in range(2, int(p ** 0.5) + 1))
        prod *= p ** r
    assert prod == n
    assert list(fm.primes) == sorted(fm.primes)


def test_units_and_phi():
    for n in (15, 49, 77, 539):
        fm = factor(n)
        assert fm.units == tuple(a for a in range(1, n) if gcd(a, n) == 1)
        assert fm.phi == len(fm.units)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 101])
def test_legendre_matches_squares(p):
    for a in range(1, p):
        assert legendre(a, p) == legendre_by_squares(a, p)


def test_legendre_errors():
    with pytest.raises(InvalidInput):
        legendre(2, 9)
    with pytest.raises(InvalidInput):
        legendre(7, 7)


@pytest.mark.parametrize("n", [3, 9, 15, 21, 45, 49, 77, 105, 539, 1001, 7007])
def test_jacobi_matches_reciprocity(n):
    for a in as_modulus(n).units:
        assert jacobi(a, n) == jacobi_reciprocity(a, n)


@given(st.integers(min_value=1, max_value=5000).filter(lambda n: n % 2 == 1 and n > 1), st.data())
def test_jacobi_random(n, data):
    a = data.draw(st.integers(min_value=1, max_value=n - 1).filter(lambda a: gcd(a, n) == 1))
    assert jacobi(a, n) == jacobi_reciprocity(a, n)


@pytest.mark.parametrize("n", [15, 49, 77, 539, 1001])
def test_jacobi_multiplicative(n):
    rng = random.Random(n)
    units = as_modulus(n).units
    for _ in range(200):
        a, b = rng.choice(units), rng.choice(units)
        assert jacobi(a * b % n, n) == jacobi(a, n) * jacobi(b, n)


def test_jacobi_examples():
    assert jacobi(2, 15) == 1
    assert jacobi(1, 9) == 1
    with pytest.raises(InvalidInput):
        jacobi(3, 15)
    with pytest.raises(InvalidInput):
        jacobi(1, 10)


def test_natural_map():
    assert natural_map(100, 77, 7) == 2
    assert natural_map(-1, 77, 11) == 10
    with pytest.raises(InvalidInput):
        natural_map(1, 77, 5)


@pytest.mark.parametrize("n", [15, 45, 77, 105, 539, 1001])
def test_crt_roundtrip_exhaustive(n):
    qs = as_modulus(n).prime_powers
    for x in range(n):
        assert crt_combine([(x % q, q) for q in qs], n) == x


def test_crt_rejects_wrong_moduli():
    with pytest.raises(InvalidInput):
        crt_combine([(1, 7), (2, 7)], 77)
    with pytest.raises(InvalidInput):
        crt_combine([(1, 7)], 77)

"""Arithmetic in Z_n: factored moduli, reduction maps, CRT and quadratic symbols.

Residues are plain Python ints in ``[0, n)``; the modulus always travels
alongside as an int or a :class:`FactoredModulus`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, prod

from .errors import InvalidInput

MAX_MODULUS = 2**64 - 1


@dataclass(frozen=True)
class FactoredModulus:
    """An integer n >= 2 together with its prime factorization.

    ``factors`` is a tuple of ``(p, r)`` pairs with p strictly increasing.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if prod(p**r for p, r in self.factors) != self.n:
            raise InvalidInput(f"factorization {self.factors} does not multiply to {self.n}")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)) or any(r < 1 for _, r in self.factors):
            raise InvalidInput(f"malformed factorization {self.factors}")

    def __int__(self):
        return self.n

    @property
    def big_omega(self) -> int:
        return sum(r for _, r in self.factors)

    @property
    def small_omega(self) -> int:
        return len(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def v(self, p: int) -> int:
        """Exponent of p in n (0 when p does not divide n)."""
        return dict(self.factors).get(p, 0)

    @property
    def is_prime(self) -> bool:
        return self.factors == ((self.n, 1),)

    @property
    def is_squarefree(self) -> bool:
        return all(r == 1 for _, r in self.factors)

    @property
    def is_square(self) -> bool:
        return all(r % 2 == 0 for _, r in self.factors)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**r for p, r in self.factors)

    @property
    def primes_with_multiplicity(self) -> tuple[int, ...]:
        return tuple(p for p, r in self.factors for _ in range(r))

    @cached_property
    def divisors(self) -> tuple[int, ...]:
        divs = [1]
        for p, r in self.factors:
            divs = [d * p**e for d in divs for e in range(r + 1)]
        return tuple(sorted(divs))

    @cached_property
    def units(self) -> tuple[int, ...]:
        return tuple(a for a in range(1, self.n) if gcd(a, self.n) == 1)

    @property
    def phi(self) -> int:
        return prod((p - 1) * p ** (r - 1) for p, r in self.factors)


@lru_cache(maxsize=4096)
def factor(n: int) -> FactoredModulus:
    """Factor n by trial division."""
    if not isinstance(n, int) or isinstance(n, bool):
        raise InvalidInput(f"modulus must be an int, got {n!r}")
    if n < 2:
        raise InvalidInput(f"modulus must be >= 2, got {n}")
    if n > MAX_MODULUS:
        raise InvalidInput(f"modulus {n} exceeds 64 bits")
    factors = []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            r = 0
            while m % d == 0:
                m //= d
                r += 1
            factors.append((d, r))
        d += 1 if d == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return FactoredModulus(n, tuple(factors))


def as_modulus(n) -> FactoredModulus:
    return n if isinstance(n, FactoredModulus) else factor(n)


def natural_map(a: int, n, m: int) -> int:
    """Image of a + nZ under the reduction Z_n -> Z_m."""
    n = int(n)
    if m < 2 or n % m:
        raise InvalidInput(f"{m} is not a divisor >= 2 of {n}")
    return a % n % m


def crt_combine(parts, n) -> int:
    """Combine ``[(residue, modulus), ...]`` into the residue mod n.

    The moduli must be exactly the prime-power components of n, in any order.
    """
    fm = as_modulus(n)
    parts = list(parts)
    if sorted(q for _, q in parts) != sorted(fm.prime_powers):
        raise InvalidInput(
            f"components {[q for _, q in parts]} do not match prime powers {list(fm.prime_powers)} of {fm.n}"
        )
    x = 0
    for r, q in parts:
        rest = fm.n // q
        x += (r % q) * rest * pow(rest, -1, q)
    return x % fm.n


def legendre(a: int, p: int) -> int:
    """Legendre symbol of a unit a modulo an odd prime p, as +1 or -1."""
    if p < 3 or not factor(p).is_prime:
        raise InvalidInput(f"{p} is not an odd prime")
    if a % p == 0:
        raise InvalidInput(f"{a} is not a unit mod {p}")
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def jacobi(a: int, n) -> int:
    """Jacobi symbol (a/n) as the product of Legendre symbols over n's factorization."""
    fm = as_modulus(n)
    if fm.n % 2 == 0:
        raise InvalidInput(f"Jacobi symbol needs odd n, got {fm.n}")
    if gcd(a, fm.n) != 1:
        raise InvalidInput(f"{a} is not a unit mod {fm.n}")
    s = 1
    for p, r in fm.factors:
        if r % 2:
            s *= legendre(a, p)
    return s


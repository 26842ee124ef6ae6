"""Weight sets A inside U(n) and the orbits they cut out of Z_n.

Spec strings name a weight set independently of its modulus::

    U             all units
    Usq           squares of units
    Q             quadratic residues (n must be an odd prime)
    S             kernel of the Jacobi symbol a -> (a/n)
    L:<p>         {a : (a/n) = (a/p)} for a prime p dividing n
    explicit:...  comma-separated residues, e.g. ``explicit:1,4``
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from .errors import InvalidInput
from .residue import FactoredModulus, as_modulus, jacobi, legendre

KINDS = ("U", "Usq", "Q", "S", "L", "explicit")


@dataclass(frozen=True, eq=False)
class WeightSet:
    modulus: FactoredModulus
    kind: str
    spec: str
    elements: tuple[int, ...]
    is_group: bool
    p_prime: int | None = None
    # orbit_rep[x] = min{a*x mod n : a in A}; None unless is_group.
    orbit_rep: np.ndarray | None = field(default=None, repr=False)
    _ax_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.modulus.n

    @property
    def mask(self) -> int:
        """Membership bit array packed into an int (bit x set iff x in A)."""
        m = 0
        for a in self.elements:
            m |= 1 << a
        return m

    @cached_property
    def members(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, x: int) -> bool:
        return x % self.n in self.members

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        if not isinstance(other, WeightSet):
            return NotImplemented
        return self.n == other.n and self.elements == other.elements

    def __hash__(self):
        return hash((self.n, self.elements))

    def __reduce__(self):
        # Rebuild from the spec string so pickles stay small and caches start empty.
        return (parse_spec, (self.spec, self.n))

    @cached_property
    def orbit_reps(self) -> tuple[int, ...]:
        """Sorted orbit representatives (all of Z_n for a non-group set)."""
        if self.is_group:
            return tuple(int(r) for r in np.unique(self.orbit_rep))
        return tuple(range(self.n))

    def rep(self, x: int) -> int:
        x %= self.n
        return int(self.orbit_rep[x]) if self.is_group else x

    def ax(self, x: int) -> tuple[int, tuple[int, ...]]:
        """The set A*x as ``(bitmask, sorted offsets)``; cached per orbit."""
        x %= self.n
        key = self.rep(x)
        hit = self._ax_cache.get(key)
        if hit is None:
            offsets = tuple(sorted({a * key % self.n for a in self.elements}))
            m = 0
            for s in offsets:
                m |= 1 << s
            hit = (m, offsets)
            self._ax_cache[key] = hit
        return hit

    @cached_property
    def unit_coset_reps(self) -> tuple[int, ...]:
        """Smallest element of each coset c*A in U(n)."""
        if not self.is_group:
            raise InvalidInput(f"weight set {self.spec} is not a group")
        seen = set()
        out = []
        for c in self.modulus.units:
            if c not in seen:
                out.append(c)
                seen.update(c * a % self.n for a in self.elements)
        return tuple(out)


def _closed(elements, n) -> bool:
    s = set(elements)
    return all(a * b % n in s for a in elements for b in elements)


def _orbit_table(elements, n) -> np.ndarray:
    arr = np.asarray(elements, dtype=np.int64)
    table = np.full(n, -1, dtype=np.int64)
    for x in range(n):
        if table[x] < 0:
            orbit = np.unique(arr * x % n)
            table[orbit] = orbit[0]
    table.flags.writeable = False
    return table


def build(kind: str, n, p_prime: int | None = None, values=None) -> WeightSet:
    """Construct a named weight set (or an explicit one from ``values``)."""
    fm = as_modulus(n)
    n = fm.n
    if kind not in KINDS:
        raise InvalidInput(f"unknown weight-set kind {kind!r}")
    if kind in ("Usq", "Q", "S", "L") and n % 2 == 0:
        raise InvalidInput(f"kind {kind} needs odd n, got {n}")
    units = fm.units
    if kind == "U":
        elements = units
    elif kind == "Usq":
        elements = tuple(sorted({x * x % n for x in units}))
    elif kind == "Q":
        if not fm.is_prime:
            raise InvalidInput(f"kind Q needs a prime modulus, got {n}")
        elements = tuple(sorted({x * x % n for x in units}))
    elif kind == "S":
        elements = tuple(a for a in units if jacobi(a, fm) == 1)
    elif kind == "L":
        if p_prime is None or p_prime not in fm.primes:
            raise InvalidInput(f"L needs a prime divisor of {n}, got {p_prime}")
        elements = tuple(a for a in units if jacobi(a, fm) == legendre(a, p_prime))
    else:
        if values is None:
            raise InvalidInput("explicit weight set needs values")
        elements = tuple(sorted({int(v) % n for v in values}))
        if not elements:
            raise InvalidInput("weight set must be nonempty")
        if 0 in elements:
            raise InvalidInput("weight set must not contain 0")
    if kind == "explicit":
        is_group = all(gcd(a, n) == 1 for a in elements) and _closed(elements, n)
    else:
        is_group = True
    spec = canonical_spec(kind, p_prime, elements)
    table = _orbit_table(elements, n) if is_group else None
    return WeightSet(fm, kind, spec, elements, is_group, p_prime if kind == "L" else None, table)


def canonical_spec(kind, p_prime=None, elements=()) -> str:
    if kind == "L":
        return f"L:{p_prime}"
    if kind == "explicit":
        return "explicit:" + ",".join(str(a) for a in elements)
    return kind


def parse_spec(spec: str, n) -> WeightSet:
    """Build a weight set from its spec string (see module docstring)."""
    spec = spec.strip()
    if spec in ("U", "Usq", "Q", "S"):
        return build(spec, n)
    head, sep, tail = spec.partition(":")
    if sep and head == "L":
        try:
            p = int(tail)
        except ValueError:
            raise InvalidInput(f"bad prime in weight spec {spec!r}") from None
        return build("L", n, p_prime=p)
    if sep and head == "explicit":
        try:
            values = [int(t) for t in tail.split(",") if t.strip()]
        except ValueError:
            raise InvalidInput(f"bad value list in weight spec {spec!r}") from None
        return build("explicit", n, values=values)
    raise InvalidInput(f"unrecognised weight spec {spec!r}")


def index_in_units(A: WeightSet) -> int:
    """The index [U(n) : A] of a group weight set."""
    if not A.is_group:
        raise InvalidInput(f"weight set {A.spec} is not a group")
    return A.modulus.phi // len(A)


def w_count(a: int, n) -> int:
    """Number of primes p | n (n squarefree) at which a is a non-residue."""
    fm = as_modulus(n)
    if not fm.is_squarefree:
        raise InvalidInput(f"{fm.n} is not squarefree")
    if gcd(a, fm.n) != 1:
        raise InvalidInput(f"{a} is not a unit mod {fm.n}")
    return sum(1 for p in fm.primes if legendre(a, p) == -1)


def image_under_map(A: WeightSet, m: int) -> frozenset:
    """The set f(A) for the reduction f: Z_n -> Z_m."""
    if m < 2 or A.n % m:
        raise InvalidInput(f"{m} is not a divisor >= 2 of {A.n}")
    return frozenset(a % m for a in A.elements)


def orbit_canon(A: WeightSet, x: int) -> int:
    if not A.is_group:
        raise InvalidInput(f"weight set {A.spec} is not a group")
    return A.rep(x)


def units_set(m: int) -> frozenset:
    return frozenset(as_modulus(m).units)

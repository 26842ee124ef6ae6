"""Weighted zero-sum decisions over Z_n with int-packed bitsets.

A subset of Z_n is stored as a Python int whose bit ``c`` is set iff ``c``
belongs to the subset. Adding a constant ``s`` mod n is a rotation by ``s``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded, InvalidInput
from .residue import FactoredModulus, as_modulus
from .weights import WeightSet

STRATIFY_CAP = 64


@dataclass(frozen=True)
class Seq:
    """A multiset over Z_n, kept in ascending order."""

    modulus: FactoredModulus
    terms: tuple[int, ...]

    @classmethod
    def of(cls, n, terms) -> "Seq":
        fm = as_modulus(n)
        return cls(fm, tuple(sorted(int(t) % fm.n for t in terms)))

    @property
    def n(self) -> int:
        return self.modulus.n

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other) -> "Seq":
        return Seq.of(self.modulus, self.terms + tuple(other))


@dataclass(frozen=True)
class SumReach:
    """Sums reachable by A-weighted nonempty subsequences.

    ``by_length[j]`` (when present) holds the sums reached using exactly j terms;
    index 0 is the empty sum {0}.
    """

    n: int
    reachable: int
    by_length: tuple[int, ...] | None = None

    def __contains__(self, c: int) -> bool:
        return bool(self.reachable >> (c % self.n) & 1)

    def as_set(self) -> frozenset:
        return bits_to_set(self.reachable)

    def exact(self, j: int) -> frozenset:
        if self.by_length is None:
            raise InvalidInput("reach was not computed with length stratification")
        return bits_to_set(self.by_length[j]) if j < len(self.by_length) else frozenset()


def bits_to_set(mask: int) -> frozenset:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def set_to_bits(values) -> int:
    m = 0
    for v in values:
        m |= 1 << v
    return m


def _rotate(mask: int, s: int, n: int, full: int) -> int:
    if s == 0:
        return mask
    return ((mask << s) | (mask >> (n - s))) & full


def sumset(x: int, y: int, n: int, y_offsets=None) -> int:
    """The mod-n sumset of two bitsets, rotating by members of the smaller one."""
    if not x or not y:
        return 0
    full = (1 << n) - 1
    if y_offsets is not None and len(y_offsets) <= x.bit_count():
        offsets, base = y_offsets, x
    elif x.bit_count() <= y.bit_count():
        offsets, base = bits_to_set(x), y
    else:
        offsets, base = bits_to_set(y), x
    out = 0
    for s in offsets:
        out |= _rotate(base, s, n, full)
        if out == full:
            break
    return out


def extend_reach(r: int, x: int, A: WeightSet) -> int:
    """Reach after appending term x to a sequence whose reach is r."""
    ax_mask, ax_offsets = A.ax(x)
    return r | ax_mask | sumset(r, ax_mask, A.n, ax_offsets)


def _terms(S, A: WeightSet):
    if isinstance(S, Seq):
        if S.n != A.n:
            raise InvalidInput(f"sequence lives in Z_{S.n} but weights in Z_{A.n}")
        return S.terms
    return tuple(int(t) % A.n for t in S)


def reach(S, A: WeightSet) -> SumReach:
    r = 0
    for x in _terms(S, A):
        r = extend_reach(r, x, A)
    return SumReach(A.n, r)


def has_zero_sum_subseq(S, A: WeightSet) -> bool:
    """True iff some nonempty subsequence has an A-weighted sum of 0."""
    r = 0
    for x in _terms(S, A):
        if x == 0:
            return True
        r = extend_reach(r, x, A)
        if r & 1:
            return True
    return False


def is_zero_sum_seq(S, A: WeightSet) -> bool:
    """True iff the whole sequence admits weights in A summing to 0."""
    terms = _terms(S, A)
    if not terms:
        raise InvalidInput("the empty sequence has no weighted sum")
    t = 1
    for x in terms:
        ax_mask, ax_offsets = A.ax(x)
        t = sumset(t, ax_mask, A.n, ax_offsets)
    return bool(t & 1)


def extend_stratified(layers: list[int], x: int, A: WeightSet, top: int) -> list[int]:
    """Append x to stratified reach ``layers`` (index = term count), keeping lengths <= top."""
    ax_mask, ax_offsets = A.ax(x)
    out = list(layers)
    if len(out) <= top:
        out.append(0)
    for j in range(len(out) - 1, 0, -1):
        if layers[j - 1]:
            out[j] |= sumset(layers[j - 1], ax_mask, A.n, ax_offsets)
    return out


def reach_by_length(S, A: WeightSet, cap: int = STRATIFY_CAP) -> SumReach:
    terms = _terms(S, A)
    if len(terms) > cap:
        raise BudgetExceeded(f"stratified reach limited to {cap} terms, got {len(terms)}")
    layers = [1]
    for x in terms:
        layers = extend_stratified(layers, x, A, len(terms))
    reachable = 0
    for m in layers[1:]:
        reachable |= m
    return SumReach(A.n, reachable, tuple(layers))


def coset_sumset(pairs, n) -> frozenset:
    """The sumset W_1*x_1 + ... + W_k*x_k in Z_n for ``pairs = [(W_i, x_i), ...]``."""
    n = int(n)
    pairs = list(pairs)
    if not pairs:
        raise InvalidInput("coset_sumset needs at least one (weights, term) pair")
    t = 1
    for weights, x in pairs:
        weights = list(weights)
        if not weights:
            raise InvalidInput("every weight set must be nonempty")
        t = sumset(t, set_to_bits({w * x % n for w in weights}), n)
    return bits_to_set(t)

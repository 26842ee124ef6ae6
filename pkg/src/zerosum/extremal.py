"""Enumeration and structural classification of A-extremal sequences.

Two sequences are equivalent with respect to a group A when one is obtained
from the other by a permutation, per-term multiplication by elements of A and
a global multiplication by a unit c. A clause of the form "S is equivalent to
some (y_1, ..., y_k) such that P" is decided by trying every permutation of
c*S for c running over coset representatives of A in U(n). Per-term factors
from A can be skipped: every clause predicate below is unchanged by them,
because each one only looks at divisibility, at A-cosets, or at images in a
quotient ring where the image of A lies inside the quotient's weight set.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from math import gcd

from .engine import has_zero_sum_subseq
from .errors import InvalidInput
from .residue import as_modulus, crt_combine, factor
from .search import Budget, _candidates, davenport, run_branches
from .weights import WeightSet, parse_spec


@dataclass
class ExtremalReport:
    n: int
    weight_spec: str
    davenport_value: int
    classes: list[tuple[int, ...]]
    labels: list[list[str]]
    unmatched: list[tuple[int, ...]]
    theorem: str | None = None
    partial: bool = False
    node_count: int = field(default=0, compare=False)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "weights": self.weight_spec,
            "davenport_value": self.davenport_value,
            "theorem": self.theorem,
            "partial": self.partial,
            "classes": [list(c) for c in self.classes],
            "labels": self.labels,
            "unmatched": [list(c) for c in self.unmatched],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _require_group(A: WeightSet):
    if not A.is_group:
        raise InvalidInput(f"weight set {A.spec} is not a group; equivalence is undefined")


def canonical_equiv_form(S, A: WeightSet) -> tuple[int, ...]:
    """Lexicographically least sorted representative of the equivalence class of S."""
    _require_group(A)
    n = A.n
    terms = [int(x) % n for x in S]
    return min(tuple(sorted(A.rep(c * x) for x in terms)) for c in A.unit_coset_reps)


def _class_key(S, A: WeightSet) -> tuple[int, ...]:
    if A.is_group:
        return canonical_equiv_form(S, A)
    # Without a group structure only reordering is allowed.
    return tuple(sorted(int(x) % A.n for x in S))


def representatives(S, A: WeightSet):
    """Every ordering of c*S for c over coset representatives of A in U(n)."""
    _require_group(A)
    n = A.n
    seen = set()
    for c in A.unit_coset_reps:
        scaled = tuple(c * int(x) % n for x in S)
        for ys in permutations(scaled):
            if ys not in seen:
                seen.add(ys)
                yield ys


# -- operational "X-extremal" tests on quotient rings ------------------------

@lru_cache(maxsize=None)
def weights_for(spec: str, m: int) -> WeightSet:
    return parse_spec(spec, m)


@lru_cache(maxsize=None)
def davenport_value(spec: str, m: int) -> int:
    rec = davenport(weights_for(spec, m))
    if not rec.exact:
        raise InvalidInput(f"D for {spec} mod {m} is not known exactly")
    return rec.value


def is_x_extremal(terms, m: int, spec: str) -> bool:
    """True iff ``terms`` (reduced mod m) is extremal for weight set ``spec`` over Z_m."""
    terms = [int(t) % m for t in terms]
    if len(terms) != davenport_value(spec, m) - 1:
        return False
    return not has_zero_sum_subseq(terms, weights_for(spec, m))


def _only_off(ys, d) -> bool:
    """y_1 is the only term not divisible by d."""
    return ys[0] % d != 0 and all(y % d == 0 for y in ys[1:])


# -- clause predicates, one per labelled form --------------------------------
# Each takes an ordered representative ``ys`` and the context ``A``.

def _qp_residue(ys, A):
    p = A.n
    Q = weights_for("Q", p).members
    return len(ys) == 2 and ys[0] % p in Q and (-ys[1]) % p not in Q and ys[1] % p != 0


def _exts_chain(ys, A):
    n = A.n
    for p in A.modulus.primes:
        if _only_off(ys, p) and is_x_extremal(ys[1:], n // p, "U"):
            return True
    return False


def _exts_residue(ys, A):
    n = A.n
    if len(ys) != 2 or gcd(ys[0], n) != 1 or gcd(ys[1], n) != 1:
        return False
    return ys[0] in A and (-ys[1]) % n not in A


def _u_extremal(ys, A):
    return is_x_extremal(ys, A.n, "U")


def _extl3_cofactor(ys, A):
    n, pp = A.n, A.p_prime
    cof = n // pp
    return (
        len(ys) == 3 and ys[2] % n != 0 and ys[2] % cof == 0
        and is_x_extremal(ys[:2], cof, "S")
    )


def _extl3_single(ys, A):
    n, pp = A.n, A.p_prime
    if len(ys) != 3:
        return False
    for p in A.modulus.primes:
        if _only_off(ys, p):
            spec = "S" if p == pp else "U"
            if is_x_extremal(ys[1:], n // p, spec):
                return True
    return False


def _other_prime(A):
    (q,) = [p for p in A.modulus.primes if p != A.p_prime]
    return q


def _extl2_div_q(ys, A):
    q = _other_prime(A)
    return (
        len(ys) == 3 and ys[0] % A.n != 0 and ys[0] % q == 0
        and ys[1] % q != 0 and ys[2] % q != 0
        and is_x_extremal(ys[1:], q, "Q")
    )


def _extl2_coprime_pp(ys, A):
    q = _other_prime(A)
    return len(ys) == 3 and _only_off(ys, A.p_prime) and is_x_extremal(ys[1:], q, "Q")


def _square_prime(A):
    (pp,) = [p for p, r in A.modulus.factors if r == 2]
    return pp


def _ds22_split(ys, A):
    pp = _square_prime(A)
    (q,) = [p for p in A.modulus.primes if p != pp]
    return (
        len(ys) == 4 and ys[0] % q == 0 and ys[1] % q == 0
        and is_x_extremal(ys[:2], pp * pp, "U")
        and is_x_extremal(ys[2:], q, "Q")
    )


def _lifted_l(ys, A):
    # (y_2/p', y_3/p', y_4/p') read in Z_{n/p'} must be L(n/p'; p')-extremal.
    pp = _square_prime(A)
    if len(ys) != 4 or not _only_off(ys, pp):
        return False
    return is_x_extremal([y // pp for y in ys[1:]], A.n // pp, f"L:{pp}")


def _ds2w3_split(ys, A):
    pp = _square_prime(A)
    cof = A.n // (pp * pp)
    return (
        len(ys) == 4 and ys[2] % cof == 0 and ys[3] % cof == 0
        and is_x_extremal(ys[:2], cof, "S")
        and is_x_extremal(ys[2:], pp * pp, "U")
    )


CLAUSES = {
    "qp": [("qp.residue-form", _qp_residue)],
    "exts": [("exts.chain-form", _exts_chain), ("exts.omega2.residue-form", _exts_residue)],
    "extl": [("extl.u-extremal", _u_extremal)],
    "extl3": [("extl3.divisible-cofactor-form", _extl3_cofactor), ("extl3.single-coprime-form", _extl3_single)],
    "extl2": [("extl2.divisible-q-form", _extl2_div_q), ("extl2.coprime-pprime-form", _extl2_coprime_pp)],
    "ds2": [("ds2.u-extremal", _u_extremal)],
    "ds22": [("ds22.split-form", _ds22_split), ("ds22.lifted-l-form", _lifted_l)],
    "ds2w3": [("ds2w3.u-extremal", _u_extremal), ("ds2w3.lifted-l-form", _lifted_l), ("ds2w3.split-form", _ds2w3_split)],
}

# Clauses that only need the sequence itself, not a chosen representative.
_WHOLE_SEQUENCE = {"extl.u-extremal", "ds2.u-extremal", "ds2w3.u-extremal"}


def covering_theorem(A: WeightSet) -> str | None:
    """Name of the clause family describing A-extremal sequences, if any."""
    fm = A.modulus
    if fm.n % 2 == 0 or not A.is_group:
        return None
    if fm.is_prime and A.kind in ("Q", "S", "Usq"):
        return "qp"
    if any(p < 7 for p in fm.primes):
        return None
    if A.kind == "S" and fm.is_squarefree and fm.big_omega >= 2:
        return "exts"
    if A.kind == "L" and fm.is_squarefree:
        return {2: "extl2", 3: "extl3"}.get(fm.big_omega, "extl")
    exps = sorted(r for _, r in fm.factors)
    if A.kind == "S" and exps.count(2) == 1 and exps.count(1) == len(exps) - 1:
        return {2: "ds22", 3: "ds2w3"}.get(fm.small_omega, "ds2")
    return None


def match_clauses(S, A: WeightSet) -> list[str]:
    """Labels of every clause whose form some equivalent representative of S takes.

    Does not check that S is extremal; see :func:`classify_extremal`.
    """
    family = covering_theorem(A)
    if family is None:
        return []
    terms = tuple(int(x) % A.n for x in S)
    out = []
    for label, pred in CLAUSES[family]:
        if label in _WHOLE_SEQUENCE:
            hit = pred(terms, A)
        else:
            hit = any(pred(ys, A) for ys in representatives(terms, A))
        if hit:
            out.append(label)
    return out


def classify_extremal(S, A: WeightSet) -> list[str]:
    """Clause labels matched by an A-extremal sequence S."""
    terms = [int(x) % A.n for x in S]
    if len(terms) != davenport_value(A.spec, A.n) - 1 or has_zero_sum_subseq(terms, A):
        raise InvalidInput(f"{terms} is not {A.spec}-extremal mod {A.n}")
    return match_clauses(terms, A)


def _classify_task(args):
    spec, n, cls = args
    return match_clauses(cls, weights_for(spec, n))


def enumerate_extremal(A: WeightSet, budget: Budget | None = None, jobs: int = 1) -> ExtremalReport:
    """All A-extremal sequences up to equivalence, each with its clause labels."""
    rec = davenport(A, budget, jobs)
    length = rec.value - 1
    results = run_branches(A, "D", budget, jobs, collect=length)
    partial = not rec.exact or not all(r.complete for r in results)
    nodes = rec.node_count + sum(r.nodes for r in results)
    found = {_class_key(seq, A) for r in results for seq in r.collected}
    classes = sorted(found)
    if jobs > 1 and len(classes) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            labels = list(pool.map(_classify_task, [(A.spec, A.n, c) for c in classes]))
    else:
        labels = [match_clauses(c, A) for c in classes]
    theorem = covering_theorem(A)
    unmatched = [c for c, lab in zip(classes, labels) if not lab] if theorem else []
    return ExtremalReport(A.n, A.spec, rec.value, classes, labels, unmatched, theorem, partial, nodes)


def all_classes(A: WeightSet, length: int) -> list[tuple[int, ...]]:
    """Every equivalence class of length-``length`` sequences over Z_n, zero-sum or not."""
    _require_group(A)
    n = A.n
    cands, firsts = _candidates(A, with_zero=True)
    pos = {c: i for i, c in enumerate(cands)}
    out = set()
    for first in firsts:
        floor = gcd(first, n)
        rest = [c for c in cands[pos[first]:] if gcd(c, n) >= floor]
        for tail in combinations_with_replacement(rest, length - 1):
            out.add(canonical_equiv_form((first,) + tail, A))
    return sorted(out)


@dataclass
class Characterization:
    """Outcome of checking "extremal <=> matches a clause" over every class."""

    n: int
    weight_spec: str
    theorem: str
    davenport_value: int
    total_classes: int
    extremal_classes: int
    missing: list  # extremal but no clause matches
    spurious: list  # some clause matches but not extremal
    label_counts: dict

    @property
    def ok(self) -> bool:
        return not self.missing and not self.spurious


def characterize(A: WeightSet) -> Characterization:
    """Check both directions of the clause family for A over all classes of length D-1."""
    theorem = covering_theorem(A)
    if theorem is None:
        raise InvalidInput(f"no clause family covers {A.spec} mod {A.n}")
    d = davenport_value(A.spec, A.n)
    missing, spurious = [], []
    counts: dict = {}
    extremal = 0
    classes = all_classes(A, d - 1)
    for cls in classes:
        zsf = not has_zero_sum_subseq(cls, A)
        labels = match_clauses(cls, A)
        extremal += zsf
        for lab in labels:
            counts[lab] = counts.get(lab, 0) + 1
        if zsf and not labels:
            missing.append(cls)
        if labels and not zsf:
            spurious.append(cls)
    return Characterization(A.n, A.spec, theorem, d, len(classes), extremal, missing, spurious, counts)


def check_su(n, budget: Budget | None = None, jobs: int = 1) -> bool:
    """S(n)- and U(n)-extremal sequences coincide (n squarefree, Omega >= 3, primes >= 7)."""
    fm = as_modulus(n)
    if not fm.is_squarefree or fm.big_omega < 3 or min(fm.primes) < 7:
        raise InvalidInput(f"{fm.n} must be squarefree with Omega >= 3 and all primes >= 7")
    S = weights_for("S", fm.n)
    U = weights_for("U", fm.n)
    rs = enumerate_extremal(S, budget, jobs)
    ru = enumerate_extremal(U, budget, jobs)
    if rs.partial or ru.partial or rs.davenport_value != ru.davenport_value:
        return False
    # Every S-extremal class must already be U-zero-sum free ...
    if any(has_zero_sum_subseq(c, U) for c in rs.classes):
        return False
    # ... and the two class lists must agree once both are read up to U-equivalence.
    s_as_u = {canonical_equiv_form(c, U) for c in rs.classes}
    if s_as_u != set(ru.classes):
        return False
    # Each U-class must split into S-classes that were all enumerated.
    s_set = set(rs.classes)
    return all(canonical_equiv_form(c, S) in s_set for c in ru.classes)


def spot_check_forms(n: int = 7007) -> dict:
    """Build one instance of each clause form for n = p1*p2*p'^2 and check it.

    Returns ``{label: (sequence, zero_sum_free, labels_matched)}``.
    """
    fm = factor(n)
    A = weights_for("S", n)
    if covering_theorem(A) != "ds2w3":
        raise InvalidInput(f"{n} is not of the form p1*p2*p'^2 with primes >= 7")
    pp = _square_prime(A)
    m = pp * pp
    cof = n // m
    out = {}

    chain = [1]
    for p in fm.primes_with_multiplicity[:-1]:
        chain.append(chain[-1] * p)
    out["ds2w3.u-extremal"] = chain

    lw = davenport(weights_for(f"L:{pp}", n // pp)).witness
    out["ds2w3.lifted-l-form"] = [1] + [pp * z for z in lw]

    sw = davenport(weights_for("S", cof)).witness
    uw = davenport(weights_for("U", m)).witness
    tail = [crt_combine([(u, m)] + [(0, p) for p in as_modulus(cof).prime_powers], n) for u in uw]
    out["ds2w3.split-form"] = list(sw) + tail

    return {
        label: (tuple(seq), not has_zero_sum_subseq(seq, A), match_clauses(seq, A))
        for label, seq in out.items()
    }

import json
import random
from itertools import combinations_with_replacement

import pytest

from zerosum import (InvalidInput, build, canonical_equiv_form, check_su, classify_extremal, davenport,
                     enumerate_extremal, has_zero_sum_subseq, parse_spec)
from zerosum.extremal import all_classes, characterize, covering_theorem, match_clauses, spot_check_forms
from zerosum.residue import factor


def random_equivalent(S, A, rng):
    n = A.n
    u = rng.choice(factor(n).units)
    out = [u * rng.choice(A.elements) * x % n for x in S]
    rng.shuffle(out)
    return out


@pytest.mark.parametrize("n,spec", [(15, "S"), (77, "S"), (77, "L:7"), (539, "S"), (1001, "S"), (49, "Usq")])
def test_canonical_form_invariant(n, spec):
    A = parse_spec(spec, n)
    rng = random.Random(n)
    for _ in range(200):
        S = [rng.randrange(n) for _ in range(rng.randint(1, 4))]
        assert canonical_equiv_form(S, A) == canonical_equiv_form(random_equivalent(S, A, rng), A)


@pytest.mark.parametrize("n,spec", [(15, "S"), (21, "Usq"), (77, "L:11")])
def test_canonical_form_matches_full_unit_scan(n, spec):
    A = parse_spec(spec, n)
    units = factor(n).units
    rng = random.Random(7 * n)
    for _ in range(100):
        S = [rng.randrange(n) for _ in range(3)]
        full = min(tuple(sorted(A.rep(u * x) for x in S)) for u in units)
        assert canonical_equiv_form(S, A) == full


def test_canonical_form_needs_group():
    with pytest.raises(InvalidInput):
        canonical_equiv_form([1, 2], parse_spec("explicit:1,2", 7))


def brute_class_count(A):
    """Extremal classes via union-find over every zero-sum free multiset of length D-1."""
    n = A.n
    length = davenport(A).value - 1
    seqs = [s for s in combinations_with_replacement(range(1, n), length) if not has_zero_sum_subseq(s, A)]
    parent = {s: s for s in seqs}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    def union(a, b):
        parent[find(a)] = find(b)

    for s in seqs:
        for u in factor(n).units:
            union(s, tuple(sorted(u * x % n for x in s)))
        for i in range(length):
            for a in A.elements:
                t = list(s)
                t[i] = a * t[i] % n
                union(s, tuple(sorted(t)))
    return len({find(s) for s in seqs})


SMALL = [(n, "U") for n in (3, 5, 7, 9, 15, 21)] + [(n, "S") for n in (5, 7, 11, 13, 15, 21)]
SMALL += [(n, "Usq") for n in (7, 9, 13, 17)] + [(15, "L:3"), (21, "L:7"), (19, "Usq")]


@pytest.mark.parametrize("n,spec", SMALL)
def test_class_count_complete(n, spec):
    A = parse_spec(spec, n)
    rep = enumerate_extremal(A)
    assert not rep.partial
    assert len(rep.classes) == brute_class_count(A)
    assert len(set(rep.classes)) == len(rep.classes)
    for c in rep.classes:
        assert not has_zero_sum_subseq(c, A)
        assert canonical_equiv_form(c, A) == c


@pytest.mark.parametrize("n,spec,count", [
    (7, "Q", 1), (11, "Q", 1), (13, "S", 1), (77, "S", 4), (1001, "S", 25), (77, "L:7", 5), (77, "L:11", 5),
    (1001, "L:7", 34), (1001, "L:11", 34), (1001, "L:13", 33), (539, "S", 18), (49, "S", 1),
])
def test_class_counts_frozen(n, spec, count):
    rep = enumerate_extremal(parse_spec(spec, n))
    assert len(rep.classes) == count
    assert rep.unmatched == []


@pytest.mark.parametrize("n,spec", [(7, "Q"), (11, "Q"), (13, "S"), (77, "S"), (77, "L:7"), (77, "L:11"),
                                    (539, "S"), (49, "S"), (1001, "S"), (1001, "L:11")])
def test_characterization_both_directions(n, spec):
    c = characterize(parse_spec(spec, n))
    assert c.ok, (c.missing, c.spurious)
    assert c.extremal_classes > 0


def test_qp_form():
    A = build("Q", 11)
    # x1 a residue and -x2 a non-residue: (1, 1) since -1 is a non-residue mod 11.
    assert classify_extremal([1, 1], A) == ["qp.residue-form"]
    with pytest.raises(InvalidInput):
        classify_extremal([1, 10], A)  # 1 + 10 = 0
    with pytest.raises(InvalidInput):
        classify_extremal([1], A)  # wrong length


def test_omega2_overlap_flags():
    rep = enumerate_extremal(build("S", 77))
    labels = dict(zip(rep.classes, rep.labels))
    assert sum("exts.chain-form" in v for v in labels.values()) == 3
    assert sum("exts.omega2.residue-form" in v for v in labels.values()) == 1
    assert all(len(v) == 1 for v in labels.values())
    rep = enumerate_extremal(build("L", 77, p_prime=7))
    assert sum(len(v) == 2 for v in rep.labels) == 1


def test_constructed_chain_instances_are_extremal():
    A = build("S", 77)
    for S in ([1, 7], [1, 11], [7, 11]):
        assert classify_extremal(S, A) == ["exts.chain-form"]


def test_su_1001():
    assert check_su(1001)
    with pytest.raises(InvalidInput):
        check_su(77)
    with pytest.raises(InvalidInput):
        check_su(105)


def test_spot_7007():
    forms = spot_check_forms(7007)
    assert set(forms) == {"ds2w3.u-extremal", "ds2w3.lifted-l-form", "ds2w3.split-form"}
    for label, (seq, zsf, labels) in forms.items():
        assert zsf and label in labels
        assert len(seq) == 4


def test_no_family_outside_hypotheses():
    assert covering_theorem(build("S", 15)) is None  # prime 3 < 7
    assert covering_theorem(build("U", 1001)) is None
    assert match_clauses([1, 1, 1], build("S", 15)) == []
    rep = enumerate_extremal(build("S", 15))
    assert rep.theorem is None and rep.unmatched == []
    with pytest.raises(InvalidInput):
        characterize(build("S", 15))


def test_all_classes_counts_small():
    # Unordered pairs over Z_7 up to U(7): {0,0}, {0,1}, {1,1}, {1,x} for x in 2..6 up to scaling.
    A = build("U", 7)
    assert all_classes(A, 1) == [(0,), (1,)]
    assert len(all_classes(A, 2)) == len({canonical_equiv_form(p, A)
                                          for p in combinations_with_replacement(range(7), 2)})


def test_report_json_deterministic():
    a = enumerate_extremal(build("L", 77, p_prime=11)).to_json()
    b = enumerate_extremal(build("L", 77, p_prime=11), jobs=3).to_json()
    assert a == b
    assert json.loads(a)["theorem"] == "extl2"


def test_canonical_examples_mod_7():
    Q = build("Q", 7)
    assert canonical_equiv_form([4, 1], Q) == canonical_equiv_form([1, 4], Q)
    assert canonical_equiv_form([2, 1], Q) == canonical_equiv_form([1, 4], Q)
    assert canonical_equiv_form([0, 3], Q) == (0, 1)  # zero is fixed by every action
    with pytest.raises(InvalidInput):
        check_su(15)

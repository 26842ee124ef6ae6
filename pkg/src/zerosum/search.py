"""Exhaustive computation of D_A(n) and E_A(n), plus constructive witnesses.

The search walks multisets of orbit representatives in a fixed order and only
extends prefixes that are still alive (zero-sum free for D; free of length-n
zero-sums for E). Both properties are hereditary, so every alive multiset is
reached through alive prefixes.

When A is a group, a global unit c can move any chosen term x to gcd(x, n).
Choosing x with the smallest gcd makes gcd(x, n) the least element of the
scaled multiset, so branches start at a divisor d of n and later terms must
have gcd >= d. Zero sorts last.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import gcd

from .engine import Seq, extend_reach, extend_stratified, has_zero_sum_subseq, reach_by_length
from .errors import BudgetExceeded, InvalidInput, InvariantError
from .residue import as_modulus
from .weights import WeightSet, build, image_under_map

E_MAX_N = 21


@dataclass(frozen=True)
class Budget:
    max_nodes: int | None = None
    max_seconds: float | None = None


@dataclass
class ConstantRecord:
    n: int
    weight_spec: str
    constant_kind: str  # "D" or "E"
    value: int
    witness: tuple[int, ...]
    status: str  # "exact" or "lower_bound"
    elapsed_ms: float = field(default=0.0, compare=False)
    node_count: int = 0

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["witness"] = list(self.witness)
        return d


@dataclass
class _BranchResult:
    best: tuple[int, ...]
    nodes: int
    complete: bool
    collected: list = field(default_factory=list)


class _Abort(Exception):
    pass


def _order_key(n):
    return lambda x: x if x else n


def _candidates(A: WeightSet, with_zero: bool) -> tuple[list[int], list[int]]:
    n = A.n
    cands = sorted((r for r in A.orbit_reps if with_zero or r), key=_order_key(n))
    if A.is_group:
        firsts = [c for c in cands if c == 0 or n % c == 0]
    else:
        firsts = list(cands)
    return cands, firsts


class _Walker:
    """Depth-first walk of one first-term branch."""

    def __init__(self, A: WeightSet, mode: str, max_nodes, deadline, collect=None):
        self.A = A
        self.n = A.n
        self.mode = mode
        self.max_nodes = max_nodes
        self.deadline = deadline
        self.collect = collect
        self.cands, _ = _candidates(A, with_zero=(mode == "E"))
        self.gcds = [gcd(c, self.n) for c in self.cands]
        self.nodes = 0
        self.best: tuple[int, ...] = ()
        self.collected: list[tuple[int, ...]] = []

    def _step(self, state, c):
        """Return the extended state, or None if the extension is dead."""
        if self.mode == "D":
            if c == 0:
                return None
            r = extend_reach(state, c, self.A)
            return None if r & 1 else r
        layers = extend_stratified(state, c, self.A, self.n)
        if len(layers) > self.n and layers[self.n] & 1:
            return None
        return layers

    def _tick(self):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _Abort
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise _Abort

    def run(self, first: int) -> _BranchResult:
        init = 0 if self.mode == "D" else [1]
        i0 = self.cands.index(first)
        floor = self.gcds[i0] if self.A.is_group else 1
        complete = True
        try:
            self._tick()
            state = self._step(init, first)
            if state is not None:
                self._dfs(i0, (first,), state, floor)
        except _Abort:
            complete = False
        return _BranchResult(self.best, self.nodes, complete, self.collected)

    def _dfs(self, i0, prefix, state, floor):
        if len(prefix) > len(self.best):
            self.best = prefix
        if self.collect is not None and len(prefix) == self.collect:
            self.collected.append(prefix)
            return
        for i in range(i0, len(self.cands)):
            if self.gcds[i] < floor:
                continue
            self._tick()
            c = self.cands[i]
            nxt = self._step(state, c)
            if nxt is not None:
                self._dfs(i, prefix + (c,), nxt, floor)


def _branch_task(args):
    A, mode, first, max_nodes, deadline, collect = args
    return _Walker(A, mode, max_nodes, deadline, collect).run(first)


def run_branches(A: WeightSet, mode: str, budget: Budget | None, jobs: int = 1, collect=None):
    """Run every first-term branch, in parallel when ``jobs > 1``; results in branch order."""
    budget = budget or Budget()
    deadline = time.monotonic() + budget.max_seconds if budget.max_seconds is not None else None
    _, firsts = _candidates(A, with_zero=(mode == "E"))
    tasks = [(A, mode, f, budget.max_nodes, deadline, collect) for f in firsts]
    if jobs <= 1 or len(tasks) <= 1:
        return [_branch_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_branch_task, tasks))


def _merge(results, budget: Budget | None):
    best: tuple[int, ...] = ()
    nodes = 0
    complete = True
    for r in results:
        nodes += r.nodes
        complete &= r.complete
        if len(r.best) > len(best):
            best = r.best
    if budget is not None and budget.max_nodes is not None and nodes > budget.max_nodes:
        complete = False
    return best, nodes, complete


def davenport(A: WeightSet, budget: Budget | None = None, jobs: int = 1) -> ConstantRecord:
    """D_A(n): one more than the longest A-weighted zero-sum free sequence."""
    if not A.elements or 0 in A.members:
        raise InvalidInput("weights must be nonempty and exclude 0")
    t0 = time.perf_counter()
    best, nodes, complete = _merge(run_branches(A, "D", budget, jobs), budget)
    witness = Seq.of(A.n, best).terms
    if has_zero_sum_subseq(witness, A):
        raise InvariantError(f"witness {witness} mod {A.n} has a zero-sum subsequence")
    return ConstantRecord(
        A.n, A.spec, "D", len(best) + 1, witness,
        "exact" if complete else "lower_bound",
        (time.perf_counter() - t0) * 1000, nodes,
    )


def has_length_n_zero_sum(S, A: WeightSet) -> bool:
    layers = reach_by_length(S, A).by_length
    return len(layers) > A.n and bool(layers[A.n] & 1)


def e_constant(A: WeightSet, budget: Budget | None = None, jobs: int = 1) -> ConstantRecord:
    """E_A(n): least m forcing an A-weighted zero-sum subsequence of length exactly n."""
    if A.n > E_MAX_N:
        raise BudgetExceeded(f"E_A(n) search is limited to n <= {E_MAX_N}, got {A.n}")
    if not A.elements or 0 in A.members:
        raise InvalidInput("weights must be nonempty and exclude 0")
    t0 = time.perf_counter()
    best, nodes, complete = _merge(run_branches(A, "E", budget, jobs), budget)
    witness = Seq.of(A.n, best).terms
    if has_length_n_zero_sum(witness, A):
        raise InvariantError(f"witness {witness} mod {A.n} has a length-{A.n} zero-sum")
    return ConstantRecord(
        A.n, A.spec, "E", len(best) + 1, witness,
        "exact" if complete else "lower_bound",
        (time.perf_counter() - t0) * 1000, nodes,
    )


def canonical_chain_witness(n) -> Seq:
    """(1, p_1, p_1 p_2, ...) for n = p_1 p_2 ... p_k, primes ascending with multiplicity."""
    fm = as_modulus(n)
    primes = fm.primes_with_multiplicity
    terms = [1]
    for p in primes[:-1]:
        terms.append(terms[-1] * p)
    seq = Seq.of(fm, terms)
    if has_zero_sum_subseq(seq, build("U", fm)):
        raise InvariantError(f"chain {terms} mod {fm.n} is not zero-sum free")
    return seq


def dadd_witness(n, m1, m2, A: WeightSet, A1: WeightSet, A2: WeightSet, S1, S2) -> Seq:
    """Glue zero-sum free sequences mod m1 and mod m2 into one mod n = m1*m2.

    Terms of S1 are lifted and multiplied by m2; terms of S2 are lifted as is.
    """
    n = int(n)
    if m1 * m2 != n or A.n != n or A1.n != m1 or A2.n != m2:
        raise InvalidInput(f"moduli do not fit: n={n}, m1={m1}, m2={m2}")
    if not image_under_map(A, m1) <= A1.members:
        raise InvalidInput(f"{A.spec} mod {n} does not map into {A1.spec} mod {m1}")
    if not image_under_map(A, m2) <= A2.members:
        raise InvalidInput(f"{A.spec} mod {n} does not map into {A2.spec} mod {m2}")
    S1 = [int(x) % m1 for x in S1]
    S2 = [int(y) % m2 for y in S2]
    if has_zero_sum_subseq(S1, A1):
        raise InvalidInput(f"{S1} is not {A1.spec}-zero-sum free mod {m1}")
    if has_zero_sum_subseq(S2, A2):
        raise InvalidInput(f"{S2} is not {A2.spec}-zero-sum free mod {m2}")
    seq = Seq.of(n, [m2 * w % n for w in S1] + S2)
    if has_zero_sum_subseq(seq, A):
        raise InvariantError(f"glued sequence {seq.terms} mod {n} has a zero-sum subsequence")
    return seq

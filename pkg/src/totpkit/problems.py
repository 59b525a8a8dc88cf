"""Self-reducible counting problems with polynomial-time prefix oracles.

Each problem binds its instance at construction, so the ``x`` argument of
the :class:`~totpkit.core.CountingProblem` interface is ignored. Two
independent oracles live here too: Ryser's formula for the permanent and a
determinized dynamic program for NFA string counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .core import CountingProblem, OracleScaleError, UsageError

__all__ = [
    "InvalidInstance",
    "DnfFormula",
    "MonotoneCnf",
    "Nfa",
    "BipartiteGraph",
    "DnfProblem",
    "MonotoneCnfProblem",
    "NfaProblem",
    "PerfectMatchingProblem",
    "dnf_problem",
    "monotone_cnf_problem",
    "nfa_problem",
    "perfect_matching_problem",
    "ryser_permanent",
    "nfa_det_count",
    "augmenting_matching",
]


class InvalidInstance(UsageError):
    pass


@dataclass(frozen=True)
class DnfFormula:
    """Disjunction of terms; a term is a tuple of signed variable indices (1-based)."""

    n: int
    terms: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidInstance(f"negative variable count {self.n}")
        for t in self.terms:
            for lit in t:
                if lit == 0 or abs(lit) > self.n:
                    raise InvalidInstance(f"literal {lit} out of range 1..{self.n}")
                if -lit in t:
                    raise InvalidInstance(f"term {t} contains {abs(lit)} and its negation")


@dataclass(frozen=True)
class MonotoneCnf:
    n: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidInstance(f"negative variable count {self.n}")
        for cl in self.clauses:
            if not cl:
                raise InvalidInstance("empty clause")
            for v in cl:
                if not 1 <= v <= self.n:
                    raise InvalidInstance(f"literal {v} is not a variable in 1..{self.n}")


@dataclass(frozen=True)
class Nfa:
    """Binary-alphabet NFA together with the target string length ``length``."""

    states: int
    transitions: frozenset[tuple[int, int, int]]
    initial: frozenset[int]
    accepting: frozenset[int]
    length: int

    def __post_init__(self) -> None:
        if self.states < 0 or self.length < 0:
            raise InvalidInstance("state count and target length must be nonnegative")
        for q in self.initial | self.accepting:
            if not 0 <= q < self.states:
                raise InvalidInstance(f"state {q} out of range")
        for src, sym, dst in self.transitions:
            if sym not in (0, 1):
                raise InvalidInstance(f"symbol {sym} not in {{0,1}}")
            if not (0 <= src < self.states and 0 <= dst < self.states):
                raise InvalidInstance(f"transition {src} {sym} {dst} references a missing state")

    @classmethod
    def build(cls, states: int, transitions: Iterable[tuple[int, int, int]],
              initial: Iterable[int], accepting: Iterable[int], length: int) -> Nfa:
        return cls(states, frozenset(transitions), frozenset(initial), frozenset(accepting), length)

    def with_length(self, length: int) -> Nfa:
        return Nfa(self.states, self.transitions, self.initial, self.accepting, length)

    @cached_property
    def delta(self) -> tuple[tuple[frozenset[int], frozenset[int]], ...]:
        succ: list[tuple[set[int], set[int]]] = [(set(), set()) for _ in range(self.states)]
        for src, sym, dst in self.transitions:
            succ[src][sym].add(dst)
        return tuple((frozenset(a), frozenset(b)) for a, b in succ)

    def step(self, current: frozenset[int], sym: int) -> frozenset[int]:
        out: set[int] = set()
        for q in current:
            out |= self.delta[q][sym]
        return frozenset(out)

    @cached_property
    def accept_within(self) -> tuple[frozenset[int], ...]:
        """Entry ``k``: states with a path of exactly ``k`` steps to acceptance."""
        levels = [self.accepting]
        for _ in range(self.length):
            prev = levels[-1]
            levels.append(frozenset(
                q for q in range(self.states)
                if self.delta[q][0] & prev or self.delta[q][1] & prev))
        return tuple(levels)


@dataclass(frozen=True)
class BipartiteGraph:
    """``k x k`` 0/1 biadjacency matrix; rows are left vertices."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        k = len(self.matrix)
        for row in self.matrix:
            if len(row) != k:
                raise InvalidInstance(f"biadjacency matrix is not {k}x{k}")
            if any(v not in (0, 1) for v in row):
                raise InvalidInstance("biadjacency entries must be 0 or 1")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> BipartiteGraph:
        return cls(tuple(tuple(r) for r in rows))

    @property
    def k(self) -> int:
        return len(self.matrix)

    @property
    def width(self) -> int:
        """Bits per partner index."""
        return (self.k - 1).bit_length() if self.k > 1 else 0


class DnfProblem(CountingProblem):
    """Satisfying assignments of a DNF; bit ``i`` is variable ``i + 1``."""

    def __init__(self, formula: DnfFormula) -> None:
        self.formula = formula

    def witness_length(self, x=None) -> int:
        return self.formula.n

    def _is_witness(self, x, y, calls) -> bool:
        return self._can_extend(x, y, calls)

    def _can_extend(self, x, c, calls) -> bool:
        # a consistent term stays satisfiable unless c already falsifies it
        m = len(c)
        for term in self.formula.terms:
            for lit in term:
                v = abs(lit)
                if v <= m and (c[v - 1] == "1") != (lit > 0):
                    break
            else:
                return True
        return False


class MonotoneCnfProblem(CountingProblem):
    def __init__(self, formula: MonotoneCnf) -> None:
        self.formula = formula

    def witness_length(self, x=None) -> int:
        return self.formula.n

    def _is_witness(self, x, y, calls) -> bool:
        return self._can_extend(x, y, calls)

    def _can_extend(self, x, c, calls) -> bool:
        # setting every free variable true is the best completion
        m = len(c)
        return all(any(v > m or c[v - 1] == "1" for v in cl) for cl in self.formula.clauses)


class NfaProblem(CountingProblem):
    """Accepted strings of length exactly ``nfa.length``."""

    def __init__(self, nfa: Nfa) -> None:
        self.nfa = nfa

    def witness_length(self, x=None) -> int:
        return self.nfa.length

    def _is_witness(self, x, y, calls) -> bool:
        return self._can_extend(x, y, calls)

    def _can_extend(self, x, c, calls) -> bool:
        a = self.nfa
        cur = a.initial
        for ch in c:
            cur = a.step(cur, ch == "1")
            if not cur:
                return False
        return bool(cur & a.accept_within[a.length - len(c)])


def augmenting_matching(adj: list[list[int]], calls=None) -> int:
    """Maximum matching size by Kuhn's augmenting paths, one search per left vertex.

    ``calls.calls`` is bumped once per augmenting-path search.
    """
    match_right: dict[int, int] = {}

    def try_augment(u: int, seen: set[int]) -> bool:
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_right or try_augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    size = 0
    for u in range(len(adj)):
        if calls is not None:
            calls.calls += 1
        if try_augment(u, set()):
            size += 1
        else:
            break  # a perfect matching is already impossible
    return size


class PerfectMatchingProblem(CountingProblem):
    """Perfect matchings; block ``i`` of the witness names row ``i``'s partner column."""

    def __init__(self, graph: BipartiteGraph) -> None:
        self.graph = graph

    def witness_length(self, x=None) -> int:
        return self.graph.k * self.graph.width

    def _decode(self, s: str) -> tuple[list[int], str] | None:
        """Partners named by the complete blocks of ``s``, plus the partial block.

        ``None`` when some complete block is out of range, repeated, or not an edge.
        """
        g = self.graph
        w = g.width
        nfull = len(s) // w if w else g.k
        partners: list[int] = []
        for i in range(nfull):
            v = int(s[i * w:(i + 1) * w], 2) if w else 0
            if v >= g.k or v in partners or not g.matrix[i][v]:
                return None
            partners.append(v)
        return partners, s[nfull * w:] if w else ""

    def _is_witness(self, x, y, calls) -> bool:
        return self._decode(y) is not None

    def _can_extend(self, x, c, calls) -> bool:
        g = self.graph
        w = g.width
        if w == 0:
            # k <= 1: nothing to choose
            return self._decode(c) is not None
        dec = self._decode(c)
        if dec is None:
            return False
        partners, partial = dec
        j = len(partners)
        if j == g.k:
            return True
        used = set(partners)
        adj = []
        for i in range(j, g.k):
            cols = [v for v in range(g.k) if g.matrix[i][v] and v not in used]
            if i == j and partial:
                cols = [v for v in cols if format(v, f"0{w}b").startswith(partial)]
            adj.append(cols)
        return augmenting_matching(adj, calls) == len(adj)


def dnf_problem(formula: DnfFormula) -> DnfProblem:
    return DnfProblem(formula)


def monotone_cnf_problem(formula: MonotoneCnf) -> MonotoneCnfProblem:
    return MonotoneCnfProblem(formula)


def nfa_problem(nfa: Nfa) -> NfaProblem:
    return NfaProblem(nfa)


def perfect_matching_problem(graph: BipartiteGraph) -> PerfectMatchingProblem:
    return PerfectMatchingProblem(graph)


RYSER_MAX_K = 20
NFA_MAX_STATES = 16


def ryser_permanent(graph: BipartiteGraph | Iterable[Iterable[int]], *,
                    max_k: int = RYSER_MAX_K) -> int:
    """Permanent by inclusion-exclusion over column subsets, in Gray-code order."""
    if not isinstance(graph, BipartiteGraph):
        graph = BipartiteGraph.from_rows(graph)
    a = graph.matrix
    k = graph.k
    if k > max_k:
        raise OracleScaleError(f"Ryser oracle limited to k <= {max_k}, got {k}")
    if k == 0:
        return 1
    row_sums = [0] * k
    total = 0
    gray = 0
    for step in range(1, 1 << k):
        bit = (step & -step).bit_length() - 1
        gray ^= 1 << bit
        sign = 1 if gray >> bit & 1 else -1
        for i in range(k):
            row_sums[i] += sign * a[i][bit]
        prod = 1
        for s in row_sums:
            prod *= s
            if not prod:
                break
        # subset S contributes (-1)^(k - |S|) * prod_i sum_{j in S} a_ij
        total += -prod if (k - bin(gray).count("1")) & 1 else prod
    return total


def nfa_det_count(nfa: Nfa, *, max_states: int = NFA_MAX_STATES) -> int:
    """Accepted strings of length ``nfa.length``, via the subset construction.

    Counts strings per reachable DFA state, one length at a time, so every
    string is counted exactly once.
    """
    if nfa.states > max_states:
        raise OracleScaleError(f"subset construction limited to {max_states} states")
    dfa: dict[frozenset[int], tuple[frozenset[int], frozenset[int]]] = {}
    layer = {nfa.initial: 1}
    for _ in range(nfa.length):
        nxt: dict[frozenset[int], int] = {}
        for s, n in layer.items():
            if s not in dfa:
                dfa[s] = (_subset_step(nfa, s, 0), _subset_step(nfa, s, 1))
            for t in dfa[s]:
                nxt[t] = nxt.get(t, 0) + n
        layer = nxt
    return sum(n for s, n in layer.items() if s & nfa.accepting)


def _subset_step(nfa: Nfa, s: frozenset[int], sym: int) -> frozenset[int]:
    out: set[int] = set()
    for src, a, dst in nfa.transitions:
        if a == sym and src in s:
            out.add(dst)
    return frozenset(out)

"""Counting problems with a prefix-extension oracle, and their computation trees.

A counting problem fixes, for every instance ``x``, a witness length ``p(x)``,
a witness predicate on binary strings of that length, and a prefix oracle
``can_extend(x, c)`` that tells whether some witness starts with ``c``.
The number of witnesses is then computable by a depth-first search whose work
is proportional to ``p * count``, and it equals the number of paths of an
explicit nondeterministic computation tree, minus one.

Witnesses are Python strings over ``"0"`` and ``"1"``. Counts are plain
``int`` values, so they never overflow.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

__all__ = [
    "DEFAULT_MAX_P",
    "CallCounter",
    "CountingProblem",
    "Oracle",
    "WitnessSetProblem",
    "FullCube",
    "OracleScaleError",
    "IntegrityError",
    "UsageError",
    "Tree",
    "Leaf",
    "Step",
    "Branch",
    "LEAF",
    "brute_force_count",
    "brute_force_witnesses",
    "count",
    "canonical_tree",
    "tree_total",
    "tree_tot",
    "tree_depth",
    "full_tree",
    "tree_paths",
    "tree_to_problem",
    "Violation",
    "ValidationReport",
    "validate_oracle",
]

#: brute-force enumeration refuses witness lengths above this by default
DEFAULT_MAX_P = 24


class OracleScaleError(ValueError):
    """An exhaustive oracle was asked to enumerate too many strings."""


class IntegrityError(RuntimeError):
    """The prefix oracle contradicts the witness predicate."""


class UsageError(ValueError):
    """A caller violated an argument precondition."""


class CallCounter:
    """Per-run tally of oracle calls.

    ``calls`` counts calls made directly against a problem. Calls that a
    composite problem issues to its components while answering one of those
    are tallied one level down, in ``inner``.
    """

    __slots__ = ("calls", "_inner")

    def __init__(self) -> None:
        self.calls = 0
        self._inner: CallCounter | None = None

    @property
    def inner(self) -> CallCounter:
        if self._inner is None:
            self._inner = CallCounter()
        return self._inner

    def total(self) -> int:
        n, node = 0, self
        while node is not None:
            n += node.calls
            node = node._inner
        return n

    def __repr__(self) -> str:
        return f"CallCounter(calls={self.calls}, total={self.total()})"


def _inner(calls: CallCounter | None) -> CallCounter | None:
    return None if calls is None else calls.inner


class CountingProblem(ABC):
    """Witness predicate plus prefix-extension oracle.

    Subclasses implement :meth:`witness_length`, :meth:`_is_witness` and
    :meth:`_can_extend`. The public :meth:`is_witness` and :meth:`can_extend`
    wrappers bump the caller's :class:`CallCounter` and hand the inner counter
    to the implementation, which passes it on to any component problems.

    Subclasses must guarantee that ``can_extend(x, c)`` holds exactly when a
    witness with prefix ``c`` exists. :func:`validate_oracle` checks this by
    exhaustion at small sizes.
    """

    @abstractmethod
    def witness_length(self, x: Any = None) -> int:
        """Length ``p(x)`` shared by every witness of ``x``."""

    @abstractmethod
    def _is_witness(self, x: Any, y: str, calls: CallCounter | None) -> bool: ...

    @abstractmethod
    def _can_extend(self, x: Any, c: str, calls: CallCounter | None) -> bool: ...

    def is_witness(self, x: Any, y: str, calls: CallCounter | None = None) -> bool:
        if calls is not None:
            calls.calls += 1
        return self._is_witness(x, y, _inner(calls))

    def can_extend(self, x: Any, c: str, calls: CallCounter | None = None) -> bool:
        if calls is not None:
            calls.calls += 1
        return self._can_extend(x, c, _inner(calls))

    def oracle(self, x: Any = None, calls: CallCounter | None = None) -> Oracle:
        return Oracle(self, x, calls)


class Oracle:
    """A problem bound to one instance and one call counter."""

    __slots__ = ("problem", "x", "calls", "p")

    def __init__(self, problem: CountingProblem, x: Any = None,
                 calls: CallCounter | None = None) -> None:
        self.problem = problem
        self.x = x
        self.calls = calls
        self.p = problem.witness_length(x)

    def is_witness(self, y: str) -> bool:
        return self.problem.is_witness(self.x, y, self.calls)

    def can_extend(self, c: str) -> bool:
        return self.problem.can_extend(self.x, c, self.calls)


def _as_oracle(problem: CountingProblem | Oracle, x: Any,
               calls: CallCounter | None) -> Oracle:
    if isinstance(problem, Oracle):
        return problem
    return Oracle(problem, x, calls)


class WitnessSetProblem(CountingProblem):
    """Explicitly listed witnesses of a fixed length; ignores the instance."""

    def __init__(self, p: int, witnesses: Iterable[str]) -> None:
        if p < 0:
            raise UsageError(f"negative witness length {p}")
        ws = frozenset(witnesses)
        for w in ws:
            if len(w) != p or set(w) - {"0", "1"}:
                raise UsageError(f"{w!r} is not a binary string of length {p}")
        self.p = p
        self.witnesses = ws
        self._prefixes = frozenset(w[:i] for w in ws for i in range(p + 1))

    def witness_length(self, x=None) -> int:
        return self.p

    def _is_witness(self, x, y, calls) -> bool:
        return y in self.witnesses

    def _can_extend(self, x, c, calls) -> bool:
        return c in self._prefixes

    def __repr__(self) -> str:
        return f"WitnessSetProblem({self.p}, {sorted(self.witnesses)})"


class FullCube(CountingProblem):
    """Every string of length ``p`` is a witness."""

    def __init__(self, p: int) -> None:
        self.p = p

    def witness_length(self, x=None) -> int:
        return self.p

    def _is_witness(self, x, y, calls) -> bool:
        return True

    def _can_extend(self, x, c, calls) -> bool:
        return True


def _all_strings(p: int) -> Iterator[str]:
    for bits in itertools.product("01", repeat=p):
        yield "".join(bits)


def _guard(p: int, max_p: int) -> None:
    if p > max_p:
        raise OracleScaleError(
            f"exhaustive enumeration over 2^{p} strings exceeds the limit 2^{max_p}")


def brute_force_witnesses(problem: CountingProblem, x: Any = None, *,
                          max_p: int = DEFAULT_MAX_P) -> list[str]:
    """All witnesses in lexicographic order, found by trying every string."""
    p = problem.witness_length(x)
    _guard(p, max_p)
    return [y for y in _all_strings(p) if problem.is_witness(x, y)]


def brute_force_count(problem: CountingProblem, x: Any = None, *,
                      max_p: int = DEFAULT_MAX_P) -> int:
    """Count witnesses by trying all ``2^p`` strings. Never consults ``can_extend``."""
    p = problem.witness_length(x)
    _guard(p, max_p)
    return sum(1 for y in _all_strings(p) if problem.is_witness(x, y))


def count(problem: CountingProblem, x: Any = None,
          calls: CallCounter | None = None) -> int:
    """Count witnesses by depth-first search over extendable prefixes.

    Issues at most ``2 * (p + 1) * (N + 1)`` oracle calls for ``N`` witnesses.
    Raises :class:`IntegrityError` when the prefix oracle and the predicate
    disagree along the way.
    """
    orc = Oracle(problem, x, calls)
    p = orc.p
    if not orc.can_extend(""):
        return 0
    n = 0
    stack = [""]
    while stack:
        c = stack.pop()
        if len(c) == p:
            if not orc.is_witness(c):
                raise IntegrityError(f"prefix oracle accepts non-witness {c!r}")
            n += 1
            continue
        ext = [c + b for b in "10" if orc.can_extend(c + b)]
        if not ext:
            raise IntegrityError(f"prefix {c!r} is extendable but neither child is")
        stack.extend(ext)
    return n


# Computation trees. Branch is a nondeterministic step, Step a deterministic one.

class Tree:
    __slots__ = ()


@dataclass(frozen=True)
class Leaf(Tree):
    pass


@dataclass(frozen=True)
class Step(Tree):
    child: Tree


@dataclass(frozen=True)
class Branch(Tree):
    left: Tree
    right: Tree


LEAF = Leaf()


def _children(t: Tree) -> tuple[Tree, ...]:
    if isinstance(t, Branch):
        return (t.left, t.right)
    if isinstance(t, Step):
        return (t.child,)
    return ()


def tree_total(t: Tree) -> int:
    """Number of root-to-leaf paths."""
    n, stack = 0, [t]
    while stack:
        node = stack.pop()
        kids = _children(node)
        if kids:
            stack.extend(kids)
        else:
            n += 1
    return n


def tree_tot(t: Tree) -> int:
    return tree_total(t) - 1


def tree_depth(t: Tree) -> int:
    """Length of the longest root-to-leaf path, in edges."""
    best, stack = 0, [(t, 0)]
    while stack:
        node, d = stack.pop()
        best = max(best, d)
        stack.extend((k, d + 1) for k in _children(node))
    return best


def full_tree(depth: int) -> Tree:
    t: Tree = LEAF
    for _ in range(depth):
        t = Branch(t, t)
    return t


def canonical_tree(problem: CountingProblem, x: Any = None,
                   calls: CallCounter | None = None) -> Tree:
    """Computation tree whose path count is ``count(problem, x) + 1``.

    With no witness the tree is a single leaf. Otherwise the root branches
    into a leaf and a subtree that grows the witness one bit at a time,
    branching only where both ``y0`` and ``y1`` are extendable.
    """
    orc = Oracle(problem, x, calls)
    p = orc.p
    if not orc.can_extend(""):
        return LEAF

    def guess(y: str) -> Tree:
        if len(y) == p:
            if not orc.is_witness(y):
                raise IntegrityError(f"prefix oracle accepts non-witness {y!r}")
            return LEAF
        zero, one = orc.can_extend(y + "0"), orc.can_extend(y + "1")
        if zero and one:
            return Branch(guess(y + "0"), guess(y + "1"))
        if zero or one:
            return Step(guess(y + ("0" if zero else "1")))
        raise IntegrityError(f"prefix {y!r} is extendable but neither child is")

    return Branch(LEAF, guess(""))


def tree_paths(t: Tree) -> list[str]:
    """Padded path encodings of ``t`` in lexicographic order.

    A branch contributes the bit of the child taken, a deterministic step
    contributes ``0``, and paths ending early are padded with zeros up to
    :func:`tree_depth`.
    """
    depth = tree_depth(t)
    out: list[str] = []

    def walk(node: Tree, prefix: str) -> None:
        if isinstance(node, Branch):
            walk(node.left, prefix + "0")
            walk(node.right, prefix + "1")
        elif isinstance(node, Step):
            walk(node.child, prefix + "0")
        else:
            out.append(prefix.ljust(depth, "0"))

    walk(t, "")
    return out


class TreeProblem(CountingProblem):
    """Witnesses are the paths of a tree other than the lexicographically largest."""

    def __init__(self, tree: Tree) -> None:
        self.tree = tree
        self.depth = tree_depth(tree)
        self._branchy: dict[int, bool] = {}

    def witness_length(self, x=None) -> int:
        return self.depth

    def _has_branch(self, node: Tree) -> bool:
        key = id(node)
        hit = self._branchy.get(key)
        if hit is None:
            hit = any(isinstance(n, Branch) for n in _iter_nodes(node))
            self._branchy[key] = hit
        return hit

    def _walk(self, c: str) -> tuple[Tree | None, bool, bool]:
        """Follow ``c`` from the root.

        Returns the node reached (``None`` if ``c`` is not a path prefix),
        whether the walk already left the rightmost spine, and whether it
        ended inside the zero padding below a leaf.
        """
        node = self.tree
        off_spine = False
        for i, bit in enumerate(c):
            if isinstance(node, Branch):
                if bit == "0":
                    node, off_spine = node.left, True
                else:
                    node = node.right
            elif isinstance(node, Step):
                if bit != "0":
                    return None, off_spine, False
                node = node.child
            else:
                if "1" in c[i:]:
                    return None, off_spine, True
                return node, off_spine, True
        return node, off_spine, False

    def _is_witness(self, x, y, calls) -> bool:
        if len(y) != self.depth:
            return False
        node, off_spine, _ = self._walk(y)
        return node is not None and off_spine

    def _can_extend(self, x, c, calls) -> bool:
        node, off_spine, _ = self._walk(c)
        if node is None:
            return False
        return off_spine or self._has_branch(node)


def _iter_nodes(t: Tree) -> Iterator[Tree]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(_children(node))


def tree_to_problem(t: Tree) -> CountingProblem:
    """Problem counting the paths of ``t`` except the lexicographically largest.

    Its count equals ``tree_tot(t)``.
    """
    return TreeProblem(t)


@dataclass(frozen=True)
class Violation:
    kind: str  # "soundness", "completeness", "monotonicity", "leaf", "determinism"
    prefix: str
    detail: str = ""


@dataclass
class ValidationReport:
    p: int
    witnesses: int
    prefixes_checked: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_oracle(problem: CountingProblem, x: Any = None, *,
                    max_p: int = DEFAULT_MAX_P,
                    check_determinism: bool = True) -> ValidationReport:
    """Check the prefix oracle against brute force on every prefix.

    Soundness and completeness compare ``can_extend`` with the true prefix
    language; monotonicity requires every prefix of an extendable string to be
    extendable; leaf consistency compares ``can_extend`` with ``is_witness``
    at full length. With ``check_determinism`` every query is asked twice.
    """
    p = problem.witness_length(x)
    _guard(p, max_p)
    truth: dict[str, bool] = {}
    nwit = 0
    violations: list[Violation] = []
    for y in _all_strings(p):
        w = problem.is_witness(x, y)
        if check_determinism and problem.is_witness(x, y) != w:
            violations.append(Violation("determinism", y, "is_witness"))
        truth[y] = w
        nwit += w
    for length in range(p - 1, -1, -1):
        for c in _all_strings(length):
            truth[c] = truth[c + "0"] or truth[c + "1"]

    answer: dict[str, bool] = {}
    for c, real in truth.items():
        got = problem.can_extend(x, c)
        if check_determinism and problem.can_extend(x, c) != got:
            violations.append(Violation("determinism", c, "can_extend"))
        answer[c] = got
        if got and not real:
            violations.append(Violation("soundness", c, "extendable but no witness has this prefix"))
        elif real and not got:
            violations.append(Violation("completeness", c, "a witness has this prefix"))
    for c, got in answer.items():
        if got and c and not answer[c[:-1]]:
            violations.append(Violation("monotonicity", c, f"parent {c[:-1]!r} not extendable"))
        if len(c) == p and got != truth[c]:
            violations.append(Violation("leaf", c, f"can_extend={got} is_witness={truth[c]}"))
    return ValidationReport(p, nwit, len(truth), violations)

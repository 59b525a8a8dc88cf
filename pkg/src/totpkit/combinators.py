"""Closure constructions: new counting problems built from old ones.

Each combinator returns a :class:`~totpkit.core.CountingProblem` whose
witness set is an explicit function of the components' witness sets, and
whose prefix oracle only queries the components' oracles. Counts compose as
follows (``N`` is the component count, ``k = g(x)``):

=============  ===========================================================
``add``        ``N_f + N_g``
``mul``        ``N_f * N_g``
``dec1``       ``max(N_f - 1, 0)``
``sub_fp``     ``max(N_f - k, 0)``
``pow_``       ``N_f ** k``, except ``0`` when ``N_f = 0``
``binom``      ``C(N_f, k)``, except ``0`` when ``N_f = 0``
``poly_sum``   ``sum(N_{f(x, y)} for y in 0..k)``
``poly_prod``  ``prod(N_{f(x, y)} for y in 0..k)``
=============  ===========================================================

Per call of the constructed ``can_extend``, the component oracle work is:
``add``/``mul``/``pow_``/``poly_prod`` O(1) component calls plus one per
block; ``dec1`` at most ``3 * (2p + 2)``; ``sub_fp`` at most
``(k + 2) * (2p + 2)``; ``binom`` at most ``k`` block checks plus
``(k + 1) * (2p + 2)``; ``poly_sum`` at most ``k + 1``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .core import CountingProblem, Oracle, UsageError
from .enumeration import _next_gt, next_witness_geq

__all__ = [
    "BoundedFP",
    "IndexedFamily",
    "add",
    "mul",
    "dec1",
    "sub_fp",
    "pow_",
    "binom",
    "poly_sum",
    "poly_prod",
    "ONE",
    "ZERO",
    "span_value",
    "plu_value",
]


@dataclass(frozen=True)
class BoundedFP:
    """A nonnegative, polynomially small function of the instance.

    ``bounded`` records the caller's promise that the value is small enough
    to enumerate that many witnesses.
    """

    evaluator: Callable[[Any], int]
    bounded: bool = True

    @classmethod
    def constant(cls, k: int) -> BoundedFP:
        if k < 0:
            raise UsageError(f"negative constant {k}")
        return cls(lambda x, _k=k: _k)

    def __call__(self, x: Any = None) -> int:
        v = self.evaluator(x)
        if v < 0:
            raise UsageError(f"bounded function returned negative value {v}")
        return v


def _as_fp(g: BoundedFP | int) -> BoundedFP:
    fp = BoundedFP.constant(g) if isinstance(g, int) else g
    if not fp.bounded:
        raise UsageError("this construction needs a polynomially bounded g")
    return fp


@dataclass(frozen=True)
class IndexedFamily:
    """Maps ``(x, y)`` to the problem whose count at ``x`` is ``f(x, y)``."""

    member: Callable[[Any, int], CountingProblem]

    @classmethod
    def of(cls, problems: Sequence[CountingProblem]) -> IndexedFamily:
        """Family indexed by position; indices past the end are empty."""
        seq = tuple(problems)
        return cls(lambda x, y: seq[y] if y < len(seq) else ZERO)

    def __call__(self, x: Any, y: int) -> CountingProblem:
        return self.member(x, y)


class _Const(CountingProblem):
    def __init__(self, value: bool) -> None:
        self.value = value

    def witness_length(self, x=None) -> int:
        return 0

    def _is_witness(self, x, y, calls) -> bool:
        return self.value and y == ""

    def _can_extend(self, x, c, calls) -> bool:
        return self.value and c == ""

    def __repr__(self) -> str:
        return "ONE" if self.value else "ZERO"


#: the problem with exactly one witness, the empty string
ONE = _Const(True)
#: the problem with no witnesses
ZERO = _Const(False)


def _zeros(s: str) -> bool:
    return "1" not in s


class _Add(CountingProblem):
    def __init__(self, f: CountingProblem, g: CountingProblem) -> None:
        self.parts = (f, g)

    def witness_length(self, x=None) -> int:
        return 1 + max(q.witness_length(x) for q in self.parts)

    def _is_witness(self, x, y, calls) -> bool:
        q = self.parts[y[0] == "1"]
        pq = q.witness_length(x)
        rest = y[1:]
        return _zeros(rest[pq:]) and q.is_witness(x, rest[:pq], calls)

    def _can_extend(self, x, c, calls) -> bool:
        if not c:
            return any(q.can_extend(x, "", calls) for q in self.parts)
        q = self.parts[c[0] == "1"]
        pq = q.witness_length(x)
        rest = c[1:]
        return _zeros(rest[pq:]) and q.can_extend(x, rest[:pq], calls)


def add(f: CountingProblem, g: CountingProblem) -> CountingProblem:
    """Tag bit selects a witness of ``f`` (0) or ``g`` (1), zero-padded to a common length."""
    return _Add(f, g)


class _Mul(CountingProblem):
    def __init__(self, f: CountingProblem, g: CountingProblem) -> None:
        self.f, self.g = f, g

    def witness_length(self, x=None) -> int:
        return self.f.witness_length(x) + self.g.witness_length(x)

    def _is_witness(self, x, y, calls) -> bool:
        pf = self.f.witness_length(x)
        return self.f.is_witness(x, y[:pf], calls) and self.g.is_witness(x, y[pf:], calls)

    def _can_extend(self, x, c, calls) -> bool:
        pf = self.f.witness_length(x)
        if len(c) <= pf:
            return self.f.can_extend(x, c, calls) and self.g.can_extend(x, "", calls)
        return self.f.is_witness(x, c[:pf], calls) and self.g.can_extend(x, c[pf:], calls)


def mul(f: CountingProblem, g: CountingProblem) -> CountingProblem:
    """Witnesses are a witness of ``f`` followed by a witness of ``g``."""
    return _Mul(f, g)


def _skip_smallest(orc: Oracle, k: int) -> str | None:
    """The (k+1)-th smallest witness, or None if there are at most k."""
    w = next_witness_geq(orc, c="0" * orc.p)
    for _ in range(k):
        if w is None:
            return None
        w = _next_gt(orc, w)
    return w


def _first_with_prefix_from(orc: Oracle, c: str, lo: str) -> str | None:
    """Smallest witness ``>= lo`` that starts with ``c``."""
    start = c.ljust(orc.p, "0")
    if lo > start:
        if not lo.startswith(c):
            return None
        start = lo
    w = next_witness_geq(orc, c=start)
    return w if w is not None and w.startswith(c) else None


class _DropSmallest(CountingProblem):
    """All witnesses of ``f`` from the (k+1)-th smallest on."""

    def __init__(self, f: CountingProblem, k: BoundedFP) -> None:
        self.f, self.k = f, k

    def witness_length(self, x=None) -> int:
        return self.f.witness_length(x)

    def _threshold(self, x, calls) -> str | None:
        return _skip_smallest(Oracle(self.f, x, calls), self.k(x))

    def _is_witness(self, x, y, calls) -> bool:
        t = self._threshold(x, calls)
        return t is not None and y >= t and self.f.is_witness(x, y, calls)

    def _can_extend(self, x, c, calls) -> bool:
        t = self._threshold(x, calls)
        if t is None:
            return False
        return _first_with_prefix_from(Oracle(self.f, x, calls), c, t) is not None


class _Dec1(CountingProblem):
    def __init__(self, f: CountingProblem) -> None:
        self.f = f

    def witness_length(self, x=None) -> int:
        return self.f.witness_length(x)

    def _is_witness(self, x, y, calls) -> bool:
        orc = Oracle(self.f, x, calls)
        if not orc.is_witness(y):
            return False
        return next_witness_geq(orc, c="0" * orc.p) != y

    def _can_extend(self, x, c, calls) -> bool:
        orc = Oracle(self.f, x, calls)
        w = next_witness_geq(orc, c=c.ljust(orc.p, "0"))
        if w is None or not w.startswith(c):
            return False
        smallest = next_witness_geq(orc, c="0" * orc.p)
        if w != smallest:
            return True
        w2 = _next_gt(orc, w)
        return w2 is not None and w2.startswith(c)


def dec1(f: CountingProblem) -> CountingProblem:
    """All witnesses of ``f`` except the lexicographically smallest."""
    return _Dec1(f)


def sub_fp(f: CountingProblem, g: BoundedFP | int) -> CountingProblem:
    """All witnesses of ``f`` except the ``g(x)`` smallest; count ``f ⊖ g``."""
    return _DropSmallest(f, _as_fp(g))


def _blocks(c: str, width: int, k: int) -> tuple[list[str], str]:
    if width == 0:
        return [""] * k, ""
    j = min(len(c) // width, k)
    return [c[i * width:(i + 1) * width] for i in range(j)], c[j * width:]


class _Tuples(CountingProblem):
    """``k`` concatenated witnesses of ``f``; strictly increasing when ``distinct``."""

    def __init__(self, f: CountingProblem, k: BoundedFP, distinct: bool) -> None:
        self.f, self.k, self.distinct = f, k, distinct

    def witness_length(self, x=None) -> int:
        return self.k(x) * self.f.witness_length(x)

    def _is_witness(self, x, y, calls) -> bool:
        k = self.k(x)
        orc = Oracle(self.f, x, calls)
        if k == 0:
            return orc.can_extend("")
        full, _ = _blocks(y, orc.p, k)
        if self.distinct and any(a >= b for a, b in zip(full, full[1:])):
            return False
        return all(orc.is_witness(b) for b in full)

    def _can_extend(self, x, c, calls) -> bool:
        k = self.k(x)
        orc = Oracle(self.f, x, calls)
        if k == 0 or orc.p == 0:
            # no bits to choose: the only candidate is ε (or a run of ε blocks)
            if not orc.can_extend(""):
                return False
            return not self.distinct or k <= 1
        full, r = _blocks(c, orc.p, k)
        if len(full) == k:
            return self._is_witness(x, c, calls)
        if self.distinct and any(a >= b for a, b in zip(full, full[1:])):
            return False
        if not all(orc.is_witness(b) for b in full):
            return False
        if not self.distinct:
            return orc.can_extend(r)
        lo = full[-1] if full else None
        if lo is None:
            w = _first_with_prefix_from(orc, r, "0" * orc.p)
        else:
            start = r.ljust(orc.p, "0")
            if start > lo:
                w = _first_with_prefix_from(orc, r, start)
            else:
                nxt = _next_gt(orc, lo)
                w = nxt if nxt is not None and nxt.startswith(r) else None
        if w is None:
            return False
        # greedily reserve the smallest successors for the remaining slots
        for _ in range(k - len(full) - 1):
            w = _next_gt(orc, w)
            if w is None:
                return False
        return True


def pow_(f: CountingProblem, g: BoundedFP | int) -> CountingProblem:
    """``g(x)``-tuples of witnesses of ``f`` with repetition; count ``f^g`` (``0`` when ``f = 0``)."""
    return _Tuples(f, _as_fp(g), distinct=False)


def binom(f: CountingProblem, g: BoundedFP | int) -> CountingProblem:
    """Strictly increasing ``g(x)``-tuples of witnesses; count ``C(f, g)`` (``0`` when ``f = 0``)."""
    return _Tuples(f, _as_fp(g), distinct=True)


class _PolySum(CountingProblem):
    def __init__(self, family: IndexedFamily, g: BoundedFP) -> None:
        self.family, self.g = family, g

    def _layout(self, x) -> tuple[int, int, int]:
        k = self.g(x)
        width = k.bit_length()
        body = max(self.family(x, y).witness_length(x) for y in range(k + 1))
        return k, width, body

    def witness_length(self, x=None) -> int:
        _, width, body = self._layout(x)
        return width + body

    def _split(self, x, s: str):
        k, width, _ = self._layout(x)
        y = int(s[:width], 2) if width else 0
        if y > k:
            return None, ""
        member = self.family(x, y)
        rest = s[width:]
        pm = member.witness_length(x)
        if not _zeros(rest[pm:]):
            return None, ""
        return member, rest[:pm]

    def _is_witness(self, x, y, calls) -> bool:
        member, body = self._split(x, y)
        return member is not None and member.is_witness(x, body, calls)

    def _can_extend(self, x, c, calls) -> bool:
        k, width, _ = self._layout(x)
        if len(c) < width:
            for y in range(k + 1):
                if format(y, f"0{width}b").startswith(c) and self.family(x, y).can_extend(x, "", calls):
                    return True
            return False
        member, body = self._split(x, c)
        return member is not None and member.can_extend(x, body, calls)


def poly_sum(family: IndexedFamily, g: BoundedFP | int) -> CountingProblem:
    """Binary index ``y <= g(x)`` followed by a witness of ``f(x, y)``."""
    return _PolySum(family, _as_fp(g))


class _PolyProd(CountingProblem):
    def __init__(self, family: IndexedFamily, g: BoundedFP) -> None:
        self.family, self.g = family, g

    def _members(self, x) -> list[CountingProblem]:
        return [self.family(x, y) for y in range(self.g(x) + 1)]

    def witness_length(self, x=None) -> int:
        return sum(m.witness_length(x) for m in self._members(x))

    def _is_witness(self, x, y, calls) -> bool:
        pos = 0
        for m in self._members(x):
            pm = m.witness_length(x)
            if not m.is_witness(x, y[pos:pos + pm], calls):
                return False
            pos += pm
        return True

    def _can_extend(self, x, c, calls) -> bool:
        pos = 0
        for m in self._members(x):
            pm = m.witness_length(x)
            if len(c) >= pos + pm:
                ok = m.is_witness(x, c[pos:pos + pm], calls)
            else:
                ok = m.can_extend(x, c[pos:], calls)
            if not ok:
                return False
            pos += pm
        return True


def poly_prod(family: IndexedFamily, g: BoundedFP | int) -> CountingProblem:
    """One witness of each ``f(x, y)``, ``y = 0..g(x)``, concatenated."""
    return _PolyProd(family, _as_fp(g))


def span_value(values: Iterable[int]) -> int:
    """Number of distinct values."""
    vals = list(values)
    if not vals:
        raise UsageError("span of an empty list")
    return len(set(vals))


def plu_value(values: Iterable[int]) -> set[int]:
    """The most frequent values."""
    freq = Counter(values)
    if not freq:
        raise UsageError("plurality of an empty list")
    top = max(freq.values())
    return {v for v, n in freq.items() if n == top}

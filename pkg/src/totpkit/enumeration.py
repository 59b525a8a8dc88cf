"""Lexicographic witness search with bounded work between answers.

Every query here walks up the candidate string looking for the deepest place
where the search can move right, then walks down taking the leftmost (or
rightmost) extendable child. That costs at most ``2p + 2`` oracle calls, which
keeps every gap of :func:`enumerate_witnesses` within ``4 * (p + 1)``.
"""

from __future__ import annotations

import enum
from typing import Any, Iterator

from .core import CallCounter, CountingProblem, IntegrityError, Oracle, UsageError, _as_oracle

__all__ = [
    "delay_budget",
    "WitnessStream",
    "enumerate_witnesses",
    "next_witness_geq",
    "next_witness_gt",
    "prev_witness_leq",
    "prev_witness_lt",
    "closest_witness",
    "exists_in_interval",
    "Overflow",
    "OVERFLOW",
    "count_bounded",
    "Comparison",
    "compare_with_fp",
]


def delay_budget(p: int) -> int:
    """Oracle calls allowed between two consecutive enumeration outputs."""
    return 4 * (p + 1)


def _descend(orc: Oracle, c: str, first: str) -> str:
    # c is known to be extendable; prefer the `first` bit at every level
    other = "1" if first == "0" else "0"
    while len(c) < orc.p:
        c = c + first if orc.can_extend(c + first) else c + other
    if not orc.is_witness(c):
        raise IntegrityError(f"prefix oracle led to non-witness {c!r}")
    return c


def _check_length(orc: Oracle, c: str) -> None:
    if len(c) != orc.p:
        raise UsageError(f"expected a string of length {orc.p}, got {len(c)}")


def _next_gt(orc: Oracle, c: str) -> str | None:
    for i in range(orc.p - 1, -1, -1):
        if c[i] == "0":
            head = c[:i] + "1"
            if orc.can_extend(head):
                return _descend(orc, head, "0")
    return None


def _prev_lt(orc: Oracle, c: str) -> str | None:
    for i in range(orc.p - 1, -1, -1):
        if c[i] == "1":
            head = c[:i] + "0"
            if orc.can_extend(head):
                return _descend(orc, head, "1")
    return None


def next_witness_gt(problem: CountingProblem | Oracle, x: Any = None, c: str = "",
                    calls: CallCounter | None = None) -> str | None:
    """Smallest witness strictly greater than ``c``, or ``None``."""
    orc = _as_oracle(problem, x, calls)
    _check_length(orc, c)
    return _next_gt(orc, c)


def next_witness_geq(problem: CountingProblem | Oracle, x: Any = None, c: str = "",
                     calls: CallCounter | None = None) -> str | None:
    """Smallest witness ``>= c``, or ``None``. At most ``2p + 2`` oracle calls."""
    orc = _as_oracle(problem, x, calls)
    _check_length(orc, c)
    if orc.is_witness(c):
        return c
    return _next_gt(orc, c)


def prev_witness_lt(problem: CountingProblem | Oracle, x: Any = None, c: str = "",
                    calls: CallCounter | None = None) -> str | None:
    orc = _as_oracle(problem, x, calls)
    _check_length(orc, c)
    return _prev_lt(orc, c)


def prev_witness_leq(problem: CountingProblem | Oracle, x: Any = None, c: str = "",
                     calls: CallCounter | None = None) -> str | None:
    """Largest witness ``<= c``, or ``None``."""
    orc = _as_oracle(problem, x, calls)
    _check_length(orc, c)
    if orc.is_witness(c):
        return c
    return _prev_lt(orc, c)


class WitnessStream:
    """Iterator over all witnesses in increasing lexicographic order.

    ``gaps`` records the oracle calls spent before each output, plus one final
    entry for the work done to discover the end of the stream. A stream is
    single-consumer.
    """

    def __init__(self, problem: CountingProblem, x: Any = None,
                 calls: CallCounter | None = None) -> None:
        self.calls = calls if calls is not None else CallCounter()
        self._orc = Oracle(problem, x, self.calls)
        self.p = self._orc.p
        self.gaps: list[int] = []
        self._last: str | None = None
        self._done = False

    @property
    def max_gap(self) -> int:
        return max(self.gaps, default=0)

    @property
    def budget(self) -> int:
        return delay_budget(self.p)

    def __iter__(self) -> Iterator[str]:
        return self

    def __next__(self) -> str:
        if self._done:
            raise StopIteration
        before = self.calls.calls
        if self._last is None:
            w = next_witness_geq(self._orc, c="0" * self.p)
        else:
            w = _next_gt(self._orc, self._last)
        self.gaps.append(self.calls.calls - before)
        if w is None:
            self._done = True
            raise StopIteration
        self._last = w
        return w


def enumerate_witnesses(problem: CountingProblem, x: Any = None,
                        calls: CallCounter | None = None) -> WitnessStream:
    return WitnessStream(problem, x, calls)


def closest_witness(problem: CountingProblem, x: Any = None, c: str = "",
                    calls: CallCounter | None = None) -> str | None:
    """Witness nearest to ``c`` as binary integers; ties go to the smaller one."""
    orc = _as_oracle(problem, x, calls)
    _check_length(orc, c)
    if orc.is_witness(c):
        return c
    lo, hi = _prev_lt(orc, c), _next_gt(orc, c)
    if lo is None or hi is None:
        return lo if hi is None else hi
    v = int(c, 2) if c else 0
    return lo if v - int(lo, 2) <= int(hi, 2) - v else hi


def exists_in_interval(problem: CountingProblem, x: Any = None, a: str = "", b: str = "",
                       *, open_interval: bool = False,
                       calls: CallCounter | None = None) -> bool:
    """Whether some witness lies in ``[a, b]`` (or ``(a, b)`` when ``open_interval``)."""
    orc = _as_oracle(problem, x, calls)
    _check_length(orc, a)
    _check_length(orc, b)
    if a > b:
        raise UsageError(f"empty interval: {a!r} > {b!r}")
    if open_interval:
        w = _next_gt(orc, a)
        return w is not None and w < b
    w = next_witness_geq(orc, c=a)
    return w is not None and w <= b


class Overflow:
    """Marker returned by :func:`count_bounded` when the bound is exceeded."""

    _instance: Overflow | None = None

    def __new__(cls) -> Overflow:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OVERFLOW"


OVERFLOW = Overflow()


def count_bounded(problem: CountingProblem, x: Any = None, bound: int = 0,
                  calls: CallCounter | None = None) -> int | Overflow:
    """Exact count if it is at most ``bound``, else :data:`OVERFLOW`.

    Enumerates at most ``bound + 1`` witnesses, so the cost stays within
    ``4 * (p + 1) * (bound + 2)`` oracle calls.
    """
    if bound < 0:
        raise UsageError(f"negative bound {bound}")
    n = 0
    for _ in WitnessStream(problem, x, calls):
        n += 1
        if n > bound:
            return OVERFLOW
    return n


class Comparison(enum.Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"


def compare_with_fp(problem: CountingProblem, x: Any = None, g: int = 0,
                    calls: CallCounter | None = None) -> Comparison:
    """Compare the witness count with a small nonnegative integer ``g``."""
    r = count_bounded(problem, x, g, calls)
    if r is OVERFLOW:
        return Comparison.GT
    return Comparison.EQ if r == g else Comparison.LT

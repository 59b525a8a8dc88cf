"""Plain witness checkers, gap arithmetic, and shifted-count normal forms.

A :class:`Checker` is a fixed-width predicate with no prefix oracle; its
acceptance count can be anything a polynomial-time verifier can count. A
:class:`GapValue` is a formal difference of two checkers. The functions at
the bottom turn such differences into a counting problem with a cheap prefix
oracle whose count, shifted down by a power of two, is the gap value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, NamedTuple

from .combinators import BoundedFP, add
from .core import DEFAULT_MAX_P, CountingProblem, OracleScaleError, UsageError

__all__ = [
    "Checker",
    "GapValue",
    "GapNormalForm",
    "checker_eval",
    "checker_const",
    "checker_from_problem",
    "widen",
    "disjoint_union",
    "concat",
    "EMPTY",
    "gap_from",
    "gap_value",
    "gap_add",
    "gap_neg",
    "gap_sub",
    "gap_mul",
    "gap_square",
    "acc_to_totp_plus",
    "acc_to_totp_minus",
    "gap_normalize",
    "cp_embed",
]


@dataclass(frozen=True)
class Checker:
    """Predicate ``accepts(x, y)`` on strings ``y`` of length ``p``."""

    p: int
    accepts: Callable[[Any, str], bool]

    def __post_init__(self) -> None:
        if self.p < 0:
            raise UsageError(f"negative checker width {self.p}")


class GapValue(NamedTuple):
    pos: Checker
    neg: Checker


class GapNormalForm(NamedTuple):
    """``value(x) = count(problem, x) - 2**exponent``."""

    problem: CountingProblem
    exponent: int


def checker_eval(c: Checker, x: Any = None, *, max_p: int = DEFAULT_MAX_P) -> int:
    """Number of accepted strings, by exhaustion."""
    if c.p > max_p:
        raise OracleScaleError(
            f"exhaustive enumeration over 2^{c.p} strings exceeds the limit 2^{max_p}")
    return sum(1 for bits in itertools.product("01", repeat=c.p)
               if c.accepts(x, "".join(bits)))


def checker_const(g: BoundedFP | int, p: int) -> Checker:
    """Checker of width ``p`` accepting the ``g(x)`` smallest strings."""
    fp = BoundedFP.constant(g) if isinstance(g, int) else g
    if isinstance(g, int) and g > 1 << p:
        raise UsageError(f"constant {g} does not fit in {p} bits")

    def accepts(x, y):
        v = fp(x)
        if v > 1 << p:
            raise UsageError(f"value {v} does not fit in {p} bits")
        return (int(y, 2) if y else 0) < v

    return Checker(p, accepts)


def checker_from_problem(problem: CountingProblem, x: Any = None) -> Checker:
    """Forget the prefix oracle: accept exactly the witnesses of ``problem`` at ``x``."""
    return Checker(problem.witness_length(x), lambda _x, y: problem.is_witness(x, y))


EMPTY = Checker(0, lambda x, y: False)


def widen(c: Checker, p: int) -> Checker:
    """Same acceptance count at width ``p >= c.p``; the extra suffix must be zeros."""
    if p < c.p:
        raise UsageError(f"cannot narrow a width-{c.p} checker to {p}")
    if p == c.p:
        return c
    w = c.p
    return Checker(p, lambda x, y: "1" not in y[w:] and c.accepts(x, y[:w]))


def disjoint_union(a: Checker, b: Checker) -> Checker:
    """Tag bit then a zero-padded string; counts add."""
    p = max(a.p, b.p)
    wa, wb = widen(a, p), widen(b, p)
    return Checker(p + 1, lambda x, y: (wb if y[0] == "1" else wa).accepts(x, y[1:]))


def concat(a: Checker, b: Checker) -> Checker:
    """Pairs of accepted strings; counts multiply."""
    pa = a.p
    return Checker(pa + b.p, lambda x, y: a.accepts(x, y[:pa]) and b.accepts(x, y[pa:]))


def gap_from(c: Checker) -> GapValue:
    return GapValue(c, EMPTY)


def gap_value(h: GapValue, x: Any = None, *, max_p: int = DEFAULT_MAX_P) -> int:
    return checker_eval(h.pos, x, max_p=max_p) - checker_eval(h.neg, x, max_p=max_p)


def gap_add(a: GapValue, b: GapValue) -> GapValue:
    return GapValue(disjoint_union(a.pos, b.pos), disjoint_union(a.neg, b.neg))


def gap_neg(a: GapValue) -> GapValue:
    return GapValue(a.neg, a.pos)


def gap_sub(a: GapValue, b: GapValue) -> GapValue:
    return gap_add(a, gap_neg(b))


def gap_mul(a: GapValue, b: GapValue) -> GapValue:
    # (p - n)(p' - n') = (pp' + nn') - (pn' + np')
    return GapValue(
        disjoint_union(concat(a.pos, b.pos), concat(a.neg, b.neg)),
        disjoint_union(concat(a.pos, b.neg), concat(a.neg, b.pos)),
    )


def gap_square(a: GapValue) -> GapValue:
    return gap_mul(a, a)


class _Doubled(CountingProblem):
    """Witness ``y0`` for every ``y``, plus ``y1`` when ``accepts(y)`` equals ``on``.

    Every proper prefix extends through the ``y0`` branch, so the prefix
    oracle only consults the checker at full length.
    """

    def __init__(self, checker: Checker, on: bool) -> None:
        self.checker = checker
        self.on = on

    def witness_length(self, x=None) -> int:
        return self.checker.p + 1

    def _is_witness(self, x, y, calls) -> bool:
        if y[-1] == "0":
            return True
        if calls is not None:
            calls.calls += 1
        return self.checker.accepts(x, y[:-1]) == self.on

    def _can_extend(self, x, c, calls) -> bool:
        if len(c) <= self.checker.p:
            return True
        return self._is_witness(x, c, calls)


def acc_to_totp_plus(c: Checker) -> GapNormalForm:
    """Problem with ``2**p + acc(x)`` witnesses; ``acc = count - 2**p``."""
    return GapNormalForm(_Doubled(c, True), c.p)


def acc_to_totp_minus(c: Checker) -> GapNormalForm:
    """Problem with ``2**(p+1) - acc(x)`` witnesses; ``acc = 2**(p+1) - count``."""
    return GapNormalForm(_Doubled(c, False), c.p + 1)


def gap_normalize(h: GapValue) -> GapNormalForm:
    """Counting problem and exponent ``q`` with ``value(h) = count - 2**q``.

    With ``p`` the wider of the two checker widths, the positive part is
    doubled at width ``p + 1`` (count ``2**(p+1) + A``) and the negative part
    at width ``p`` (count ``2**(p+1) - B``); their disjoint sum has count
    ``2**(p+2) + A - B``.
    """
    p = max(h.pos.p, h.neg.p)
    plus, _ = acc_to_totp_plus(widen(h.pos, p + 1))
    minus, _ = acc_to_totp_minus(widen(h.neg, p))
    return GapNormalForm(add(plus, minus), p + 2)


def cp_embed(f: Checker, g: BoundedFP | int) -> GapNormalForm:
    """Normal form whose count is ``2**q`` when ``acc_f(x) == g(x)`` and smaller otherwise.

    The gap value is ``-(acc_f(x) - g(x))**2``.
    """
    diff = gap_sub(gap_from(f), gap_from(checker_const(g, f.p)))
    return gap_normalize(gap_neg(gap_square(diff)))

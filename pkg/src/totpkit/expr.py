"""Combinator expressions over instance files.

Grammar::

    atom  := dnf:<path> | mcnf:<path> | nfa:<path>:<n> | pm:<path>
    expr  := atom
           | add(expr, expr) | mul(expr, expr) | dec(expr)
           | sub(expr, <int>) | pow(expr, <int>) | binom(expr, <int>)
           | polysum(expr, <int>) | polyprod(expr, <int>)
           | totp_plus(expr) | totp_minus(expr)

Inside ``polysum``/``polyprod`` the letter ``y`` may stand for an integer
(an NFA length or a constant) and ranges over ``0..<int>``. ``totp_plus``
and ``totp_minus`` read their argument as a plain checker and build the
doubled-witness problems with counts ``2^p + acc`` and ``2^(p+1) - acc``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

from . import combinators as cb
from . import formats, gapalg, problems
from .core import CountingProblem, brute_force_count

__all__ = [
    "ExprSyntaxError",
    "Atom",
    "Call",
    "Expr",
    "parse_expr",
    "Loader",
    "build",
    "arithmetic_count",
    "atoms",
]

SCHEMES = ("dnf", "mcnf", "nfa", "pm")
# name -> (number of sub-expressions, takes an integer constant)
OPS = {
    "add": (2, False),
    "mul": (2, False),
    "dec": (1, False),
    "sub": (1, True),
    "pow": (1, True),
    "binom": (1, True),
    "polysum": (1, True),
    "polyprod": (1, True),
    "totp_plus": (1, False),
    "totp_minus": (1, False),
}
INDEX = "y"

Const = Union[int, str]  # an int, or INDEX


class ExprSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int, text: str) -> None:
        self.pos = pos
        super().__init__(f"{msg} at column {pos + 1}\n  {text}\n  {' ' * pos}^")


@dataclass(frozen=True)
class Atom:
    kind: str
    path: str
    length: Const | None = None


@dataclass(frozen=True)
class Call:
    op: str
    args: tuple[Expr, ...]
    const: Const | None = None


Expr = Union[Atom, Call]


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.i = 0

    def fail(self, msg: str, pos: int | None = None):
        raise ExprSyntaxError(msg, self.i if pos is None else pos, self.text)

    def ws(self) -> None:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.i += 1

    def name(self) -> str:
        self.ws()
        start = self.i
        while self.i < len(self.text) and (self.text[self.i].isalnum() or self.text[self.i] == "_"):
            self.i += 1
        if start == self.i:
            self.fail("expected a name")
        return self.text[start:self.i]

    def const(self, allow_index: bool) -> Const:
        self.ws()
        start = self.i
        while self.i < len(self.text) and self.text[self.i] not in ",):" and not self.text[self.i].isspace():
            self.i += 1
        tok = self.text[start:self.i]
        if tok == INDEX:
            if not allow_index:
                self.fail(f"index {INDEX!r} used outside polysum/polyprod", start)
            return INDEX
        try:
            v = int(tok)
        except ValueError:
            self.fail(f"expected an integer, got {tok!r}", start)
        if v < 0:
            self.fail(f"negative constant {v}", start)
        return v

    def expr(self, depth_index: bool) -> Expr:
        start = self.i
        word = self.name()
        if self.peek() == ":":
            return self.atom(word, start, depth_index)
        if word not in OPS:
            self.fail(f"unknown operation {word!r}", start)
        nargs, has_const = OPS[word]
        self.expect("(")
        inner_index = depth_index or word in ("polysum", "polyprod")
        args = []
        for k in range(nargs):
            if k:
                self.expect(",")
            args.append(self.expr(inner_index))
        const = None
        if has_const:
            self.expect(",")
            const = self.const(depth_index)
        if self.peek() != ")":
            self.fail(f"{word} takes {nargs + has_const} argument(s)")
        self.i += 1
        return Call(word, tuple(args), const)

    def atom(self, kind: str, start: int, allow_index: bool) -> Atom:
        if kind not in SCHEMES:
            self.fail(f"unknown scheme {kind!r}", start)
        self.i += 1  # ':'
        pstart = self.i
        while self.i < len(self.text) and self.text[self.i] not in ",)":
            self.i += 1
        body = self.text[pstart:self.i].strip()
        if kind != "nfa":
            if not body:
                self.fail("empty path", pstart)
            return Atom(kind, body)
        path, sep, n = body.rpartition(":")
        if not sep or not path:
            self.fail("nfa atoms are nfa:<path>:<n>", pstart)
        sub = _Parser(n)
        length = sub.const(allow_index)
        if sub.peek():
            self.fail(f"bad NFA length {n!r}", pstart)
        return Atom(kind, path, length)

    def parse(self) -> Expr:
        e = self.expr(False)
        if self.peek():
            self.fail("trailing input")
        return e


def parse_expr(text: str) -> Expr:
    """Parse an expression; raises :class:`ExprSyntaxError` with the column."""
    return _Parser(text).parse()


def atoms(e: Expr) -> list[Atom]:
    if isinstance(e, Atom):
        return [e]
    return [a for arg in e.args for a in atoms(arg)]


def _resolve(c: Const | None, env: dict[str, int]) -> int:
    if isinstance(c, str):
        return env[c]
    assert c is not None
    return c


class Loader:
    """Reads instance files once and caches the parsed instances."""

    def __init__(self, read: Callable[[str, str, int | None], object] = formats.load) -> None:
        self._read = read
        self._cache: dict[tuple[str, str, int | None], object] = {}

    def instance(self, kind: str, path: str, length: int | None = None):
        key = (kind, path, length)
        if key not in self._cache:
            self._cache[key] = self._read(kind, path, length)
        return self._cache[key]

    def problem(self, atom: Atom, env: dict[str, int]) -> CountingProblem:
        length = _resolve(atom.length, env) if atom.length is not None else None
        inst = self.instance(atom.kind, atom.path, length)
        if atom.kind == "dnf":
            return problems.dnf_problem(inst)
        if atom.kind == "mcnf":
            return problems.monotone_cnf_problem(inst)
        if atom.kind == "nfa":
            return problems.nfa_problem(inst)
        return problems.perfect_matching_problem(inst)


def build(e: Expr, loader: Loader | None = None,
          env: dict[str, int] | None = None) -> CountingProblem:
    """Turn an expression into a counting problem (instance ``x = None``)."""
    loader = loader or Loader()
    env = env or {}
    if isinstance(e, Atom):
        return loader.problem(e, env)
    if e.op in ("polysum", "polyprod"):
        body = e.args[0]
        fam = cb.IndexedFamily(lambda x, y: build(body, loader, {**env, INDEX: y}))
        combine = cb.poly_sum if e.op == "polysum" else cb.poly_prod
        return combine(fam, _resolve(e.const, env))
    args = [build(a, loader, env) for a in e.args]
    if e.op == "add":
        return cb.add(*args)
    if e.op == "mul":
        return cb.mul(*args)
    if e.op == "dec":
        return cb.dec1(args[0])
    if e.op in ("totp_plus", "totp_minus"):
        chk = gapalg.checker_from_problem(args[0])
        fn = gapalg.acc_to_totp_plus if e.op == "totp_plus" else gapalg.acc_to_totp_minus
        return fn(chk).problem
    k = _resolve(e.const, env)
    return {"sub": cb.sub_fp, "pow": cb.pow_, "binom": cb.binom}[e.op](args[0], k)


def arithmetic_count(e: Expr, loader: Loader | None = None,
                     env: dict[str, int] | None = None,
                     atom_count: Callable[[CountingProblem], int] = brute_force_count) -> int:
    """Expected count from integer arithmetic on independently counted atoms."""
    loader = loader or Loader()
    env = env or {}
    if isinstance(e, Atom):
        return atom_count(loader.problem(e, env))
    if e.op in ("polysum", "polyprod"):
        k = _resolve(e.const, env)
        vals = [arithmetic_count(e.args[0], loader, {**env, INDEX: y}, atom_count) for y in range(k + 1)]
        return sum(vals) if e.op == "polysum" else math.prod(vals)
    vals = [arithmetic_count(a, loader, env, atom_count) for a in e.args]
    if e.op == "add":
        return vals[0] + vals[1]
    if e.op == "mul":
        return vals[0] * vals[1]
    if e.op == "dec":
        return max(vals[0] - 1, 0)
    if e.op in ("totp_plus", "totp_minus"):
        p = build(e.args[0], loader, env).witness_length()
        return (1 << p) + vals[0] if e.op == "totp_plus" else (1 << (p + 1)) - vals[0]
    f, k = vals[0], _resolve(e.const, env)
    if e.op == "sub":
        return max(f - k, 0)
    if f == 0:
        return 0
    return f ** k if e.op == "pow" else math.comb(f, k)

"""Line-oriented ASCII instance formats.

DNF::

    p dnf <nvars> <nterms>
    1 -3 0            one term per line, DIMACS-style, terminated by 0

Monotone CNF::

    p mcnf <nvars> <nclauses>
    1 2 0

NFA (the target length is supplied separately)::

    nfa <nstates> <ninitial> <naccepting>
    <initial states>
    <accepting states>
    <from> <symbol> <to>      one transition per line, symbol 0 or 1

Bipartite graph::

    pm <k>
    k lines of k space-separated 0/1 entries

Blank lines and lines starting with ``c`` or ``#`` are ignored.
"""

from __future__ import annotations

from pathlib import Path

from .problems import BipartiteGraph, DnfFormula, InvalidInstance, MonotoneCnf, Nfa

__all__ = [
    "ParseError",
    "parse_dnf",
    "parse_mcnf",
    "parse_nfa",
    "parse_pm",
    "dump_dnf",
    "dump_mcnf",
    "dump_nfa",
    "dump_pm",
    "load",
]


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(msg if line is None else f"line {line}: {msg}")


def _lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s[0] in "c#":
            continue
        out.append((no, s.split()))
    return out


def _ints(tokens: list[str], no: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", no) from None


def _header(rows, tag: tuple[str, ...], nargs: int) -> tuple[int, list[int]]:
    if not rows:
        raise ParseError("missing header")
    no, toks = rows[0]
    if tuple(toks[:len(tag)]) != tag or len(toks) != len(tag) + nargs:
        raise ParseError(f"expected header {' '.join(tag)} followed by {nargs} integers", no)
    vals = _ints(toks[len(tag):], no)
    if any(v < 0 for v in vals):
        raise ParseError("negative value in header", no)
    return no, vals


def _zero_terminated(rows, what: str, expected: int) -> list[tuple[int, ...]]:
    out = []
    for no, toks in rows:
        vals = _ints(toks, no)
        if not vals or vals[-1] != 0 or 0 in vals[:-1]:
            raise ParseError(f"{what} must be nonzero integers terminated by a single 0", no)
        out.append(tuple(vals[:-1]))
    if len(out) != expected:
        raise ParseError(f"header declares {expected} {what}s, found {len(out)}")
    return out


def _wrap(fn, *args):
    try:
        return fn(*args)
    except InvalidInstance as e:
        raise ParseError(str(e)) from e


def parse_dnf(text: str) -> DnfFormula:
    rows = _lines(text)
    _, (n, m) = _header(rows, ("p", "dnf"), 2)
    terms = _zero_terminated(rows[1:], "term", m)
    return _wrap(DnfFormula, n, tuple(terms))


def parse_mcnf(text: str) -> MonotoneCnf:
    rows = _lines(text)
    _, (n, m) = _header(rows, ("p", "mcnf"), 2)
    clauses = _zero_terminated(rows[1:], "clause", m)
    return _wrap(MonotoneCnf, n, tuple(clauses))


def parse_nfa(text: str, length: int) -> Nfa:
    rows = _lines(text)
    hno, (states, ninit, nacc) = _header(rows, ("nfa",), 3)
    # the two state lines may legitimately be blank, so read raw lines here
    raw = [(no, ln.split()) for no, ln in enumerate(text.splitlines(), 1)
           if no > hno and not ln.strip().startswith(("c", "#"))]
    if len(raw) < 2:
        raise ParseError("expected initial-state and accepting-state lines")
    (ino, itoks), (ano, atoks) = raw[0], raw[1]
    init, acc = _ints(itoks, ino), _ints(atoks, ano)
    if len(init) != ninit or len(acc) != nacc:
        raise ParseError("state lists do not match the header counts", ano)
    trans = []
    for no, toks in raw[2:]:
        if not toks:
            continue
        vals = _ints(toks, no)
        if len(vals) != 3:
            raise ParseError("transition lines are '<from> <symbol> <to>'", no)
        trans.append(tuple(vals))
    if length < 0:
        raise ParseError(f"negative target length {length}")
    return _wrap(Nfa.build, states, trans, init, acc, length)


def parse_pm(text: str) -> BipartiteGraph:
    rows = _lines(text)
    _, (k,) = _header(rows, ("pm",), 1)
    body = rows[1:]
    if len(body) != k:
        raise ParseError(f"expected {k} matrix rows, found {len(body)}")
    return _wrap(BipartiteGraph.from_rows, [_ints(toks, no) for no, toks in body])


def dump_dnf(f: DnfFormula) -> str:
    lines = [f"p dnf {f.n} {len(f.terms)}"]
    lines += [" ".join(map(str, (*t, 0))) for t in f.terms]
    return "\n".join(lines) + "\n"


def dump_mcnf(f: MonotoneCnf) -> str:
    lines = [f"p mcnf {f.n} {len(f.clauses)}"]
    lines += [" ".join(map(str, (*cl, 0))) for cl in f.clauses]
    return "\n".join(lines) + "\n"


def dump_nfa(a: Nfa) -> str:
    lines = [f"nfa {a.states} {len(a.initial)} {len(a.accepting)}",
             " ".join(map(str, sorted(a.initial))),
             " ".join(map(str, sorted(a.accepting)))]
    lines += [f"{s} {b} {t}" for s, b, t in sorted(a.transitions)]
    return "\n".join(lines) + "\n"


def dump_pm(g: BipartiteGraph) -> str:
    lines = [f"pm {g.k}"] + [" ".join(map(str, row)) for row in g.matrix]
    return "\n".join(lines) + "\n"


def load(kind: str, path: str | Path, length: int | None = None):
    """Read and parse an instance file of the given kind (``dnf``, ``mcnf``, ``nfa``, ``pm``)."""
    text = Path(path).read_text()
    if kind == "dnf":
        return parse_dnf(text)
    if kind == "mcnf":
        return parse_mcnf(text)
    if kind == "nfa":
        if length is None:
            raise ParseError("NFA instances need a target length")
        return parse_nfa(text, length)
    if kind == "pm":
        return parse_pm(text)
    raise ParseError(f"unknown instance kind {kind!r}")

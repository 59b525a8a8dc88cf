"""Acceptance suite: seven randomized criteria with fixed seeds.

Each test records a PASS/FAIL line; ``conftest.py`` prints the lines at the
end of the run. Running this file directly prints them as well.
"""

from __future__ import annotations

import math
import random
import time
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache

from generators import (
    random_bigraph,
    random_checker,
    random_dnf,
    random_mcnf,
    random_nfa,
    random_tree,
    random_witness_set,
)
from totpkit.combinators import IndexedFamily, add, binom, dec1, mul, poly_prod, poly_sum, pow_, sub_fp
from totpkit.core import (
    CallCounter,
    CountingProblem,
    brute_force_count,
    canonical_tree,
    count,
    tree_depth,
    tree_to_problem,
    tree_total,
    tree_tot,
    validate_oracle,
)
from totpkit.enumeration import OVERFLOW, Comparison, compare_with_fp, count_bounded, delay_budget, enumerate_witnesses
from totpkit.gapalg import (
    GapValue,
    acc_to_totp_minus,
    acc_to_totp_plus,
    checker_eval,
    cp_embed,
    gap_add,
    gap_from,
    gap_mul,
    gap_neg,
    gap_normalize,
    gap_square,
    gap_sub,
    gap_value,
)
from totpkit.problems import (
    dnf_problem,
    monotone_cnf_problem,
    nfa_det_count,
    nfa_problem,
    perfect_matching_problem,
    ryser_permanent,
)

RESULTS: dict[int, str] = {}


@contextmanager
def criterion(n: int, title: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        RESULTS[n] = f"criterion {n} FAIL  {title} ({type(exc).__name__}: {str(exc)[:120]})"
        raise
    RESULTS[n] = f"criterion {n} PASS  {title} ({time.perf_counter() - start:.1f}s)"


@dataclass
class Instance:
    kind: str
    problem: CountingProblem
    data: object


# family sizes; matchings lean small because brute force at k = 6 spans 2^18 strings
MIX = {"dnf": 300, "mcnf": 300, "nfa": 250, "pm": 150}
PM_SIZES = [0, 1, 2, 3, 4, 5, 6]
PM_WEIGHTS = [2, 8, 20, 40, 40, 30, 10]


@lru_cache(maxsize=None)
def catalog() -> tuple[Instance, ...]:
    rng = random.Random(20240501)
    out = []
    for _ in range(MIX["dnf"]):
        f = random_dnf(rng, rng.randint(0, 12), rng.randint(0, 6))
        out.append(Instance("dnf", dnf_problem(f), f))
    for _ in range(MIX["mcnf"]):
        f = random_mcnf(rng, rng.randint(0, 12), rng.randint(0, 10))
        out.append(Instance("mcnf", monotone_cnf_problem(f), f))
    for _ in range(MIX["nfa"]):
        a = random_nfa(rng, rng.randint(1, 5), rng.randint(0, 10), density=rng.uniform(0.1, 0.5))
        out.append(Instance("nfa", nfa_problem(a), a))
    for _ in range(MIX["pm"]):
        k = rng.choices(PM_SIZES, PM_WEIGHTS)[0]
        g = random_bigraph(rng, k, density=rng.uniform(0.3, 0.9))
        out.append(Instance("pm", perfect_matching_problem(g), g))
    return tuple(out)


@lru_cache(maxsize=None)
def true_counts() -> tuple[int, ...]:
    return tuple(brute_force_count(inst.problem) for inst in catalog())


def test_oracle_equivalence():
    with criterion(1, "count equals brute force, Ryser and subset-construction counts on 1000 instances"):
        start = time.perf_counter()
        insts = catalog()
        assert len(insts) >= 1000
        bad = []
        for i, inst in enumerate(insts):
            n = count(inst.problem)
            if n != true_counts()[i]:
                bad.append((i, inst.kind, n, true_counts()[i]))
            if inst.kind == "pm" and n != ryser_permanent(inst.data):
                bad.append((i, "ryser", n))
            if inst.kind == "nfa" and n != nfa_det_count(inst.data):
                bad.append((i, "nfa_det", n))
        elapsed = time.perf_counter() - start
        assert not bad, bad[:5]
        assert elapsed < 60, f"took {elapsed:.1f}s"


def test_tree_law():
    with criterion(2, "canonical tree has count+1 paths; tree_to_problem reproduces tree_tot on 200 trees"):
        bad = []
        for i, inst in enumerate(catalog()):
            if tree_total(canonical_tree(inst.problem)) != true_counts()[i] + 1:
                bad.append(i)
        rng = random.Random(77)
        for _ in range(200):
            t = random_tree(rng, rng.randint(0, 10))
            assert tree_depth(t) <= 10
            prob = tree_to_problem(t)
            if not (count(prob) == brute_force_count(prob) == tree_tot(t)):
                bad.append(t)
        assert not bad, bad[:3]


def test_closure_identities():
    with criterion(3, "combinator counts match integer arithmetic on 500 component pairs"):
        rng = random.Random(31337)
        bad = []
        for trial in range(500):
            # every fifth trial forces an edge case: empty f, k = 0, or k > f
            f = random_witness_set(rng, rng.randint(0, 3))
            g = random_witness_set(rng, rng.randint(0, 3))
            k = rng.randint(0, 4)
            edge = trial % 5
            if edge == 1:
                f = random_witness_set(rng, rng.randint(0, 3), density=0.0)
            elif edge == 2:
                k = 0
            elif edge == 3:
                k = min(len(f.witnesses) + rng.randint(1, 2), 4)
            nf, ng = len(f.witnesses), len(g.witnesses)
            members = [g if i % 2 else f for i in range(k + 1)]
            fam = IndexedFamily.of(members)
            sizes = [len(m.witnesses) for m in members]
            checks = [
                ("add", add(f, g), nf + ng),
                ("mul", mul(f, g), nf * ng),
                ("dec1", dec1(f), max(nf - 1, 0)),
                ("sub", sub_fp(f, ng), max(nf - ng, 0)),
                ("sub_k", sub_fp(f, k), max(nf - k, 0)),
                ("pow", pow_(f, k), 0 if nf == 0 else nf ** k),
                ("binom", binom(f, k), 0 if nf == 0 else math.comb(nf, k)),
                ("polysum", poly_sum(fam, k), sum(sizes)),
                ("polyprod", poly_prod(fam, k), math.prod(sizes)),
            ]
            for name, prob, expect in checks:
                got = count(prob)
                if got != expect:
                    bad.append((trial, name, nf, ng, k, got, expect))
        assert not bad, bad[:5]


def test_polynomial_delay():
    with criterion(4, "enumeration gaps within 4(p+1); count_bounded within 4(p+1)(bound+2)"):
        rng = random.Random(4)
        bad = []
        for i, inst in enumerate(catalog()):
            p = inst.problem.witness_length()
            stream = enumerate_witnesses(inst.problem)
            listed = sum(1 for _ in stream)
            if listed != true_counts()[i] or stream.max_gap > delay_budget(p):
                bad.append((i, "enumerate", stream.max_gap, delay_budget(p)))
            n = true_counts()[i]
            for bound in {0, min(n, 40), min(n + 1, 41), rng.randint(0, 40)}:
                calls = CallCounter()
                r = count_bounded(inst.problem, None, bound, calls)
                if r != (n if n <= bound else OVERFLOW) or calls.calls > 4 * (p + 1) * (bound + 2):
                    bad.append((i, "bounded", bound, calls.calls))
        assert not bad, bad[:5]


def test_gap_identities():
    with criterion(5, "doubled-witness counts, gap homomorphism, normal form and equality embedding on 500 checkers"):
        rng = random.Random(55)
        bad = []
        for trial in range(500):
            p = rng.randint(0, 10)
            c, acc = random_checker(rng, p)
            if count(acc_to_totp_plus(c).problem) - 2 ** p != acc:
                bad.append((trial, "plus"))
            if 2 ** (p + 1) - count(acc_to_totp_minus(c).problem) != acc:
                bad.append((trial, "minus"))

            # gap products double the width, so the algebra runs on narrower checkers
            a, va = random_checker(rng, rng.randint(0, 4))
            b, vb = random_checker(rng, rng.randint(0, 4))
            ga, gb = GapValue(a, b), GapValue(b, a)
            u, v = va - vb, vb - va
            for name, h, expect in [
                ("add", gap_add(ga, gb), u + v),
                ("neg", gap_neg(ga), -u),
                ("sub", gap_sub(ga, gb), u - v),
                ("mul", gap_mul(ga, gap_from(b)), u * vb),
                ("square", gap_square(ga), u * u),
            ]:
                if gap_value(h) != expect:
                    bad.append((trial, name))

            d, vd = random_checker(rng, rng.randint(0, 6))
            e, ve = random_checker(rng, rng.randint(0, 6))
            prob, q = gap_normalize(GapValue(d, e))
            if count(prob) - 2 ** q != vd - ve:
                bad.append((trial, "normalize"))

            fp = rng.randint(0, 3)
            f, vf = random_checker(rng, fp)
            gv = vf if rng.random() < 0.5 else rng.randint(0, 2 ** fp)
            prob, q = cp_embed(f, gv)
            n = count(prob)
            member = checker_eval(f) == gv
            if (n == 2 ** q) != member or n > 2 ** q:
                bad.append((trial, "cp_embed", vf, gv, n, q))
        assert not bad, bad[:5]


def test_bounded_comparison():
    with criterion(6, "compare_with_fp matches brute-force trichotomy on 500 trials within 4(p+1)(g+2) calls"):
        rng = random.Random(66)
        insts = catalog()
        bad = []
        for trial in range(500):
            i = rng.randrange(len(insts))
            prob, n = insts[i].problem, true_counts()[i]
            p = prob.witness_length()
            g = rng.choice([0, min(n, 30), min(n + 1, 31), max(n - 1, 0), rng.randint(0, 30)])
            calls = CallCounter()
            got = compare_with_fp(prob, None, g, calls)
            expect = Comparison.LT if n < g else Comparison.EQ if n == g else Comparison.GT
            if got is not expect or calls.calls > 4 * (p + 1) * (g + 2):
                bad.append((trial, i, g, got, expect, calls.calls))
        assert not bad, bad[:5]


def constructed_problems():
    rng = random.Random(7)
    insts = [inst for inst in catalog() if inst.problem.witness_length() <= 6]
    for _ in range(60):
        a, b = rng.choice(insts).problem, rng.choice(insts).problem
        k = rng.randint(0, 2)
        yield add(a, b)
        yield mul(a, random_witness_set(rng, rng.randint(0, 3)))
        yield dec1(a)
        yield sub_fp(a, rng.randint(0, 5))
        yield pow_(random_witness_set(rng, rng.randint(0, 3)), k)
        yield binom(random_witness_set(rng, rng.randint(0, 3)), rng.randint(0, 3))
        fam = IndexedFamily.of([random_witness_set(rng, rng.randint(0, 3)) for _ in range(k + 1)])
        yield poly_sum(fam, k)
        yield poly_prod(fam, k)
        c, _ = random_checker(rng, rng.randint(0, 8))
        yield acc_to_totp_plus(c).problem
        yield acc_to_totp_minus(c).problem
        d, _ = random_checker(rng, rng.randint(0, 4))
        yield gap_normalize(GapValue(c if c.p <= 4 else d, d)).problem
        f, _ = random_checker(rng, rng.randint(0, 3))
        yield cp_embed(f, rng.randint(0, 2 ** f.p)).problem


def test_oracle_validation():
    with criterion(7, "validate_oracle finds no violations on cataloged and constructed problems with p <= 14"):
        rng = random.Random(14)
        bad = []
        checked = 0
        # one instance per family at the top of the range, plus every catalog instance
        large = [
            dnf_problem(random_dnf(rng, 14, 6)),
            monotone_cnf_problem(random_mcnf(rng, 14, 8)),
            nfa_problem(random_nfa(rng, 5, 14)),
            perfect_matching_problem(random_bigraph(rng, 4)),
        ]
        pool = [inst.problem for inst in catalog()] + large + list(constructed_problems())
        for prob in pool:
            if prob.witness_length() > 14:
                continue
            rep = validate_oracle(prob, max_p=14)
            checked += 1
            if not rep.ok:
                bad.append((type(prob).__name__, rep.violations[:2]))
        assert checked >= 1500
        assert not bad, bad[:3]


if __name__ == "__main__":
    for fn in (test_oracle_equivalence, test_tree_law, test_closure_identities,
               test_polynomial_delay, test_gap_identities, test_bounded_comparison,
               test_oracle_validation):
        try:
            fn()
        except AssertionError:
            pass
    for n in sorted(RESULTS):
        print(RESULTS[n])

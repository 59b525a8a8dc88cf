import itertools

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from generators import X1, witness_sets
from totpkit.core import CallCounter, FullCube, UsageError, WitnessSetProblem, brute_force_witnesses
from totpkit.enumeration import (
    OVERFLOW,
    Comparison,
    closest_witness,
    compare_with_fp,
    count_bounded,
    delay_budget,
    enumerate_witnesses,
    exists_in_interval,
    next_witness_geq,
    next_witness_gt,
    prev_witness_leq,
    prev_witness_lt,
)
from totpkit.problems import dnf_problem

DNF = dnf_problem(X1)
EMPTY3 = WitnessSetProblem(3, [])


def nearest_by_search(witnesses, c):
    v = int(c, 2) if c else 0
    best = None
    for w in sorted(witnesses):
        d = abs(int(w, 2) - v) if w else 0
        if best is None or d < best[0]:
            best = (d, w)
    return None if best is None else best[1]


def strings(p):
    return ["".join(b) for b in itertools.product("01", repeat=p)]


@st.composite
def problem_and_target(draw):
    prob = draw(witness_sets(max_p=6))
    c = draw(st.sampled_from(strings(prob.p)))
    return prob, c


class TestEnumerate:
    def test_empty(self):
        s = enumerate_witnesses(EMPTY3)
        assert list(s) == []
        assert s.gaps[0] <= delay_budget(3)

    def test_single_term(self):
        assert list(enumerate_witnesses(DNF)) == ["10", "11"]

    def test_full_cube(self):
        out = list(enumerate_witnesses(FullCube(3)))
        assert out == strings(3) and len(out) == 8

    def test_stream_is_exhausted_once(self):
        s = enumerate_witnesses(DNF)
        assert list(s) == ["10", "11"]
        assert list(s) == []
        assert len(s.gaps) == 3

    @given(witness_sets())
    def test_sorted_and_within_delay(self, prob):
        s = enumerate_witnesses(prob)
        assert list(s) == sorted(prob.witnesses)
        assert len(s.gaps) == len(prob.witnesses) + 1
        assert s.max_gap <= 4 * (prob.p + 1)


class TestOrderQueries:
    def test_geq_from_zero(self):
        assert next_witness_geq(DNF, None, "00") == "10"

    def test_geq_from_top_non_witness(self):
        assert next_witness_geq(WitnessSetProblem(2, ["01"]), None, "11") is None

    def test_geq_single_term(self):
        assert next_witness_geq(DNF, None, "10") == "10"

    def test_leq_from_top(self):
        assert prev_witness_leq(DNF, None, "11") == "11"

    def test_leq_from_bottom_non_witness(self):
        assert prev_witness_leq(DNF, None, "00") is None

    def test_leq_single_term(self):
        assert prev_witness_leq(DNF, None, "10") == "10"

    def test_length_mismatch(self):
        with pytest.raises(UsageError):
            next_witness_geq(DNF, None, "1")
        with pytest.raises(UsageError):
            closest_witness(DNF, None, "101")

    @given(problem_and_target())
    def test_against_search(self, pc):
        prob, c = pc
        ws = sorted(prob.witnesses)
        for fn, expect in [
            (next_witness_geq, min((w for w in ws if w >= c), default=None)),
            (next_witness_gt, min((w for w in ws if w > c), default=None)),
            (prev_witness_leq, max((w for w in ws if w <= c), default=None)),
            (prev_witness_lt, max((w for w in ws if w < c), default=None)),
        ]:
            calls = CallCounter()
            assert fn(prob, None, c, calls) == expect
            assert calls.calls <= 4 * (prob.p + 1)


class TestClosest:
    def test_self(self):
        assert closest_witness(DNF, None, "11") == "11"

    def test_far_apart(self):
        ws = ["000", "111"]
        assert nearest_by_search(ws, "001") == "000"
        assert closest_witness(WitnessSetProblem(3, ws), None, "001") == "000"

    def test_unequal_distances(self):
        ws = ["00", "11"]
        assert nearest_by_search(ws, "01") == "00"
        assert closest_witness(WitnessSetProblem(2, ws), None, "01") == "00"

    def test_tie_goes_low(self):
        assert closest_witness(WitnessSetProblem(2, ["00", "10"]), None, "01") == "00"

    def test_none_when_empty(self):
        assert closest_witness(EMPTY3, None, "010") is None

    @given(problem_and_target())
    def test_against_search(self, pc):
        prob, c = pc
        assert closest_witness(prob, None, c) == nearest_by_search(prob.witnesses, c)


class TestInterval:
    def test_whole_range(self):
        assert exists_in_interval(DNF, None, "00", "11")

    def test_point_non_witness(self):
        assert not exists_in_interval(DNF, None, "01", "01")

    def test_below_all(self):
        prob = WitnessSetProblem(2, ["10", "11"])
        assert brute_force_witnesses(prob) == ["10", "11"]
        assert not exists_in_interval(prob, None, "00", "01")

    def test_open_endpoints(self):
        prob = WitnessSetProblem(2, ["01", "10"])
        assert exists_in_interval(prob, None, "01", "10")
        assert not exists_in_interval(prob, None, "01", "10", open_interval=True)
        assert exists_in_interval(prob, None, "00", "10", open_interval=True)

    def test_reversed(self):
        with pytest.raises(UsageError):
            exists_in_interval(DNF, None, "11", "00")

    @given(witness_sets(max_p=6), st.data())
    def test_against_search(self, prob, data):
        a = data.draw(st.sampled_from(strings(prob.p)))
        b = data.draw(st.sampled_from(strings(prob.p)))
        assume(a <= b)
        calls = CallCounter()
        assert exists_in_interval(prob, None, a, b, calls=calls) == any(a <= w <= b for w in prob.witnesses)
        assert calls.calls <= 4 * (prob.p + 1)
        assert exists_in_interval(prob, None, a, b, open_interval=True) == any(
            a < w < b for w in prob.witnesses)


class TestBounded:
    def test_empty_bound_zero(self):
        assert count_bounded(EMPTY3, None, 0) == 0

    def test_overflow(self):
        five = WitnessSetProblem(3, strings(3)[:5])
        assert count_bounded(five, None, 1) is OVERFLOW

    def test_single_term(self):
        assert count_bounded(DNF, None, 3) == 2

    def test_compare_examples(self):
        assert compare_with_fp(EMPTY3, None, 0) is Comparison.EQ
        assert compare_with_fp(FullCube(3), None, 5) is Comparison.GT
        assert compare_with_fp(DNF, None, 3) is Comparison.LT

    @given(witness_sets(), st.integers(0, 20))
    def test_against_search(self, prob, g):
        n = len(prob.witnesses)
        calls = CallCounter()
        r = count_bounded(prob, None, g, calls)
        assert r == (n if n <= g else OVERFLOW)
        assert calls.calls <= 4 * (prob.p + 1) * (g + 2)
        expect = Comparison.LT if n < g else Comparison.EQ if n == g else Comparison.GT
        assert compare_with_fp(prob, None, g) is expect

import random
from fractions import Fraction as F

import pytest
from hypothesis import given

from conftest import seeds
from piregulation import appendix
from piregulation.curves import Curve
from piregulation.generators import (
    TraceParams,
    random_operator,
    random_operators,
    random_positive,
    random_rational,
    random_trace,
)
from piregulation.operators import LRQ, ArrivalCurve, PacketSpacing, is_regular
from piregulation.regulators import (
    InterleavedRegulatorState,
    MissingOperatorError,
    PerFlowRegulatorState,
    head_of_line_schedule,
    minimal_interleaved_regulate,
    minimal_regulate,
    per_flow_bank,
)
from piregulation.systems import is_fifo_output
from piregulation.traces import PacketSequence
from piregulation.verify import check_minimality, regularity_violation, slack_candidate, tightness_violation

MULTI = TraceParams(flows=(1, 2, 3))

D = PacketSequence((5, 7, 8, 15, 17, 18, 25, 27, 28), appendix.LENGTHS, appendix.FLOWS)
PS = appendix.operators()


def test_packet_spacing_on_appendix_flow1():
    d1 = PacketSequence.single([5, 7, 15, 17, 25, 27], [2] * 6)
    assert minimal_regulate(PacketSpacing(5), d1).dates == (5, 10, 15, 20, 25, 30)


def test_lrq_recursion_example():
    out = minimal_regulate(LRQ(1), PacketSequence.single([0, 0, 0], [2, 2, 2]))
    assert out.dates == (0, 2, 4)


def test_appendix_interleaved_and_bank():
    assert minimal_interleaved_regulate(PS, D).dates == (5, 10, 10, 15, 20, 20, 25, 30, 30)
    bank = per_flow_bank(PS, D)
    assert bank.dates == (5, 10, 8, 15, 20, 18, 25, 30, 28)
    assert all(bank.dates[n - 1] == D.dates[n - 1] for n in (3, 6, 9))
    assert not bank.ordered


def test_head_of_line_on_appendix():
    schedule = head_of_line_schedule(PS, D)
    assert [n for _, n in schedule] == list(range(1, 10))
    assert [t for t, _ in schedule] == [5, 10, 10, 15, 20, 20, 25, 30, 30]
    # flow-2 packet 3 is eligible at 8 but sits behind packet 2 until 10
    assert dict((n, t) for t, n in schedule)[3] == 10


def test_trivial_head_of_line_cases():
    assert head_of_line_schedule(PS, PacketSequence.empty()) == []
    assert head_of_line_schedule(PS, PacketSequence([F(7, 2)], [1], [2])) == [(F(7, 2), 1)]


def test_missing_operator():
    with pytest.raises(MissingOperatorError):
        minimal_interleaved_regulate({1: LRQ(1)}, D)
    with pytest.raises(MissingOperatorError):
        per_flow_bank({2: LRQ(1)}, D)
    with pytest.raises(MissingOperatorError):
        InterleavedRegulatorState({1: LRQ(1)}).push(0, 1, 2)


def test_per_flow_regulator_needs_single_flow():
    with pytest.raises(ValueError):
        minimal_regulate(LRQ(1), D)


def test_streaming_matches_batch():
    state = PerFlowRegulatorState(LRQ(F(1, 2)))
    seq = PacketSequence.single([0, 1, 1, 9], [1, 2, 1, 1])
    released = [state.push(d, length) for d, length in zip(seq.dates, seq.lengths)]
    assert tuple(released) == minimal_regulate(LRQ(F(1, 2)), seq).dates


@given(seeds)
def test_per_flow_output_is_regular_fifo_and_tight(seed):
    rng = random.Random(seed)
    op = random_operator(rng)
    seq = random_trace(rng)
    out = minimal_regulate(op, seq)
    assert is_fifo_output(seq, out)
    assert is_regular(op, out)
    assert tightness_violation(op, seq, out) is None
    assert minimal_regulate(op, out) == out
    assert (out == seq) == is_regular(op, seq)


@given(seeds)
def test_interleaved_output_is_regular_fifo_and_tight(seed):
    rng = random.Random(seed)
    seq = random_trace(rng, MULTI)
    ops = random_operators(rng, (1, 2, 3))
    out = minimal_interleaved_regulate(ops, seq)
    assert is_fifo_output(seq, out)
    assert regularity_violation(ops, out) is None
    assert tightness_violation(ops, seq, out) is None
    assert minimal_interleaved_regulate(ops, out) == out
    assert (out == seq) == (regularity_violation(ops, seq) is None)


@given(seeds)
def test_minimality_against_slack_candidates(seed):
    rng = random.Random(seed)
    seq = random_trace(rng, MULTI)
    ops = random_operators(rng, (1, 2, 3))
    cand = slack_candidate(ops, seq, rng)
    report = check_minimality(ops, seq, cand)
    assert report.passed, report.format()
    single = random_trace(rng)
    op = random_operator(rng)
    assert check_minimality(op, single, slack_candidate(op, single, rng)).passed


@given(seeds)
def test_single_flow_collapses(seed):
    rng = random.Random(seed)
    seq = random_trace(rng)
    op = random_operator(rng)
    expected = minimal_regulate(op, seq)
    assert minimal_interleaved_regulate({1: op}, seq) == expected
    assert per_flow_bank({1: op}, seq).dates == expected.dates


@given(seeds)
def test_dominance(seed):
    rng = random.Random(seed)
    seq = random_trace(rng, MULTI)
    ops = random_operators(rng, (1, 2, 3))
    e = minimal_interleaved_regulate(ops, seq)
    e_bank = per_flow_bank(ops, seq)
    assert all(x >= y for x, y in zip(e.dates, e_bank.dates))


@given(seeds)
def test_head_of_line_equals_recursion(seed):
    rng = random.Random(seed)
    seq = random_trace(rng, MULTI)
    ops = random_operators(rng, (1, 2, 3))
    schedule = head_of_line_schedule(ops, seq)
    assert [n for _, n in schedule] == list(range(1, len(seq) + 1))
    assert tuple(t for t, _ in schedule) == minimal_interleaved_regulate(ops, seq).dates


def _leaky_bucket_recursion(seq, r, b):
    # the expanded max-plus form written against the raw inputs
    out = []
    for n in range(1, len(seq) + 1):
        d = seq.dates[n - 1]
        if n > 1:
            d = max(d, out[-1])
            for m in range(1, n):
                d = max(d, seq.dates[m - 1] + (sum(seq.lengths[m - 1:n]) - b) / r)
        out.append(d)
    return out


@given(seeds)
def test_packetized_greedy_shaper_is_leaky_bucket_recursion(seed):
    rng = random.Random(seed)
    r, b = random_positive(rng, 3), random_rational(rng, 4, 8)
    seq = random_trace(rng)  # lengths <= 4 <= b
    shaped = minimal_regulate(ArrivalCurve(Curve.affine(r, b)), seq)
    assert list(shaped.dates) == _leaky_bucket_recursion(seq, r, b)

import random
from fractions import Fraction as F

import pytest
from hypothesis import given

from conftest import seeds
from piregulation.curves import Curve
from piregulation.generators import (
    CATALOG,
    TraceParams,
    merge_flows,
    random_operator,
    random_positive,
    random_sigma,
    random_trace,
)
from piregulation.operators import (
    LRQ,
    ArrivalCurve,
    GRegulation,
    LeakyBucket,
    MaxOf,
    MaxPlusLinear,
    PacketBurstiness,
    PacketSpacing,
    PrefixError,
    Staircase,
    TsnPacketRate,
    arrival_curve_check,
    arrival_curve_violation,
    evaluate,
    h_coefficient,
    is_regular,
    jiang_lambda_nu,
    max_plus_evaluate,
)
from piregulation.rational import NEG_INF, POS_INF
from piregulation.regulators import minimal_regulate
from piregulation.traces import PacketSequence, prefix_sums
from piregulation.verify import (
    c_conditions_violation,
    condition2_violation,
    condition3_violation,
    dual_condition2_violation,
    dual_condition3_violation,
    excludes_current_length_holds,
    find_non_equivalence_witness,
    theorem1_verdicts,
)

ALL_KINDS = sorted(CATALOG)


def test_evaluate_examples():
    assert evaluate(LRQ(1), [0], [2, 2], 2) == 2
    assert evaluate(PacketSpacing(5), [5], [2, 2], 2) == 10
    assert evaluate(LeakyBucket(1, 2), [0], [2, 3], 2) == 3


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_first_index_is_minus_infinity(kind):
    op = random_operator(random.Random(kind), kind)
    assert op.evaluate([], [3], 1) == NEG_INF


def test_short_prefix_is_a_contract_violation():
    with pytest.raises(PrefixError):
        LRQ(1).evaluate([], [1], 2)
    with pytest.raises(ValueError):
        h_coefficient(LRQ(1), 2, 2, [1, 1])


def test_h_coefficient_examples():
    g = Curve.affine(F(1, 2), 1)
    lengths = [1, 2, 3, 4]
    assert h_coefficient(GRegulation(g), 1, 4, lengths) == g(6)
    assert h_coefficient(TsnPacketRate(3, 2), 1, 4, lengths) == 3 * 1
    assert h_coefficient(TsnPacketRate(3, 2), 2, 4, lengths) == 3 * 1
    assert h_coefficient(TsnPacketRate(3, 2), 3, 4, lengths) == 0
    assert h_coefficient(PacketBurstiness(2, 3), 1, 4, lengths) == F(4 + 1 - 1 - 3, 2)


@pytest.mark.parametrize("kind", ALL_KINDS)
@given(seed=seeds)
def test_closed_forms_match_max_plus_form(kind, seed):
    rng = random.Random(seed)
    op = random_operator(rng, kind)
    seq = random_trace(rng)
    for n in range(1, len(seq) + 1):
        assert op.evaluate(seq.dates, seq.lengths, n) == max_plus_evaluate(op, seq.dates, seq.lengths, n)


@pytest.mark.parametrize("kind", ALL_KINDS)
@given(seed=seeds)
def test_c2_c3_c4(kind, seed):
    rng = random.Random(seed)
    op = random_operator(rng, kind)
    seq = random_trace(rng)
    assert c_conditions_violation(op, seq, rng, trials=3) is None


def test_broken_table_is_caught():
    # H depends on a future length: not causal
    bad = MaxPlusLinear(lambda m, n, lengths: F(lengths[n] if n < len(lengths) else 0), "peek")
    seq = PacketSequence.single([0, 1, 2], [1, 2, 3])
    hit = c_conditions_violation(bad, seq, random.Random(0))
    assert hit is not None and hit[0] == "C2"


def test_is_regular_examples():
    assert is_regular(PacketSpacing(5), PacketSequence.single([0, 5, 10, 15, 20, 25], [2] * 6))
    assert not is_regular(PacketSpacing(5), PacketSequence.single([5, 7, 15, 17, 25, 27], [2] * 6))
    assert is_regular(LRQ(F(1, 100)), PacketSequence.single([3], [9]))


def test_arrival_curve_check_examples():
    sigma = Curve.affine(1, 1)
    assert not arrival_curve_check(PacketSequence.single([0, 0], [1, 1]), sigma)
    assert arrival_curve_check(PacketSequence.single([0, 10], [1, 1]), sigma)
    assert arrival_curve_check(PacketSequence.empty(), sigma)


def _brute_force_ac(seq, sigma):
    # dense rational scan of (s, t); catches oracle bugs at non-critical points
    points = sorted({F(k, 8) for k in range(0, 8 * int(max(seq.dates, default=0) + 2))})
    r = lambda t: sum(length for d, length in zip(seq.dates, seq.lengths) if d < t)
    for i, s in enumerate(points):
        for t in points[i:]:
            if r(t) - r(s) > sigma(t - s):
                return False
    return True


@given(seeds)
def test_arrival_curve_oracle_sound_against_scan(seed):
    rng = random.Random(seed)
    seq = random_trace(rng, TraceParams(max_packets=6, denominators=(1, 2)))
    sigma = random_sigma(rng)
    if _brute_force_ac(seq, sigma) is False:
        assert not arrival_curve_check(seq, sigma)


@given(seeds)
def test_theorem1_equivalence(seed):
    rng = random.Random(seed)
    sigma = random_sigma(rng)
    seq = random_trace(rng)
    if rng.random() < 0.5:
        seq = minimal_regulate(ArrivalCurve(sigma), seq)
    verdicts = {v is None for v in theorem1_verdicts(seq, sigma)}
    assert len(verdicts) == 1


@given(seeds)
def test_condition3_is_regularity_for_small_packets(seed):
    rng = random.Random(seed)
    sigma = random_sigma(rng)
    cap = int(sigma.right_limit(0))
    if cap < 1:
        return
    seq = random_trace(rng, TraceParams(max_length=cap))
    if rng.random() < 0.5:
        seq = minimal_regulate(ArrivalCurve(sigma), seq)
    assert (condition3_violation(seq, sigma) is None) == is_regular(ArrivalCurve(sigma), seq)


def test_oversized_packet_separates_condition3_from_regularity():
    sigma = Curve.affine(1, 1)
    seq = PacketSequence.single([0], [2])
    assert is_regular(ArrivalCurve(sigma), seq)
    assert condition3_violation(seq, sigma) is not None
    assert not arrival_curve_check(seq, sigma)


@given(seeds)
def test_max_plus_duality(seed):
    rng = random.Random(seed)
    sigma = random_sigma(rng)
    lam = sigma.upper_pseudo_inverse()
    seq = random_trace(rng)
    if rng.random() < 0.5:
        seq = minimal_regulate(ArrivalCurve(sigma), seq)
    assert (dual_condition2_violation(seq, lam) is None) == (condition2_violation(seq, sigma) is None)
    assert (dual_condition3_violation(seq, lam) is None) == (condition3_violation(seq, sigma) is None)


def test_non_equivalence_witness_exists():
    sigmas = [Curve.affine(1, 2), Curve.staircase(2, 2)]
    seq, sigma = find_non_equivalence_witness(sigmas, small_packets=True)
    assert excludes_current_length_holds(seq, sigma)
    s, t, lhs, rhs = arrival_curve_violation(seq, sigma)
    assert lhs > rhs


@given(seeds)
def test_lrq_is_linear_g_regulation(seed):
    rng = random.Random(seed)
    r = random_positive(rng, 3)
    lrq, g = LRQ(r), GRegulation(Curve.linear(1 / r))
    seq = random_trace(rng)
    if rng.random() < 0.5:
        seq = minimal_regulate(lrq, seq)
    pairwise = all(seq.dates[n] - seq.dates[n - 1] >= F(seq.lengths[n - 1]) / r for n in range(1, len(seq)))
    assert is_regular(g, seq) == is_regular(lrq, seq) == pairwise
    assert minimal_regulate(g, seq) == minimal_regulate(lrq, seq)


@given(seeds)
def test_tsn_equals_staircase_for_equal_lengths(seed):
    rng = random.Random(seed)
    tau, k, ell = random_positive(rng, 6), rng.randint(1, 3), rng.randint(1, 4)
    seq = random_trace(rng)
    seq = PacketSequence.single(seq.dates, [ell] * len(seq))
    if rng.random() < 0.5:
        seq = minimal_regulate(TsnPacketRate(tau, k), seq)
    ac = ArrivalCurve(Curve.staircase(tau, k * ell))
    assert is_regular(TsnPacketRate(tau, k), seq) == is_regular(ac, seq)


@given(seeds)
def test_staircase_operator_matches_arrival_curve(seed):
    rng = random.Random(seed)
    tau, b = random_positive(rng, 6), random_positive(rng, 5)
    seq = random_trace(rng)
    sc, ac = Staircase(tau, b), ArrivalCurve(Curve.staircase(tau, b))
    for n in range(1, len(seq) + 1):
        assert sc.evaluate(seq.dates, seq.lengths, n) == ac.evaluate(seq.dates, seq.lengths, n)


@given(seeds)
def test_leaky_bucket_operator_matches_arrival_curve(seed):
    rng = random.Random(seed)
    r, b = random_positive(rng, 3), random_positive(rng, 6)
    seq = random_trace(rng)
    lb, ac = LeakyBucket(r, b), ArrivalCurve(Curve.affine(r, b))
    for n in range(2, len(seq) + 1):
        assert max(seq.dates[n - 2], lb.evaluate(seq.dates, seq.lengths, n)) == ac.evaluate(
            seq.dates, seq.lengths, n)
    assert minimal_regulate(lb, seq) == minimal_regulate(ac, seq)


@given(seeds)
def test_packet_burstiness_superposition(seed):
    rng = random.Random(seed)
    ops = {f: PacketBurstiness(random_positive(rng, 2), rng.randint(1, 3)) for f in (1, 2, 3)}
    per_flow = {f: minimal_regulate(op, random_trace(rng)) for f, op in ops.items()}
    merged = merge_flows(per_flow)
    total = PacketBurstiness(sum(op.rho for op in ops.values()), sum(op.K for op in ops.values()))
    assert is_regular(total, PacketSequence.single(merged.dates, merged.lengths))


def test_jiang_alias():
    assert jiang_lambda_nu(F(1, 2), 3) == PacketBurstiness(F(1, 2), 4)


@given(seeds)
def test_max_of_is_conjunction(seed):
    rng = random.Random(seed)
    a, b = random_operator(rng), random_operator(rng)
    seq = random_trace(rng)
    if rng.random() < 0.5:
        seq = minimal_regulate(rng.choice([a, b]), seq)
    assert is_regular(MaxOf(a, b), seq) == (is_regular(a, seq) and is_regular(b, seq))


def test_multi_flow_regularity_is_rejected():
    with pytest.raises(ValueError):
        is_regular(LRQ(1), PacketSequence([0, 1], [1, 1], [1, 2]))


def test_arrival_curve_with_bounded_sigma():
    # sigma capped at 3: more than 3 units ever is impossible
    sigma = Curve.from_points([(0, 0, 0, 1), (3, 3, 3, 0)])
    op = ArrivalCurve(sigma)
    assert op.evaluate([0, 1], [1, 1, 1], 3) == 3
    assert op.evaluate([0, 1, 2], [1, 1, 1, 1], 4) == POS_INF
    assert prefix_sums([1, 2]) == [0, 1, 3]

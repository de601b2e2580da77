"""Seeded random instances for property tests and campaigns.

All generators take a :class:`random.Random` so that a campaign is fully
determined by its seed.  Instances are kept small on purpose: a dozen
packets is enough to hit simultaneous arrivals, bursts and idle periods,
and small sizes keep the quadratic oracles cheap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .curves import Curve, Piece
from .operators import (
    LRQ,
    ArrivalCurve,
    GRegulation,
    LeakyBucket,
    MaxOf,
    PacketBurstiness,
    PacketSpacing,
    RegulationOperator,
    Staircase,
    TsnPacketRate,
    jiang_lambda_nu,
)
from .rational import POS_INF
from .regulators import minimal_regulate
from .systems import BoundedJitterRandom, Damper, FifoSystem, Identity, PreemptiveServer
from .traces import PacketSequence


@dataclass(frozen=True)
class TraceParams:
    max_packets: int = 12
    max_length: int = 4
    flows: tuple[int, ...] = (1,)
    zero_gap_prob: float = 0.3
    max_gap: int = 6
    denominators: tuple[int, ...] = (1, 2, 3, 4)


def random_rational(rng: random.Random, lo: int, hi: int, denominators=(1, 2, 3, 4)) -> Fraction:
    q = rng.choice(denominators)
    return Fraction(rng.randint(lo * q, hi * q), q)


def random_positive(rng: random.Random, hi: int = 5, denominators=(1, 2, 3, 4)) -> Fraction:
    q = rng.choice(denominators)
    return Fraction(rng.randint(1, hi * q), q)


def random_trace(rng: random.Random, params: TraceParams = TraceParams(), size: int | None = None) -> PacketSequence:
    """Cumulative sums of nonnegative gaps, some of them zero."""
    n = rng.randint(0, params.max_packets) if size is None else size
    dates, t = [], Fraction(0)
    for i in range(n):
        if i and rng.random() >= params.zero_gap_prob:
            t += random_rational(rng, 0, params.max_gap, params.denominators)
        elif i == 0:
            t = random_rational(rng, 0, params.max_gap, params.denominators)
        dates.append(t)
    lengths = [rng.randint(1, params.max_length) for _ in range(n)]
    flows = [rng.choice(params.flows) for _ in range(n)]
    return PacketSequence(dates, lengths, flows)


def random_sigma(rng: random.Random, kind: str | None = None) -> Curve:
    kind = kind or rng.choice(("affine", "staircase"))
    if kind == "affine":
        return Curve.affine(random_positive(rng, 3), random_rational(rng, 0, 6))
    return Curve.staircase(random_positive(rng, 6), random_positive(rng, 5))


def random_curve(rng: random.Random, pieces: int | None = None, allow_inf: bool = True,
                 periodic: bool | None = None) -> Curve:
    """Wide-sense increasing piecewise affine curve with random jumps and plateaus."""
    k = pieces or rng.randint(1, 5)
    periodic = rng.random() < 0.4 if periodic is None else periodic
    xs = [Fraction(0)]
    for _ in range(k - 1):
        xs.append(xs[-1] + random_positive(rng, 3))
    out, level = [], Fraction(0)
    for i, x in enumerate(xs):
        if i > 0:
            prev = out[-1]
            level = prev.right + prev.slope * (x - prev.x)
        value = level + (random_rational(rng, 0, 2) if i > 0 and rng.random() < 0.3 else 0)
        right = value + (random_rational(rng, 0, 3) if rng.random() < 0.5 else 0)
        slope = random_rational(rng, 0, 2) if rng.random() < 0.7 else Fraction(0)
        out.append(Piece(x, value, right, slope))
    if allow_inf and not periodic and rng.random() < 0.15:
        last = out[-1]
        x = last.x + random_positive(rng, 3)
        if rng.random() < 0.5:
            out.append(Piece(x, POS_INF, POS_INF))
        else:
            out.append(Piece(x, last.right + last.slope * (x - last.x), POS_INF))
    if not periodic:
        return Curve(out)
    start = rng.randrange(len(out))
    ps = out[start].x
    period = (xs[-1] - ps) + random_positive(rng, 3)
    last = out[-1]
    end_left = last.right + last.slope * (ps + period - last.x)
    inc = end_left - out[start].value + random_rational(rng, 0, 2)
    if inc == 0:
        inc = Fraction(1)
    return Curve(out, ps, period, inc)


def random_g(rng: random.Random) -> Curve:
    """Finite increasing curve with g(0) = 0 for g-regulation."""
    kind = rng.choice(("linear", "staircase", "points"))
    if kind == "linear":
        return Curve.linear(random_positive(rng, 3))
    if kind == "staircase":
        return Curve.staircase(random_positive(rng, 3), random_positive(rng, 6))
    c = random_curve(rng, allow_inf=False)
    first = c.pieces[0]
    if first.value != 0:
        return Curve.linear(1)
    return c


# -- operator catalog ---------------------------------------------------------------

def _lrq(rng):
    return LRQ(random_positive(rng, 3))


def _lb(rng):
    return LeakyBucket(random_positive(rng, 3), random_positive(rng, 6))


def _sc(rng):
    return Staircase(random_positive(rng, 6), random_positive(rng, 5))


def _tsn(rng):
    return TsnPacketRate(random_positive(rng, 6), rng.randint(1, 3))


def _ps(rng):
    return PacketSpacing(random_positive(rng, 4))


def _pb(rng):
    return PacketBurstiness(random_positive(rng, 2), rng.randint(1, 3))


def _lambda_nu(rng):
    return jiang_lambda_nu(random_positive(rng, 2), rng.randint(0, 2))


def _g(rng):
    return GRegulation(random_g(rng))


def _ac(rng):
    # sigma must grow without bound, otherwise sigma_down reaches +inf
    if rng.random() < 0.5:
        return ArrivalCurve(random_sigma(rng))
    c = random_curve(rng, allow_inf=False, periodic=True)
    return ArrivalCurve(c)


def _max(rng):
    kinds = [k for k in CATALOG if k != "max"]
    a, b = rng.sample(kinds, 2)
    return MaxOf(CATALOG[a](rng), CATALOG[b](rng))


CATALOG: dict[str, Callable[[random.Random], RegulationOperator]] = {
    "lrq": _lrq,
    "lb": _lb,
    "sc": _sc,
    "tsn": _tsn,
    "ps": _ps,
    "pb": _pb,
    "lambda-nu": _lambda_nu,
    "g": _g,
    "ac": _ac,
    "max": _max,
}


def random_operator(rng: random.Random, kind: str | None = None) -> RegulationOperator:
    return CATALOG[kind or rng.choice(sorted(CATALOG))](rng)


def random_operators(rng: random.Random, flows: Sequence[int]) -> dict[int, RegulationOperator]:
    return {f: random_operator(rng) for f in flows}


def merge_flows(per_flow: dict[int, PacketSequence]) -> PacketSequence:
    """Interleave single-flow sequences by date; ties keep a random-free
    deterministic order (flow id, then per-flow index)."""
    rows = []
    for f, seq in per_flow.items():
        for i, (d, length) in enumerate(zip(seq.dates, seq.lengths)):
            rows.append((d, f, i, length))
    rows.sort()
    return PacketSequence([r[0] for r in rows], [r[3] for r in rows], [r[1] for r in rows])


def random_regular_trace(rng: random.Random, ops: dict[int, RegulationOperator],
                         params: TraceParams = TraceParams()) -> PacketSequence:
    """Random multi-flow sequence in which every flow is regular for its operator.

    Each flow is drawn independently and pushed through its minimal
    regulator; the outputs are then merged by date.
    """
    per_flow = {}
    total = rng.randint(0, params.max_packets)
    counts = {f: 0 for f in ops}
    for _ in range(total):
        counts[rng.choice(sorted(ops))] += 1
    for f, op in ops.items():
        raw = random_trace(rng, TraceParams(params.max_packets, params.max_length, (1,),
                                            params.zero_gap_prob, params.max_gap,
                                            params.denominators), size=counts[f])
        per_flow[f] = minimal_regulate(op, raw)
    return merge_flows(per_flow)


def random_system(rng: random.Random, kind: str | None = None) -> FifoSystem:
    kind = kind or rng.choice(("identity", "damper", "pserver", "jitter"))
    if kind == "identity":
        return Identity()
    if kind == "damper":
        return Damper(random_rational(rng, 0, 5))
    if kind == "jitter":
        return BoundedJitterRandom(rng.randrange(2**31), random_rational(rng, 0, 8))
    windows, t = [], Fraction(0)
    for _ in range(rng.randint(0, 4)):
        s = t + random_rational(rng, 0, 6)
        e = s + random_positive(rng, 4)
        windows.append((s, e))
        t = e + random_positive(rng, 2)
    return PreemptiveServer(random_positive(rng, 3), windows)


__all__ = [
    "CATALOG",
    "TraceParams",
    "merge_flows",
    "random_curve",
    "random_g",
    "random_operator",
    "random_operators",
    "random_positive",
    "random_rational",
    "random_regular_trace",
    "random_sigma",
    "random_system",
    "random_trace",
]

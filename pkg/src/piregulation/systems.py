"""FIFO systems that perturb packet dates, and delay measurement."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .rational import NEG_INF, ExtRat, fmt, rat
from .traces import PacketSequence


class FifoSystem:
    def apply(self, seq: PacketSequence) -> PacketSequence:
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(FifoSystem):
    def apply(self, seq):
        return seq

    def __str__(self):
        return "identity"


@dataclass(frozen=True)
class Damper(FifoSystem):
    """Releases every packet exactly ``d`` after its arrival."""

    d: Fraction

    def __post_init__(self):
        object.__setattr__(self, "d", rat(self.d))
        if self.d < 0:
            raise ValueError("damper delay must be >= 0")

    def apply(self, seq):
        return seq.with_dates([a + self.d for a in seq.dates])

    def __str__(self):
        return f"damper {fmt(self.d)}"


@dataclass(frozen=True)
class PreemptiveServer(FifoSystem):
    """Low-priority FIFO server of fixed rate, preempted during windows.

    Preemption is resume-style: an interrupted packet continues where it
    left off once the window closes.
    """

    rate: Fraction
    windows: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rate", rat(self.rate))
        windows = tuple(sorted((rat(s), rat(e)) for s, e in self.windows))
        if self.rate <= 0:
            raise ValueError("server rate must be > 0")
        for s, e in windows:
            if e < s:
                raise ValueError(f"window [{fmt(s)},{fmt(e)}] ends before it starts")
        for (s1, e1), (s2, e2) in zip(windows, windows[1:]):
            if s2 <= e1:
                raise ValueError(
                    f"preemption windows [{fmt(s1)},{fmt(e1)}] and [{fmt(s2)},{fmt(e2)}] overlap"
                )
        object.__setattr__(self, "windows", windows)

    def _finish(self, start: Fraction, work: Fraction) -> Fraction:
        now = start
        for s, e in self.windows:
            if e <= now:
                continue
            if s <= now:
                now = e
                continue
            if now + work <= s:
                return now + work
            work -= s - now
            now = e
        return now + work

    def apply(self, seq):
        out = []
        free = NEG_INF
        for a, length in zip(seq.dates, seq.lengths):
            if a < 0:
                raise ValueError("preemptive server needs dates >= 0")
            done = self._finish(max(a, free), length / self.rate)
            out.append(done)
            free = done
        return seq.with_dates(out)

    def __str__(self):
        spans = " ".join(f"[{fmt(s)},{fmt(e)}]" for s, e in self.windows)
        return f"pserver {fmt(self.rate)} {spans}".rstrip()


@dataclass(frozen=True)
class BoundedJitterRandom(FifoSystem):
    """Seeded random delays in ``[0, d_max]``, pushed forward to stay FIFO."""

    seed: int
    d_max: Fraction
    grain: int = 8

    def __post_init__(self):
        object.__setattr__(self, "d_max", rat(self.d_max))
        if self.d_max < 0:
            raise ValueError("d_max must be >= 0")

    def apply(self, seq):
        rng = random.Random(self.seed)
        out: list[ExtRat] = []
        for a in seq.dates:
            exit_ = a + self.d_max * Fraction(rng.randint(0, self.grain), self.grain)
            out.append(max(out[-1], exit_) if out else exit_)
        return seq.with_dates(out)

    def __str__(self):
        return f"jitter {self.seed} {fmt(self.d_max)}"


def apply(system: FifoSystem, seq: PacketSequence) -> PacketSequence:
    return system.apply(seq)


def _check_matched(inp: PacketSequence, out: PacketSequence) -> None:
    if len(inp) != len(out) or inp.lengths != out.lengths or inp.flows != out.flows:
        raise ValueError("input and output traces do not describe the same packets")
    for n, (a, d) in enumerate(zip(inp.dates, out.dates), start=1):
        if d < a:
            raise ValueError(f"packet {n} leaves ({fmt(d)}) before it arrives ({fmt(a)})")


def worst_case_delay(inp: PacketSequence, out: PacketSequence) -> ExtRat:
    """``max_n (D_n - A_n)``; ``-inf`` for an empty prefix."""
    _check_matched(inp, out)
    return max((d - a for a, d in zip(inp.dates, out.dates)), default=NEG_INF)


def per_flow_worst_case_delay(inp: PacketSequence, out: PacketSequence) -> dict[int, ExtRat]:
    _check_matched(inp, out)
    delays: dict[int, ExtRat] = {}
    for a, d, f in zip(inp.dates, out.dates, inp.flows):
        delays[f] = max(delays.get(f, NEG_INF), d - a)
    return delays


def packet_delays(inp: PacketSequence, out: PacketSequence) -> list[ExtRat]:
    _check_matched(inp, out)
    return [d - a for a, d in zip(inp.dates, out.dates)]


def is_fifo_output(inp: PacketSequence, out: PacketSequence) -> bool:
    """``A <= D``, ``D`` wide-sense increasing, same packets in the same order."""
    if len(inp) != len(out) or inp.lengths != out.lengths or inp.flows != out.flows:
        return False
    if any(d < a for a, d in zip(inp.dates, out.dates)):
        return False
    return all(x <= y for x, y in zip(out.dates, out.dates[1:]))

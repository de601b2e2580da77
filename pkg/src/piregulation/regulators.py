"""Minimal per-flow and interleaved regulators.

Both regulators are streaming: ``push`` one packet, get its release date
back.  A release date never changes afterwards because the operator value
at packet ``n`` only depends on earlier releases.
"""

from __future__ import annotations

import heapq
from typing import Mapping

from .operators import RegulationOperator
from .rational import ExtRat
from .traces import PacketSequence


class MissingOperatorError(KeyError):
    """A flow in the input has no regulation operator."""

    def __str__(self):
        return f"no regulation operator for flow {self.args[0]}"


class PerFlowRegulatorState:
    """Minimal regulator for one flow: ``D_n = max(A_n, D_{n-1}, Pi(D, L)_n)``."""

    def __init__(self, op: RegulationOperator):
        self.op = op
        self.out_dates: list[ExtRat] = []
        self.out_lengths: list[int] = []

    def push(self, date: ExtRat, length: int) -> ExtRat:
        self.out_lengths.append(length)
        n = len(self.out_lengths)
        release = date
        if n > 1:
            release = max(date, self.out_dates[-1], self.op.evaluate(self.out_dates, self.out_lengths, n))
        self.out_dates.append(release)
        return release


class InterleavedRegulatorState:
    """Minimal interleaved regulator over one FIFO queue shared by all flows."""

    def __init__(self, ops: Mapping[int, RegulationOperator]):
        self.ops = dict(ops)
        self.out_dates: list[ExtRat] = []
        self.flow_dates: dict[int, list[ExtRat]] = {}
        self.flow_lengths: dict[int, list[int]] = {}

    def push(self, date: ExtRat, length: int, flow: int) -> ExtRat:
        if flow not in self.ops:
            raise MissingOperatorError(flow)
        fd = self.flow_dates.setdefault(flow, [])
        fl = self.flow_lengths.setdefault(flow, [])
        fl.append(length)
        release = date
        if self.out_dates:
            release = max(date, self.out_dates[-1], self.ops[flow].evaluate(fd, fl, len(fl)))
        fd.append(release)
        self.out_dates.append(release)
        return release


def _check_ops(ops: Mapping[int, RegulationOperator], seq: PacketSequence) -> None:
    for f in seq.flow_ids():
        if f not in ops:
            raise MissingOperatorError(f)


def minimal_regulate(op: RegulationOperator, seq: PacketSequence) -> PacketSequence:
    if not seq.is_single_flow:
        raise ValueError("minimal_regulate expects a single-flow sequence")
    state = PerFlowRegulatorState(op)
    return seq.with_dates([state.push(d, length) for d, length in zip(seq.dates, seq.lengths)])


def minimal_interleaved_regulate(ops: Mapping[int, RegulationOperator], seq: PacketSequence) -> PacketSequence:
    _check_ops(ops, seq)
    state = InterleavedRegulatorState(ops)
    return seq.with_dates(
        [state.push(d, length, f) for d, length, f in zip(seq.dates, seq.lengths, seq.flows)]
    )


def per_flow_bank(ops: Mapping[int, RegulationOperator], seq: PacketSequence) -> PacketSequence:
    """One minimal regulator per flow; output keeps input numbering and is
    in general not chronological."""
    _check_ops(ops, seq)
    states = {f: PerFlowRegulatorState(ops[f]) for f in seq.flow_ids()}
    out = [states[f].push(d, length) for d, length, f in zip(seq.dates, seq.lengths, seq.flows)]
    return seq.with_dates(out, ordered=False)


def head_of_line_schedule(ops: Mapping[int, RegulationOperator], seq: PacketSequence) -> list[tuple[ExtRat, int]]:
    """Event-driven FIFO queue where only the head packet is examined.

    Returns ``(release time, packet index)`` pairs, 1-based, in release order.
    """
    _check_ops(ops, seq)
    arrivals = [(d, n) for n, d in enumerate(seq.dates, start=1)]
    heapq.heapify(arrivals)
    queue: list[int] = []
    released: dict[int, list] = {f: [] for f in ops}
    released_lengths: dict[int, list] = {f: [] for f in ops}
    schedule: list[tuple[ExtRat, int]] = []
    now = arrivals[0][0] if arrivals else None
    qi = 0
    while qi < len(queue) or arrivals:
        while arrivals and arrivals[0][0] <= now:
            queue.append(heapq.heappop(arrivals)[1])
        if qi == len(queue):
            now = arrivals[0][0]
            continue
        head = queue[qi]
        f = seq.flows[head - 1]
        lengths = released_lengths[f] + [seq.lengths[head - 1]]
        eligible = ops[f].evaluate(released[f], lengths, len(lengths))
        if eligible <= now:
            schedule.append((now, head))
            released[f].append(now)
            released_lengths[f].append(seq.lengths[head - 1])
            qi += 1
        elif arrivals and arrivals[0][0] < eligible:
            now = arrivals[0][0]
        else:
            now = eligible
    return schedule

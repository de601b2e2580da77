"""Packet sequences (dates, lengths, flow ids) and their cumulative views."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Iterable, Sequence

from .curves import Curve, DomainError, Piece
from .rational import POS_INF, ExtRat, ext, fmt, is_finite, rat


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class PacketSequence:
    """Finite prefix of a marked point process ``(A, L, F)``.

    Indices in the public API are 1-based, as in the usual notation.
    ``ordered=False`` is only used for the output of a bank of per-flow
    regulators, which keeps input numbering but may not be chronological.
    """

    dates: tuple[ExtRat, ...]
    lengths: tuple[int, ...]
    flows: tuple[int, ...] = None
    ordered: bool = field(default=True, compare=False)

    def __post_init__(self):
        dates = tuple(ext(d) for d in self.dates)
        lengths = tuple(self.lengths)
        flows = (1,) * len(lengths) if self.flows is None else tuple(self.flows)
        if not (len(dates) == len(lengths) == len(flows)):
            raise TraceError("dates, lengths and flows must have equal length")
        for length in lengths:
            if not isinstance(length, int) or isinstance(length, bool) or length < 1:
                raise TraceError(f"packet length must be a positive integer, got {length!r}")
        for f in flows:
            if not isinstance(f, int) or isinstance(f, bool) or f < 1:
                raise TraceError(f"flow id must be a positive integer, got {f!r}")
        if self.ordered:
            for n in range(1, len(dates)):
                if dates[n] < dates[n - 1]:
                    raise TraceError(
                        f"dates must be wide-sense increasing (packet {n + 1}: "
                        f"{fmt(dates[n])} < {fmt(dates[n - 1])})"
                    )
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "flows", flows)

    @classmethod
    def single(cls, dates: Iterable, lengths: Iterable[int]) -> "PacketSequence":
        return cls(tuple(dates), tuple(lengths))

    @classmethod
    def empty(cls) -> "PacketSequence":
        return cls((), ())

    def __len__(self) -> int:
        return len(self.dates)

    def with_dates(self, dates: Sequence, ordered: bool = True) -> "PacketSequence":
        return PacketSequence(tuple(dates), self.lengths, self.flows, ordered)

    def flow_ids(self) -> list[int]:
        """Flow ids in order of first appearance."""
        return list(dict.fromkeys(self.flows))

    @property
    def is_single_flow(self) -> bool:
        return len(set(self.flows)) <= 1

    def flow_index(self, n: int) -> int:
        """Index of packet ``n`` inside its own flow (1-based)."""
        if not 1 <= n <= len(self):
            raise IndexError(f"packet index {n} out of range 1..{len(self)}")
        f = self.flows[n - 1]
        return sum(1 for g in self.flows[:n] if g == f)

    def packet_of_flow(self, flow: int, i: int) -> int:
        """Position in the sequence of the ``i``-th packet of ``flow``."""
        if i < 1:
            raise IndexError("flow-local index must be >= 1")
        seen = 0
        for n, f in enumerate(self.flows, start=1):
            if f == flow:
                seen += 1
                if seen == i:
                    return n
        raise IndexError(f"flow {flow} has only {seen} packet(s) in this prefix")

    def flow_view(self, flow: int) -> "FlowView":
        index_map = tuple(n for n, f in enumerate(self.flows, start=1) if f == flow)
        return FlowView(self, flow, index_map)

    def restrict(self, flow: int) -> "PacketSequence":
        """The single-flow sequence ``(A^f, L^f)``."""
        return self.flow_view(flow).sequence()


@dataclass(frozen=True)
class FlowView:
    parent: PacketSequence
    flow: int
    index_map: tuple[int, ...]

    @property
    def dates(self) -> tuple:
        return tuple(self.parent.dates[n - 1] for n in self.index_map)

    @property
    def lengths(self) -> tuple:
        return tuple(self.parent.lengths[n - 1] for n in self.index_map)

    def sequence(self) -> PacketSequence:
        return PacketSequence(self.dates, self.lengths, (self.flow,) * len(self.index_map),
                              self.parent.ordered)


def flow_index(seq: PacketSequence, n: int) -> int:
    return seq.flow_index(n)


def packet_of_flow(seq: PacketSequence, flow: int, i: int) -> int:
    return seq.packet_of_flow(flow, i)


def _check_nonnegative(seq: PacketSequence) -> None:
    for d in seq.dates:
        if not is_finite(d) or d < 0:
            raise DomainError(f"cumulative arrivals need finite dates >= 0, got {fmt(d)}")


def cumulative_arrivals(seq: PacketSequence) -> Curve:
    """``R(t) = sum of L_n over packets with A_n < t``; left-continuous."""
    _check_nonnegative(seq)
    totals: dict[Fraction, int] = {}
    for d, length in zip(seq.dates, seq.lengths):
        totals[d] = totals.get(d, 0) + length
    at_zero = totals.pop(Fraction(0), 0)
    pieces = [Piece(Fraction(0), Fraction(0), Fraction(at_zero), Fraction(0))]
    level = at_zero
    for d in sorted(totals):
        pieces.append(Piece(d, Fraction(level), Fraction(level + totals[d]), Fraction(0)))
        level += totals[d]
    return Curve(pieces)


def arrival_time_function(seq: PacketSequence) -> Curve:
    """``T = R`` upper pseudo-inverse: date of the first packet that pushes
    the cumulative amount strictly above ``x``."""
    return cumulative_arrivals(seq).upper_pseudo_inverse()


def arrival_time_at(seq: PacketSequence, x) -> ExtRat:
    """Direct infimum form of the arrival time function at ``x``."""
    x = rat(x)
    best: ExtRat = POS_INF
    for d, total in zip(seq.dates, accumulate(seq.lengths)):
        if total > x and d < best:
            best = d
    return best


def cumulative_at(seq: PacketSequence, t) -> int:
    """Direct summation of ``R(t)``; independent of the curve machinery."""
    t = rat(t)
    return sum(length for d, length in zip(seq.dates, seq.lengths) if d < t)


def aggregate_simultaneous(seq: PacketSequence) -> PacketSequence:
    """Merge same-date packets into one packet of the summed length."""
    dates: list = []
    lengths: list[int] = []
    for d, length in zip(seq.dates, seq.lengths):
        if dates and dates[-1] == d:
            lengths[-1] += length
        else:
            dates.append(d)
            lengths.append(length)
    return PacketSequence.single(dates, lengths)


# -- text format -------------------------------------------------------------

def parse_trace(text: str, ordered: bool = True) -> PacketSequence:
    """Parse ``<date> <length> [<flow>]`` lines; ``#`` starts a comment."""
    dates, lengths, flows = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise TraceError(f"line {lineno}: expected '<date> <length> <flow>'")
        try:
            dates.append(rat(parts[0]))
            lengths.append(int(parts[1]))
            flows.append(int(parts[2]) if len(parts) == 3 else 1)
        except ValueError as exc:
            raise TraceError(f"line {lineno}: {exc}") from None
    return PacketSequence(tuple(dates), tuple(lengths), tuple(flows), ordered)


def format_trace(seq: PacketSequence) -> str:
    return "".join(
        f"{fmt(d)} {length} {f}\n" for d, length, f in zip(seq.dates, seq.lengths, seq.flows)
    )


def prefix_sums(lengths: Sequence[int]) -> list[int]:
    """``S[k] = L_1 + ... + L_k`` with ``S[0] = 0``."""
    return [0, *accumulate(lengths)]


__all__ = [
    "FlowView",
    "PacketSequence",
    "TraceError",
    "aggregate_simultaneous",
    "arrival_time_at",
    "arrival_time_function",
    "cumulative_arrivals",
    "cumulative_at",
    "flow_index",
    "format_trace",
    "packet_of_flow",
    "parse_trace",
    "prefix_sums",
]

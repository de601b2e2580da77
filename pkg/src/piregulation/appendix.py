"""The worked two-flow example: a preempted FIFO server followed by an
interleaved regulator, compared with a bank of per-flow regulators.

Units are abstract here; in physical terms one data unit is 1200 bytes
and one time unit is 12 us.
"""

from __future__ import annotations

from .operators import PacketSpacing
from .regulators import minimal_interleaved_regulate, per_flow_bank
from .systems import PreemptiveServer, per_flow_worst_case_delay, worst_case_delay
from .traces import PacketSequence

ARRIVALS = (0, 5, 5, 10, 15, 15, 20, 25, 25)
LENGTHS = (2, 2, 1, 2, 2, 1, 2, 2, 1)
FLOWS = (1, 1, 2, 1, 1, 2, 1, 1, 2)
WINDOWS = ((0, 3), (10, 13), (20, 23))
SPACINGS = {1: 5, 2: 10}


def input_sequence() -> PacketSequence:
    return PacketSequence(ARRIVALS, LENGTHS, FLOWS)


def server() -> PreemptiveServer:
    return PreemptiveServer(1, WINDOWS)


def operators() -> dict:
    return {f: PacketSpacing(tau) for f, tau in SPACINGS.items()}


def scenario() -> list[tuple[str, tuple]]:
    """Every figure of the example, as ``(key, values)`` rows in a fixed order."""
    a = input_sequence()
    d = server().apply(a)
    ops = operators()
    e = minimal_interleaved_regulate(ops, d)
    e_bank = per_flow_bank(ops, d)
    d_flow = per_flow_worst_case_delay(a, d)
    e_flow = per_flow_worst_case_delay(a, e)
    return [
        ("A", a.dates),
        ("L", a.lengths),
        ("F", a.flows),
        ("D", d.dates),
        ("E", e.dates),
        ("E'", e_bank.dates),
        ("d1", (d_flow[1],)),
        ("d2", (d_flow[2],)),
        ("d", (worst_case_delay(a, d),)),
        ("d1_tot", (e_flow[1],)),
        ("d2_tot", (e_flow[2],)),
        ("d_tot", (worst_case_delay(a, e),)),
    ]

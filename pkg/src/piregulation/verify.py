"""Theorem checkers with re-verifiable counterexample witnesses.

Every checker returns a :class:`CheckReport`.  A failing report always
carries a witness naming the packet index and the two sides of the
inequality that broke, so the failure can be confirmed by hand.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .curves import Curve
from .operators import (
    RegulationOperator,
    arrival_curve_violation,
    first_violation,
)
from .rational import ExtRat, fmt
from .regulators import (
    minimal_interleaved_regulate,
    minimal_regulate,
    per_flow_bank,
)
from .systems import FifoSystem, is_fifo_output, per_flow_worst_case_delay, worst_case_delay
from .traces import PacketSequence, prefix_sums


@dataclass
class CheckReport:
    name: str
    passed: bool
    witness: dict | None = None
    detail: str = ""
    precondition_failed: bool = False
    values: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError(f"failing check {self.name!r} must carry a witness")

    def format(self) -> str:
        line = f"CHECK {self.name} {'PASS' if self.passed else 'FAIL'}"
        if self.witness:
            parts = " ".join(f"{k}={_render(v)}" for k, v in self.witness.items())
            line += f" [witness: {parts}]"
        if self.precondition_failed:
            line += " (precondition)"
        if self.detail:
            line += f" # {self.detail}"
        return line

    def __str__(self):
        return self.format()


def _render(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    return fmt(v)


def _as_ops(op_or_ops, seq: PacketSequence) -> dict[int, RegulationOperator]:
    if isinstance(op_or_ops, RegulationOperator):
        return {f: op_or_ops for f in seq.flow_ids()} or {1: op_or_ops}
    return dict(op_or_ops)


# -- Theorem 1 -----------------------------------------------------------------

def condition2_violation(seq: PacketSequence, sigma: Curve):
    """First ``(m, n)`` with ``L_m + ... + L_n > sigma+(A_n - A_m)``."""
    sums = prefix_sums(seq.lengths)
    for n in range(1, len(seq) + 1):
        for m in range(1, n + 1):
            lhs = sums[n] - sums[m - 1]
            rhs = sigma.right_limit(seq.dates[n - 1] - seq.dates[m - 1])
            if lhs > rhs:
                return m, n, lhs, rhs
    return None


def condition3_violation(seq: PacketSequence, sigma: Curve, sigma_lower_inverse: Curve | None = None):
    """First ``(m, n)`` with ``A_n - A_m < sigma_down(L_m + ... + L_n)``."""
    inv = sigma_lower_inverse or sigma.lower_pseudo_inverse()
    sums = prefix_sums(seq.lengths)
    for n in range(1, len(seq) + 1):
        for m in range(1, n + 1):
            lhs = seq.dates[n - 1] - seq.dates[m - 1]
            rhs = inv(sums[n] - sums[m - 1])
            if lhs < rhs:
                return m, n, lhs, rhs
    return None


def dual_condition2_violation(seq: PacketSequence, envelope: Curve):
    """Condition 2 written with a max-plus envelope: ``sum <= envelope_up(gap)``."""
    return condition2_violation(seq, envelope.upper_pseudo_inverse())


def dual_condition3_violation(seq: PacketSequence, envelope: Curve):
    """Condition 3 written with a max-plus envelope: ``gap >= envelope-(sum)``."""
    left = envelope.left_continuous()
    sums = prefix_sums(seq.lengths)
    for n in range(1, len(seq) + 1):
        for m in range(1, n + 1):
            lhs = seq.dates[n - 1] - seq.dates[m - 1]
            rhs = left(sums[n] - sums[m - 1])
            if lhs < rhs:
                return m, n, lhs, rhs
    return None


def excludes_current_length_holds(seq: PacketSequence, sigma: Curve) -> bool:
    """``L_m + ... + L_{n-1} <= sigma(A_n - A_m)`` for all ``m <= n``.

    Implied by the arrival curve constraint but strictly weaker than it.
    """
    sums = prefix_sums(seq.lengths)
    for n in range(1, len(seq) + 1):
        for m in range(1, n + 1):
            if sums[n - 1] - sums[m - 1] > sigma(seq.dates[n - 1] - seq.dates[m - 1]):
                return False
    return True


def theorem1_verdicts(seq: PacketSequence, sigma: Curve, sigma_lower_inverse: Curve | None = None):
    v1 = arrival_curve_violation(seq, sigma)
    v2 = condition2_violation(seq, sigma)
    v3 = condition3_violation(seq, sigma, sigma_lower_inverse)
    return v1, v2, v3


def check_theorem1(seq: PacketSequence, sigma: Curve) -> CheckReport:
    """Envelope constraint, right-limit sums and pseudo-inverse gaps agree."""
    v1, v2, v3 = theorem1_verdicts(seq, sigma)
    ok = (v1 is None, v2 is None, v3 is None)
    detail = "c1={} c2={} c3={}".format(*ok)
    witness = None
    if v2 is not None:
        m, n, lhs, rhs = v2
        witness = {"m": m, "n": n, "lhs": lhs, "rhs": rhs}
    elif v3 is not None:
        m, n, lhs, rhs = v3
        witness = {"m": m, "n": n, "lhs": lhs, "rhs": rhs}
    elif v1 is not None:
        s, t, lhs, rhs = v1
        witness = {"s": _render(s), "t": _render(t), "lhs": lhs, "rhs": rhs}
    return CheckReport("theorem1", len(set(ok)) == 1, witness, detail,
                       values={"c1": ok[0], "c2": ok[1], "c3": ok[2]})


# -- regularity ------------------------------------------------------------------

def regularity_violation(ops: Mapping[int, RegulationOperator], seq: PacketSequence):
    """``(n, date, bound)`` in global numbering, or None."""
    for f in seq.flow_ids():
        view = seq.flow_view(f)
        hit = first_violation(ops[f], view.sequence())
        if hit is not None:
            i, date, bound = hit
            return view.index_map[i - 1], date, bound
    return None


def check_regularity(op_or_ops, seq: PacketSequence) -> CheckReport:
    ops = _as_ops(op_or_ops, seq)
    missing = [f for f in seq.flow_ids() if f not in ops]
    if missing:
        raise KeyError(missing[0])
    hit = regularity_violation(ops, seq)
    if hit is None:
        return CheckReport("regularity", True)
    n, date, bound = hit
    return CheckReport("regularity", False, {"n": n, "lhs": date, "rhs": bound},
                       "date below operator bound")


# -- minimality / tightness --------------------------------------------------------

def _minimal_output(op_or_ops, seq: PacketSequence) -> PacketSequence:
    if isinstance(op_or_ops, RegulationOperator):
        return minimal_regulate(op_or_ops, seq)
    return minimal_interleaved_regulate(op_or_ops, seq)


def check_minimality(op_or_ops, inp: PacketSequence, candidate: PacketSequence) -> CheckReport:
    """Any valid regulator output must be >= the minimal one, packet by packet."""
    ops = _as_ops(op_or_ops, inp)
    if not is_fifo_output(inp, candidate):
        return CheckReport("minimality", False, _fifo_witness(inp, candidate),
                           "candidate is not a FIFO output", precondition_failed=True)
    hit = regularity_violation(ops, candidate)
    if hit is not None:
        n, date, bound = hit
        return CheckReport("minimality", False, {"n": n, "lhs": date, "rhs": bound},
                           "candidate is not regular", precondition_failed=True)
    minimal = _minimal_output(op_or_ops, inp)
    for n, (d_cand, d_min) in enumerate(zip(candidate.dates, minimal.dates), start=1):
        if d_cand < d_min:
            return CheckReport("minimality", False, {"n": n, "lhs": d_cand, "rhs": d_min},
                               "candidate releases earlier than the minimal regulator")
    equal = candidate.dates == minimal.dates
    return CheckReport("minimality", True, detail="equal" if equal else "dominates")


def _fifo_witness(inp: PacketSequence, out: PacketSequence) -> dict:
    if len(inp) != len(out) or inp.lengths != out.lengths or inp.flows != out.flows:
        return {"n": 0, "lhs": len(out), "rhs": len(inp)}
    for n, (a, d) in enumerate(zip(inp.dates, out.dates), start=1):
        if d < a:
            return {"n": n, "lhs": d, "rhs": a}
    for n in range(2, len(out) + 1):
        if out.dates[n - 1] < out.dates[n - 2]:
            return {"n": n, "lhs": out.dates[n - 1], "rhs": out.dates[n - 2]}
    raise AssertionError("sequence is FIFO")


def tightness_violation(op_or_ops, inp: PacketSequence, out: PacketSequence):
    """Index where ``D_n`` differs from ``max(A_n, D_{n-1}, Pi(D)_n)``, or None."""
    ops = _as_ops(op_or_ops, inp)
    flow_dates: dict[int, list] = {}
    flow_lengths: dict[int, list] = {}
    prev: ExtRat | None = None
    for n, (a, d, length, f) in enumerate(zip(inp.dates, out.dates, inp.lengths, inp.flows), 1):
        fd = flow_dates.setdefault(f, [])
        fl = flow_lengths.setdefault(f, [])
        fl.append(length)
        if prev is None:
            expected = a
        else:
            expected = max(a, prev, ops[f].evaluate(fd, fl, len(fl)))
        if d != expected:
            return n, d, expected
        fd.append(d)
        prev = d
    return None


def slack_candidate(op_or_ops, inp: PacketSequence, rng: random.Random, max_slack=3, grain=4):
    """A valid (non-minimal) regulator output: re-close the recursion after
    adding random nonnegative slack to every release."""
    ops = _as_ops(op_or_ops, inp)
    flow_dates: dict[int, list] = {}
    flow_lengths: dict[int, list] = {}
    out: list = []
    for a, length, f in zip(inp.dates, inp.lengths, inp.flows):
        fd = flow_dates.setdefault(f, [])
        fl = flow_lengths.setdefault(f, [])
        fl.append(length)
        base = a if not out else max(a, out[-1], ops[f].evaluate(fd, fl, len(fl)))
        d = base + Fraction(rng.randint(0, max_slack * grain), grain) * rng.choice((0, 1))
        fd.append(d)
        out.append(d)
    return inp.with_dates(out)


# -- shaping for free / dominance ------------------------------------------------------

def check_shaping_for_free(system: FifoSystem, op_or_ops, inp: PacketSequence,
                           mode: str = "interleaved") -> CheckReport:
    """Worst-case delay through the system is unchanged by the minimal regulator(s)."""
    if mode not in ("interleaved", "per-flow"):
        raise ValueError(f"unknown mode {mode!r}")
    name = f"shaping-for-free[{mode}]"
    ops = _as_ops(op_or_ops, inp)
    hit = regularity_violation(ops, inp)
    if hit is not None:
        n, date, bound = hit
        return CheckReport(name, False, {"n": n, "lhs": date, "rhs": bound},
                           "input is not regular", precondition_failed=True)
    out = system.apply(inp)
    if mode == "interleaved":
        shaped = minimal_interleaved_regulate(ops, out)
        before, after = worst_case_delay(inp, out), worst_case_delay(inp, shaped)
        values = {"system": before, "combined": after}
        if before != after:
            n = max(range(1, len(inp) + 1), key=lambda k: shaped.dates[k - 1] - inp.dates[k - 1])
            return CheckReport(name, False, {"n": n, "lhs": after, "rhs": before},
                               "sup delay changed", values=values)
        return CheckReport(name, True, detail=f"d={_render(before)}", values=values)
    before = per_flow_worst_case_delay(inp, out)
    after = {}
    for f in inp.flow_ids():
        view = out.flow_view(f)
        shaped = minimal_regulate(ops[f], view.sequence())
        delays = [e - inp.dates[n - 1] for n, e in zip(view.index_map, shaped.dates)]
        after[f] = max(delays)
        if after[f] != before[f]:
            n = view.index_map[delays.index(after[f])]
            return CheckReport(name, False, {"n": n, "lhs": after[f], "rhs": before[f]},
                               f"sup delay of flow {f} changed",
                               values={"system": before, "combined": after})
    detail = " ".join(f"d{f}={_render(v)}" for f, v in sorted(before.items()))
    return CheckReport(name, True, detail=detail, values={"system": before, "combined": after})


def check_dominance(ops: Mapping[int, RegulationOperator], seq: PacketSequence) -> CheckReport:
    """Interleaved output is never earlier than the per-flow bank output."""
    inter = minimal_interleaved_regulate(ops, seq)
    bank = per_flow_bank(ops, seq)
    strict = []
    for n, (e, e_bank) in enumerate(zip(inter.dates, bank.dates), start=1):
        if e < e_bank:
            return CheckReport("dominance", False, {"n": n, "lhs": e, "rhs": e_bank},
                               "interleaved released before the per-flow bank")
        if e > e_bank:
            strict.append(n)
    detail = "strict at " + ",".join(map(str, strict)) if strict else "equal everywhere"
    return CheckReport("dominance", True, detail=detail, values={"strict": strict})


# -- C2/C3/C4 -------------------------------------------------------------------------

def c_conditions_violation(op: RegulationOperator, seq: PacketSequence, rng: random.Random,
                           trials: int = 20):
    """Randomised falsification of causality, homogeneity and isotonicity.

    Returns ``(condition, n, lhs, rhs)`` or None.  Cannot prove the
    conditions; only catches operators that break them on this trace.
    """
    dates, lengths = list(seq.dates), list(seq.lengths)
    size = len(seq)
    base = [op.evaluate(dates, lengths, n) for n in range(1, size + 1)]
    for _ in range(trials):
        shift = Fraction(rng.randint(-20, 20), rng.randint(1, 4))
        shifted = [d + shift for d in dates]
        for n in range(2, size + 1):
            got = op.evaluate(shifted, lengths, n)
            if got != base[n - 1] + shift:
                return "C3", n, got, base[n - 1] + shift
        bigger = []
        for d in dates:
            d2 = d + Fraction(rng.randint(0, 8), rng.randint(1, 4))
            bigger.append(max(bigger[-1], d2) if bigger else d2)
        for n in range(1, size + 1):
            got = op.evaluate(bigger, lengths, n)
            if got < base[n - 1]:
                return "C4", n, got, base[n - 1]
        for n in range(1, size + 1):
            d2 = dates[: n - 1] + [Fraction(rng.randint(-50, 50), 3) for _ in dates[n - 1:]]
            l2 = lengths[:n] + [rng.randint(1, 9) for _ in lengths[n:]]
            got = op.evaluate(d2, l2, n)
            if got != base[n - 1]:
                return "C2", n, got, base[n - 1]
    return None


def check_c_conditions(op: RegulationOperator, seq: PacketSequence, seed: int = 0,
                       trials: int = 20) -> CheckReport:
    hit = c_conditions_violation(op, seq, random.Random(seed), trials)
    if hit is None:
        return CheckReport("c-conditions", True, detail=f"{trials} perturbations")
    cond, n, lhs, rhs = hit
    return CheckReport("c-conditions", False, {"n": n, "lhs": lhs, "rhs": rhs}, f"{cond} violated")


# -- non-equivalence witness ------------------------------------------------------------

def find_non_equivalence_witness(sigmas, max_packets: int = 3, max_length: int = 3, max_date: int = 3,
                                 small_packets: bool = False):
    """Smallest trace (by exhaustive search) that satisfies the g-style
    condition ``L_m + ... + L_{n-1} <= sigma(A_n - A_m)`` but violates the
    arrival curve constraint.  Returns ``(seq, sigma)`` or None.

    With ``small_packets`` every length must fit in ``sigma+(0)``, which
    rules out the trivial witness of a single oversized packet.
    """
    for size in range(1, max_packets + 1):
        for dates in itertools.combinations_with_replacement(range(max_date + 1), size):
            for lengths in itertools.product(range(1, max_length + 1), repeat=size):
                seq = PacketSequence.single(dates, lengths)
                for sigma in sigmas:
                    if small_packets and max(lengths) > sigma.right_limit(0):
                        continue
                    if excludes_current_length_holds(seq, sigma) and arrival_curve_violation(seq, sigma):
                        return seq, sigma
    return None


__all__ = [
    "CheckReport",
    "c_conditions_violation",
    "check_c_conditions",
    "check_dominance",
    "check_minimality",
    "check_regularity",
    "check_shaping_for_free",
    "check_theorem1",
    "condition2_violation",
    "condition3_violation",
    "dual_condition2_violation",
    "dual_condition3_violation",
    "excludes_current_length_holds",
    "find_non_equivalence_witness",
    "regularity_violation",
    "slack_candidate",
    "theorem1_verdicts",
    "tightness_violation",
]

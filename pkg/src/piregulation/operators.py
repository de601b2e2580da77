"""Regulation operators and regularity checks.

Every operator here is max-plus linear: its value at packet ``n`` is
``max over m < n of A_m + H(m, n, L)``.  Indices are 1-based.  The value
at ``n`` only reads ``dates[:n-1]`` and ``lengths[:n]``; callers may pass
longer prefixes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .curves import Curve, DomainError
from .rational import NEG_INF, ExtRat, ceil, fmt, rat
from .traces import PacketSequence, cumulative_at


class PrefixError(ValueError):
    """The supplied prefix is too short to evaluate the operator."""


def _check_prefix(dates: Sequence, lengths: Sequence, n: int) -> None:
    if n < 1:
        raise PrefixError(f"packet index must be >= 1, got {n}")
    if len(dates) < n - 1 or len(lengths) < n:
        raise PrefixError(
            f"evaluation at n={n} needs {n - 1} dates and {n} lengths, "
            f"got {len(dates)} and {len(lengths)}"
        )


class RegulationOperator:
    """Base class.  Subclasses define :meth:`h`; most also override
    :meth:`evaluate` with a faster loop giving the same value."""

    def h(self, m: int, n: int, lengths: Sequence[int]) -> ExtRat:
        raise NotImplementedError

    def evaluate(self, dates: Sequence, lengths: Sequence[int], n: int) -> ExtRat:
        return max_plus_evaluate(self, dates, lengths, n)

    def h_coefficient(self, m: int, n: int, lengths: Sequence[int]) -> ExtRat:
        if not 1 <= m < n:
            raise ValueError(f"H(m, n) needs 1 <= m < n, got m={m}, n={n}")
        if len(lengths) < n:
            raise PrefixError(f"H(m, {n}) needs {n} lengths")
        return self.h(m, n, lengths)


def max_plus_evaluate(op: RegulationOperator, dates, lengths, n: int) -> ExtRat:
    """Generic ``max_m dates[m] + H(m, n)``; the reference every
    specialised ``evaluate`` must agree with."""
    _check_prefix(dates, lengths, n)
    best: ExtRat = NEG_INF
    for m in range(1, n):
        coeff = op.h(m, n, lengths)
        if coeff == NEG_INF:
            continue
        best = max(best, dates[m - 1] + coeff)
    return best


def evaluate(op: RegulationOperator, dates, lengths, n: int) -> ExtRat:
    return op.evaluate(dates, lengths, n)


def h_coefficient(op: RegulationOperator, m: int, n: int, lengths) -> ExtRat:
    return op.h_coefficient(m, n, lengths)


def _suffix_max(dates, lengths, n, coeff_of_sum, include_current: bool) -> ExtRat:
    """max over m of dates[m] + coeff(L_m + ... + L_{n-1} [+ L_n])."""
    _check_prefix(dates, lengths, n)
    total = lengths[n - 1] if include_current else 0
    best: ExtRat = NEG_INF
    for m in range(n - 1, 0, -1):
        total += lengths[m - 1]
        best = max(best, dates[m - 1] + coeff_of_sum(total))
    return best


@dataclass(frozen=True)
class MaxPlusLinear(RegulationOperator):
    """User supplied ``H(m, n, lengths)``; C1-C4 are assumed, not checked."""

    table: Callable[[int, int, Sequence[int]], ExtRat]
    name: str = "custom"

    def h(self, m, n, lengths):
        return self.table(m, n, lengths)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class GRegulation(RegulationOperator):
    g: Curve

    def __post_init__(self):
        if self.g(0) != 0:
            raise ValueError("g-regulation requires g(0) = 0")

    def h(self, m, n, lengths):
        return self.g(sum(lengths[m - 1:n - 1]))

    def evaluate(self, dates, lengths, n):
        return _suffix_max(dates, lengths, n, self.g, include_current=False)

    def __str__(self):
        return f"g {self.g}"


@dataclass(frozen=True)
class ArrivalCurve(RegulationOperator):
    sigma: Curve
    _inverse: Curve = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_inverse", self.sigma.lower_pseudo_inverse())

    @property
    def sigma_lower_inverse(self) -> Curve:
        return self._inverse

    def h(self, m, n, lengths):
        return self._inverse(sum(lengths[m - 1:n]))

    def evaluate(self, dates, lengths, n):
        return _suffix_max(dates, lengths, n, self._inverse, include_current=True)

    def __str__(self):
        return f"ac {self.sigma}"


@dataclass(frozen=True)
class LRQ(RegulationOperator):
    """Length rate quotient: ``A_n >= A_{n-1} + L_{n-1}/rate``."""

    rate: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rate", rat(self.rate))
        if self.rate <= 0:
            raise ValueError("LRQ rate must be > 0")

    def h(self, m, n, lengths):
        return lengths[n - 2] / self.rate if m == n - 1 else NEG_INF

    def evaluate(self, dates, lengths, n):
        _check_prefix(dates, lengths, n)
        if n == 1:
            return NEG_INF
        return dates[n - 2] + lengths[n - 2] / self.rate

    def __str__(self):
        return f"lrq {fmt(self.rate)}"


@dataclass(frozen=True)
class LeakyBucket(RegulationOperator):
    rate: Fraction
    burst: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rate", rat(self.rate))
        object.__setattr__(self, "burst", rat(self.burst))
        if self.rate <= 0 or self.burst <= 0:
            raise ValueError("leaky bucket needs rate > 0 and burst > 0")

    def h(self, m, n, lengths):
        return (sum(lengths[m - 1:n]) - self.burst) / self.rate

    def evaluate(self, dates, lengths, n):
        r, b = self.rate, self.burst
        return _suffix_max(dates, lengths, n, lambda s: (s - b) / r, include_current=True)

    def __str__(self):
        return f"lb {fmt(self.rate)} {fmt(self.burst)}"


@dataclass(frozen=True)
class Staircase(RegulationOperator):
    """At most ``b`` data units in any window of duration ``tau``."""

    tau: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "tau", rat(self.tau))
        object.__setattr__(self, "b", rat(self.b))
        if self.tau <= 0 or self.b <= 0:
            raise ValueError("staircase needs tau > 0 and b > 0")

    def _coeff(self, total):
        return self.tau * ceil((total - self.b) / self.b)

    def h(self, m, n, lengths):
        return self._coeff(sum(lengths[m - 1:n]))

    def evaluate(self, dates, lengths, n):
        return _suffix_max(dates, lengths, n, self._coeff, include_current=True)

    def __str__(self):
        return f"sc {fmt(self.tau)} {fmt(self.b)}"


@dataclass(frozen=True)
class TsnPacketRate(RegulationOperator):
    """At most ``K`` packets in any window of duration ``tau``."""

    tau: Fraction
    K: int

    def __post_init__(self):
        object.__setattr__(self, "tau", rat(self.tau))
        if self.tau < 0 or not isinstance(self.K, int) or self.K < 1:
            raise ValueError("TSN packet rate needs tau >= 0 and integer K >= 1")

    def h(self, m, n, lengths):
        return self.tau * ceil(Fraction(n - m + 1 - self.K, self.K))

    def evaluate(self, dates, lengths, n):
        _check_prefix(dates, lengths, n)
        best: ExtRat = NEG_INF
        for m in range(1, n):
            best = max(best, dates[m - 1] + self.h(m, n, lengths))
        return best

    def __str__(self):
        return f"tsn {fmt(self.tau)} {self.K}"


@dataclass(frozen=True)
class PacketSpacing(RegulationOperator):
    tau: Fraction

    def __post_init__(self):
        object.__setattr__(self, "tau", rat(self.tau))
        if self.tau < 0:
            raise ValueError("packet spacing needs tau >= 0")

    def h(self, m, n, lengths):
        return self.tau if m == n - 1 else NEG_INF

    def evaluate(self, dates, lengths, n):
        _check_prefix(dates, lengths, n)
        if n == 1:
            return NEG_INF
        return dates[n - 2] + self.tau

    def __str__(self):
        return f"ps {fmt(self.tau)}"


@dataclass(frozen=True)
class PacketBurstiness(RegulationOperator):
    """At most ``rho*t + K`` packets in any interval of duration ``t``."""

    rho: Fraction
    K: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rho", rat(self.rho))
        object.__setattr__(self, "K", rat(self.K))
        if self.rho <= 0 or self.K <= 0:
            raise ValueError("packet burstiness needs rho > 0 and K > 0")

    def h(self, m, n, lengths):
        return (n - m + 1 - self.K) / self.rho

    def evaluate(self, dates, lengths, n):
        _check_prefix(dates, lengths, n)
        best: ExtRat = NEG_INF
        for m in range(1, n):
            best = max(best, dates[m - 1] + (n - m + 1 - self.K) / self.rho)
        return best

    def __str__(self):
        return f"pb {fmt(self.rho)} {fmt(self.K)}"


def jiang_lambda_nu(lam, nu) -> PacketBurstiness:
    """Jiang's (lambda, nu) constraint, which is PB(lambda, nu + 1)."""
    nu = rat(nu)
    if nu < 0:
        raise ValueError("nu must be >= 0")
    return PacketBurstiness(rat(lam), nu + 1)


@dataclass(frozen=True)
class MaxOf(RegulationOperator):
    """Both constraints at once."""

    left: RegulationOperator
    right: RegulationOperator

    def h(self, m, n, lengths):
        return max(self.left.h(m, n, lengths), self.right.h(m, n, lengths))

    def evaluate(self, dates, lengths, n):
        return max(self.left.evaluate(dates, lengths, n), self.right.evaluate(dates, lengths, n))

    def __str__(self):
        return f"max({self.left}, {self.right})"


# -- regularity ---------------------------------------------------------------

def _single_flow(seq: PacketSequence) -> None:
    if not seq.is_single_flow:
        raise ValueError("expected a single-flow sequence; use flows_regular for several flows")


def first_violation(op: RegulationOperator, seq: PacketSequence):
    """``(n, date, bound)`` for the first packet with ``A_n < Pi(A, L)_n``, or None."""
    _single_flow(seq)
    dates, lengths = seq.dates, seq.lengths
    for n in range(2, len(seq) + 1):
        bound = op.evaluate(dates, lengths, n)
        if dates[n - 1] < bound:
            return n, dates[n - 1], bound
    return None


def is_regular(op: RegulationOperator, seq: PacketSequence) -> bool:
    return first_violation(op, seq) is None


def flows_regular(ops, seq: PacketSequence) -> bool:
    """Every flow of a multi-flow sequence is regular for its own operator."""
    return all(is_regular(ops[f], seq.restrict(f)) for f in seq.flow_ids())


# -- arrival curve oracle ------------------------------------------------------

def arrival_curve_violation(seq: PacketSequence, sigma: Curve):
    """Search for ``0 <= s <= t`` with ``R(t) - R(s) > sigma(t - s)``.

    ``R`` only changes at packet dates and is left-continuous, so it is
    enough to place ``s`` and ``t`` at dates (or just after them) and to
    compare with the matching one-sided limit of ``sigma``.  Returns
    ``(s, t, lhs, rhs)`` with ``"+"`` marking a right-approach, or None.
    """
    _single_flow(seq)
    for d in seq.dates:
        if d < 0:
            raise DomainError("arrival curve check needs dates >= 0")
    points = sorted(set(seq.dates) | {Fraction(0)})
    before = {u: cumulative_at(seq, u) for u in points}
    upto = {u: before[u] + sum(l for d, l in zip(seq.dates, seq.lengths) if d == u) for u in points}
    for i, u in enumerate(points):
        for v in points[i:]:
            gap = v - u
            candidates = [
                (u, f"{fmt(v)}+", upto[v] - before[u], sigma.right_limit(gap)),
                (u, v, before[v] - before[u], sigma(gap)),
                (f"{fmt(u)}+", f"{fmt(v)}+", upto[v] - upto[u], sigma(gap)),
            ]
            if gap > 0:
                candidates.append((f"{fmt(u)}+", v, before[v] - upto[u], sigma.left_limit(gap)))
            for s, t, lhs, rhs in candidates:
                if lhs > rhs:
                    return s, t, lhs, rhs
    return None


def arrival_curve_check(seq: PacketSequence, sigma: Curve) -> bool:
    """``R(t) - R(s) <= sigma(t - s)`` for all ``0 <= s <= t``."""
    return arrival_curve_violation(seq, sigma) is None


__all__ = [
    "LRQ",
    "ArrivalCurve",
    "GRegulation",
    "LeakyBucket",
    "MaxOf",
    "MaxPlusLinear",
    "PacketBurstiness",
    "PacketSpacing",
    "PrefixError",
    "RegulationOperator",
    "Staircase",
    "TsnPacketRate",
    "arrival_curve_check",
    "arrival_curve_violation",
    "evaluate",
    "first_violation",
    "flows_regular",
    "h_coefficient",
    "is_regular",
    "jiang_lambda_nu",
    "max_plus_evaluate",
]

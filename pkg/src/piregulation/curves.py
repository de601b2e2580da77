"""Wide-sense increasing curves on [0, inf) and their pseudo-inverses.

A :class:`Curve` is piecewise affine with jumps.  Each :class:`Piece`
stores the value *at* its abscissa, the right limit there, and the slope
of the open segment up to the next abscissa; left limits are implied by
the previous segment.  A curve either ends with an affine ray or is
ultimately pseudo-periodic: from ``periodic_start`` on,
``f(t + period) = f(t) + increment``.  That second form is what makes
staircases (and the pseudo-inverses of staircases) representable exactly.

Pseudo-inverses are computed symbolically on the completed graph of the
curve (jumps filled in with vertical segments): swapping the axes turns
jumps into plateaus and plateaus into jumps.  The lower inverse takes the
bottom of each resulting jump, the upper inverse the top.
"""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .rational import POS_INF, ExtRat, ext, floor, fmt, is_finite, rat


class DomainError(ValueError):
    """Raised when a curve is queried outside of its domain."""


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


LEFT = Side.LEFT
RIGHT = Side.RIGHT


@dataclass(frozen=True)
class Piece:
    x: Fraction
    value: ExtRat
    right: ExtRat
    slope: Fraction = Fraction(0)

    def at(self, t: Fraction) -> ExtRat:
        """Value on the open segment that starts at ``x``."""
        if t == self.x:
            return self.value
        return self.right + self.slope * (t - self.x)

    def shifted(self, dx: Fraction, dy: Fraction) -> "Piece":
        return Piece(self.x + dx, self.value + dy, self.right + dy, self.slope)


@dataclass(frozen=True, init=False)
class Curve:
    pieces: tuple[Piece, ...]
    periodic_start: Fraction | None = None
    period: Fraction | None = None
    increment: Fraction | None = None

    def __init__(self, pieces: Iterable[Piece], periodic_start=None, period=None, increment=None):
        pieces = tuple(
            Piece(rat(p.x), ext(p.value), ext(p.right), rat(p.slope)) for p in pieces
        )
        if periodic_start is not None:
            periodic_start, period, increment = rat(periodic_start), rat(period), rat(increment)
        pieces, periodic_start, period, increment = _canonical(
            pieces, periodic_start, period, increment
        )
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "periodic_start", periodic_start)
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "increment", increment)
        object.__setattr__(self, "_xs", tuple(p.x for p in pieces))

    # -- constructors -----------------------------------------------------

    @classmethod
    def affine(cls, rate, burst) -> "Curve":
        """Leaky-bucket curve: ``rate*t + burst`` for t > 0 and 0 at t = 0."""
        rate, burst = rat(rate), rat(burst)
        if rate < 0 or burst < 0:
            raise ValueError("affine curve needs rate >= 0 and burst >= 0")
        return cls([Piece(Fraction(0), Fraction(0), burst, rate)])

    @classmethod
    def staircase(cls, tau, b) -> "Curve":
        """``b * ceil(t / tau)``: at most ``b`` units per window of ``tau``."""
        tau, b = rat(tau), rat(b)
        if tau <= 0 or b <= 0:
            raise ValueError("staircase needs tau > 0 and b > 0")
        return cls([Piece(Fraction(0), Fraction(0), b, Fraction(0))], 0, tau, b)

    @classmethod
    def identity(cls) -> "Curve":
        return cls([Piece(Fraction(0), Fraction(0), Fraction(0), Fraction(1))])

    @classmethod
    def linear(cls, rate) -> "Curve":
        return cls.affine(rate, 0)

    @classmethod
    def from_points(cls, points: Sequence[tuple], periodic: tuple | None = None) -> "Curve":
        """Build from ``(x, y_left, y, slope)`` tuples.

        The right limit at each abscissa is recovered from the next
        tuple's left value (the last one is right-continuous).  A 5-tuple
        ``(x, y_left, y, y_right, slope)`` states the right limit instead.
        ``y_left`` of the first tuple is ignored.  ``periodic`` is an
        optional ``(start, period, increment)`` triple.
        """
        if not points:
            raise ValueError("a curve needs at least one point")
        rows = []
        for row in points:
            if len(row) == 4:
                x, yl, y, s = row
                yr = None
            elif len(row) == 5:
                x, yl, y, yr, s = row
                yr = ext(yr)
            else:
                raise ValueError(f"curve point needs 4 or 5 fields, got {len(row)}")
            rows.append((rat(x), ext(yl), ext(y), yr, rat(s)))
        pieces = []
        for i, (x, _, y, yr, s) in enumerate(rows):
            if yr is not None:
                right = yr
            elif i + 1 < len(rows):
                nx, nyl = rows[i + 1][0], rows[i + 1][1]
                right = nyl - s * (nx - x) if is_finite(nyl) else nyl
            else:
                right = y
            pieces.append(Piece(x, y, right, s))
        if periodic is None:
            return cls(pieces)
        return cls(pieces, *periodic)

    def __str__(self) -> str:
        """Config-file literal for this curve."""
        first = self.pieces[0]
        if len(self.pieces) == 1 and first.value == 0 and first.right != POS_INF:
            if self.period is None:
                return f"affine {fmt(first.slope)} {fmt(first.right)}"
            if first.slope == 0 and first.right == self.increment and self.periodic_start == 0:
                return f"staircase {fmt(self.period)} {fmt(self.increment)}"
        rows = []
        for i, p in enumerate(self.pieces):
            left = p.value if i == 0 else self._end_left(i - 1)
            if i + 1 < len(self.pieces) and self.pieces[i + 1].value != POS_INF or p.right == p.value:
                rows.append(f"({fmt(p.x)}, {fmt(left)}, {fmt(p.value)}, {fmt(p.slope)})")
            else:
                rows.append(
                    f"({fmt(p.x)}, {fmt(left)}, {fmt(p.value)}, {fmt(p.right)}, {fmt(p.slope)})"
                )
        text = "points [" + ", ".join(rows) + "]"
        if self.period is not None:
            text += f" periodic {fmt(self.periodic_start)} {fmt(self.period)} {fmt(self.increment)}"
        return text

    # -- evaluation -------------------------------------------------------

    @property
    def is_periodic(self) -> bool:
        return self.period is not None

    def _reduce(self, t: Fraction) -> tuple[int, Fraction]:
        if self.period is None or t < self.periodic_start + self.period:
            return 0, t
        k = floor((t - self.periodic_start) / self.period)
        return k, t - k * self.period

    def _locate(self, u: Fraction) -> int:
        return bisect.bisect_right(self._xs, u) - 1

    def _end_left(self, i: int) -> ExtRat:
        """Left limit at the end of segment ``i``."""
        p = self.pieces[i]
        if i + 1 < len(self.pieces):
            nx = self.pieces[i + 1].x
        elif self.period is not None:
            nx = self.periodic_start + self.period
        else:
            raise IndexError("last segment of an aperiodic curve has no end")
        return p.right + p.slope * (nx - p.x)

    def __call__(self, t) -> ExtRat:
        t = rat(t)
        if t < 0:
            raise DomainError(f"curve evaluated at negative time {t}")
        k, u = self._reduce(t)
        v = self.pieces[self._locate(u)].at(u)
        return v + k * self.increment if k else v

    def right_limit(self, t) -> ExtRat:
        t = rat(t)
        if t < 0:
            raise DomainError(f"right limit at negative time {t}")
        k, u = self._reduce(t)
        p = self.pieces[self._locate(u)]
        v = p.right if u == p.x else p.at(u)
        return v + k * self.increment if k else v

    def left_limit(self, t) -> ExtRat:
        t = rat(t)
        if t <= 0:
            raise DomainError("left limit needs t > 0")
        k, u = self._reduce(t)
        if k and u == self.periodic_start:
            return self._end_left(len(self.pieces) - 1) + (k - 1) * self.increment
        i = self._locate(u)
        p = self.pieces[i]
        v = self._end_left(i - 1) if u == p.x else p.at(u)
        return v + k * self.increment if k else v

    def one_sided_limit(self, t, side: Side) -> ExtRat:
        return self.left_limit(t) if side is Side.LEFT else self.right_limit(t)

    def breakpoints(self, upto) -> list[Fraction]:
        """All abscissae of jumps/kinks in ``[0, upto]``."""
        upto = rat(upto)
        out = [x for x in self._xs if x <= upto]
        if self.period is None:
            return out
        motif = [x for x in self._xs if x >= self.periodic_start]
        k = 1
        while self.periodic_start + k * self.period <= upto:
            out.extend(x + k * self.period for x in motif if x + k * self.period <= upto)
            k += 1
        return out

    def horizon(self) -> Fraction:
        """An abscissa past which the curve shape holds no new features."""
        last = self._xs[-1]
        if self.period is not None:
            return self.periodic_start + 2 * self.period
        return last + 1

    # -- derived curves ---------------------------------------------------

    def _expanded(self, copies: int) -> tuple[list[Piece], Fraction | None]:
        """Aperiodic pieces covering ``[0, periodic_start + copies*period)``."""
        if self.period is None:
            return list(self.pieces), None
        out = list(self.pieces)
        motif = [p for p in self.pieces if p.x >= self.periodic_start]
        for k in range(1, copies):
            out.extend(p.shifted(k * self.period, k * self.increment) for p in motif)
        return out, self.periodic_start + copies * self.period

    def unrolled(self) -> "Curve":
        """Same function, with the periodic part declared one period later."""
        if self.period is None:
            return self
        pieces, _ = self._expanded(2)
        return Curve(pieces, self.periodic_start + self.period, self.period, self.increment)

    def right_continuous(self) -> "Curve":
        """The curve ``f+``."""
        return Curve(
            [Piece(p.x, p.right, p.right, p.slope) for p in self.pieces],
            self.periodic_start, self.period, self.increment,
        )

    def left_continuous(self) -> "Curve":
        """The curve ``f-``, with ``f-(0) = 0`` (bottom of the codomain)."""
        base = self.unrolled()
        pieces = [Piece(Fraction(0), Fraction(0), base.pieces[0].right, base.pieces[0].slope)]
        for i in range(1, len(base.pieces)):
            p = base.pieces[i]
            left = base._end_left(i - 1)
            pieces.append(Piece(p.x, left, p.right, p.slope))
        return Curve(pieces, base.periodic_start, base.period, base.increment)

    def lower_pseudo_inverse(self) -> "Curve":
        """``x -> inf{s >= 0 : f(s) >= x}``."""
        return _pseudo_inverse(self, lower=True)

    def upper_pseudo_inverse(self) -> "Curve":
        """``x -> sup{s >= 0 : f(s) <= x}`` (0 when the set is empty)."""
        return _pseudo_inverse(self, lower=False)


def eval_curve(c: Curve, t) -> ExtRat:
    return c(t)


def one_sided_limit(c: Curve, t, side: Side) -> ExtRat:
    return c.one_sided_limit(t, side)


def lower_pseudo_inverse(c: Curve) -> Curve:
    return c.lower_pseudo_inverse()


def upper_pseudo_inverse(c: Curve) -> Curve:
    return c.upper_pseudo_inverse()


def _canonical(pieces, ps, period, inc):
    if not pieces:
        raise ValueError("a curve needs at least one piece")
    if pieces[0].x != 0:
        raise ValueError("first abscissa must be 0")
    for a, b in zip(pieces, pieces[1:]):
        if b.x <= a.x:
            raise ValueError("abscissae must be strictly increasing")
    # everything after the first infinite value is irrelevant
    for i, p in enumerate(pieces):
        if p.value == POS_INF or p.right == POS_INF:
            pieces = pieces[:i] + (Piece(p.x, p.value, POS_INF, Fraction(0)),)
            ps = period = inc = None
            break
    for i, p in enumerate(pieces):
        if not (isinstance(p.value, Fraction) or p.value == POS_INF):
            raise ValueError("curve values must be finite rationals or +inf")
        if p.value < 0:
            raise ValueError("curve values must be nonnegative")
        if p.slope < 0:
            raise ValueError("slopes must be nonnegative")
        if p.right < p.value:
            raise ValueError(f"right limit below value at x={p.x}")
        if i > 0:
            prev = pieces[i - 1]
            left = prev.right + prev.slope * (p.x - prev.x)
            if left > p.value:
                raise ValueError(f"curve decreases at x={p.x}")
    if ps is None:
        if period is not None or inc is not None:
            raise ValueError("period and increment need a periodic start")
        return pieces, None, None, None
    if period <= 0 or inc < 0:
        raise ValueError("period must be > 0 and increment >= 0")
    xs = [p.x for p in pieces]
    if ps not in xs:
        raise ValueError("periodic start must be a breakpoint")
    if xs[-1] >= ps + period:
        raise ValueError("pieces extend past the first period")
    last = pieces[-1]
    end_left = last.right + last.slope * (ps + period - last.x)
    start = pieces[xs.index(ps)]
    if end_left > start.value + inc:
        raise ValueError("curve decreases at the period boundary")
    if inc == 0:
        # constant from the periodic start on
        i = xs.index(ps)
        pieces = pieces[:i] + (Piece(start.x, start.value, start.value, Fraction(0)),)
        return pieces, None, None, None
    return pieces, ps, period, inc


def _pseudo_inverse(c: Curve, lower: bool) -> Curve:
    pieces, end = c._expanded(2)
    # vertices of the completed graph, as (t, y)
    verts: list[tuple[Fraction, ExtRat]] = [(Fraction(0), Fraction(0))]
    tail_slope = None
    for i, p in enumerate(pieces):
        if i > 0:
            q = pieces[i - 1]
            verts.append((p.x, q.right + q.slope * (p.x - q.x)))
        verts.append((p.x, p.value))
        verts.append((p.x, p.right))
        if p.right == POS_INF:
            tail_slope = Fraction(0)
            break
    else:
        last = pieces[-1]
        if end is None:
            if last.slope == 0:
                verts.append((POS_INF, last.right))
                tail_slope = Fraction(0)
            else:
                tail_slope = 1 / last.slope
        else:
            verts.append((end, last.right + last.slope * (end - last.x)))
            verts.append((end, c.pieces[c._xs.index(c.periodic_start)].value + 2 * c.increment))

    groups: list[list] = []  # [y, tmin, tmax]
    for t, y in verts:
        if y == POS_INF:
            continue
        if groups and groups[-1][0] == y:
            groups[-1][2] = t
        else:
            groups.append([y, t, t])

    if end is not None:
        y_start = c.pieces[c._xs.index(c.periodic_start)].value + c.increment
        keep = [g for g in groups if g[0] < y_start + c.increment]
    else:
        keep = groups

    out = []
    for j, (y, tmin, tmax) in enumerate(keep):
        value = tmin if lower else tmax
        if tmax == POS_INF:
            out.append(Piece(y, value, POS_INF, Fraction(0)))
            break
        if j + 1 < len(groups):
            ny, ntmin, _ = groups[j + 1]
            slope = (ntmin - tmax) / (ny - y)
        else:
            slope = tail_slope
        out.append(Piece(y, value, tmax, slope))

    out = _simplify(out, y_start if end is not None else None)
    if end is not None:
        return Curve(out, y_start, c.increment, c.period)
    return Curve(out)


def _simplify(pieces: list[Piece], keep_x) -> list[Piece]:
    """Drop breakpoints where nothing happens."""
    out = [pieces[0]]
    for p in pieces[1:]:
        q = out[-1]
        if (
            p.x != keep_x
            and q.right != POS_INF
            and p.slope == q.slope
            and p.value == p.right == q.right + q.slope * (p.x - q.x)
        ):
            continue
        out.append(p)
    return out

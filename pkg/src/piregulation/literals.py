"""Parsers for the config-file literals: curves, operators, systems, stages.

Grammar (whitespace-insensitive)::

    curve   := affine R R | staircase R R | identity | linear R
             | points [ (V, V, V[, V], R), ... ] [periodic R R R]
    op      := lrq R | lb R R | sc R R | tsn R INT | ps R | pb R R
             | lambda-nu R R | g curve | ac curve | max(op, op)
    system  := identity | damper R | pserver R [R,R]* | jitter INT R
    binding := { INT: op, ... }
    stage   := system | regulator op | interleaved binding | bank binding

``R`` is ``p`` or ``p/q``; ``V`` is ``R`` or ``inf``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .curves import Curve
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
from .rational import POS_INF, parse_rat
from .systems import BoundedJitterRandom, Damper, FifoSystem, Identity, PreemptiveServer


class LiteralError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:([+-]?\d+(?:/\d+)?)|([A-Za-z][A-Za-z0-9_-]*)|([()\[\]{},:]))")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str]] = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                raise LiteralError(f"unexpected character {text[pos:].strip()[:1]!r} in {self.text!r}")
            num, word, punct = m.groups()
            if num is not None:
                self.items.append(("num", num))
            elif word is not None:
                self.items.append(("word", word.lower()))
            else:
                self.items.append(("punct", punct))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else (None, None)

    def next(self):
        tok = self.peek()
        if tok[0] is None:
            raise LiteralError(f"unexpected end of {self.text!r}")
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, got = self.next()
        if got != value:
            raise LiteralError(f"expected {value!r}, got {got!r} in {self.text!r}")

    def word(self) -> str:
        kind, got = self.next()
        if kind != "word":
            raise LiteralError(f"expected a keyword, got {got!r} in {self.text!r}")
        return got

    def rat(self):
        kind, got = self.next()
        if kind != "num":
            raise LiteralError(f"expected a number, got {got!r} in {self.text!r}")
        return parse_rat(got)

    def integer(self) -> int:
        value = self.rat()
        if value.denominator != 1:
            raise LiteralError(f"expected an integer, got {value} in {self.text!r}")
        return int(value)

    def value(self):
        kind, got = self.peek()
        if kind == "word" and got == "inf":
            self.i += 1
            return POS_INF
        return self.rat()

    def done(self) -> None:
        if self.i != len(self.items):
            raise LiteralError(f"trailing input {self.items[self.i][1]!r} in {self.text!r}")


def _parse(text: str, rule):
    toks = _Tokens(text)
    try:
        result = rule(toks)
    except LiteralError:
        raise
    except ValueError as exc:
        raise LiteralError(f"{exc} in {text!r}") from None
    toks.done()
    return result


def _curve(t: _Tokens) -> Curve:
    kind = t.word()
    if kind == "affine":
        return Curve.affine(t.rat(), t.rat())
    if kind == "staircase":
        return Curve.staircase(t.rat(), t.rat())
    if kind == "identity":
        return Curve.identity()
    if kind == "linear":
        return Curve.linear(t.rat())
    if kind == "points":
        t.expect("[")
        rows = []
        while True:
            t.expect("(")
            row = [t.value()]
            while t.peek() == ("punct", ","):
                t.next()
                row.append(t.value())
            t.expect(")")
            rows.append(tuple(row))
            if t.peek() == ("punct", ","):
                t.next()
                continue
            break
        t.expect("]")
        periodic = None
        if t.peek() == ("word", "periodic"):
            t.next()
            periodic = (t.rat(), t.rat(), t.rat())
        return Curve.from_points(rows, periodic)
    raise LiteralError(f"unknown curve kind {kind!r}")


def _op(t: _Tokens) -> RegulationOperator:
    kind = t.word()
    if kind == "lrq":
        return LRQ(t.rat())
    if kind == "lb":
        return LeakyBucket(t.rat(), t.rat())
    if kind == "sc":
        return Staircase(t.rat(), t.rat())
    if kind == "tsn":
        return TsnPacketRate(t.rat(), t.integer())
    if kind == "ps":
        return PacketSpacing(t.rat())
    if kind == "pb":
        return PacketBurstiness(t.rat(), t.rat())
    if kind == "lambda-nu":
        return jiang_lambda_nu(t.rat(), t.rat())
    if kind == "g":
        return GRegulation(_curve(t))
    if kind == "ac":
        return ArrivalCurve(_curve(t))
    if kind == "max":
        t.expect("(")
        left = _op(t)
        t.expect(",")
        right = _op(t)
        t.expect(")")
        return MaxOf(left, right)
    raise LiteralError(f"unknown operator kind {kind!r}")


def _system(t: _Tokens) -> FifoSystem:
    kind = t.word()
    if kind == "identity":
        return Identity()
    if kind == "damper":
        return Damper(t.rat())
    if kind == "pserver":
        rate = t.rat()
        windows = []
        while t.peek() == ("punct", "["):
            t.next()
            start = t.rat()
            t.expect(",")
            end = t.rat()
            t.expect("]")
            windows.append((start, end))
        return PreemptiveServer(rate, tuple(windows))
    if kind == "jitter":
        return BoundedJitterRandom(t.integer(), t.rat())
    raise LiteralError(f"unknown system kind {kind!r}")


def _bindings(t: _Tokens) -> dict[int, RegulationOperator]:
    t.expect("{")
    out: dict[int, RegulationOperator] = {}
    if t.peek() == ("punct", "}"):
        t.next()
        return out
    while True:
        flow = t.integer()
        t.expect(":")
        if flow in out:
            raise LiteralError(f"flow {flow} bound twice")
        out[flow] = _op(t)
        if t.peek() == ("punct", ","):
            t.next()
            continue
        t.expect("}")
        return out


def parse_curve(text: str) -> Curve:
    return _parse(text, _curve)


def parse_operator(text: str) -> RegulationOperator:
    return _parse(text, _op)


def parse_system(text: str) -> FifoSystem:
    return _parse(text, _system)


def parse_bindings(text: str) -> dict[int, RegulationOperator]:
    return _parse(text, _bindings)


def format_bindings(ops) -> str:
    return "{" + ", ".join(f"{f}: {op}" for f, op in sorted(ops.items())) + "}"


# -- pipeline config ---------------------------------------------------------

SYSTEM, REGULATOR, INTERLEAVED, BANK = "system", "per-flow-regulator", "interleaved-regulator", "bank"


@dataclass(frozen=True)
class Stage:
    kind: str
    system: FifoSystem | None = None
    op: RegulationOperator | None = None
    bindings: dict = field(default_factory=dict)

    def __str__(self):
        if self.kind == SYSTEM:
            return str(self.system)
        if self.kind == REGULATOR:
            return f"regulator {self.op}"
        word = "interleaved" if self.kind == INTERLEAVED else "bank"
        return f"{word} {format_bindings(self.bindings)}"


@dataclass(frozen=True)
class PipelineConfig:
    stages: tuple[Stage, ...]

    def __post_init__(self):
        if not self.stages:
            raise LiteralError("a pipeline needs at least one stage")
        for stage in self.stages[:-1]:
            if stage.kind == BANK:
                raise LiteralError("a bank of per-flow regulators must be the last stage")

    def format(self) -> str:
        return "".join(f"{s}\n" for s in self.stages)


def _stage(t: _Tokens) -> Stage:
    kind, word = t.peek()
    if word == "regulator":
        t.next()
        return Stage(REGULATOR, op=_op(t))
    if word == "interleaved":
        t.next()
        return Stage(INTERLEAVED, bindings=_bindings(t))
    if word == "bank":
        t.next()
        return Stage(BANK, bindings=_bindings(t))
    return Stage(SYSTEM, system=_system(t))


def parse_stage(text: str) -> Stage:
    return _parse(text, _stage)


def parse_config(text: str) -> PipelineConfig:
    stages = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            stages.append(parse_stage(line))
        except LiteralError as exc:
            raise LiteralError(f"line {lineno}: {exc}") from None
    return PipelineConfig(tuple(stages))

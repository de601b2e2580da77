import random
from fractions import Fraction as F

import pytest
from hypothesis import given

from conftest import seeds
from piregulation.curves import Curve
from piregulation.generators import random_operator, random_system
from piregulation.literals import (
    BANK,
    INTERLEAVED,
    REGULATOR,
    SYSTEM,
    LiteralError,
    parse_bindings,
    parse_config,
    parse_curve,
    parse_operator,
    parse_stage,
    parse_system,
)
from piregulation.operators import (
    LRQ,
    ArrivalCurve,
    GRegulation,
    LeakyBucket,
    MaxOf,
    PacketBurstiness,
    PacketSpacing,
    Staircase,
    TsnPacketRate,
)
from piregulation.rational import POS_INF
from piregulation.systems import BoundedJitterRandom, Damper, Identity, PreemptiveServer


@pytest.mark.parametrize(
    "text, expected",
    [
        ("lrq 3/2", LRQ(F(3, 2))),
        ("lb 1 2", LeakyBucket(1, 2)),
        ("sc 10 3", Staircase(10, 3)),
        ("tsn 4 2", TsnPacketRate(4, 2)),
        ("ps 5", PacketSpacing(5)),
        ("pb 1/2 3", PacketBurstiness(F(1, 2), 3)),
        ("lambda-nu 1/2 2", PacketBurstiness(F(1, 2), 3)),
        ("g linear 1/4", GRegulation(Curve.linear(F(1, 4)))),
        ("ac staircase 10 3", ArrivalCurve(Curve.staircase(10, 3))),
        ("max(lrq 1, max(ps 2, sc 3 4))", MaxOf(LRQ(1), MaxOf(PacketSpacing(2), Staircase(3, 4)))),
    ],
)
def test_operator_literals(text, expected):
    assert parse_operator(text) == expected
    assert parse_operator(str(expected)) == expected


def test_curve_literals():
    c = parse_curve("points [(0, 0, 0, 1), (2, 2, 5, 0)]")
    assert c(1) == 1 and c(2) == 5 and c(3) == 5
    c = parse_curve("points [(0, 0, 0, 1, 0), (1, 1, inf, 0)]")
    assert c(F(1, 2)) == 1 and c(1) == POS_INF
    c = parse_curve("points [(0, 0, 0, 0), (1, 0, 1, 0)] periodic 1 2 1")
    assert c(F(5, 2)) == 1 and c(3) == 2


@pytest.mark.parametrize(
    "text, expected",
    [
        ("identity", Identity()),
        ("damper 3", Damper(3)),
        ("pserver 1 [0,3] [10,13] [20,23]", PreemptiveServer(1, ((0, 3), (10, 13), (20, 23)))),
        ("pserver 2", PreemptiveServer(2)),
        ("jitter 7 5/2", BoundedJitterRandom(7, F(5, 2))),
    ],
)
def test_system_literals(text, expected):
    assert parse_system(text) == expected
    assert parse_system(str(expected)) == expected


@given(seeds)
def test_random_literal_round_trip(seed):
    rng = random.Random(seed)
    op = random_operator(rng)
    assert parse_operator(str(op)) == op
    system = random_system(rng)
    assert parse_system(str(system)) == system


def test_bindings_and_stages():
    ops = parse_bindings("{1: ps 5, 2: ps 10}")
    assert ops == {1: PacketSpacing(5), 2: PacketSpacing(10)}
    assert parse_bindings("{}") == {}
    assert parse_stage("regulator lrq 1").kind == REGULATOR
    assert parse_stage("interleaved {1: ps 5}").kind == INTERLEAVED
    assert parse_stage("bank {1: ps 5}").kind == BANK
    assert parse_stage("damper 1").kind == SYSTEM


def test_config_round_trip():
    text = "pserver 1 [0,3] [10,13] [20,23]\n# regulate\n\ninterleaved {1: ps 5, 2: ps 10}\n"
    config = parse_config(text)
    assert len(config.stages) == 2
    assert parse_config(config.format()) == config


@pytest.mark.parametrize(
    "text",
    [
        "lrq", "lrq 0", "lrq 1.5", "lrq 1 2", "nope 1", "max(lrq 1 ps 2)", "tsn 1 1/2",
        "g points [(0, 1, 1, 0)]", "ac points [(1, 0, 0, 0)]", "lb 1 0",
    ],
)
def test_operator_literal_errors(text):
    with pytest.raises(LiteralError):
        parse_operator(text)


@pytest.mark.parametrize(
    "text",
    ["{1: ps 5, 1: ps 6}", "{1 ps 5}", "{x: ps 5}", "{1: ps 5"],
)
def test_binding_errors(text):
    with pytest.raises(LiteralError):
        parse_bindings(text)


@pytest.mark.parametrize("text", ["", "# nothing\n", "bank {1: ps 1}\nidentity\n", "pserver 1 [0,3] [2,4]\n"])
def test_config_errors(text):
    with pytest.raises(LiteralError):
        parse_config(text)

"""Command line front end.

    piregulation regulate TRACE CONFIG -o OUT
    piregulation delays INPUT OUTPUT [--per-packet]
    piregulation check NAME [options]
    piregulation example [--golden FILE]

Exit codes: 0 success or pass, 1 check failure, 2 usage or parse error,
3 semantic error (missing flow binding, mismatched traces, a multi-flow
trace fed to a single-flow regulator stage).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import appendix
from .literals import (
    BANK,
    INTERLEAVED,
    REGULATOR,
    LiteralError,
    PipelineConfig,
    parse_bindings,
    parse_config,
    parse_curve,
    parse_operator,
    parse_system,
)
from .rational import fmt
from .regulators import MissingOperatorError, minimal_interleaved_regulate, minimal_regulate, per_flow_bank
from .systems import packet_delays, per_flow_worst_case_delay, worst_case_delay
from .traces import PacketSequence, TraceError, format_trace, parse_trace
from . import verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SEMANTIC = 0, 1, 2, 3

CHECKS = ("theorem1", "minimality", "shaping-for-free", "dominance", "regularity", "c-conditions")


class SemanticError(Exception):
    """Well-formed input that cannot be executed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


# -- pipeline -----------------------------------------------------------------------

def run_pipeline(config: PipelineConfig, seq: PacketSequence) -> PacketSequence:
    for stage in config.stages:
        if stage.kind == REGULATOR:
            if not seq.is_single_flow:
                raise SemanticError(
                    "per-flow regulator stage got a multi-flow trace; use 'interleaved' or 'bank'"
                )
            seq = minimal_regulate(stage.op, seq)
        elif stage.kind == INTERLEAVED:
            seq = minimal_interleaved_regulate(stage.bindings, seq)
        elif stage.kind == BANK:
            seq = per_flow_bank(stage.bindings, seq)
        else:
            seq = stage.system.apply(seq)
    return seq


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from None


def _trace(path: str, ordered: bool = True) -> PacketSequence:
    return parse_trace(_read(path), ordered=ordered)


# -- commands -------------------------------------------------------------------------

def cmd_regulate(args) -> int:
    seq = _trace(args.trace)
    config = parse_config(_read(args.config))
    out = run_pipeline(config, seq)
    text = format_trace(out)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return EXIT_OK


def delay_table(inp: PacketSequence, out: PacketSequence, per_packet: bool = False) -> str:
    try:
        per_flow = per_flow_worst_case_delay(inp, out)
        overall = worst_case_delay(inp, out)
        delays = packet_delays(inp, out)
    except ValueError as exc:
        raise SemanticError(str(exc)) from None
    lines = ["scope\tid\tdelay"]
    lines += [f"flow\t{f}\t{fmt(per_flow[f])}" for f in sorted(per_flow)]
    lines.append(f"overall\t-\t{fmt(overall)}")
    if per_packet:
        lines.append("")
        lines.append("packet\tflow\tarrival\tdeparture\tdelay")
        for n, (a, d, f, x) in enumerate(zip(inp.dates, out.dates, inp.flows, delays), start=1):
            lines.append(f"{n}\t{f}\t{fmt(a)}\t{fmt(d)}\t{fmt(x)}")
    return "\n".join(lines) + "\n"


def cmd_delays(args) -> int:
    inp = _trace(args.input)
    out = _trace(args.output, ordered=False)
    sys.stdout.write(delay_table(inp, out, args.per_packet))
    return EXIT_OK


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise _UsageError(f"check {args.name} needs --{name.replace('_', '-')}")


def _ops_arg(args):
    if args.ops is not None:
        return parse_bindings(args.ops)
    if args.op is not None:
        return parse_operator(args.op)
    raise _UsageError(f"check {args.name} needs --op or --ops")


def _require_bindings(ops, seq: PacketSequence):
    if isinstance(ops, dict):
        for f in seq.flow_ids():
            if f not in ops:
                raise MissingOperatorError(f)


def cmd_check(args) -> int:
    name = args.name
    if name not in CHECKS:
        raise _UsageError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
    _need(args, "trace")
    seq = _trace(args.trace)
    if name == "theorem1":
        _need(args, "sigma")
        if not seq.is_single_flow:
            raise SemanticError("theorem1 needs a single-flow trace")
        report = verify.check_theorem1(seq, parse_curve(args.sigma))
    elif name == "regularity":
        ops = _ops_arg(args)
        _require_bindings(ops, seq)
        report = verify.check_regularity(ops, seq)
    elif name == "minimality":
        _need(args, "candidate")
        ops = _ops_arg(args)
        _require_bindings(ops, seq)
        if not isinstance(ops, dict) and not seq.is_single_flow:
            raise SemanticError("a single operator needs a single-flow trace; use --ops")
        report = verify.check_minimality(ops, seq, _trace(args.candidate, ordered=False))
    elif name == "shaping-for-free":
        _need(args, "system")
        ops = _ops_arg(args)
        _require_bindings(ops, seq)
        report = verify.check_shaping_for_free(parse_system(args.system), ops, seq, args.mode)
    elif name == "dominance":
        _need(args, "ops")
        ops = parse_bindings(args.ops)
        _require_bindings(ops, seq)
        report = verify.check_dominance(ops, seq)
    else:
        _need(args, "op")
        op = parse_operator(args.op)
        report = verify.check_c_conditions(op, seq, seed=args.seed, trials=args.trials)
    print(report.format())
    return EXIT_OK if report.passed else EXIT_FAIL


def format_scenario(rows) -> str:
    return "".join(f"{key} {' '.join(fmt(v) for v in values)}\n" for key, values in rows)


def parse_scenario(text: str) -> list[tuple[str, tuple[str, ...]]]:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            key, *values = line.split()
            rows.append((key, tuple(values)))
    return rows


GOLDEN = """\
A 0 5 5 10 15 15 20 25 25
L 2 2 1 2 2 1 2 2 1
F 1 1 2 1 1 2 1 1 2
D 5 7 8 15 17 18 25 27 28
E 5 10 10 15 20 20 25 30 30
E' 5 10 8 15 20 18 25 30 28
d1 5
d2 3
d 5
d1_tot 5
d2_tot 5
d_tot 5
"""


def diff_scenario(got, expected):
    """First mismatch as ``(key, index, got, expected)``; index is 1-based."""
    got_map = dict(got)
    for key, values in expected:
        if key not in got_map:
            return key, 0, "missing", " ".join(values)
        mine = got_map[key]
        for i in range(max(len(mine), len(values))):
            a = mine[i] if i < len(mine) else "missing"
            b = values[i] if i < len(values) else "missing"
            if a != b:
                return key, i + 1, a, b
    extra = [k for k, _ in got if k not in dict(expected)]
    if extra:
        return extra[0], 0, "present", "missing"
    return None


def cmd_example(args) -> int:
    text = format_scenario(appendix.scenario())
    sys.stdout.write(text)
    golden = _read(args.golden) if args.golden else GOLDEN
    mismatch = diff_scenario(parse_scenario(text), parse_scenario(golden))
    if mismatch is None:
        print("CHECK example PASS")
        return EXIT_OK
    key, i, got, want = mismatch
    print(f"CHECK example FAIL [witness: key={key} n={i} lhs={got} rhs={want}]")
    return EXIT_FAIL


# -- entry point ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="piregulation", description="Exact Pi-regularity toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("regulate", help="run a trace through a pipeline of stages")
    p.add_argument("trace")
    p.add_argument("config")
    p.add_argument("-o", "--output", default="-", help="output trace path ('-' for stdout)")
    p.set_defaults(func=cmd_regulate)

    p = sub.add_parser("delays", help="worst-case delays between two matched traces")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--per-packet", action="store_true")
    p.set_defaults(func=cmd_delays)

    p = sub.add_parser("check", help="run one theorem checker")
    p.add_argument("name", metavar="NAME", help=" | ".join(CHECKS))
    p.add_argument("--trace", help="input trace")
    p.add_argument("--sigma", help="arrival curve literal")
    p.add_argument("--op", help="operator literal for every flow")
    p.add_argument("--ops", help="per-flow bindings, e.g. '{1: ps 5, 2: ps 10}'")
    p.add_argument("--candidate", help="candidate regulator output trace")
    p.add_argument("--system", help="FIFO system literal")
    p.add_argument("--mode", choices=("interleaved", "per-flow"), default="interleaved")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("example", help="reproduce the two-flow example and diff against golden data")
    p.add_argument("--golden", help="golden file overriding the embedded values")
    p.set_defaults(func=cmd_example)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (LiteralError, TraceError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MissingOperatorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except (SemanticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())

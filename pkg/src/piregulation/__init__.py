"""Exact Pi-regularity toolkit: curves, packet sequences, regulation
operators, minimal (interleaved) regulators and theorem checkers."""

from .curves import LEFT, RIGHT, Curve, DomainError, Piece, Side
from .literals import (
    LiteralError,
    PipelineConfig,
    Stage,
    parse_bindings,
    parse_config,
    parse_curve,
    parse_operator,
    parse_system,
)
from .operators import (
    LRQ,
    ArrivalCurve,
    GRegulation,
    LeakyBucket,
    MaxOf,
    MaxPlusLinear,
    PacketBurstiness,
    PacketSpacing,
    RegulationOperator,
    Staircase,
    TsnPacketRate,
    arrival_curve_check,
    first_violation,
    is_regular,
    jiang_lambda_nu,
)
from .rational import NEG_INF, POS_INF, ext, fmt, rat
from .regulators import (
    InterleavedRegulatorState,
    MissingOperatorError,
    PerFlowRegulatorState,
    head_of_line_schedule,
    minimal_interleaved_regulate,
    minimal_regulate,
    per_flow_bank,
)
from .systems import (
    BoundedJitterRandom,
    Damper,
    FifoSystem,
    Identity,
    PreemptiveServer,
    per_flow_worst_case_delay,
    worst_case_delay,
)
from .traces import PacketSequence, TraceError, format_trace, parse_trace
from .verify import (
    CheckReport,
    check_dominance,
    check_minimality,
    check_regularity,
    check_shaping_for_free,
    check_theorem1,
)

__version__ = "0.1.0"

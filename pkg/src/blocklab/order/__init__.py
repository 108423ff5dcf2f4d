"""Linear-order presentations: stage enumeration, comparators, generators, ground truth."""

from .keys import PositionKey
from .types import (
    TypeExpr,
    Fin,
    Omega,
    OmegaStar,
    Zeta,
    Sum,
    EtaShuffle,
    Staircase,
    OmegaTimesEta,
    PrimeBlockReplacement,
    InvalidExpr,
)
from .presentation import (
    OrderPresentation,
    StageView,
    GroundTruth,
    PresentationExhausted,
    make_presentation,
    enumerate_to,
    compare,
    truth_query,
    builtin_presentation,
    BUILTIN_ORDERS,
)
from .history import OnHistory
from .blocks import block_at_stage
from .providers import OnProvider, IntrinsicFreshWitness, OracleScheduled, on
from .scripted import parse_script, scripted_presentation

__all__ = [
    "PositionKey",
    "TypeExpr",
    "Fin",
    "Omega",
    "OmegaStar",
    "Zeta",
    "Sum",
    "EtaShuffle",
    "Staircase",
    "OmegaTimesEta",
    "PrimeBlockReplacement",
    "InvalidExpr",
    "OrderPresentation",
    "StageView",
    "GroundTruth",
    "PresentationExhausted",
    "make_presentation",
    "enumerate_to",
    "compare",
    "truth_query",
    "builtin_presentation",
    "BUILTIN_ORDERS",
    "OnHistory",
    "block_at_stage",
    "OnProvider",
    "IntrinsicFreshWitness",
    "OracleScheduled",
    "on",
    "parse_script",
    "scripted_presentation",
]

"""Ground flat implicate generation over abducible constants by constrained superposition."""

from .aset import ASet
from .aunify import ASubstitution, Clash, OccursCheck, UnificationError, more_general, unify
from .calculus import AClause, Calculus, is_tautology, subsumes
from .implicates import entails_ground, extract, minimize
from .oracle import oracle_entails, oracle_implicates
from .ordering import Order, Ordering, OrderingConfig
from .parser import Problem, parse
from .saturation import Limits, Mode, SaturationConfig, Status, combine_pipeline, saturate
from .terms import Clause, Literal, Symbol, Term

__version__ = "0.1.0"

__all__ = [
    "ASet",
    "ASubstitution",
    "AClause",
    "Calculus",
    "Clash",
    "Clause",
    "Limits",
    "Literal",
    "Mode",
    "OccursCheck",
    "Order",
    "Ordering",
    "OrderingConfig",
    "Problem",
    "SaturationConfig",
    "Status",
    "Symbol",
    "Term",
    "UnificationError",
    "combine_pipeline",
    "entails_ground",
    "extract",
    "is_tautology",
    "minimize",
    "more_general",
    "oracle_entails",
    "oracle_implicates",
    "parse",
    "saturate",
    "subsumes",
    "unify",
]

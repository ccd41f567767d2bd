"""First-order definitions of small graphs: games, logic, refinement and constructions."""

from .canon import canonical_form, enumerate_graphs, iso
from .errors import (
    DomainError,
    EvaluationError,
    GraphDefError,
    ParameterError,
    ParseError,
    PreconditionError,
    ResourceError,
    WellFormednessError,
)
from .games import LowerBound, alt_depth, depth, pebble_depth, width
from .graph import Graph
from .graphio import from_graph6, to_graph6
from .logic import evaluate, measure
from .parser import parse
from .values import INF

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "EvaluationError",
    "Graph",
    "GraphDefError",
    "INF",
    "LowerBound",
    "ParameterError",
    "ParseError",
    "PreconditionError",
    "ResourceError",
    "WellFormednessError",
    "alt_depth",
    "canonical_form",
    "depth",
    "enumerate_graphs",
    "evaluate",
    "from_graph6",
    "iso",
    "measure",
    "parse",
    "pebble_depth",
    "to_graph6",
    "width",
]

"""In-process SPARQL endpoint for hermetic tests and demos: a small fixture
graph, a SELECT-subset query engine, and a localhost HTTP server speaking
the SPARQL protocol."""

from .graph import build_bells_graph, build_organs_graph
from .minisparql import QueryError, evaluate
from .server import MockSparqlServer

__all__ = [
    "MockSparqlServer",
    "QueryError",
    "build_bells_graph",
    "build_organs_graph",
    "evaluate",
]

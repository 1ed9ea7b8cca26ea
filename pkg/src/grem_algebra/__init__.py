"""Declarative Gremlin pattern matching over in-memory property graphs.

Pipeline: parse_traversal -> compile_traversal -> evaluate, with
render_plan for inspecting compiled plans.
"""

from .algebra import AlgebraExpr, render_plan, validate
from .compiler import PatternChain, compile_traversal, extract_patterns, stitch_patterns
from .errors import (
    CompileError,
    EvaluationError,
    GraphFormatError,
    GremAlgebraError,
    ParseError,
    UnboundPatternError,
)
from .evaluator import (
    BindingSet,
    OracleGraphPattern,
    Path,
    PatternEdge,
    PatternVertex,
    Traverser,
    bind,
    eval_match,
    evaluate,
    match_all,
    multiset_union,
    oracle_match,
    path_concat,
    path_join,
    to_jsonl,
    to_table,
)
from .parser import TraversalAST, parse_traversal, render_traversal, tokenize
from .property_graph import (
    EdgeRecord,
    EdgeRef,
    Graph,
    VertexRef,
    load_graph,
    load_graph_file,
    modern_graph,
    modern_graph_path,
)

__all__ = [
    "AlgebraExpr",
    "BindingSet",
    "CompileError",
    "EdgeRecord",
    "EdgeRef",
    "EvaluationError",
    "Graph",
    "GraphFormatError",
    "GremAlgebraError",
    "OracleGraphPattern",
    "ParseError",
    "Path",
    "PatternChain",
    "PatternEdge",
    "PatternVertex",
    "TraversalAST",
    "Traverser",
    "UnboundPatternError",
    "VertexRef",
    "bind",
    "compile_traversal",
    "eval_match",
    "evaluate",
    "extract_patterns",
    "load_graph",
    "load_graph_file",
    "match_all",
    "modern_graph",
    "modern_graph_path",
    "multiset_union",
    "oracle_match",
    "parse_traversal",
    "path_concat",
    "path_join",
    "render_plan",
    "render_traversal",
    "stitch_patterns",
    "to_jsonl",
    "to_table",
    "tokenize",
    "validate",
]

__version__ = "0.1.0"

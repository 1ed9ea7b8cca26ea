"""Command-line driver: parse, plan, or run a traversal.

Exit codes: 0 success, 1 parse/compile error, 2 graph-load error,
3 evaluation error.  Errors go to stderr with positions when available.
"""

from __future__ import annotations

import argparse
import sys

from .algebra import PLAN_STYLES, render_plan
from .compiler import compile_traversal
from .errors import CompileError, EvaluationError, GraphFormatError, ParseError
from .evaluator import evaluate, to_jsonl, to_table
from .parser import parse_traversal, render_traversal
from .property_graph import load_graph_file

EXIT_OK = 0
EXIT_QUERY_ERROR = 1
EXIT_GRAPH_ERROR = 2
EXIT_EVAL_ERROR = 3


def _add_query_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--query", help="traversal text")
    sub.add_argument("--query-file", help="file containing the traversal text")
    sub.add_argument(
        "--eq7-grouping",
        action="store_true",
        help="compile select().by(key) to grouping over the projection "
        "instead of value extraction",
    )


def _read_query(args: argparse.Namespace) -> str:
    if bool(args.query) == bool(args.query_file):
        raise SystemExit("exactly one of --query/--query-file is required")
    if args.query:
        return args.query
    with open(args.query_file, "r", encoding="utf-8") as fh:
        return fh.read()


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grem-algebra",
        description="Compile declarative Gremlin traversals to a graph algebra "
        "and evaluate them over property-graph JSON files.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="evaluate a traversal over a graph")
    run.add_argument("--graph", help="graph JSON file (required)")
    run.add_argument(
        "--format", choices=("table", "jsonl"), default="table", help="output format"
    )
    _add_query_args(run)

    plan = commands.add_parser("plan", help="print the compiled plan")
    plan.add_argument(
        "--style", choices=PLAN_STYLES, default="ascii", help="plan notation"
    )
    _add_query_args(plan)

    parse = commands.add_parser("parse", help="parse and echo the canonical form")
    _add_query_args(parse)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        query = _read_query(args)
    except OSError as exc:
        print(f"error: cannot read query file: {exc}", file=sys.stderr)
        return EXIT_QUERY_ERROR

    try:
        ast = parse_traversal(query)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_QUERY_ERROR

    if args.command == "parse":
        print(render_traversal(ast))
        return EXIT_OK

    try:
        expr = compile_traversal(ast, eq7_grouping=args.eq7_grouping)
    except CompileError as exc:
        print(f"compile error: {exc}", file=sys.stderr)
        return EXIT_QUERY_ERROR

    if args.command == "plan":
        print(render_plan(expr, args.style))
        return EXIT_OK

    if not args.graph:
        print("graph error: run mode requires --graph", file=sys.stderr)
        return EXIT_GRAPH_ERROR
    try:
        graph = load_graph_file(args.graph)
    except OSError as exc:
        print(f"graph error: cannot read {args.graph}: {exc}", file=sys.stderr)
        return EXIT_GRAPH_ERROR
    except GraphFormatError as exc:
        print(f"graph error: {exc}", file=sys.stderr)
        return EXIT_GRAPH_ERROR

    try:
        result = evaluate(expr, graph)
    except EvaluationError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL_ERROR

    rendered = to_jsonl(result) if args.format == "jsonl" else to_table(result)
    if rendered:
        print(rendered)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Maps a parsed traversal onto the graph algebra, bottom-up.

The mapping follows a fixed recipe: the g.V()/g.E() source becomes a
get-vertices/get-edges leaf; out()/in() become traverse operators;
has()/hasLabel()/values() become property and label filters; match()
patterns are extracted as anchored chains and stitched into one connected
expression (threading shared variables, joining disconnected ones);
where()/not()/and() become selections; select() a projection; dedup(),
order().by(), group().by(), limit() their namesake operators; union()
builds a left-deep union tree; a terminal max() an aggregate.

``select(...).by(key)`` is value extraction by default.  With
``eq7_grouping=True`` it instead emits a grouping operator above the
projection (the alternative reading of the by-modulator); the CLI exposes
this as --eq7-grouping.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Union

from . import algebra as alg
from .algebra import AlgebraExpr
from .errors import CompileError
from .parser import Literal, Step, StepKind, TraversalAST
from .property_graph import PropertyValue


# -- pattern chains -----------------------------------------------------------


@dataclass(frozen=True)
class ChainTraverse:
    direction: str
    edge_label: str | None


@dataclass(frozen=True)
class ChainHas:
    key: str
    value: PropertyValue | None  # None = existence check


@dataclass(frozen=True)
class ChainLabel:
    label: str


@dataclass(frozen=True)
class ChainValues:
    key: str


ChainOp = Union[ChainTraverse, ChainHas, ChainLabel, ChainValues]


@dataclass(frozen=True)
class PatternChain:
    """One anonymous traversal inside match(): a start anchor, an optional
    end anchor, and the single-step operators between them."""

    start_var: str
    end_var: str | None
    ops: tuple[ChainOp, ...]

    @property
    def vars(self) -> tuple[str, ...]:
        if self.end_var is not None and self.end_var != self.start_var:
            return (self.start_var, self.end_var)
        return (self.start_var,)


def _literal(arg: object) -> Literal:
    assert isinstance(arg, Literal)
    return arg


def extract_patterns(match_step: Step) -> list[PatternChain]:
    """Split a match() step into its anchored pattern chains, in source order."""
    if match_step.kind is not StepKind.MATCH:
        raise CompileError(f"expected a match() step, got {match_step.kind.value}()")
    if not match_step.args:
        raise CompileError("match() needs at least one pattern")

    chains: list[PatternChain] = []
    for arg in match_step.args:
        if not isinstance(arg, TraversalAST):
            raise CompileError("match() arguments must be anonymous traversals")
        steps = list(arg.steps)
        if not steps or steps[0].kind is not StepKind.AS:
            raise CompileError("match() pattern has no leading as() anchor")
        start_var = str(_literal(steps[0].args[0]).value)
        steps = steps[1:]
        end_var: str | None = None
        if steps and steps[-1].kind is StepKind.AS:
            end_var = str(_literal(steps[-1].args[0]).value)
            steps = steps[:-1]

        ops: list[ChainOp] = []
        for step in steps:
            if step.kind is StepKind.MATCH:
                raise CompileError("nested match() inside a pattern is unsupported")
            if step.kind is StepKind.AS:
                raise CompileError(
                    "as() in the middle of a match() pattern is unsupported; "
                    "split the pattern at the anchor"
                )
            if step.kind in (StepKind.OUT, StepKind.IN):
                label = str(_literal(step.args[0]).value) if step.args else None
                direction = alg.OUT if step.kind is StepKind.OUT else alg.IN
                ops.append(ChainTraverse(direction, label))
            elif step.kind is StepKind.HAS:
                key = str(_literal(step.args[0]).value)
                value = _literal(step.args[1]).value if len(step.args) == 2 else None
                ops.append(ChainHas(key, value))  # type: ignore[arg-type]
            elif step.kind is StepKind.HAS_LABEL:
                ops.append(ChainLabel(str(_literal(step.args[0]).value)))
            elif step.kind is StepKind.VALUES:
                ops.append(ChainValues(str(_literal(step.args[0]).value)))
            else:
                raise CompileError(
                    f"step {step.kind.value}() is not supported inside a match() pattern"
                )

        if not ops and end_var is not None and end_var != start_var:
            raise CompileError("empty pattern between two as() anchors")
        chains.append(PatternChain(start_var=start_var, end_var=end_var, ops=tuple(ops)))
    return chains


def _apply_chain(chain: PatternChain, expr: AlgebraExpr) -> AlgebraExpr:
    """Stack a chain's operators onto expr; the first operator anchors at the
    chain's start variable, the last binds its end variable."""
    ops = chain.ops
    for i, op in enumerate(ops):
        first = i == 0
        last = i == len(ops) - 1
        anchor = chain.start_var if first else None
        target = chain.end_var if last else None
        if isinstance(op, ChainTraverse):
            expr = alg.Traverse(
                direction=op.direction,
                edge_label=op.edge_label,
                from_var=anchor,
                to_var=target,
                input=expr,
            )
        elif isinstance(op, ChainHas):
            if target is not None:
                raise CompileError(
                    f"as({target!r}) after has() would alias the pattern anchor; unsupported"
                )
            predicate = ("=", op.value) if op.value is not None else None
            expr = alg.PropertyFilter(
                var=anchor, key=op.key, predicate=predicate, bind_value=False, input=expr
            )
        elif isinstance(op, ChainLabel):
            if target is not None:
                raise CompileError(
                    f"as({target!r}) after hasLabel() would alias the pattern anchor; unsupported"
                )
            expr = alg.LabelFilter(var=anchor, label=op.label, input=expr)
        elif isinstance(op, ChainValues):
            expr = alg.PropertyFilter(
                var=target,
                key=op.key,
                predicate=None,
                bind_value=True,
                input=expr,
                anchor=anchor,
            )
        else:  # pragma: no cover
            raise CompileError(f"unknown chain operator {op!r}")
    return expr


def _name_head(expr: AlgebraExpr, var: str) -> AlgebraExpr:
    """Attach a variable to the operator that produced the current position."""
    if isinstance(expr, (alg.GetVertices, alg.GetEdges)) and expr.var is None:
        return dataclasses.replace(expr, var=var)
    if isinstance(expr, alg.Traverse) and expr.to_var is None:
        return dataclasses.replace(expr, to_var=var)
    if isinstance(expr, alg.PropertyFilter) and expr.var is None:
        return dataclasses.replace(expr, var=var)
    if isinstance(expr, alg.LabelFilter) and expr.var is None:
        return dataclasses.replace(expr, var=var)
    if isinstance(expr, alg.Argument) and expr.var is None:
        return dataclasses.replace(expr, var=var)
    raise CompileError(f"as({var!r}) cannot name the preceding step here")


def stitch_patterns(
    chains: list[PatternChain], source: AlgebraExpr | None = None
) -> AlgebraExpr:
    """Compose pattern chains into one connected expression.

    Chains whose start variable is already bound are threaded directly on
    top of the accumulated expression (the anchor re-positions evaluation
    at that variable).  A chain that shares no bound variable is evaluated
    as its own subtree over the source and combined with a concatenative
    join, which degenerates to a cartesian product when the subtrees share
    no variables at all.
    """
    if not chains:
        raise CompileError("match() needs at least one pattern")
    if source is None:
        source = alg.GetVertices()

    acc: AlgebraExpr | None = None
    bound: set[str] = set()
    remaining = list(chains)

    while remaining:
        if acc is None:
            chain = remaining.pop(0)
            if not chain.ops:
                acc = _name_head(source, chain.start_var)
            else:
                acc = _apply_chain(chain, source)
            bound.update(chain.vars)
            continue
        idx = next(
            (i for i, c in enumerate(remaining) if c.start_var in bound), None
        )
        if idx is not None:
            chain = remaining.pop(idx)
            if chain.ops:
                acc = _apply_chain(chain, acc)
            bound.update(chain.vars)
            continue
        # no chain can thread: evaluate the next one separately and join
        chain = remaining.pop(0)
        if not chain.ops:
            raise CompileError(
                f"pattern anchored at {chain.start_var!r} is disconnected and empty"
            )
        sub = _apply_chain(chain, source)
        acc = alg.Join(acc, sub)
        bound.update(chain.vars)

    assert acc is not None
    return acc


# -- whole-traversal compilation ----------------------------------------------


def _segment_chain_step(expr: AlgebraExpr, step: Step) -> AlgebraExpr:
    """out/in/has/hasLabel/values applied at the current position of a
    root-level (non-match) segment."""
    if step.kind in (StepKind.OUT, StepKind.IN):
        label = str(_literal(step.args[0]).value) if step.args else None
        direction = alg.OUT if step.kind is StepKind.OUT else alg.IN
        return alg.Traverse(direction, label, None, None, expr)
    if step.kind is StepKind.HAS:
        key = str(_literal(step.args[0]).value)
        predicate = ("=", _literal(step.args[1]).value) if len(step.args) == 2 else None
        return alg.PropertyFilter(None, key, predicate, False, expr)  # type: ignore[arg-type]
    if step.kind is StepKind.HAS_LABEL:
        return alg.LabelFilter(None, str(_literal(step.args[0]).value), expr)
    if step.kind is StepKind.VALUES:
        return alg.PropertyFilter(None, str(_literal(step.args[0]).value), None, True, expr)
    raise CompileError(f"unexpected step {step.kind.value}()")  # pragma: no cover


def _compile_by(expr: AlgebraExpr, step: Step, eq7_grouping: bool) -> AlgebraExpr:
    arg = _literal(step.args[0])
    if isinstance(expr, alg.Projection):
        if arg.kind != "string":
            raise CompileError("by() after select() takes a property key")
        if expr.value_key is not None:
            raise CompileError("only one by() is supported after select()")
        key = str(arg.value)
        if eq7_grouping:
            return alg.Group(key, expr)
        return dataclasses.replace(expr, value_key=key)
    if isinstance(expr, alg.Sort):
        if arg.kind != "direction":
            raise CompileError(
                "by() after order() takes asc or desc; sorting by a property key "
                "is unsupported (bind it with values(...).as(...) first)"
            )
        keys = tuple((v, str(arg.value)) for v, _ in expr.keys)
        return dataclasses.replace(expr, keys=keys)
    if isinstance(expr, alg.Group):
        if arg.kind != "string":
            raise CompileError("by() after group() takes a property key")
        if expr.key is not None:
            raise CompileError("only one by() is supported after group()")
        return dataclasses.replace(expr, key=str(arg.value))
    raise CompileError("by() must directly follow select(), order(), or group()")


def _compile_steps(
    steps: tuple[Step, ...],
    expr: AlgebraExpr,
    source: AlgebraExpr,
    eq7_grouping: bool,
) -> AlgebraExpr:
    seen_match = False
    for pos, step in enumerate(steps):
        kind = step.kind
        if kind in (StepKind.SOURCE_V, StepKind.SOURCE_E):
            raise CompileError(f"{kind.value}() may only start a root traversal")
        if kind is StepKind.AS:
            expr = _name_head(expr, str(_literal(step.args[0]).value))
        elif kind in (StepKind.OUT, StepKind.IN, StepKind.HAS, StepKind.HAS_LABEL, StepKind.VALUES):
            expr = _segment_chain_step(expr, step)
        elif kind is StepKind.MATCH:
            chains = extract_patterns(step)
            if seen_match:
                expr = alg.Join(expr, stitch_patterns(chains, source))
            else:
                expr = stitch_patterns(chains, expr)
                seen_match = True
        elif kind is StepKind.WHERE:
            pred = _compile_predicate(step.args[0], eq7_grouping)
            expr = alg.Selection(pred, expr)
        elif kind is StepKind.NOT:
            pred = _compile_predicate(step.args[0], eq7_grouping)
            expr = alg.Selection(pred, expr, negated=True)
        elif kind is StepKind.AND:
            preds = [_compile_predicate(a, eq7_grouping) for a in step.args]
            combined = preds[0]
            for p in preds[1:]:
                combined = alg.Join(combined, p)
            expr = alg.Selection(combined, expr)
        elif kind is StepKind.SELECT:
            vars_ = tuple(str(_literal(a).value) for a in step.args)
            declared = alg.introduced_vars(expr)
            for v in vars_:
                if v not in declared:
                    raise CompileError(f"select() references undeclared variable {v!r}")
            expr = alg.Projection(vars_, None, expr)
        elif kind is StepKind.BY:
            expr = _compile_by(expr, step, eq7_grouping)
        elif kind is StepKind.DEDUP:
            vars_ = tuple(str(_literal(a).value) for a in step.args)
            declared = alg.introduced_vars(expr)
            for v in vars_:
                if v not in declared:
                    raise CompileError(f"dedup() references undeclared variable {v!r}")
            expr = alg.Dedup(vars_, expr)
        elif kind is StepKind.ORDER:
            cols = static_columns(expr)
            keys = tuple((c, alg.ASCENDING) for c in cols) or ((None, alg.ASCENDING),)
            expr = alg.Sort(keys, expr)
        elif kind is StepKind.GROUP:
            expr = alg.Group(None, expr)
        elif kind is StepKind.LIMIT:
            expr = alg.Restriction(0, int(_literal(step.args[0]).value), expr)  # type: ignore[arg-type]
        elif kind is StepKind.UNION:
            branches = [
                _compile_steps(a.steps, expr, expr, eq7_grouping)  # type: ignore[union-attr]
                for a in step.args
            ]
            merged = branches[0]
            for b in branches[1:]:
                merged = alg.Union(merged, b)
            expr = merged
        elif kind is StepKind.MAX:
            if pos != len(steps) - 1:
                raise CompileError("max() must be the final step of the traversal")
            expr = alg.Aggregate("max", expr)
        else:  # pragma: no cover
            raise CompileError(f"step {kind.value}() reached the compiler unsupported")
    return expr


def _compile_predicate(ast: object, eq7_grouping: bool) -> AlgebraExpr:
    if not isinstance(ast, TraversalAST):
        raise CompileError("predicate must be an anonymous traversal")
    leaf = alg.Argument()
    return _compile_steps(ast.steps, leaf, leaf, eq7_grouping)


def static_columns(expr: AlgebraExpr) -> tuple[str, ...]:
    """Visible column schema of the binding set an expression produces."""
    if isinstance(expr, (alg.GetVertices, alg.GetEdges)):
        return (expr.var,) if expr.var else ()
    if isinstance(expr, alg.Traverse):
        cols = list(static_columns(expr.input))
        for v in (expr.from_var, expr.to_var):
            if v and v not in cols:
                cols.append(v)
        return tuple(cols)
    if isinstance(expr, (alg.PropertyFilter, alg.LabelFilter)):
        cols = list(static_columns(expr.input))
        if expr.var and expr.var not in cols:
            cols.append(expr.var)
        return tuple(cols)
    if isinstance(expr, (alg.Selection, alg.Dedup, alg.Restriction, alg.Sort)):
        return static_columns(expr.input)
    if isinstance(expr, alg.Projection):
        return expr.vars
    if isinstance(expr, alg.Group):
        return ("key", "member")
    if isinstance(expr, alg.Join):
        left = static_columns(expr.left)
        return left + tuple(c for c in static_columns(expr.right) if c not in left)
    if isinstance(expr, alg.Union):
        left = static_columns(expr.left)
        return left + tuple(c for c in static_columns(expr.right) if c not in left)
    if isinstance(expr, alg.Aggregate):
        return ()
    if isinstance(expr, alg.Argument):
        return (expr.var,) if expr.var else ()
    raise TypeError(f"not an algebra expression: {expr!r}")


def compile_traversal(ast: TraversalAST, eq7_grouping: bool = False) -> AlgebraExpr:
    """Compile a parsed root traversal to an algebra expression."""
    if ast.anonymous:
        raise CompileError("only root traversals (g.V()/g.E()) can be compiled")
    first = ast.steps[0]
    if first.kind is StepKind.SOURCE_V:
        source: AlgebraExpr = alg.GetVertices()
    elif first.kind is StepKind.SOURCE_E:
        source = alg.GetEdges()
    else:  # pragma: no cover - parser enforces this
        raise CompileError("root traversal must start with V() or E()")
    return _compile_steps(ast.steps[1:], source, source, eq7_grouping)

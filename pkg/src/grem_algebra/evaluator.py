"""Executes algebra expressions over a property graph with bag semantics.

Results are binding sets: multisets of rows mapping variable names to
values (vertex/edge references or scalars).  Every row additionally tracks
the traversal's current position under the reserved column "@"; it is
never part of the visible schema.

Row order is deterministic: the vertex/edge sources emit elements in
ascending lexicographic id order, and every operator except sorting
preserves its input order.

The module also houses the path algebra (concatenation and concatenative
join over edge sequences), the traverser-level match/bind semantics that
mirror the compiled route, and a brute-force pattern-matching oracle used
to cross-check the engine.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from functools import cmp_to_key
from typing import Iterable

from . import algebra as alg
from .algebra import AlgebraExpr
from .compiler import (
    ChainHas,
    ChainLabel,
    ChainTraverse,
    ChainValues,
    PatternChain,
)
from .errors import EvaluationError, UnboundPatternError
from .property_graph import (
    EdgeRef,
    Graph,
    PropertyValue,
    VertexRef,
    is_numeric,
    sort_key,
    value_key,
    values_equal,
)

CUR = "@"

Value = object  # VertexRef | EdgeRef | PropertyValue
Row = dict


@dataclass
class BindingSet:
    """A bag of rows with an ordered visible schema.

    Rows are dicts from column name to value; the reserved "@" key carries
    the current position and is not part of `columns`.  Multiplicity is
    represented by repeated rows.
    """

    columns: tuple[str, ...]
    rows: list[Row] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def canonical(self) -> list[tuple]:
        """Rows as order-insensitive canonical tuples (for multiset tests)."""
        out = []
        for row in self.rows:
            if self.columns:
                out.append(
                    tuple(
                        (c, value_key(row[c]) if c in row else ("missing",))
                        for c in sorted(set(self.columns))
                    )
                )
            elif CUR in row:
                out.append((value_key(row[CUR]),))
            else:
                out.append(())
        return out

    def values(self) -> list[Value]:
        """The single value per row: sole visible column, else the position."""
        return [_natural_value(row, self.columns) for row in self.rows]


def _natural_value(row: Row, columns: tuple[str, ...]) -> Value:
    visible = [c for c in columns if c in row]
    if len(visible) == 1:
        return row[visible[0]]
    if CUR in row:
        return row[CUR]
    if visible:
        return row[visible[-1]]
    return None


# -- paths ---------------------------------------------------------------------

Edge = tuple  # (source, edge label, target)


@dataclass(frozen=True)
class Path:
    """A path as a sequence of edges (source, label, target).

    Consecutive edges must be incident: each edge's target is the next
    edge's source.  The empty path is the identity of concatenation.
    """

    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.edges, self.edges[1:]):
            if a[2] != b[0]:
                raise EvaluationError(f"non-incident path edges {a!r} and {b!r}")

    @property
    def is_empty(self) -> bool:
        return not self.edges

    @property
    def length(self) -> int:
        """Number of edges in the path."""
        return len(self.edges)

    def first(self) -> object:
        """γ⁻: the path's first vertex (non-empty paths only)."""
        if self.is_empty:
            raise EvaluationError("empty path has no first element")
        return self.edges[0][0]

    def last(self) -> object:
        """γ⁺: the path's last vertex (non-empty paths only)."""
        if self.is_empty:
            raise EvaluationError("empty path has no last element")
        return self.edges[-1][2]

    def flatten(self) -> tuple:
        """All edge triples spliced end to end, e.g. (v1,e1,v2,v2,e2,v3)."""
        out: list = []
        for e in self.edges:
            out.extend(e)
        return tuple(out)

    def spliced(self) -> tuple:
        """Vertex/label alternation with shared vertices merged,
        e.g. (v1,e1,v2,e2,v3)."""
        if self.is_empty:
            return ()
        out: list = [self.edges[0][0]]
        for src, label, dst in self.edges:
            out.extend((label, dst))
        return tuple(out)


EMPTY_PATH = Path()


def path_concat(p: Path, r: Path) -> Path:
    """p ∘ r; defined when either side is empty or p ends where r starts."""
    if p.is_empty:
        return r
    if r.is_empty:
        return p
    if p.last() != r.first():
        raise EvaluationError(
            f"path endpoint mismatch: {p.last()!r} does not meet {r.first()!r}"
        )
    return Path(p.edges + r.edges)


def path_join(paths: Iterable[Path], others: Iterable[Path]) -> list[Path]:
    """Concatenative join ⋈∘ of two path multisets.

    Pairs join when either side is empty or the endpoints meet; the empty
    path acts as identity.
    """
    others = list(others)
    out: list[Path] = []
    for p in paths:
        for r in others:
            if p.is_empty or r.is_empty or p.last() == r.first():
                out.append(path_concat(p, r))
    return out


# -- bag union ------------------------------------------------------------------


def multiset_union(a: BindingSet, b: BindingSet) -> BindingSet:
    """Bag union: concatenates rows, adding multiplicities.

    The two schemas must contain the same columns; otherwise this raises,
    since rows with absent columns are not representable.
    """
    if set(a.columns) != set(b.columns):
        raise EvaluationError(
            f"union schema mismatch: {list(a.columns)} vs {list(b.columns)}"
        )
    return BindingSet(a.columns, [dict(r) for r in a.rows] + [dict(r) for r in b.rows])


# -- predicate helpers ------------------------------------------------------------


def _compare(value: Value, cmp: str, const: PropertyValue) -> bool:
    """Total predicate: rows with incomparable values simply fail the test."""
    if cmp == "=":
        return values_equal(value, const)
    if cmp == "!=":
        return not values_equal(value, const)
    if not (is_numeric(value) and is_numeric(const)):
        return False
    if cmp == "<":
        return value < const  # type: ignore[operator]
    if cmp == "<=":
        return value <= const  # type: ignore[operator]
    if cmp == ">":
        return value > const  # type: ignore[operator]
    if cmp == ">=":
        return value >= const  # type: ignore[operator]
    raise EvaluationError(f"unknown comparator {cmp!r}")


def _is_ref(v: object) -> bool:
    return isinstance(v, (VertexRef, EdgeRef))


# -- the evaluator -----------------------------------------------------------------


def evaluate(expr: AlgebraExpr, g: Graph) -> BindingSet:
    """Evaluate a well-scoped expression over a graph."""
    diags = alg.validate(expr)
    if diags:
        raise EvaluationError("invalid plan: " + "; ".join(diags))
    return _eval(expr, g, None)


def _eval(expr: AlgebraExpr, g: Graph, arg: BindingSet | None) -> BindingSet:
    if isinstance(expr, alg.GetVertices):
        rows = []
        for vid in g.vertex_ids():
            ref = VertexRef(vid)
            row: Row = {CUR: ref}
            if expr.var:
                row[expr.var] = ref
            rows.append(row)
        return BindingSet((expr.var,) if expr.var else (), rows)

    if isinstance(expr, alg.GetEdges):
        rows = []
        for eid in g.edge_ids():
            ref = EdgeRef(eid)
            row = {CUR: ref}
            if expr.var:
                row[expr.var] = ref
            rows.append(row)
        return BindingSet((expr.var,) if expr.var else (), rows)

    if isinstance(expr, alg.Argument):
        if arg is None:
            raise EvaluationError("predicate argument used outside a selection")
        columns = list(arg.columns)
        if expr.var and expr.var not in columns:
            columns.append(expr.var)
        rows = []
        for row in arg.rows:
            new = dict(row)
            if expr.var:
                if expr.var in new:
                    new[CUR] = new[expr.var]
                elif CUR in new:
                    new[expr.var] = new[CUR]
                else:
                    continue
            rows.append(new)
        return BindingSet(tuple(columns), rows)

    if isinstance(expr, alg.Traverse):
        src = _eval(expr.input, g, arg)
        columns = list(src.columns)
        for v in (expr.from_var, expr.to_var):
            if v and v not in columns:
                columns.append(v)
        out_rows: list[Row] = []
        for row in src.rows:
            if expr.from_var and expr.from_var in row:
                anchor = row[expr.from_var]
            else:
                anchor = row.get(CUR)
            if anchor is None:
                raise EvaluationError("traverse from an unbound position")
            if not isinstance(anchor, VertexRef):
                raise EvaluationError(f"traverse requires a vertex, got {anchor!r}")
            base = dict(row)
            if expr.from_var and expr.from_var not in base:
                base[expr.from_var] = anchor
            if expr.direction == alg.OUT:
                pairs = g.out_adjacent(anchor.id, expr.edge_label)
            else:
                pairs = g.in_adjacent(anchor.id, expr.edge_label)
            for _eid, nvid in pairs:
                nref = VertexRef(nvid)
                if expr.to_var is None:
                    out_rows.append({**base, CUR: nref})
                elif expr.to_var in base:
                    if values_equal(base[expr.to_var], nref):
                        out_rows.append({**base, CUR: nref})
                else:
                    out_rows.append({**base, expr.to_var: nref, CUR: nref})
        return BindingSet(tuple(columns), out_rows)

    if isinstance(expr, alg.LabelFilter):
        src = _eval(expr.input, g, arg)
        columns = list(src.columns)
        if expr.var and expr.var not in columns:
            columns.append(expr.var)
        out_rows = []
        for row in src.rows:
            elem = row[expr.var] if expr.var and expr.var in row else row.get(CUR)
            if not _is_ref(elem):
                continue
            if g.element_label(elem) != expr.label:
                continue
            new = dict(row)
            if expr.var and expr.var not in new:
                new[expr.var] = elem
            out_rows.append(new)
        return BindingSet(tuple(columns), out_rows)

    if isinstance(expr, alg.PropertyFilter):
        src = _eval(expr.input, g, arg)
        columns = list(src.columns)
        if expr.var and expr.var not in columns:
            columns.append(expr.var)
        out_rows = []
        if expr.bind_value:
            for row in src.rows:
                if expr.anchor and expr.anchor in row:
                    elem = row[expr.anchor]
                else:
                    elem = row.get(CUR)
                if not _is_ref(elem):
                    continue
                value = g.ref_property(elem, expr.key)
                if value is None:
                    continue
                new = dict(row)
                if expr.var:
                    if expr.var in new:
                        if not values_equal(new[expr.var], value):
                            continue
                    else:
                        new[expr.var] = value
                new[CUR] = value
                out_rows.append(new)
        else:
            for row in src.rows:
                elem = row[expr.var] if expr.var and expr.var in row else row.get(CUR)
                if not _is_ref(elem):
                    continue
                value = g.ref_property(elem, expr.key)
                if expr.predicate is not None:
                    if value is None:
                        continue
                    cmp, const = expr.predicate
                    if not _compare(value, cmp, const):
                        continue
                elif value is None:
                    continue
                new = dict(row)
                if expr.var and expr.var not in new:
                    new[expr.var] = elem
                out_rows.append(new)
        return BindingSet(tuple(columns), out_rows)

    if isinstance(expr, alg.Selection):
        src = _eval(expr.input, g, arg)
        out_rows = []
        for row in src.rows:
            seed = BindingSet(src.columns, [dict(row)])
            hits = _eval(expr.predicate, g, seed)
            if bool(hits.rows) != expr.negated:
                out_rows.append(dict(row))
        return BindingSet(src.columns, out_rows)

    if isinstance(expr, alg.Projection):
        src = _eval(expr.input, g, arg)
        out_rows = []
        for row in src.rows:
            if any(v not in row for v in expr.vars):
                continue
            new: Row = {}
            dead = False
            for v in expr.vars:
                val = row[v]
                if expr.value_key is not None:
                    if not _is_ref(val):
                        dead = True
                        break
                    prop = g.ref_property(val, expr.value_key)
                    if prop is None:
                        dead = True
                        break
                    val = prop
                new[v] = val
            if dead:
                continue
            if CUR in row:
                new[CUR] = row[CUR]
            out_rows.append(new)
        return BindingSet(tuple(expr.vars), out_rows)

    if isinstance(expr, alg.Dedup):
        src = _eval(expr.input, g, arg)
        keycols = list(expr.vars) if expr.vars else list(src.columns)
        seen = set()
        out_rows = []
        for row in src.rows:
            if keycols:
                key = tuple(
                    value_key(row[c]) if c in row else ("missing",) for c in keycols
                )
            else:
                key = (value_key(row[CUR]),) if CUR in row else ()
            if key in seen:
                continue
            seen.add(key)
            out_rows.append(dict(row))
        return BindingSet(src.columns, out_rows)

    if isinstance(expr, alg.Restriction):
        src = _eval(expr.input, g, arg)
        return BindingSet(src.columns, [dict(r) for r in src.rows[expr.skip : expr.skip + expr.take]])

    if isinstance(expr, alg.Sort):
        src = _eval(expr.input, g, arg)

        def extract(row: Row, var: str | None) -> tuple:
            value = row.get(var) if var is not None else row.get(CUR)
            if value is None and (var is None or var not in row):
                return (-1,)
            return sort_key(value)

        def compare(r1: Row, r2: Row) -> int:
            for var, direction in expr.keys:
                k1 = extract(r1, var)
                k2 = extract(r2, var)
                if k1 == k2:
                    continue
                lesser = -1 if direction == alg.ASCENDING else 1
                return lesser if k1 < k2 else -lesser
            return 0

        return BindingSet(src.columns, sorted((dict(r) for r in src.rows), key=cmp_to_key(compare)))

    if isinstance(expr, alg.Group):
        src = _eval(expr.input, g, arg)
        grouped: list[tuple[tuple, Row]] = []
        for row in src.rows:
            if expr.key is not None and expr.key in row:
                key_val = row[expr.key]
                member_cols = tuple(c for c in src.columns if c != expr.key)
            elif expr.key is not None:
                elem = row.get(CUR)
                if not _is_ref(elem):
                    continue
                key_val = g.ref_property(elem, expr.key)
                if key_val is None:
                    continue
                member_cols = src.columns
            else:
                key_val = _natural_value(row, src.columns)
                if key_val is None:
                    continue
                member_cols = src.columns
            member = _natural_value(row, member_cols)
            if member is None:
                member = key_val
            grouped.append((sort_key(key_val), {"key": key_val, "member": member}))
        grouped.sort(key=lambda kv: kv[0])
        return BindingSet(("key", "member"), [row for _, row in grouped])

    if isinstance(expr, alg.Join):
        left = _eval(expr.left, g, arg)
        right = _eval(expr.right, g, arg)
        shared = [c for c in left.columns if c in right.columns]
        columns = left.columns + tuple(c for c in right.columns if c not in left.columns)
        out_rows = []
        for lrow in left.rows:
            for rrow in right.rows:
                ok = True
                for c in shared:
                    if c not in lrow or c not in rrow or not values_equal(lrow[c], rrow[c]):
                        ok = False
                        break
                if ok:
                    out_rows.append({**lrow, **rrow})
        return BindingSet(columns, out_rows)

    if isinstance(expr, alg.Union):
        left = _eval(expr.left, g, arg)
        right = _eval(expr.right, g, arg)
        if set(left.columns) == set(right.columns):
            return multiset_union(left, right)
        # Branches binding different variables: keep rows as they are; a
        # later projection decides which survive (select() semantics).
        columns = left.columns + tuple(c for c in right.columns if c not in left.columns)
        return BindingSet(columns, [dict(r) for r in left.rows] + [dict(r) for r in right.rows])

    if isinstance(expr, alg.Aggregate):
        src = _eval(expr.input, g, arg)
        if len(src.columns) > 1:
            raise EvaluationError(f"{expr.fn}() needs a single-column input")
        if expr.fn == "count":
            return BindingSet((), [{CUR: len(src.rows)}])
        values = src.values()
        if not values:
            return BindingSet((), [])
        for v in values:
            if not is_numeric(v):
                raise EvaluationError(f"{expr.fn}() over non-numeric value {v!r}")
        mixed = any(isinstance(v, float) for v in values) and any(
            isinstance(v, int) for v in values
        )
        result = max(values) if expr.fn == "max" else min(values)  # type: ignore[type-var]
        if mixed:
            result = float(result)  # type: ignore[arg-type]
        return BindingSet((), [{CUR: result}])

    raise EvaluationError(f"cannot evaluate {expr!r}")


# -- traverser-level match semantics ---------------------------------------------


@dataclass(frozen=True)
class Traverser:
    """Execution token: current location, labeled path, hidden markers."""

    location: Value
    labeled_path: dict = field(default_factory=dict)
    hidden_labels: frozenset[str] = frozenset()


def bind(t: Traverser, var: str) -> Traverser | None:
    """Bind the traverser's location to a path label.

    Unbound label: record the location.  Already bound to the current
    location: unchanged.  Bound to something else: the traverser dies
    (None).
    """
    bound = t.labeled_path.get(var)
    if bound is None:
        return replace(t, labeled_path={**t.labeled_path, var: t.location})
    if values_equal(bound, t.location):
        return t
    return None


def _run_chain(chain: PatternChain, g: Graph, t: Traverser) -> list[Traverser]:
    """Execute one pattern for one traverser; may fork or die."""
    start = t.labeled_path[chain.start_var]
    current = [replace(t, location=start)]
    for op in chain.ops:
        next_gen: list[Traverser] = []
        for tr in current:
            loc = tr.location
            if isinstance(op, ChainTraverse):
                if not isinstance(loc, VertexRef):
                    raise EvaluationError(f"traverse requires a vertex, got {loc!r}")
                if op.direction == alg.OUT:
                    pairs = g.out_adjacent(loc.id, op.edge_label)
                else:
                    pairs = g.in_adjacent(loc.id, op.edge_label)
                next_gen.extend(replace(tr, location=VertexRef(v)) for _, v in pairs)
            elif isinstance(op, ChainLabel):
                if _is_ref(loc) and g.element_label(loc) == op.label:
                    next_gen.append(tr)
            elif isinstance(op, ChainHas):
                if not _is_ref(loc):
                    continue
                value = g.ref_property(loc, op.key)
                if value is None:
                    continue
                if op.value is None or values_equal(value, op.value):
                    next_gen.append(tr)
            elif isinstance(op, ChainValues):
                if not _is_ref(loc):
                    continue
                value = g.ref_property(loc, op.key)
                if value is not None:
                    next_gen.append(replace(tr, location=value))
            else:  # pragma: no cover
                raise EvaluationError(f"unknown chain operator {op!r}")
        current = next_gen
    if chain.end_var is not None:
        bound = (bind(tr, chain.end_var) for tr in current)
        current = [tr for tr in bound if tr is not None]
    return current


def eval_match(chains: list[PatternChain], g: Graph, t: Traverser) -> BindingSet:
    """Run match() for a single seeded traverser.

    Repeatedly executes the first pattern (in list order) whose start
    variable is bound and whose hidden marker is unset, appending the
    marker afterwards so each pattern runs exactly once per traverser.
    A traverser with unexecuted patterns and none runnable means a pattern
    whose start can never bind: an error.
    """
    markers = [f"m{i + 1}" for i in range(len(chains))]
    columns: list[str] = []
    for chain in chains:
        for v in chain.vars:
            if v not in columns:
                columns.append(v)

    finished: list[Traverser] = []
    work = [t]
    while work:
        tr = work.pop()
        runnable = next(
            (
                i
                for i, chain in enumerate(chains)
                if markers[i] not in tr.hidden_labels
                and chain.start_var in tr.labeled_path
            ),
            None,
        )
        if runnable is None:
            if len(tr.hidden_labels) == len(chains):
                finished.append(tr)
                continue
            missing = [
                chains[i].start_var
                for i in range(len(chains))
                if markers[i] not in tr.hidden_labels
            ]
            raise UnboundPatternError(
                f"pattern(s) starting at {missing} can never run: start variable unbound"
            )
        produced = _run_chain(chains[runnable], g, tr)
        marker = markers[runnable]
        work.extend(
            replace(p, hidden_labels=p.hidden_labels | {marker}) for p in produced
        )

    rows = [{v: tr.labeled_path[v] for v in columns} for tr in finished]
    return BindingSet(tuple(columns), rows)


def match_entry_var(chains: list[PatternChain]) -> str:
    """First start variable from which every pattern becomes runnable."""
    candidates = []
    for chain in chains:
        if chain.start_var not in candidates:
            candidates.append(chain.start_var)
    for candidate in candidates:
        bound = {candidate}
        done: set[int] = set()
        progressed = True
        while progressed:
            progressed = False
            for i, chain in enumerate(chains):
                if i in done or chain.start_var not in bound:
                    continue
                done.add(i)
                bound.update(chain.vars)
                progressed = True
        if len(done) == len(chains):
            return candidate
    raise UnboundPatternError(
        "no entry variable reaches every pattern; the match is disconnected"
    )


def match_all(chains: list[PatternChain], g: Graph) -> BindingSet:
    """Run match() seeded at every vertex (the g.V().match(...) shape)."""
    entry = match_entry_var(chains)
    merged: BindingSet | None = None
    for vid in g.vertex_ids():
        ref = VertexRef(vid)
        t = Traverser(location=ref, labeled_path={entry: ref})
        result = eval_match(chains, g, t)
        merged = result if merged is None else multiset_union(merged, result)
    return merged if merged is not None else BindingSet((), [])


# -- brute-force oracle -------------------------------------------------------------

MAX_ORACLE_VARS = 6


@dataclass(frozen=True)
class PatternVertex:
    """A pattern variable with optional label/property constraints."""

    var: str
    label: str | None = None
    props: tuple[tuple[str, str, PropertyValue], ...] = ()
    has_keys: tuple[str, ...] = ()


@dataclass(frozen=True)
class PatternEdge:
    src: str
    dst: str
    label: str | None = None


@dataclass(frozen=True)
class OracleGraphPattern:
    vertices: tuple[PatternVertex, ...]
    edges: tuple[PatternEdge, ...] = ()
    # value extractions: (vertex var, property key, value var)
    values: tuple[tuple[str, str, str], ...] = ()


def oracle_match(pattern: OracleGraphPattern, g: Graph) -> BindingSet:
    """Enumerate every assignment of pattern variables to graph vertices.

    An assignment survives when all vertex constraints hold; its
    multiplicity is the product over pattern edges of the number of graph
    edges realizing them (label included).  Value extractions append the
    property values of assigned vertices, dropping assignments where the
    key is absent.
    """
    if len(pattern.vertices) > MAX_ORACLE_VARS:
        raise EvaluationError(
            f"oracle pattern has {len(pattern.vertices)} variables; limit is {MAX_ORACLE_VARS}"
        )
    declared = {pv.var for pv in pattern.vertices}
    for edge in pattern.edges:
        if edge.src not in declared or edge.dst not in declared:
            raise EvaluationError(f"pattern edge {edge} references an undeclared variable")
    for vvar, _key, _tvar in pattern.values:
        if vvar not in declared:
            raise EvaluationError(f"value extraction references undeclared variable {vvar!r}")

    columns = [pv.var for pv in pattern.vertices] + [tv for _, _, tv in pattern.values]
    rows: list[Row] = []
    vertex_ids = g.vertex_ids()
    for combo in itertools.product(vertex_ids, repeat=len(pattern.vertices)):
        assignment = {pv.var: vid for pv, vid in zip(pattern.vertices, combo)}
        ok = True
        for pv, vid in zip(pattern.vertices, combo):
            if pv.label is not None and g.vertex_label(vid) != pv.label:
                ok = False
                break
            for key, cmp, const in pv.props:
                val = g.element_property(vid, key)
                if val is None or not _compare(val, cmp, const):
                    ok = False
                    break
            if not ok:
                break
            for key in pv.has_keys:
                if g.element_property(vid, key) is None:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue

        multiplicity = 1
        for edge in pattern.edges:
            src = assignment[edge.src]
            dst = assignment[edge.dst]
            count = sum(
                1 for _eid, target in g.out_adjacent(src, edge.label) if target == dst
            )
            multiplicity *= count
            if multiplicity == 0:
                break
        if multiplicity == 0:
            continue

        row: Row = {v: VertexRef(vid) for v, vid in assignment.items()}
        dead = False
        for vvar, key, tvar in pattern.values:
            val = g.element_property(assignment[vvar], key)
            if val is None:
                dead = True
                break
            row[tvar] = val
        if dead:
            continue
        rows.extend(dict(row) for _ in range(multiplicity))
    return BindingSet(tuple(columns), rows)


# -- result serialization -------------------------------------------------------------


def _encode_value(v: Value) -> object:
    if isinstance(v, VertexRef):
        return {"vertex": v.id}
    if isinstance(v, EdgeRef):
        return {"edge": v.id}
    return v


def to_jsonl(result: BindingSet) -> str:
    """One JSON object per row; element references as {"vertex": id} /
    {"edge": id}; schema-less rows as {"value": ...}."""
    lines = []
    for row in result.rows:
        if result.columns:
            obj = {c: _encode_value(row[c]) for c in result.columns if c in row}
        else:
            obj = {"value": _encode_value(row.get(CUR))}
        lines.append(json.dumps(obj, sort_keys=False, separators=(",", ":")))
    return "\n".join(lines)


def _format_cell(v: Value) -> str:
    if isinstance(v, (VertexRef, EdgeRef)):
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def to_table(result: BindingSet) -> str:
    """Aligned text table; schema-less results print one bare value per row.
    Empty results render as the empty string."""
    if not result.rows:
        return ""
    if not result.columns:
        return "\n".join(_format_cell(row.get(CUR)) for row in result.rows)
    headers = list(result.columns)
    cells = [
        [_format_cell(row[c]) if c in row else "" for c in headers]
        for row in result.rows
    ]
    widths = [
        max(len(headers[i]), *(len(r[i]) for r in cells)) if cells else len(headers[i])
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join("-" * w for w in widths).rstrip(),
    ]
    for r in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines)

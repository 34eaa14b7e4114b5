"""Ground-truth machinery: per-world deterministic query evaluation, the
bound-verification check via tuple-matching feasibility, and tightness proxies.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .aggregation import AVG, monoid_fold, monoid_identity, star
from .errors import SchemaMismatch
from .expr import eval_det
from .flow import feasible_assignment
from .relation import AURelation, DetRelation, Schema, sg_world, tuple_bounds
from .values import is_numeric, nat_monus


@dataclass
class IncompleteDB:
    """Explicit possible worlds of a database plus the selected-guess index."""

    worlds: List[Dict[str, DetRelation]]
    selected: int

    def __post_init__(self):
        if not (0 <= self.selected < len(self.worlds)):
            raise SchemaMismatch(f"selected world index {self.selected} out of range")

    def selected_world(self) -> Dict[str, DetRelation]:
        return self.worlds[self.selected]


def bounds_world(rel: AURelation, world: DetRelation) -> bool:
    """Feasibility of one tuple matching meeting exact world multiplicities and
    the AU rows' annotation intervals simultaneously."""
    if rel.schema.kinds != world.schema.kinds:
        raise SchemaMismatch("schema kinds differ between AU relation and world")
    au_rows = list(rel.rows())
    det_rows = list(world.rows())
    edges = []
    for d, (tup, _) in enumerate(det_rows):
        for a, (rtup, _) in enumerate(au_rows):
            if tuple_bounds(tup, rtup):
                edges.append((d, a))
    return feasible_assignment(
        [mult for _, mult in det_rows],
        [(ann.lb, ann.ub) for _, ann in au_rows],
        edges,
    )


def bounds_idb_relation(rel: AURelation, worlds: Sequence[DetRelation], selected: int) -> bool:
    if sg_world(rel) != worlds[selected]:
        return False
    return all(bounds_world(rel, w) for w in worlds)


def check_bounds(
    au_result: AURelation, world_results: Sequence[DetRelation], selected: int
) -> Tuple[bool, Optional[str]]:
    """bounds_idb with a human-readable reason for failures."""
    if sg_world(au_result) != world_results[selected]:
        return False, f"selected-guess world differs from world {selected}"
    for i, w in enumerate(world_results):
        if not bounds_world(au_result, w):
            return False, f"world {i} is not bounded"
    return True, None


def eval_det_query(plan, catalog: Dict[str, DetRelation]) -> DetRelation:
    """Standard bag semantics for a query plan over deterministic relations.

    Set difference uses truncating subtraction; aggregation pairs values with
    multiplicities through the monoid's scalar action. The AU-only operators
    (combine, compress) are identities here.
    """
    from . import plan as p

    if isinstance(plan, p.Table):
        try:
            return catalog[plan.name]
        except KeyError:
            raise SchemaMismatch(f"unknown table {plan.name!r}") from None
    if isinstance(plan, p.Select):
        child = eval_det_query(plan.child, catalog)
        pairs = []
        for tup, mult in child.rows():
            if eval_det(plan.pred, dict(zip(child.schema.names, tup))):
                pairs.append((tup, mult))
        return DetRelation(child.schema, pairs)
    if isinstance(plan, p.Project):
        child = eval_det_query(plan.child, catalog)
        out_schema = p.infer_schema(plan, {n: r.schema for n, r in catalog.items()})
        pairs = []
        for tup, mult in child.rows():
            env = dict(zip(child.schema.names, tup))
            pairs.append((tuple(eval_det(e, env) for e, _ in plan.items), mult))
        return DetRelation(out_schema, pairs)
    if isinstance(plan, p.Cross) or isinstance(plan, p.Join):
        left = eval_det_query(plan.left, catalog)
        right = eval_det_query(plan.right, catalog)
        out_schema = left.schema.concat(right.schema)
        pairs = []
        for lt, lm in left.rows():
            for rt, rm in right.rows():
                pairs.append((lt + rt, lm * rm))
        out = DetRelation(out_schema, pairs)
        if isinstance(plan, p.Join):
            pairs = [
                (tup, mult)
                for tup, mult in out.rows()
                if eval_det(plan.pred, dict(zip(out_schema.names, tup)))
            ]
            out = DetRelation(out_schema, pairs)
        return out
    if isinstance(plan, p.Union):
        left = eval_det_query(plan.left, catalog)
        right = eval_det_query(plan.right, catalog)
        if left.schema != right.schema:
            raise SchemaMismatch("union over different schemas")
        return DetRelation(left.schema, list(left.rows()) + list(right.rows()))
    if isinstance(plan, p.Diff):
        left = eval_det_query(plan.left, catalog)
        right = eval_det_query(plan.right, catalog)
        if left.schema != right.schema:
            raise SchemaMismatch("difference over different schemas")
        pairs = [
            (tup, nat_monus(mult, right.multiplicity(tup))) for tup, mult in left.rows()
        ]
        return DetRelation(left.schema, pairs)
    if isinstance(plan, p.Aggregate):
        return _det_aggregate(plan, eval_det_query(plan.child, catalog), catalog)
    if isinstance(plan, p.Rename):
        child = eval_det_query(plan.child, catalog)
        return DetRelation(child.schema.renamed(plan.as_dict), list(child.rows()))
    if isinstance(plan, p.Combine):
        return eval_det_query(plan.child, catalog)
    if isinstance(plan, p.Compress):
        return eval_det_query(plan.child, catalog)
    raise SchemaMismatch(f"unknown plan node {plan!r}")


def _det_aggregate(plan, child: DetRelation, catalog) -> DetRelation:
    from . import plan as p
    from .aggregation import _expand_avg

    out_schema = p.infer_schema(plan, {n: r.schema for n, r in catalog.items()})
    g_idx = [child.schema.index(a) for a in plan.group]
    groups: Dict[tuple, List[Tuple[tuple, int]]] = {}
    if plan.group:
        for tup, mult in child.rows():
            groups.setdefault(tuple(tup[i] for i in g_idx), []).append((tup, mult))
    else:
        groups[()] = list(child.rows())

    pairs = []
    for key, members in groups.items():
        out = list(key)
        for spec in plan.aggs:
            parts = []
            for fn, expr in _expand_avg(spec):
                acc = monoid_identity(fn)
                for tup, mult in members:
                    val = eval_det(expr, dict(zip(child.schema.names, tup)))
                    acc = monoid_fold(fn, acc, star(fn, mult, val))
                parts.append(acc)
            if spec.fn == AVG:
                s, c = parts
                out.append(0.0 if c == 0 else s / c)
            else:
                out.append(parts[0])
        pairs.append((tuple(out), 1))
    return DetRelation(out_schema, pairs)


def tightness_metrics(rel: AURelation) -> Dict[str, float]:
    """Computable tightness proxies: summed interval widths over numeric
    attributes, summed annotation slack, and the row count. Used only for
    monotonicity comparisons, never as a correctness claim."""
    attr_width = 0.0
    ann_slack = 0
    numeric = [i for i, k in enumerate(rel.schema.kinds) if is_numeric(k)]
    for tup, ann in rel.rows():
        for i in numeric:
            attr_width += float(tup[i].ub) - float(tup[i].lb)
        ann_slack += ann.ub - ann.lb
    return {
        "attr_width": attr_width,
        "ann_slack": float(ann_slack),
        "rows": float(len(rel)),
        "total_slack": attr_width + float(ann_slack),
    }

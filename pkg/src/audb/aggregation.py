"""Bound-preserving aggregation: monoids, the annotation/value pairing, the
default grouping strategy and the group/aggregate/annotation bound rules.

Group membership of a row may be uncertain (ranged group-by values, or the row
may be absent). Bounds for an output group therefore take the minimum/maximum
over two scenarios: the group at the output's own selected-guess key (which
contains every certainly-present row with certain group-by values) and
"escaped" groups formed at other key values inside the output's bounds by rows
with uncertain group-by values. A group that is matched at all is non-empty,
which tightens the bounds of outputs whose members are all optional.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import EmptyAggregateWarning, TypeMismatch
from .expr import Const, Expr, eval_range, infer_kind
from .relation import AURelation, AUTuple, DetTuple, Schema
from .values import (
    INT,
    REAL,
    AUMult,
    ONE,
    RangeValue,
    Scalar,
    is_numeric,
    kind_of,
    zero_of_kind,
)

SUM = "sum"
MIN = "min"
MAX = "max"
COUNT = "count"
AVG = "avg"

AGG_FNS = (SUM, MIN, MAX, COUNT, AVG)


@dataclass(frozen=True)
class AggSpec:
    fn: str
    expr: Optional[Expr]  # None only for count(*)
    name: str

    def __post_init__(self):
        if self.fn not in AGG_FNS:
            raise TypeMismatch(f"unknown aggregate {self.fn!r}")
        if self.expr is None and self.fn != COUNT:
            raise TypeMismatch(f"aggregate {self.fn} needs an input expression")


def monoid_identity(fn: str) -> Scalar:
    if fn == SUM:
        return 0
    if fn == MIN:
        return float("inf")
    if fn == MAX:
        return float("-inf")
    raise TypeMismatch(f"no monoid for {fn!r}")


def monoid_fold(fn: str, a: Scalar, b: Scalar) -> Scalar:
    if fn == SUM:
        return a + b
    if fn == MIN:
        return min(a, b)
    return max(a, b)


def star(fn: str, k: int, m: Scalar) -> Scalar:
    """Scalar action pairing a multiplicity with an aggregation input value."""
    if fn == SUM:
        if not is_numeric(kind_of(m)):
            raise TypeMismatch(f"sum over non-numeric value {m!r}")
        # zero copies contribute zero even for non-finite sentinels
        return zero_of_kind(kind_of(m)) if k == 0 else k * m
    if fn in (MIN, MAX):
        return m if k != 0 else zero_of_kind(kind_of(m))
    raise TypeMismatch(f"no scalar action for {fn!r}")


def smb(k: AUMult, m: RangeValue, fn: str) -> RangeValue:
    """Pair an annotation triple with a range value under a monoid.

    Deliberately not a semimodule: bounds are the min/max over the four corner
    products, which is what makes the operation bound-preserving.
    """
    corners = (
        star(fn, k.lb, m.lb),
        star(fn, k.lb, m.ub),
        star(fn, k.ub, m.lb),
        star(fn, k.ub, m.ub),
    )
    return RangeValue(min(corners), star(fn, k.sg, m.sg), max(corners))


@dataclass
class GroupAssignment:
    """Default grouping strategy: one output per distinct selected-guess key."""

    group_attrs: Tuple[str, ...]
    members: Dict[DetTuple, List[Tuple[AUTuple, AUMult]]]

    @property
    def groups(self):
        return self.members.keys()


def assign_groups(group_by: Sequence[str], rel: AURelation) -> GroupAssignment:
    idx = [rel.schema.index(a) for a in group_by]
    members: Dict[DetTuple, List[Tuple[AUTuple, AUMult]]] = {}
    for tup, ann in rel.rows():
        key = tuple(tup[i].sg for i in idx)
        members.setdefault(key, []).append((tup, ann))
    return GroupAssignment(tuple(group_by), members)


def group_bounds(ga: GroupAssignment, rel_schema: Schema, g: DetTuple) -> Tuple[RangeValue, ...]:
    """Envelope of the members' group-by ranges, selected guess pinned to the key."""
    idx = [rel_schema.index(a) for a in ga.group_attrs]
    members = ga.members[g]
    return tuple(
        RangeValue(
            min(m[0][i].lb for m in members),
            g[pos],
            max(m[0][i].ub for m in members),
        )
        for pos, i in enumerate(idx)
    )


def _present_ann(cand: "_Cand") -> AUMult:
    """Multiplicity a single group sees from this row, given the group contains
    the row at all. Rows with certain group-by values put every duplicate into
    one group; rows with ranged group-by values may spread duplicates over
    several groups, so one group is only guaranteed a single duplicate."""
    lo = max(1, cand.ann.lb) if cand.gb_certain else 1
    sg = min(max(cand.ann.sg, lo), cand.ann.ub)
    return AUMult(lo, sg, cand.ann.ub)


@dataclass
class _Cand:
    tup: AUTuple
    ann: AUMult
    gb_certain: bool
    escapable: bool  # group-by values carry genuine width
    forced: bool  # certainly present with certain group-by values


def _classify(tup: AUTuple, ann: AUMult, g_idx: Sequence[int]) -> _Cand:
    gb_certain = all(tup[i].is_certain for i in g_idx)
    return _Cand(tup, ann, gb_certain, not gb_certain, gb_certain and ann.lb > 0)


def _value_bounds(fn: str, cands: List[_Cand], vals: List[RangeValue],
                  anchored: List[bool], can_escape: List[bool]) -> Tuple[Scalar, Scalar]:
    """Lower/upper bound of the aggregate over every group the output may match."""
    ident = monoid_identity(fn)
    lows = [smb(c.ann, v, fn).lb for c, v in zip(cands, vals)]
    highs = [smb(c.ann, v, fn).ub for c, v in zip(cands, vals)]
    pres_low = [smb(_present_ann(c), v, fn).lb for c, v in zip(cands, vals)]
    pres_high = [smb(_present_ann(c), v, fn).ub for c, v in zip(cands, vals)]

    def fold(parts):
        acc = ident
        for p in parts:
            acc = monoid_fold(fn, acc, p)
        return acc

    forced_ids = [i for i, c in enumerate(cands) if c.forced]
    if forced_ids:
        lb = fold(
            [lows[i] for i in forced_ids]
            + [min(ident, lows[i]) for i, c in enumerate(cands) if not c.forced]
        )
        ub = fold(
            [highs[i] for i in forced_ids]
            + [max(ident, highs[i]) for i, c in enumerate(cands) if not c.forced]
        )
    else:
        # The anchor group, when matched, is non-empty.
        lb = ub = None
        for i, ok in enumerate(anchored):
            if not ok:
                continue
            cand_lb = fold(
                [pres_low[i]] + [min(ident, lows[j]) for j in range(len(cands)) if j != i]
            )
            cand_ub = fold(
                [pres_high[i]] + [max(ident, highs[j]) for j in range(len(cands)) if j != i]
            )
            lb = cand_lb if lb is None else min(lb, cand_lb)
            ub = cand_ub if ub is None else max(ub, cand_ub)
        if lb is None:
            lb, ub = ident, ident

    # Escaped groups: formed inside the output's bounds, away from the key,
    # exclusively by rows with uncertain group-by values.
    esc_ids = [i for i, c in enumerate(cands) if c.escapable]
    for i in esc_ids:
        if not can_escape[i]:
            continue
        others = [min(ident, lows[j]) for j in esc_ids if j != i]
        lb = min(lb, fold([pres_low[i]] + others))
        others = [max(ident, highs[j]) for j in esc_ids if j != i]
        ub = max(ub, fold([pres_high[i]] + others))
    return lb, ub


def _clamp(value: Scalar, lb: Scalar, ub: Scalar) -> Scalar:
    if value < lb:
        return lb
    if value > ub:
        return ub
    return value


def _agg_value_expr(spec: AggSpec) -> Expr:
    return Const(1) if spec.expr is None else spec.expr


def _result_kind(spec: AggSpec, attr_kinds: Dict[str, str]) -> str:
    if spec.fn == COUNT:
        return INT
    if spec.fn == AVG:
        kind = infer_kind(spec.expr, attr_kinds)
        if not is_numeric(kind):
            raise TypeMismatch("avg over non-numeric input")
        return REAL
    kind = infer_kind(spec.expr, attr_kinds)
    if not is_numeric(kind):
        raise TypeMismatch(f"{spec.fn} aggregate requires numeric input, got {kind}")
    return kind


def _avg_from(sum_rv: RangeValue, cnt_rv: RangeValue) -> RangeValue:
    if cnt_rv.ub == 0:
        return RangeValue(0.0, 0.0, 0.0)
    lo_cnt = max(1, cnt_rv.lb)
    ratios = [
        sum_rv.lb / lo_cnt,
        sum_rv.lb / cnt_rv.ub,
        sum_rv.ub / lo_cnt,
        sum_rv.ub / cnt_rv.ub,
    ]
    if cnt_rv.lb == 0:
        ratios.append(0.0)
    sg = 0.0 if cnt_rv.sg == 0 else sum_rv.sg / cnt_rv.sg
    lb, ub = min(ratios), max(ratios)
    return RangeValue(lb, _clamp(sg, lb, ub), ub)


def aggregate(
    group_by: Sequence[str],
    aggs: Sequence[AggSpec],
    rel: AURelation,
    pool: Optional[AURelation] = None,
) -> AURelation:
    """Grouped or scalar aggregation over an AU-relation.

    ``pool`` optionally replaces the candidate rows used for aggregate value
    bounds (the optimizer passes a compressed relation); group keys, selected
    guesses and output annotations always come from ``rel`` itself.
    """
    attr_kinds = rel.schema.attr_kinds()
    names = [s.name for s in aggs]
    if len(set(names)) != len(names):
        raise TypeMismatch(f"duplicate aggregate output names: {names}")
    kinds = [_result_kind(s, attr_kinds) for s in aggs]
    if group_by:
        return _aggregate_grouped(list(group_by), list(aggs), kinds, rel, pool)
    return _aggregate_scalar(list(aggs), kinds, rel)


def _expand_avg(spec: AggSpec) -> List[Tuple[str, Expr]]:
    # avg is derived from sum and count computed over the same candidates.
    if spec.fn == AVG:
        return [(SUM, spec.expr), (SUM, Const(1))]
    if spec.fn == COUNT:
        return [(SUM, Const(1))]
    return [(spec.fn, spec.expr)]


def _aggregate_scalar(aggs, kinds, rel: AURelation) -> AURelation:
    schema = Schema(tuple(s.name for s in aggs), tuple(kinds))
    rows = list(rel.rows())
    out_values: List[RangeValue] = []
    sentinel_seen = False
    for spec in aggs:
        parts = []
        for fn, expr in _expand_avg(spec):
            ident = monoid_identity(fn)
            lb = ub = ident
            sg = ident
            for tup, ann in rows:
                env = dict(zip(rel.schema.names, tup))
                val = eval_range(expr, env)
                pair = smb(ann, val, fn)
                if ann.lb > 0:
                    lb = monoid_fold(fn, lb, pair.lb)
                    ub = monoid_fold(fn, ub, pair.ub)
                else:
                    lb = monoid_fold(fn, lb, min(ident, pair.lb))
                    ub = monoid_fold(fn, ub, max(ident, pair.ub))
                if ann.sg > 0:
                    sg = monoid_fold(fn, sg, pair.sg)
            parts.append(RangeValue(lb, _clamp(sg, lb, ub), ub))
        if spec.fn == AVG:
            rv = _avg_from(parts[0], parts[1])
        else:
            rv = parts[0]
        if any(v in (float("inf"), float("-inf")) for v in (rv.lb, rv.sg, rv.ub)):
            sentinel_seen = True
        out_values.append(rv)
    if sentinel_seen:
        warnings.warn(
            "min/max aggregate over possibly empty input produced a sentinel",
            EmptyAggregateWarning,
        )
    return AURelation(schema, [(tuple(out_values), ONE)])


def _aggregate_grouped(group_by, aggs, kinds, rel: AURelation, pool) -> AURelation:
    schema = rel.schema
    g_idx = [schema.index(a) for a in group_by]
    ga = assign_groups(group_by, rel)
    pool_rows = list((pool or rel).rows())
    pool_cands = [_classify(t, a, g_idx) for t, a in pool_rows]

    out_names = tuple(group_by) + tuple(s.name for s in aggs)
    out_kinds = tuple(schema.kinds[i] for i in g_idx) + tuple(kinds)
    out_schema = Schema(out_names, out_kinds)

    pairs = []
    for g in ga.groups:
        bounds = group_bounds(ga, schema, g)
        cands: List[_Cand] = []
        anchored: List[bool] = []
        can_escape: List[bool] = []
        for cand in pool_cands:
            rects = [cand.tup[i] for i in g_idx]
            if not all(r.overlaps(b) for r, b in zip(rects, bounds)):
                continue
            if cand.gb_certain and any(r.sg != gv for r, gv in zip(rects, g)):
                continue  # pinned to a different group; covered by its own output
            cands.append(cand)
            anchored.append(all(r.contains(gv) for r, gv in zip(rects, g)))
            inter_is_key = all(
                max(r.lb, b.lb) == gv and min(r.ub, b.ub) == gv
                for r, b, gv in zip(rects, bounds, g)
            )
            can_escape.append(not inter_is_key)

        members = ga.members[g]
        out_row: List[RangeValue] = list(bounds)
        for spec in aggs:
            parts = []
            for fn, expr in _expand_avg(spec):
                vals = [
                    eval_range(expr, dict(zip(schema.names, c.tup))) for c in cands
                ]
                lb, ub = _value_bounds(fn, cands, vals, anchored, can_escape)
                ident = monoid_identity(fn)
                sg = ident
                for tup, ann in members:
                    if ann.sg > 0:
                        val = eval_range(expr, dict(zip(schema.names, tup)))
                        sg = monoid_fold(fn, sg, star(fn, ann.sg, val.sg))
                parts.append(RangeValue(lb, _clamp(sg, lb, ub), ub))
            out_row.append(_avg_from(parts[0], parts[1]) if spec.fn == AVG else parts[0])

        certain_ub = sum(a.ub for t, a in members if all(t[i].is_certain for i in g_idx))
        uncertain_ub = sum(a.ub for t, a in members if not all(t[i].is_certain for i in g_idx))
        ann = AUMult(
            1 if any(
                a.lb > 0 and all(t[i].is_certain for i in g_idx) for t, a in members
            ) else 0,
            1 if any(a.sg > 0 for t, a in members) else 0,
            (1 if certain_ub > 0 else 0) + uncertain_ub,
        )
        if not ann.is_zero:
            pairs.append((tuple(out_row), ann))
    return AURelation(out_schema, pairs)

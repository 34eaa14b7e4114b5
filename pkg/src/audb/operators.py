"""Relational algebra over AU-relations: selection, projection, product, union,
set difference and renaming. All operators are pure relation -> relation maps.
"""
from __future__ import annotations

from typing import Dict, Sequence, Tuple

from .errors import SchemaMismatch
from .expr import Expr, eval_range, infer_kind
from .relation import (
    AURelation,
    AUTuple,
    Schema,
    cert_equal,
    overlaps,
    sg_combine,
    sg_tuple,
)
from .values import AUMult, RangeValue, au_mul, nat_monus, rlift


def row_valuation(schema: Schema, tup: AUTuple) -> Dict[str, RangeValue]:
    return dict(zip(schema.names, tup))


def select(theta: Expr, rel: AURelation) -> AURelation:
    """Multiply each row's annotation with the lifted condition result."""
    pairs = []
    for tup, ann in rel.rows():
        cond = eval_range(theta, row_valuation(rel.schema, tup))
        out = au_mul(ann, rlift(cond))
        if not out.is_zero:
            pairs.append((tup, out))
    return AURelation(rel.schema, pairs)


def project(items: Sequence[Tuple[Expr, str]], rel: AURelation) -> AURelation:
    """Generalized projection; colliding output tuples merge by annotation addition."""
    kinds = rel.schema.attr_kinds()
    out_schema = Schema(
        tuple(name for _, name in items),
        tuple(infer_kind(e, kinds) for e, _ in items),
    )
    pairs = []
    for tup, ann in rel.rows():
        env = row_valuation(rel.schema, tup)
        pairs.append((tuple(eval_range(e, env) for e, _ in items), ann))
    return AURelation(out_schema, pairs)


def cross(left: AURelation, right: AURelation) -> AURelation:
    out_schema = left.schema.concat(right.schema)
    pairs = []
    for lt, la in left.rows():
        for rt, ra in right.rows():
            pairs.append((lt + rt, au_mul(la, ra)))
    return AURelation(out_schema, pairs)


def join(theta: Expr, left: AURelation, right: AURelation) -> AURelation:
    return select(theta, cross(left, right))


def union(left: AURelation, right: AURelation) -> AURelation:
    if left.schema != right.schema:
        raise SchemaMismatch(
            f"union over different schemas: {left.schema.names} vs {right.schema.names}"
        )
    return AURelation(left.schema, list(left.rows()) + list(right.rows()))


def difference(left: AURelation, right: AURelation) -> AURelation:
    """Bound-preserving set difference.

    The LHS is SG-combined first; then per combined row the three annotation
    components subtract different aggregates of the RHS: everything that may
    coincide (overlap) for the lower bound, the SG-equal rows for the selected
    guess, and only certainly-equal rows for the upper bound.
    """
    if left.schema != right.schema:
        raise SchemaMismatch(
            f"difference over different schemas: {left.schema.names} vs {right.schema.names}"
        )
    combined = sg_combine(left)
    rhs = list(right.rows())
    pairs = []
    for tup, ann in combined.rows():
        key = sg_tuple(tup)
        sub_lb = sum(ra.ub for rt, ra in rhs if overlaps(tup, rt))
        sub_sg = sum(ra.sg for rt, ra in rhs if sg_tuple(rt) == key)
        sub_ub = sum(ra.lb for rt, ra in rhs if cert_equal(tup, rt))
        out = AUMult(
            nat_monus(ann.lb, sub_lb),
            nat_monus(ann.sg, sub_sg),
            nat_monus(ann.ub, sub_ub),
        )
        if out.ub > 0:
            pairs.append((tup, out))
    return AURelation(combined.schema, pairs)


def rename(mapping: Dict[str, str], rel: AURelation) -> AURelation:
    return AURelation(rel.schema.renamed(mapping), list(rel.rows()))

"""Performance variants of join and aggregation: split operators, equi-depth
bucket compression, and the compressed join/aggregation paths. All of them are
bound-preserving but may loosen bounds.
"""
from __future__ import annotations

import warnings
from typing import Optional, Tuple

from .errors import AudbError
from .expr import And, Eq, Expr, Var
from .operators import join, select, union
from .relation import AURelation, Schema, sg_tuple
from .values import AUMult, RangeValue, au_mul


def bg_split(rel: AURelation) -> AURelation:
    """Selected-guess part: rows grouped by their fully certainized sg tuples.

    Only members whose attribute values are all certain feed the lower bound;
    the sg and upper components both carry the summed sg multiplicities.
    """
    groups = {}
    for tup, ann in rel.rows():
        key = sg_tuple(tup)
        entry = groups.setdefault(key, [0, 0])
        if all(rv.is_certain for rv in tup):
            entry[0] += ann.lb
        entry[1] += ann.sg
    pairs = []
    for key, (lb, sg) in groups.items():
        certain = tuple(RangeValue.certain(v) for v in key)
        pairs.append((certain, AUMult(lb, sg, sg)))
    return AURelation(rel.schema, pairs)


def ub_split(rel: AURelation) -> AURelation:
    """Possible part: same tuples, annotations collapsed to (0, 0, ub)."""
    return AURelation(
        rel.schema, [(tup, AUMult(0, 0, ann.ub)) for tup, ann in rel.rows()]
    )


def compress(rel: AURelation, attr: str, n: int) -> AURelation:
    """Equi-depth bucket compression on one attribute.

    Rows are sorted by (lb, ub) of the attribute and chunked into n contiguous
    buckets; each bucket becomes a single row with enveloped attribute bounds
    (selected guesses taken from the first member) annotated (0, 0, sum of ub).
    """
    if n < 1:
        raise AudbError(f"compression size must be >= 1, got {n}")
    rows = list(rel.rows())
    if len(rows) <= n:
        return rel
    i = rel.schema.index(attr)
    order = sorted(range(len(rows)), key=lambda r: (rows[r][0][i].lb, rows[r][0][i].ub, r))
    pairs = []
    for b in range(n):
        lo = (b * len(rows)) // n
        hi = ((b + 1) * len(rows)) // n
        if lo == hi:
            continue
        members = [rows[r] for r in order[lo:hi]]
        first = members[0][0]
        bucket_tuple = tuple(
            RangeValue(
                min(m[0][j].lb for m in members),
                first[j].sg,
                max(m[0][j].ub for m in members),
            )
            for j in range(len(rel.schema))
        )
        pairs.append((bucket_tuple, AUMult(0, 0, sum(m[1].ub for m in members))))
    return AURelation(rel.schema, pairs)


def _equi_attrs(theta: Expr, left: Schema, right: Schema) -> Optional[Tuple[str, str]]:
    """Find one A = B conjunct with A from the left schema and B from the right."""
    if isinstance(theta, And):
        return _equi_attrs(theta.left, left, right) or _equi_attrs(theta.right, left, right)
    if isinstance(theta, Eq) and isinstance(theta.left, Var) and isinstance(theta.right, Var):
        a, b = theta.left.name, theta.right.name
        if a in left.names and b in right.names:
            return a, b
        if b in left.names and a in right.names:
            return b, a
    return None


def join_opt(
    theta: Expr, left: AURelation, right: AURelation, n: Optional[int]
) -> AURelation:
    """Split-and-compress join: exact join of the certainized sg parts, plus a
    compressed join of the possible parts, united. The possible part of the
    output is compressed again so it never exceeds n rows. ``n=None`` disables
    compression but keeps the split evaluation path.
    """
    attrs = _equi_attrs(theta, left.schema, right.schema)
    if attrs is None:
        warnings.warn("join condition has no usable equality; falling back to exact join")
        return join(theta, left, right)
    a, b = attrs

    sg_part = _hash_equi_join(theta, bg_split(left), bg_split(right), a, b)

    pos_left = ub_split(left)
    pos_right = ub_split(right)
    if n is not None:
        pos_left = compress(pos_left, a, n)
        pos_right = compress(pos_right, b, n)
    pos_part = join(theta, pos_left, pos_right)
    if n is not None:
        pos_part = compress(pos_part, a, n)
    return union(sg_part, pos_part)


def _hash_equi_join(theta: Expr, left: AURelation, right: AURelation, a: str, b: str) -> AURelation:
    # Both inputs are attribute-certain here, so hashing sg values on the
    # equality pair is exact; the remaining condition is applied on top.
    ai = left.schema.index(a)
    bi = right.schema.index(b)
    buckets = {}
    for tup, ann in right.rows():
        buckets.setdefault(tup[bi].sg, []).append((tup, ann))
    out_schema = left.schema.concat(right.schema)
    pairs = []
    for tup, ann in left.rows():
        for rtup, rann in buckets.get(tup[ai].sg, ()):
            pairs.append((tup + rtup, au_mul(ann, rann)))
    return select(theta, AURelation(out_schema, pairs))


def aggregate_opt(group_by, aggs, rel: AURelation, n: Optional[int]):
    """Aggregation with a compressed candidate pool for the value bounds.

    Selected-guess results, group bounds and output annotations are computed in
    the grouping pass over the uncompressed input.
    """
    from .aggregation import aggregate

    pool = None
    if group_by and n is not None:
        pool = compress(rel, group_by[0], n)
    return aggregate(group_by, aggs, rel, pool=pool)

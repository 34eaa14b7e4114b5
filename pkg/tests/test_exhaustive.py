"""Small-scale completeness checks: enumerate *every* world bounded by tiny
relations (per row, every multiset of in-rectangle tuples with a size inside
the annotation interval) and require the evaluated result to bound each one.
This subsumes spot goldens for the two operators with the subtlest semantics.
"""
import itertools
import random

from audb import (
    AURelation,
    DetRelation,
    Schema,
    aggregate,
    bounds_world,
    difference,
    sg_world,
)
from audb import plan as p
from audb.aggregation import AggSpec
from audb.expr import Var
from audb.oracle import eval_det_query
from audb.values import AUMult as M
from audb.values import RangeValue as RV


def bounded_worlds(rel, domain):
    per_row = []
    for tup, ann in rel.rows():
        rects = [[v for v in domain if rv.lb <= v <= rv.ub] for rv in tup]
        cells = list(itertools.product(*rects))
        choices = []
        for k in range(ann.lb, ann.ub + 1):
            choices.extend(itertools.combinations_with_replacement(cells, k))
        per_row.append(choices)
    seen = set()
    for assign in itertools.product(*per_row):
        bag = {}
        for combo in assign:
            for t in combo:
                bag[t] = bag.get(t, 0) + 1
        key = tuple(sorted(bag.items()))
        if key not in seen:
            seen.add(key)
            yield DetRelation(rel.schema, list(bag.items()))


def _enumeration_size(rel, domain):
    est = 1
    for tup, ann in rel.rows():
        cells = 1
        for rv in tup:
            cells *= len([v for v in domain if rv.lb <= v <= rv.ub])
        est *= sum(
            1
            for k in range(ann.lb, ann.ub + 1)
            for _ in itertools.combinations_with_replacement(range(cells), k)
        )
    return est


_ANNS = [
    M(a, b, c)
    for a in range(3)
    for b in range(a, 3)
    for c in range(b, 3)
    if c > 0
]


def _rand_rv(rng, domain):
    lo, sg, hi = sorted(rng.choice(domain) for _ in range(3))
    return RV(lo, sg, hi)


def test_grouped_aggregation_bounds_every_bounded_world():
    rng = random.Random(77)
    domain = [-1, 0, 1, 2]
    schema = Schema.of(("G", "int"), ("V", "int"))
    configs = 0
    while configs < 40:
        rows = [
            ((_rand_rv(rng, domain), _rand_rv(rng, domain)), rng.choice(_ANNS))
            for _ in range(rng.choice((1, 2, 2, 3)))
        ]
        rel = AURelation(schema, rows)
        if not len(rel) or _enumeration_size(rel, domain) > 2500:
            continue
        configs += 1
        worlds = list(bounded_worlds(rel, domain))
        for fn in ("sum", "count", "min", "max"):
            spec = [AggSpec(fn, None if fn == "count" else Var("V"), "f")]
            out = aggregate(["G"], spec, rel)
            node = p.Aggregate(("G",), tuple(spec), p.Table("R"))
            for world in worlds:
                det = eval_det_query(node, {"R": world})
                assert bounds_world(out, det), (fn, rows, sorted(world.rows()))
            assert sg_world(out) == eval_det_query(node, {"R": sg_world(rel)})


def test_difference_bounds_every_bounded_world_pair():
    rng = random.Random(123)
    domain = [0, 1, 2]
    schema = Schema.of(("A", "int"),)
    node = p.Diff(p.Table("L"), p.Table("R"))
    configs = 0
    while configs < 120:
        left = AURelation(
            schema, [((_rand_rv(rng, domain),), rng.choice(_ANNS)) for _ in range(rng.choice((1, 2)))]
        )
        right = AURelation(
            schema, [((_rand_rv(rng, domain),), rng.choice(_ANNS)) for _ in range(rng.choice((1, 2)))]
        )
        if not len(left) or not len(right):
            continue
        lws = list(bounded_worlds(left, domain))
        rws = list(bounded_worlds(right, domain))
        if len(lws) * len(rws) > 2500:
            continue
        configs += 1
        out = difference(left, right)
        for lw in lws:
            for rw in rws:
                det = eval_det_query(node, {"L": lw, "R": rw})
                assert bounds_world(out, det), (
                    list(left.rows()),
                    list(right.rows()),
                    sorted(lw.rows()),
                    sorted(rw.rows()),
                )
        det_sg = eval_det_query(node, {"L": sg_world(left), "R": sg_world(right)})
        assert sg_world(out) == det_sg

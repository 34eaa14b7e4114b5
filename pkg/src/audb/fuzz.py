"""Randomized end-to-end harness: small possible-worlds databases, AU-DBs that
bound them by construction (certain encodings, then random widening and row
merging), and random typed plans. Used by the acceptance suite and the CLI's
``check --fuzz`` mode.
"""
from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import plan as p
from .aggregation import AggSpec
from .errors import AudbError
from .expr import And, Const, Eq, Leq, Plus, Times, Var, gt, lt, neq
from .oracle import IncompleteDB, bounds_world, eval_det_query
from .relation import AURelation, DetRelation, Schema, sg_world
from .values import AUMult, RangeValue

_STRINGS = ("ash", "beech", "cedar", "elm", "fir")


@dataclass
class FuzzCase:
    schemas: Dict[str, Schema]
    idb: IncompleteDB
    audb: Dict[str, AURelation]
    plan: p.Plan


def _random_schema(rng: random.Random, with_str: bool) -> Schema:
    n_int = rng.randint(1, 2)
    decls = [(f"a{i}", "int") for i in range(n_int)]
    if with_str:
        decls.append(("s0", "str"))
    return Schema.of(*decls)


def _random_tuple(rng: random.Random, schema: Schema):
    out = []
    for kind in schema.kinds:
        out.append(rng.randint(0, 8) if kind == "int" else rng.choice(_STRINGS))
    return tuple(out)


def _random_worlds(rng: random.Random, schema: Schema, n_worlds: int):
    pool = [_random_tuple(rng, schema) for _ in range(rng.randint(2, 5))]
    worlds = []
    for _ in range(n_worlds):
        rows = []
        for _ in range(rng.randint(0, 6)):
            rows.append((rng.choice(pool), rng.randint(1, 2)))
        worlds.append(DetRelation(schema, rows))
    return worlds


def _widen_value(rng: random.Random, rv: RangeValue, kind: str) -> RangeValue:
    if kind == "int":
        lo = rv.lb - rng.randint(0, 3)
        hi = rv.ub + rng.randint(0, 3)
        return RangeValue(lo, rv.sg, hi)
    lo = min(rv.lb, min(_STRINGS))
    hi = max(rv.ub, max(_STRINGS))
    return RangeValue(lo, rv.sg, hi)


def _bounding_relation(
    rng: random.Random, schema: Schema, worlds: List[DetRelation], selected: int
) -> AURelation:
    seen = {}
    for w in worlds:
        for tup, _ in w.rows():
            seen.setdefault(tup, None)
    pairs = []
    for tup in seen:
        mults = [w.multiplicity(tup) for w in worlds]
        ann = AUMult(min(mults), worlds[selected].multiplicity(tup), max(mults))
        if ann.is_zero:
            continue
        pairs.append([[RangeValue.certain(v) for v in tup], ann])

    # Randomly widen intervals and annotations: widening preserves bounding.
    for row in pairs:
        for i, kind in enumerate(schema.kinds):
            if rng.random() < 0.4:
                row[0][i] = _widen_value(rng, row[0][i], kind)
        if rng.random() < 0.3:
            ann = row[1]
            row[1] = AUMult(max(0, ann.lb - rng.randint(0, 2)), ann.sg, ann.ub + rng.randint(0, 2))

    # Randomly merge a row without selected-guess mass into another row:
    # annotations add, bounds become envelopes, the SGW is unchanged.
    if len(pairs) >= 2 and rng.random() < 0.5:
        zero_sg = [i for i, row in enumerate(pairs) if row[1].sg == 0]
        if zero_sg:
            victim = rng.choice(zero_sg)
            target = rng.choice([i for i in range(len(pairs)) if i != victim])
            vt, va = pairs[victim]
            tt, ta = pairs[target]
            merged = [
                RangeValue(min(a.lb, b.lb), b.sg, max(a.ub, b.ub)) for a, b in zip(vt, tt)
            ]
            pairs[target] = [merged, AUMult(va.lb + ta.lb, va.sg + ta.sg, va.ub + ta.ub)]
            del pairs[victim]

    return AURelation(schema, [(tuple(t), a) for t, a in pairs])


def random_case(rng: random.Random) -> FuzzCase:
    n_rels = rng.choice((1, 2))
    with_str = rng.random() < 0.3
    names = ["R", "S"][:n_rels]
    schemas = {}
    relation_worlds: Dict[str, List[DetRelation]] = {}
    n_worlds = rng.randint(1, 4)
    selected = rng.randrange(n_worlds)
    for name in names:
        schema = _random_schema(rng, with_str and name == "R")
        schemas[name] = schema
        relation_worlds[name] = _random_worlds(rng, schema, n_worlds)
    worlds = [
        {name: relation_worlds[name][w] for name in names} for w in range(n_worlds)
    ]
    audb = {
        name: _bounding_relation(rng, schemas[name], relation_worlds[name], selected)
        for name in names
    }
    plan = _random_plan(rng, schemas)
    return FuzzCase(schemas, IncompleteDB(worlds, selected), audb, plan)


def _random_pred(rng: random.Random, schema: Schema):
    attrs = list(schema.names)
    a = rng.choice(attrs)
    kind = schema.kind(a)
    if kind == "str":
        return Eq(Var(a), Const(rng.choice(_STRINGS)))
    c = Const(rng.randint(0, 8))
    op = rng.choice((Eq, Leq, lt, gt, neq))
    pred = op(Var(a), c)
    if rng.random() < 0.3:
        b = rng.choice(attrs)
        if schema.kind(b) != "str":
            pred = And(pred, Leq(Var(b), Const(rng.randint(2, 9))))
    return pred


def _numeric_attrs(schema: Schema) -> List[str]:
    return [n for n, k in zip(schema.names, schema.kinds) if k in ("int", "real")]


def _random_plan(rng: random.Random, schemas: Dict[str, Schema]) -> p.Plan:
    catalog = dict(schemas)
    counter = iter(range(10**6))

    def leaf() -> Tuple[p.Plan, Schema]:
        name = rng.choice(list(catalog))
        return p.Table(name), catalog[name]

    def gen(depth: int, allow_join: bool) -> Tuple[p.Plan, Schema]:
        if depth <= 0:
            return leaf()
        roll = rng.random()
        if roll < 0.25:
            child, schema = gen(depth - 1, allow_join)
            return p.Select(_random_pred(rng, schema), child), schema
        if roll < 0.40:
            child, schema = gen(depth - 1, allow_join)
            keep = [n for n in schema.names if rng.random() < 0.8] or [schema.names[0]]
            items = [(Var(n), n) for n in keep]
            kinds = [schema.kind(n) for n in keep]
            numeric = _numeric_attrs(schema)
            if numeric and rng.random() < 0.35:
                a = rng.choice(numeric)
                uid = next(counter)
                expr = (
                    Plus(Var(a), Const(rng.randint(-2, 2)))
                    if rng.random() < 0.6
                    else Times(Var(a), Const(rng.randint(-2, 2)))
                )
                items.append((expr, f"e{uid}"))
                kinds.append("int")
            names = tuple(name for _, name in items)
            return p.Project(tuple(items), child), Schema(names, tuple(kinds))
        if roll < 0.44:
            child, schema = gen(depth - 1, allow_join)
            return p.Combine(child), schema
        if roll < 0.55 and allow_join:
            left, ls = gen(depth - 1, False)
            right, rs = gen(depth - 1, False)
            mapping = tuple((n, f"r_{n}") for n in rs.names)
            right = p.Rename(mapping, right)
            rs = rs.renamed(dict(mapping))
            la = rng.choice(_numeric_attrs(ls) or list(ls.names))
            ra = rng.choice(_numeric_attrs(rs) or list(rs.names))
            if ls.kind(la) == rs.kind(ra):
                pred = Eq(Var(la), Var(ra))
            else:
                pred = Const(True)
            return p.Join(pred, left, right), ls.concat(rs)
        if roll < 0.70:
            # union/diff need identical schemas; draw two subtrees and fall
            # back to a selection when their schemas differ.
            child, schema = gen(depth - 1, False)
            second, schema2 = gen(depth - 1, False)
            if schema2 == schema:
                kind = p.Union if rng.random() < 0.5 else p.Diff
                return kind(child, second), schema
            return p.Select(_random_pred(rng, schema), child), schema
        child, schema = gen(depth - 1, False)
        numeric = _numeric_attrs(schema)
        group = []
        if schema.names and rng.random() < 0.8:
            group = [rng.choice(list(schema.names))]
        uid = next(counter)
        aggs: List[AggSpec] = [AggSpec("count", None, f"cnt{uid}")]
        if numeric:
            fn = rng.choice(("sum", "min", "max", "avg"))
            aggs.append(AggSpec(fn, Var(rng.choice(numeric)), f"{fn}{uid}"))
        return p.Aggregate(tuple(group), tuple(aggs), child), p.infer_schema(
            p.Aggregate(tuple(group), tuple(aggs), child), catalog
        )

    depth = rng.randint(1, 4)
    plan, _ = gen(depth, True)
    return plan


def run_case(case: FuzzCase, compress_sizes=(1, 4, None)) -> Tuple[bool, Optional[str]]:
    """Evaluate exact and optimized paths; verify SGW commutation and that every
    world's deterministic result is bounded by the AU result."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            exact = p.eval_au(case.plan, case.audb)
        except AudbError as exc:
            return False, f"AU evaluation failed: {exc}"
        world_results = []
        for i, world in enumerate(case.idb.worlds):
            try:
                world_results.append(eval_det_query(case.plan, world))
            except AudbError as exc:
                return False, f"world {i} evaluation failed: {exc}"

        sg_inputs = {name: sg_world(rel) for name, rel in case.audb.items()}
        sg_expected = eval_det_query(case.plan, sg_inputs)
        results = [("exact", exact)]
        for size in compress_sizes:
            try:
                results.append(
                    (f"opt{size}", p.eval_au(case.plan, case.audb, optimize=True, compress_size=size))
                )
            except AudbError as exc:
                return False, f"optimized ({size}) evaluation failed: {exc}"

        for label, result in results:
            if sg_world(result) != sg_expected:
                return False, f"{label}: SGW does not commute"
            for i, wres in enumerate(world_results):
                if not bounds_world(result, wres):
                    return False, f"{label}: world {i} not bounded"
        return True, None


def run_suite(seed: int, cases: int, compress_sizes=(1, 4, None)):
    """Run ``cases`` random end-to-end checks; returns (failures, messages)."""
    rng = random.Random(seed)
    failures = 0
    messages = []
    for i in range(cases):
        case = random_case(rng)
        ok, msg = run_case(case, compress_sizes)
        if not ok:
            failures += 1
            messages.append(f"case {i}: {msg}")
    return failures, messages

"""Query plan nodes, bottom-up type checking, and AU evaluation dispatch."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from . import operators as ops
from .aggregation import AggSpec, aggregate
from .errors import PlanError, TypeMismatch, UnboundVariable
from .expr import BOOL, Expr, infer_kind
from .optimize import aggregate_opt, compress, join_opt
from .relation import AURelation, Schema, sg_combine


class Plan:
    __slots__ = ()


@dataclass(frozen=True)
class Table(Plan):
    name: str


@dataclass(frozen=True)
class Select(Plan):
    pred: Expr
    child: Plan


@dataclass(frozen=True)
class Project(Plan):
    items: Tuple[Tuple[Expr, str], ...]
    child: Plan


@dataclass(frozen=True)
class Cross(Plan):
    left: Plan
    right: Plan


@dataclass(frozen=True)
class Join(Plan):
    pred: Expr
    left: Plan
    right: Plan


@dataclass(frozen=True)
class Union(Plan):
    left: Plan
    right: Plan


@dataclass(frozen=True)
class Diff(Plan):
    left: Plan
    right: Plan


@dataclass(frozen=True)
class Aggregate(Plan):
    group: Tuple[str, ...]
    aggs: Tuple[AggSpec, ...]
    child: Plan


@dataclass(frozen=True)
class Rename(Plan):
    mapping: Tuple[Tuple[str, str], ...]
    child: Plan

    @property
    def as_dict(self) -> Dict[str, str]:
        return dict(self.mapping)


@dataclass(frozen=True)
class Combine(Plan):
    child: Plan


@dataclass(frozen=True)
class Compress(Plan):
    attr: str
    size: int
    child: Plan


def infer_schema(plan: Plan, catalog: Dict[str, Schema]) -> Schema:
    """Type-check the plan bottom-up and return its output schema."""
    try:
        return _infer(plan, catalog)
    except (TypeMismatch, UnboundVariable) as exc:
        raise PlanError(str(exc)) from exc


def _infer(plan: Plan, catalog: Dict[str, Schema]) -> Schema:
    if isinstance(plan, Table):
        try:
            return catalog[plan.name]
        except KeyError:
            raise PlanError(f"unknown table {plan.name!r}") from None
    if isinstance(plan, Select):
        schema = _infer(plan.child, catalog)
        if infer_kind(plan.pred, schema.attr_kinds()) != BOOL:
            raise PlanError(f"selection condition is not boolean: {plan.pred!r}")
        return schema
    if isinstance(plan, Project):
        schema = _infer(plan.child, catalog)
        kinds = schema.attr_kinds()
        return Schema(
            tuple(name for _, name in plan.items),
            tuple(infer_kind(e, kinds) for e, _ in plan.items),
        )
    if isinstance(plan, Cross):
        return _infer(plan.left, catalog).concat(_infer(plan.right, catalog))
    if isinstance(plan, Join):
        schema = _infer(plan.left, catalog).concat(_infer(plan.right, catalog))
        if infer_kind(plan.pred, schema.attr_kinds()) != BOOL:
            raise PlanError(f"join condition is not boolean: {plan.pred!r}")
        return schema
    if isinstance(plan, (Union, Diff)):
        left = _infer(plan.left, catalog)
        right = _infer(plan.right, catalog)
        if left != right:
            raise PlanError(
                f"schema mismatch: {left.names}:{left.kinds} vs {right.names}:{right.kinds}"
            )
        return left
    if isinstance(plan, Aggregate):
        schema = _infer(plan.child, catalog)
        kinds = schema.attr_kinds()
        out_names = []
        out_kinds = []
        for a in plan.group:
            out_names.append(a)
            out_kinds.append(kinds.get(a) or _missing(a, schema))
        from .aggregation import _result_kind

        for spec in plan.aggs:
            out_names.append(spec.name)
            out_kinds.append(_result_kind(spec, kinds))
        return Schema(tuple(out_names), tuple(out_kinds))
    if isinstance(plan, Rename):
        return _infer(plan.child, catalog).renamed(plan.as_dict)
    if isinstance(plan, Combine):
        return _infer(plan.child, catalog)
    if isinstance(plan, Compress):
        schema = _infer(plan.child, catalog)
        schema.index(plan.attr)
        if plan.size < 1:
            raise PlanError(f"compression size must be >= 1, got {plan.size}")
        return schema
    raise PlanError(f"unknown plan node {plan!r}")


def _missing(attr: str, schema: Schema):
    raise PlanError(f"unknown group-by attribute {attr!r} in schema {schema.names}")


def eval_au(
    plan: Plan,
    catalog: Dict[str, AURelation],
    optimize: bool = False,
    compress_size: Optional[int] = None,
) -> AURelation:
    """Evaluate the plan over AU-relations; with ``optimize`` joins and
    aggregations take the split/compressed fast paths."""
    if isinstance(plan, Table):
        try:
            return catalog[plan.name]
        except KeyError:
            raise PlanError(f"unknown table {plan.name!r}") from None
    if isinstance(plan, Select):
        return ops.select(plan.pred, eval_au(plan.child, catalog, optimize, compress_size))
    if isinstance(plan, Project):
        return ops.project(plan.items, eval_au(plan.child, catalog, optimize, compress_size))
    if isinstance(plan, Cross):
        return ops.cross(
            eval_au(plan.left, catalog, optimize, compress_size),
            eval_au(plan.right, catalog, optimize, compress_size),
        )
    if isinstance(plan, Join):
        left = eval_au(plan.left, catalog, optimize, compress_size)
        right = eval_au(plan.right, catalog, optimize, compress_size)
        if optimize:
            return join_opt(plan.pred, left, right, compress_size)
        return ops.join(plan.pred, left, right)
    if isinstance(plan, Union):
        return ops.union(
            eval_au(plan.left, catalog, optimize, compress_size),
            eval_au(plan.right, catalog, optimize, compress_size),
        )
    if isinstance(plan, Diff):
        return ops.difference(
            eval_au(plan.left, catalog, optimize, compress_size),
            eval_au(plan.right, catalog, optimize, compress_size),
        )
    if isinstance(plan, Aggregate):
        child = eval_au(plan.child, catalog, optimize, compress_size)
        if optimize:
            return aggregate_opt(list(plan.group), list(plan.aggs), child, compress_size)
        return aggregate(list(plan.group), list(plan.aggs), child)
    if isinstance(plan, Rename):
        return ops.rename(plan.as_dict, eval_au(plan.child, catalog, optimize, compress_size))
    if isinstance(plan, Combine):
        return sg_combine(eval_au(plan.child, catalog, optimize, compress_size))
    if isinstance(plan, Compress):
        return compress(
            eval_au(plan.child, catalog, optimize, compress_size), plan.attr, plan.size
        )
    raise PlanError(f"unknown plan node {plan!r}")

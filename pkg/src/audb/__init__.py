"""In-memory query engine for attribute-annotated uncertain databases.

Relations carry per-attribute <lower, selected-guess, upper> ranges and
per-tuple multiplicity triples; the engine evaluates full relational algebra
with aggregation under bound-preserving semantics and ships a possible-worlds
oracle that certifies the bounds on small instances.
"""

from .values import AUMult, RangeValue, au_add, au_mul, nat_monus, rlift
from .relation import (
    AURelation,
    DetRelation,
    Schema,
    cert_equal,
    overlaps,
    sg_combine,
    sg_world,
    tuple_bounds,
)
from .operators import cross, difference, join, project, rename, select, union
from .aggregation import AggSpec, aggregate, assign_groups, group_bounds, smb
from .optimize import aggregate_opt, bg_split, compress, join_opt, ub_split
from .oracle import (
    IncompleteDB,
    bounds_idb_relation,
    bounds_world,
    eval_det_query,
    tightness_metrics,
)
from .plan import eval_au, infer_schema
from .sexpr import parse_query, print_plan

__all__ = [
    "AUMult",
    "RangeValue",
    "au_add",
    "au_mul",
    "nat_monus",
    "rlift",
    "AURelation",
    "DetRelation",
    "Schema",
    "cert_equal",
    "overlaps",
    "sg_combine",
    "sg_world",
    "tuple_bounds",
    "cross",
    "difference",
    "join",
    "project",
    "rename",
    "select",
    "union",
    "AggSpec",
    "aggregate",
    "assign_groups",
    "group_bounds",
    "smb",
    "aggregate_opt",
    "bg_split",
    "compress",
    "join_opt",
    "ub_split",
    "IncompleteDB",
    "bounds_idb_relation",
    "bounds_world",
    "eval_det_query",
    "tightness_metrics",
    "eval_au",
    "infer_schema",
    "parse_query",
    "print_plan",
]

__version__ = "0.1.0"

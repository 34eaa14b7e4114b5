import pytest

from audb import (
    AURelation,
    Schema,
    cross,
    difference,
    eval_det_query,
    join,
    project,
    rename,
    select,
    sg_combine,
    sg_world,
    union,
)
from audb import plan as p
from audb.errors import SchemaMismatch
from audb.expr import Const, Eq, Leq, Plus, Var
from audb.values import AUMult as M
from audb.values import RangeValue as RV


def test_select_example():
    rel = AURelation(
        Schema.of(("A", "int"), ("B", "int")),
        [((RV(1, 2, 3), RV.certain(2)), M(1, 2, 3))],
    )
    out = select(Eq(Var("A"), Const(2)), rel)
    assert list(out.rows()) == [((RV(1, 2, 3), RV.certain(2)), M(0, 2, 3))]


def test_select_true_identity_and_empty():
    rel = AURelation(Schema.of(("A", "int"),), [((RV.certain(3),), M(1, 1, 2))])
    assert select(Const(True), rel) == rel
    assert len(select(Leq(Var("A"), Const(0)), rel)) == 0


def test_project_merges_collisions():
    rel = AURelation(
        Schema.of(("A", "int"), ("B", "int")),
        [
            ((RV.certain(1), RV.certain(1)), M(2, 2, 3)),
            ((RV.certain(1), RV(1, 1, 3)), M(2, 3, 3)),
        ],
    )
    out = project([(Var("A"), "A")], rel)
    assert list(out.rows()) == [((RV.certain(1),), M(4, 5, 6))]


def test_project_identity_and_expression():
    rel = AURelation(
        Schema.of(("A", "int"), ("B", "int")),
        [((RV(0, 1, 2), RV.certain(5)), M(1, 1, 1))],
    )
    out = project([(Var("A"), "A"), (Var("B"), "B")], rel)
    assert out == rel
    summed = project([(Plus(Var("A"), Var("B")), "s")], rel)
    assert list(summed.rows()) == [((RV(5, 6, 7),), M(1, 1, 1))]
    assert summed.schema.kinds == ("int",)


def test_join_golden(join_inputs):
    left, right = join_inputs
    out = join(Eq(Var("A"), Var("C")), left, right)
    rows = dict(out.rows())
    assert rows[(RV(1, 1, 2), RV(1, 3, 3))] == M(0, 0, 3)
    assert rows[(RV(1, 1, 2), RV(1, 2, 2))] == M(0, 0, 6)
    assert rows[(RV(1, 2, 2), RV(1, 3, 3))] == M(0, 0, 2)
    # Certain-equality is required for a certain join: identical non-degenerate
    # ranges may still differ in some world, so the lower bound is 0 here.
    assert rows[(RV(1, 2, 2), RV(1, 2, 2))] == M(0, 2, 4)


def test_join_sgw_commutes(join_inputs):
    left, right = join_inputs
    plan = p.Join(Eq(Var("A"), Var("C")), p.Table("R"), p.Table("S"))
    det = eval_det_query(plan, {"R": sg_world(left), "S": sg_world(right)})
    assert sg_world(join(Eq(Var("A"), Var("C")), left, right)) == det


def test_cross_with_unit_row():
    left = AURelation(Schema.of(("A", "int"),), [((RV(0, 1, 2),), M(1, 2, 3))])
    right = AURelation(Schema.of(("B", "str"),), [((RV.certain("k"),), M(1, 1, 1))])
    out = cross(left, right)
    assert list(out.rows()) == [((RV(0, 1, 2), RV.certain("k")), M(1, 2, 3))]
    with pytest.raises(SchemaMismatch):
        cross(left, left)


def test_union():
    schema = Schema.of(("A", "int"),)
    rel = AURelation(schema, [((RV.certain(1),), M(1, 1, 1))])
    empty = AURelation(schema)
    assert union(rel, empty) == rel
    both = union(rel, AURelation(schema, [((RV.certain(1),), M(0, 1, 2))]))
    assert list(both.rows()) == [((RV.certain(1),), M(1, 2, 3))]
    with pytest.raises(SchemaMismatch):
        union(rel, AURelation(Schema.of(("B", "int"),)))


def test_difference_example():
    schema = Schema.of(("A", "int"),)
    left = AURelation(schema, [((RV.certain(1),), M(1, 2, 2)), ((RV.certain(2),), M(0, 0, 1))])
    right = AURelation(schema, [((RV.certain(1),), M(0, 0, 3)), ((RV.certain(2),), M(0, 1, 1))])
    out = dict(difference(left, right).rows())
    assert out[(RV.certain(1),)] == M(0, 2, 2)


def test_difference_empty_rhs_is_combine():
    schema = Schema.of(("A", "int"),)
    left = AURelation(schema, [((RV(0, 1, 2),), M(1, 1, 1)), ((RV(1, 1, 3),), M(1, 2, 2))])
    assert difference(left, AURelation(schema)) == sg_combine(left)


def test_difference_overlapping_ranged_rhs():
    schema = Schema.of(("A", "int"),)
    left = AURelation(schema, [((RV.certain(1),), M(2, 2, 2)), ((RV.certain(5),), M(1, 1, 1))])
    right = AURelation(schema, [((RV(1, 1, 2),), M(1, 1, 3))])
    out = dict(difference(left, right).rows())
    # the ranged RHS row may coincide with (1) in some world: lb drops by its ub
    assert out[(RV.certain(1),)] == M(0, 1, 2)
    assert out[(RV.certain(5),)] == M(1, 1, 1)


def test_difference_sgw_commutes():
    schema = Schema.of(("A", "int"),)
    left = AURelation(schema, [((RV(0, 1, 4),), M(1, 2, 3)), ((RV(1, 1, 2),), M(1, 1, 1))])
    right = AURelation(schema, [((RV(0, 1, 1),), M(1, 2, 2))])
    plan = p.Diff(p.Table("L"), p.Table("R"))
    det = eval_det_query(plan, {"L": sg_world(left), "R": sg_world(right)})
    assert sg_world(difference(left, right)) == det


def test_rename():
    rel = AURelation(Schema.of(("A", "int"),), [((RV.certain(1),), M(1, 1, 1))])
    out = rename({"A": "Z"}, rel)
    assert out.schema.names == ("Z",)
    assert list(out.rows()) == list(rel.rows())

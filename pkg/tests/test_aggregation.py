import warnings

import pytest

from audb import AURelation, Schema, aggregate, assign_groups, group_bounds, sg_world, smb
from audb import eval_det_query
from audb import plan as p
from audb.aggregation import AggSpec
from audb.errors import EmptyAggregateWarning, TypeMismatch
from audb.expr import Const, Plus, Var
from audb.values import AUMult as M
from audb.values import RangeValue as RV


def test_smb_sum_examples():
    assert smb(M(1, 2, 2), RV(3, 5, 10), "sum") == RV(3, 10, 20)
    assert smb(M(1, 2, 2), RV(-4, -3, -3), "sum") == RV(-8, -6, -3)


def test_smb_min_identity_and_zero_case():
    assert smb(M(1, 1, 1), RV(3, 5, 9), "min") == RV(3, 5, 9)
    # an absent row contributes the kind's zero element
    assert smb(M(0, 0, 2), RV(5, 5, 5), "min") == RV(0, 0, 5)
    assert smb(M(0, 1, 2), RV(5, 5, 5), "max") == RV(0, 5, 5)


def test_smb_rejects_sum_over_strings():
    with pytest.raises(TypeMismatch):
        smb(M(1, 1, 1), RV.certain("a"), "sum")


def test_assign_groups_example():
    schema = Schema.of(("A", "int"),)
    rel = AURelation(
        schema,
        [
            ((RV(1, 2, 2),), M(1, 1, 1)),
            ((RV(2, 2, 4),), M(0, 0, 1)),
            ((RV(2, 3, 4),), M(0, 0, 3)),
        ],
    )
    ga = assign_groups(["A"], rel)
    assert set(ga.groups) == {(2,), (3,)}
    assert len(ga.members[(2,)]) == 2 and len(ga.members[(3,)]) == 1
    assert group_bounds(ga, schema, (2,)) == (RV(1, 2, 4),)
    assert group_bounds(ga, schema, (3,)) == (RV(2, 3, 4),)


def test_group_for_zero_sg_rows_exists():
    # rows with sg multiplicity 0 but positive upper bound still form groups
    schema = Schema.of(("A", "int"),)
    rel = AURelation(schema, [((RV.certain(4),), M(0, 0, 2))])
    ga = assign_groups(["A"], rel)
    assert set(ga.groups) == {(4,)}


def test_sum_without_group_by(address):
    out = aggregate([], [AggSpec("sum", Var("inhab"), "pop")], address)
    assert list(out.rows()) == [((RV(6, 7, 14),), M(1, 1, 1))]


def test_count_group_by_street(address):
    out = aggregate(["street"], [AggSpec("count", None, "cnt")], address)
    rows = {t[0].sg: (t[1], a) for t, a in out.rows()}
    assert rows["Canal"] == (RV(1, 2, 3), M(1, 1, 2))
    assert rows["State"] == (RV(2, 2, 4), M(1, 1, 1))
    assert rows["Monroe"] == (RV(1, 1, 2), M(0, 0, 1))
    canal_street = [t[0] for t, _ in out.rows() if t[0].sg == "Canal"][0]
    assert (canal_street.lb, canal_street.ub) == ("Canal", "State")


def test_worked_group_lower_bound_is_sound():
    # Rows (A in [3,10], B=3) and (A in [-4,-3], B in [2,4]), both (1,2,2).
    # The second row's two possible duplicates can both sit in a group away
    # from B=3 contributing -8, so -8 (not the anchor-only -5) is the sound
    # lower bound for the output whose bounds cover that escaped group.
    schema = Schema.of(("A", "int"), ("B", "int"))
    rel = AURelation(
        schema,
        [
            ((RV(3, 5, 10), RV.certain(3)), M(1, 2, 2)),
            ((RV(-4, -3, -3), RV(2, 3, 4)), M(1, 2, 2)),
        ],
    )
    out = list(aggregate(["B"], [AggSpec("sum", Var("A"), "s")], rel).rows())
    assert len(out) == 1
    tup, ann = out[0]
    assert tup[0] == RV(2, 3, 4)
    assert tup[1] == RV(-8, 4, 20)
    assert ann == M(1, 1, 3)


def test_all_certain_matches_deterministic():
    schema = Schema.of(("g", "int"), ("v", "int"))
    rel = AURelation(
        schema,
        [
            ((RV.certain(1), RV.certain(30)), M(2, 2, 2)),
            ((RV.certain(1), RV.certain(40)), M(3, 3, 3)),
            ((RV.certain(2), RV.certain(7)), M(1, 1, 1)),
        ],
    )
    specs = [
        AggSpec("sum", Var("v"), "s"),
        AggSpec("min", Var("v"), "lo"),
        AggSpec("max", Var("v"), "hi"),
        AggSpec("count", None, "cnt"),
        AggSpec("avg", Var("v"), "mean"),
    ]
    out = aggregate(["g"], specs, rel)
    got = {t[0].sg: tuple(v.sg for v in t[1:]) for t, _ in out.rows()}
    assert got[1] == (180, 30, 40, 5, 36.0)
    assert got[2] == (7, 7, 7, 1, 7.0)
    for tup, ann in out.rows():
        assert all(v.is_certain for v in tup)
        assert ann == M(1, 1, 1)


def test_sgw_commutes_with_det_aggregation(address):
    node = p.Aggregate(
        ("street",),
        (AggSpec("count", None, "cnt"), AggSpec("sum", Var("inhab"), "pop")),
        p.Table("address"),
    )
    det = eval_det_query(node, {"address": sg_world(address)})
    au = aggregate(
        ["street"],
        [AggSpec("count", None, "cnt"), AggSpec("sum", Var("inhab"), "pop")],
        address,
    )
    assert sg_world(au) == det


def test_count_star_over_expression_input():
    schema = Schema.of(("A", "int"),)
    rel = AURelation(schema, [((RV(0, 1, 2),), M(1, 1, 1))])
    out = aggregate([], [AggSpec("sum", Plus(Var("A"), Const(1)), "s")], rel)
    assert list(out.rows()) == [((RV(1, 2, 3),), M(1, 1, 1))]


def test_min_max_empty_input_sentinel_warns():
    schema = Schema.of(("A", "int"),)
    empty = AURelation(schema)
    with pytest.warns(EmptyAggregateWarning):
        out = aggregate([], [AggSpec("min", Var("A"), "lo")], empty)
    (tup, ann), = out.rows()
    assert tup[0].sg == float("inf")
    assert ann == M(1, 1, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sums = aggregate([], [AggSpec("sum", Var("A"), "s"), AggSpec("count", None, "c")], empty)
    (tup, _), = sums.rows()
    assert (tup[0].sg, tup[1].sg) == (0, 0)


def test_group_count_never_exceeds_distinct_sg_keys():
    schema = Schema.of(("g", "int"), ("v", "int"))
    rel = AURelation(
        schema,
        [
            ((RV(0, 1, 5), RV.certain(1)), M(0, 1, 3)),
            ((RV(0, 1, 9), RV.certain(2)), M(1, 1, 1)),
            ((RV(2, 3, 4), RV.certain(3)), M(0, 0, 2)),
        ],
    )
    out = aggregate(["g"], [AggSpec("count", None, "cnt")], rel)
    assert len(out) <= 2


def test_avg_group_by():
    schema = Schema.of(("g", "int"), ("v", "int"))
    rel = AURelation(
        schema,
        [
            ((RV.certain(1), RV(2, 4, 6)), M(1, 1, 2)),
        ],
    )
    out = aggregate(["g"], [AggSpec("avg", Var("v"), "mean")], rel)
    (tup, ann), = out.rows()
    mean = tup[1]
    assert mean.sg == 4.0
    assert mean.lb <= 2.0 and mean.ub >= 6.0
    assert ann == M(1, 1, 1)

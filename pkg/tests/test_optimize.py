import random

import pytest

from audb import (
    AURelation,
    Schema,
    aggregate,
    aggregate_opt,
    bg_split,
    bounds_world,
    compress,
    join,
    join_opt,
    sg_world,
    ub_split,
    union,
)
from audb.aggregation import AggSpec
from audb.errors import AudbError
from audb.expr import Const, Eq, Leq, Var, And
from audb.fuzz import random_case
from audb.values import AUMult as M
from audb.values import RangeValue as RV


def test_bg_split_golden(join_inputs):
    left, right = join_inputs
    assert dict(bg_split(left).rows()) == {
        (RV.certain(1),): M(0, 2, 2),
        (RV.certain(2),): M(0, 1, 1),
    }
    assert dict(bg_split(right).rows()) == {
        (RV.certain(3),): M(0, 1, 1),
        (RV.certain(2),): M(0, 2, 2),
    }


def test_bg_split_keeps_certain_lower_bounds():
    rel = AURelation(Schema.of(("A", "int"),), [((RV.certain(4),), M(2, 2, 5))])
    assert dict(bg_split(rel).rows()) == {(RV.certain(4),): M(2, 2, 2)}


def test_ub_split_golden(join_inputs):
    left, _ = join_inputs
    out = dict(ub_split(left).rows())
    assert out == {(RV(1, 1, 2),): M(0, 0, 3), (RV(1, 2, 2),): M(0, 0, 2)}
    assert ub_split(ub_split(left)) == ub_split(left)
    assert len(ub_split(AURelation(left.schema))) == 0


def test_split_union_preserves_bounds_and_sgw():
    rng = random.Random(5)
    for _ in range(25):
        case = random_case(rng)
        for rel in case.audb.values():
            split = union(bg_split(rel), ub_split(rel))
            assert sg_world(split) == sg_world(rel)
        # every world of the instance stays bounded after splitting
        for world in case.idb.worlds:
            for name, rel in case.audb.items():
                split = union(bg_split(rel), ub_split(rel))
                assert bounds_world(split, world[name])


def test_compress_golden(join_inputs):
    left, right = join_inputs
    cl = compress(ub_split(left), "A", 1)
    assert dict(cl.rows()) == {(RV(1, 1, 2),): M(0, 0, 5)}
    cr = compress(ub_split(right), "C", 1)
    assert dict(cr.rows()) == {(RV(1, 2, 3),): M(0, 0, 3)}


def test_compress_identity_and_errors(join_inputs):
    left, _ = join_inputs
    assert compress(left, "A", 2) == left
    assert compress(left, "A", 99) == left
    with pytest.raises(AudbError):
        compress(left, "A", 0)


def test_compress_preserves_bounds():
    rng = random.Random(11)
    for _ in range(25):
        case = random_case(rng)
        for name, rel in case.audb.items():
            attr = rel.schema.names[0]
            for n in (1, 2):
                packed = compress(rel, attr, n)
                assert len(packed) <= max(n, 1) or packed is rel
                for world in case.idb.worlds:
                    assert bounds_world(packed, world[name])


def test_join_opt_golden(join_inputs):
    left, right = join_inputs
    out = dict(join_opt(Eq(Var("A"), Var("C")), left, right, 1).rows())
    assert out == {
        (RV.certain(2), RV.certain(2)): M(0, 2, 2),
        (RV(1, 1, 2), RV(1, 2, 3)): M(0, 0, 15),
    }


def test_join_opt_certain_inputs_share_sgw(join_inputs):
    left, right = join_inputs
    theta = Eq(Var("A"), Var("C"))
    exact = join(theta, left, right)
    for n in (1, 2, None):
        assert sg_world(join_opt(theta, left, right, n)) == sg_world(exact)


def test_join_opt_possible_part_row_bound(join_inputs):
    left, right = join_inputs
    for n in (1, 2):
        out = join_opt(Eq(Var("A"), Var("C")), left, right, n)
        possible = [a for _, a in out.rows() if a.sg == 0]
        assert len(possible) <= n


def test_join_opt_falls_back_without_equality(join_inputs):
    left, right = join_inputs
    theta = Leq(Var("A"), Var("C"))
    with pytest.warns(UserWarning):
        out = join_opt(theta, left, right, 1)
    assert out == join(theta, left, right)


def test_join_opt_extra_conjunct(join_inputs):
    left, right = join_inputs
    theta = And(Eq(Var("A"), Var("C")), Leq(Var("A"), Const(99)))
    out = join_opt(theta, left, right, None)
    assert sg_world(out) == sg_world(join(theta, left, right))


def test_aggregate_opt_identity_when_uncompressed(address):
    specs = [AggSpec("count", None, "cnt"), AggSpec("sum", Var("inhab"), "pop")]
    assert aggregate_opt(["street"], specs, address, 99) == aggregate(["street"], specs, address)
    assert aggregate_opt(["street"], specs, address, None) == aggregate(["street"], specs, address)


def test_aggregate_opt_only_widens_value_bounds(address):
    specs = [AggSpec("count", None, "cnt")]
    exact = {t[0].sg: (t[1], a) for t, a in aggregate(["street"], specs, address).rows()}
    packed = {t[0].sg: (t[1], a) for t, a in aggregate_opt(["street"], specs, address, 1).rows()}
    assert set(packed) == set(exact)
    for key in exact:
        ev, ea = exact[key]
        pv, pa = packed[key]
        assert pv.lb <= ev.lb and pv.ub >= ev.ub
        assert pa == ea  # annotations come from the uncompressed grouping pass
        # selected guesses agree whenever the group exists in the SGW
        if pa.sg:
            assert pv.sg == ev.sg

import pytest

from audb import AURelation, DetRelation, Schema
from audb.values import AUMult as M
from audb.values import RangeValue as RV


@pytest.fixture
def uaar_inst():
    """Two-column example instance: rows share the (1,1) selected guess."""
    schema = Schema.of(("A", "int"), ("B", "int"))
    return AURelation(
        schema,
        [
            ((RV.certain(1), RV.certain(1)), M(2, 2, 3)),
            ((RV.certain(1), RV(1, 1, 3)), M(2, 3, 3)),
            ((RV(1, 2, 2), RV.certain(3)), M(1, 1, 1)),
        ],
    )


@pytest.fixture
def uaar_worlds():
    schema = Schema.of(("A", "int"), ("B", "int"))
    d1 = DetRelation(schema, [((1, 1), 5), ((2, 3), 1)])
    d2 = DetRelation(schema, [((1, 1), 2), ((1, 3), 2), ((2, 3), 1)])
    return d1, d2


@pytest.fixture
def join_inputs():
    left = AURelation(
        Schema.of(("A", "int")),
        [((RV(1, 1, 2),), M(2, 2, 3)), ((RV(1, 2, 2),), M(1, 1, 2))],
    )
    right = AURelation(
        Schema.of(("C", "int")),
        [((RV(1, 3, 3),), M(1, 1, 1)), ((RV(1, 2, 2),), M(1, 2, 2))],
    )
    return left, right


@pytest.fixture
def address():
    """Street/number/inhabitants relation; the second row's street may be any
    street (its bounds cover the whole street domain)."""
    schema = Schema.of(("street", "str"), ("number", "int"), ("inhab", "int"))
    lo, hi = "Canal", "State"  # lexicographic extremes of the street domain
    return AURelation(
        schema,
        [
            ((RV.certain("Canal"), RV.certain(165), RV.certain(1)), M(1, 1, 2)),
            ((RV(lo, "Canal", hi), RV(153, 154, 156), RV(1, 2, 2)), M(1, 1, 1)),
            ((RV.certain("State"), RV(623, 623, 629), RV.certain(2)), M(2, 2, 3)),
            ((RV.certain("Monroe"), RV(3550, 3574, 3585), RV(2, 3, 4)), M(0, 0, 1)),
        ],
    )

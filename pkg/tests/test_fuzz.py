import random

from audb.fuzz import random_case, run_suite


def test_smoke_suite_is_clean():
    failures, messages = run_suite(seed=123, cases=40)
    assert failures == 0, messages


def test_cases_are_reproducible():
    a = random_case(random.Random(7))
    b = random_case(random.Random(7))
    assert a.plan == b.plan
    assert a.audb.keys() == b.audb.keys()
    for name in a.audb:
        assert a.audb[name] == b.audb[name]


def test_generated_audb_bounds_its_worlds():
    rng = random.Random(3)
    from audb import bounds_world, sg_world

    for _ in range(30):
        case = random_case(rng)
        for name, rel in case.audb.items():
            assert sg_world(rel) == case.idb.selected_world()[name]
            for world in case.idb.worlds:
                assert bounds_world(rel, world[name])

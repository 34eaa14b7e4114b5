"""AU-relations, deterministic bag relations, and the tuple-level predicates."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .errors import SchemaMismatch, TypeMismatch
from .values import AUMult, RangeValue, Scalar, ZERO, au_add, scalar_eq

AUTuple = Tuple[RangeValue, ...]
DetTuple = Tuple[Scalar, ...]


@dataclass(frozen=True)
class Schema:
    names: Tuple[str, ...]
    kinds: Tuple[str, ...]

    def __post_init__(self):
        if len(self.names) != len(self.kinds):
            raise SchemaMismatch("schema names and kinds differ in length")
        if len(set(self.names)) != len(self.names):
            raise SchemaMismatch(f"duplicate attribute names in {self.names}")

    @staticmethod
    def of(*decls: Tuple[str, str]) -> "Schema":
        return Schema(tuple(d[0] for d in decls), tuple(d[1] for d in decls))

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise SchemaMismatch(f"no attribute {name!r} in schema {self.names}") from None

    def kind(self, name: str) -> str:
        return self.kinds[self.index(name)]

    def attr_kinds(self) -> Dict[str, str]:
        return dict(zip(self.names, self.kinds))

    def concat(self, other: "Schema") -> "Schema":
        clash = set(self.names) & set(other.names)
        if clash:
            raise SchemaMismatch(f"attribute name clash: {sorted(clash)}")
        return Schema(self.names + other.names, self.kinds + other.kinds)

    def renamed(self, mapping: Dict[str, str]) -> "Schema":
        for old in mapping:
            self.index(old)
        return Schema(tuple(mapping.get(n, n) for n in self.names), self.kinds)


class AURelation:
    """Finite map from range-annotated tuples to multiplicity triples.

    Normalized on construction: inserting an existing key adds annotations and
    no stored annotation is (0,0,0). Iteration follows insertion order.
    """

    __slots__ = ("schema", "_rows")

    def __init__(self, schema: Schema, pairs: Iterable[Tuple[AUTuple, AUMult]] = ()):
        self.schema = schema
        rows: Dict[AUTuple, AUMult] = {}
        n = len(schema)
        for tup, ann in pairs:
            if len(tup) != n:
                raise SchemaMismatch(f"tuple arity {len(tup)} does not match schema arity {n}")
            prev = rows.get(tup)
            ann = au_add(prev, ann) if prev is not None else ann
            rows[tup] = ann
        self._rows = {t: a for t, a in rows.items() if not a.is_zero}

    def rows(self) -> Iterator[Tuple[AUTuple, AUMult]]:
        return iter(self._rows.items())

    def annotation(self, tup: AUTuple) -> AUMult:
        return self._rows.get(tup, ZERO)

    def __len__(self) -> int:
        return len(self._rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AURelation)
            and self.schema == other.schema
            and self._rows == other._rows
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{t} -> {a}" for t, a in self._rows.items())
        return f"AURelation({self.schema.names}, {{{body}}})"


class DetRelation:
    """Deterministic bag relation: tuples with positive multiplicities."""

    __slots__ = ("schema", "_bag")

    def __init__(self, schema: Schema, pairs: Iterable[Tuple[DetTuple, int]] = ()):
        self.schema = schema
        bag: Dict[DetTuple, int] = {}
        n = len(schema)
        for tup, mult in pairs:
            if len(tup) != n:
                raise SchemaMismatch(f"tuple arity {len(tup)} does not match schema arity {n}")
            if mult < 0:
                raise TypeMismatch(f"negative multiplicity {mult} for {tup}")
            if mult:
                bag[tup] = bag.get(tup, 0) + mult
        self._bag = bag

    def rows(self) -> Iterator[Tuple[DetTuple, int]]:
        return iter(self._bag.items())

    def multiplicity(self, tup: DetTuple) -> int:
        return self._bag.get(tup, 0)

    def total(self) -> int:
        return sum(self._bag.values())

    def __len__(self) -> int:
        return len(self._bag)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DetRelation)
            and self.schema == other.schema
            and self._bag == other._bag
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{t} -> {m}" for t, m in self._bag.items())
        return f"DetRelation({self.schema.names}, {{{body}}})"


def sg_tuple(tup: AUTuple) -> DetTuple:
    return tuple(rv.sg for rv in tup)


def sg_world(rel: AURelation) -> DetRelation:
    """Extract the selected-guess world: group by sg values, sum sg multiplicities."""
    return DetRelation(rel.schema, ((sg_tuple(t), a.sg) for t, a in rel.rows()))


def tuple_bounds(det: DetTuple, ranged: AUTuple) -> bool:
    """Whether the range tuple covers the deterministic tuple on every attribute."""
    if len(det) != len(ranged):
        raise SchemaMismatch("arity mismatch in tuple_bounds")
    return all(rv.contains(v) for v, rv in zip(det, ranged))


def overlaps(a: AUTuple, b: AUTuple, indexes: Sequence[int] | None = None) -> bool:
    """Interval intersection on every listed attribute (all attributes by default)."""
    if indexes is None:
        if len(a) != len(b):
            raise SchemaMismatch("arity mismatch in overlaps")
        indexes = range(len(a))
    return all(a[i].overlaps(b[i]) for i in indexes)


def cert_equal(a: AUTuple, b: AUTuple) -> bool:
    """Both tuples fully certain and equal."""
    if len(a) != len(b):
        raise SchemaMismatch("arity mismatch in cert_equal")
    return all(
        x.is_certain and y.is_certain and scalar_eq(x.sg, y.sg) for x, y in zip(a, b)
    )


def sg_combine(rel: AURelation) -> AURelation:
    """The SG-combiner: merge rows sharing selected-guess values.

    Per group the attribute bounds become the envelope over the members and the
    annotations are summed.
    """
    groups: Dict[DetTuple, List[Tuple[AUTuple, AUMult]]] = {}
    for tup, ann in rel.rows():
        groups.setdefault(sg_tuple(tup), []).append((tup, ann))
    pairs = []
    for key, members in groups.items():
        ann = members[0][1]
        for _, extra in members[1:]:
            ann = au_add(ann, extra)
        combined = tuple(
            RangeValue(
                min(m[0][i].lb for m in members),
                key[i],
                max(m[0][i].ub for m in members),
            )
            for i in range(len(key))
        )
        pairs.append((combined, ann))
    return AURelation(rel.schema, pairs)

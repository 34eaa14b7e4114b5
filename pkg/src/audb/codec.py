"""File formats: the flat AU-relation encoding, possible-worlds documents, and
importers from tuple-independent and x-DB inputs.

All formats are line-oriented, tab-separated text with a typed header. An
AU-relation row stores lb/sg/ub for every attribute followed by the row
annotation triple, mirroring the flat relational encoding column for column.
"""
from __future__ import annotations

import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ParseError, SchemaMismatch, SerializationError
from .oracle import IncompleteDB
from .relation import AURelation, DetRelation, DetTuple, Schema
from .values import BOOL, INT, REAL, STR, AUMult, KINDS, RangeValue, Scalar

ENC_MAGIC = "# audb-enc 1"
WORLDS_MAGIC = "# audb-worlds 1"
TIDB_MAGIC = "# audb-tidb 1"
XDB_MAGIC = "# audb-xdb 1"


def _format_value(value: Scalar, kind: str) -> str:
    if kind == BOOL:
        return "true" if value else "false"
    if kind == STR:
        if "\t" in value or "\n" in value:
            return value.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")
        return value.replace("\\", "\\\\")
    if kind == REAL:
        if not math.isfinite(value):
            raise SerializationError(f"cannot serialize non-finite value {value!r}")
        return repr(float(value))
    if isinstance(value, float) and not math.isfinite(value):
        raise SerializationError(f"cannot serialize non-finite value {value!r}")
    return repr(int(value))


def _parse_value(text: str, kind: str, line_no: int) -> Scalar:
    try:
        if kind == INT:
            return int(text)
        if kind == REAL:
            return float(text)
        if kind == BOOL:
            if text == "true":
                return True
            if text == "false":
                return False
            raise ValueError(text)
        return text.replace("\\n", "\n").replace("\\t", "\t").replace("\\\\", "\\")
    except ValueError:
        raise ParseError(f"line {line_no}: bad {kind} literal {text!r}") from None


def _format_schema(schema: Schema) -> str:
    return "\t".join(f"{n}:{k}" for n, k in zip(schema.names, schema.kinds))


def _parse_schema(line: str, line_no: int) -> Schema:
    decls = []
    for field in line.split("\t"):
        name, sep, kind = field.partition(":")
        if not sep or kind not in KINDS or not name:
            raise ParseError(f"line {line_no}: bad attribute declaration {field!r}")
        decls.append((name, kind))
    return Schema.of(*decls)


def row_sort_key(schema: Schema, tup, ann: AUMult) -> Tuple:
    parts: List[str] = []
    for rv, kind in zip(tup, schema.kinds):
        for v in (rv.lb, rv.sg, rv.ub):
            parts.append(_format_value(v, kind))
    return (tuple(parts), ann.lb, ann.sg, ann.ub)


def enc_dumps(rel: AURelation) -> str:
    """Serialize; rows sorted by their serialized form for deterministic output."""
    lines = [ENC_MAGIC, _format_schema(rel.schema)]
    rows = sorted(rel.rows(), key=lambda r: row_sort_key(rel.schema, r[0], r[1]))
    for tup, ann in rows:
        fields: List[str] = []
        for rv, kind in zip(tup, rel.schema.kinds):
            fields.extend(_format_value(v, kind) for v in (rv.lb, rv.sg, rv.ub))
        fields.extend(str(v) for v in (ann.lb, ann.sg, ann.ub))
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def enc_loads(text: str) -> AURelation:
    """Parse the flat encoding; value-equivalent rows merge by annotation addition."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != ENC_MAGIC:
        raise ParseError("missing encoding header")
    if len(lines) < 2:
        raise ParseError("missing schema line")
    schema = _parse_schema(lines[1], 2)
    width = 3 * len(schema) + 3
    pairs = []
    for line_no, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != width:
            raise ParseError(f"line {line_no}: expected {width} fields, got {len(fields)}")
        tup = []
        for i, kind in enumerate(schema.kinds):
            lb, sg, ub = (
                _parse_value(fields[3 * i + j], kind, line_no) for j in range(3)
            )
            try:
                tup.append(RangeValue(lb, sg, ub))
            except Exception:
                raise ParseError(
                    f"line {line_no}: attribute triple not ordered: {lb!r}, {sg!r}, {ub!r}"
                ) from None
        base = 3 * len(schema)
        try:
            raw = [int(fields[base + j]) for j in range(3)]
        except ValueError:
            raise ParseError(f"line {line_no}: bad annotation triple") from None
        if raw[2] == 0:
            raise ParseError(f"line {line_no}: stored row with zero upper multiplicity")
        try:
            ann = AUMult(*raw)
        except Exception:
            raise ParseError(f"line {line_no}: annotation triple not ordered: {raw}") from None
        pairs.append((tuple(tup), ann))
    return AURelation(schema, pairs)


def enc_write(rel: AURelation, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(enc_dumps(rel))


def enc_read(path: str) -> AURelation:
    with open(path, "r", encoding="utf-8") as fh:
        return enc_loads(fh.read())


def worlds_dumps(schemas: Dict[str, Schema], idb: IncompleteDB) -> str:
    lines = [WORLDS_MAGIC]
    for name, schema in schemas.items():
        lines.append(f"table {name}\t{_format_schema(schema)}")
    for world in idb.worlds:
        lines.append("world")
        for name, rel in world.items():
            schema = schemas[name]
            rows = sorted(
                rel.rows(),
                key=lambda r: tuple(_format_value(v, k) for v, k in zip(r[0], schema.kinds)),
            )
            for tup, mult in rows:
                fields = [name]
                fields.extend(_format_value(v, k) for v, k in zip(tup, schema.kinds))
                fields.append(str(mult))
                lines.append("\t".join(fields))
    lines.append(f"selected {idb.selected}")
    return "\n".join(lines) + "\n"


def worlds_loads(text: str) -> Tuple[Dict[str, Schema], IncompleteDB]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != WORLDS_MAGIC:
        raise ParseError("missing worlds header")
    schemas: Dict[str, Schema] = {}
    worlds: List[Dict[str, List[Tuple[DetTuple, int]]]] = []
    selected: Optional[int] = None
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line.startswith("table "):
            if worlds:
                raise ParseError(f"line {line_no}: table declarations must precede worlds")
            body = line[len("table "):]
            name, sep, decl = body.partition("\t")
            if not sep:
                raise ParseError(f"line {line_no}: table line needs a schema")
            schemas[name] = _parse_schema(decl, line_no)
        elif line.strip() == "world":
            worlds.append({name: [] for name in schemas})
        elif line.startswith("selected"):
            try:
                selected = int(line.split()[1])
            except (IndexError, ValueError):
                raise ParseError(f"line {line_no}: bad selected index") from None
        else:
            if not worlds:
                raise ParseError(f"line {line_no}: row outside a world block")
            fields = line.split("\t")
            name = fields[0]
            if name not in schemas:
                raise ParseError(f"line {line_no}: unknown table {name!r}")
            schema = schemas[name]
            if len(fields) != len(schema) + 2:
                raise ParseError(
                    f"line {line_no}: expected {len(schema) + 2} fields, got {len(fields)}"
                )
            tup = tuple(
                _parse_value(f, k, line_no) for f, k in zip(fields[1:-1], schema.kinds)
            )
            try:
                mult = int(fields[-1])
            except ValueError:
                raise ParseError(f"line {line_no}: bad multiplicity {fields[-1]!r}") from None
            if mult < 1:
                raise ParseError(f"line {line_no}: multiplicity must be >= 1")
            worlds[-1][name].append((tup, mult))
    if selected is None:
        raise ParseError("missing selected line")
    if not worlds:
        raise ParseError("no worlds declared")
    if not (0 <= selected < len(worlds)):
        raise ParseError(f"selected index {selected} out of range")
    built = [
        {name: DetRelation(schemas[name], rows) for name, rows in world.items()}
        for world in worlds
    ]
    return schemas, IncompleteDB(built, selected)


def worlds_write(path: str, schemas: Dict[str, Schema], idb: IncompleteDB) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(worlds_dumps(schemas, idb))


def worlds_read(path: str) -> Tuple[Dict[str, Schema], IncompleteDB]:
    with open(path, "r", encoding="utf-8") as fh:
        return worlds_loads(fh.read())


def import_tidb(rows: Iterable[Tuple[DetTuple, float]], schema: Schema) -> AURelation:
    """Tuple-independent input: certain values; annotation thresholds are
    lb = [P = 1], sg = [P >= 0.5], ub = [P > 0]."""
    pairs = []
    for tup, prob in rows:
        if not (0.0 <= prob <= 1.0):
            raise SchemaMismatch(f"probability out of range: {prob}")
        ann = AUMult(
            1 if prob == 1.0 else 0,
            1 if prob >= 0.5 else 0,
            1 if prob > 0.0 else 0,
        )
        if ann.is_zero:
            continue
        pairs.append((tuple(RangeValue.certain(v) for v in tup), ann))
    return AURelation(schema, pairs)


def import_xdb(
    xtuples: Iterable[Sequence[Tuple[DetTuple, float]]], schema: Schema
) -> AURelation:
    """x-DB input: one row per x-tuple, value bounds covering all alternatives,
    selected guess from the highest-probability alternative (ties: first)."""
    pairs = []
    for alternatives in xtuples:
        alts = list(alternatives)
        if not alts:
            continue
        total = sum(prob for _, prob in alts)
        if total > 1.0 + 1e-12:
            raise SchemaMismatch(f"x-tuple probability mass {total} exceeds 1")
        for _, prob in alts:
            if prob < 0:
                raise SchemaMismatch(f"negative probability {prob}")
        best_tup, best_p = max(alts, key=lambda a: a[1])
        for tup, prob in alts:  # ties resolve to the first alternative
            if prob == best_p:
                best_tup, best_p = tup, prob
                break
        ann = AUMult(
            1 if total >= 1.0 - 1e-12 else 0,
            1 if (1.0 - total) <= best_p + 1e-12 else 0,
            1 if total > 0.0 else 0,
        )
        if ann.is_zero:
            continue
        values = tuple(
            RangeValue(
                min(a[0][i] for a in alts),
                best_tup[i],
                max(a[0][i] for a in alts),
            )
            for i in range(len(schema))
        )
        pairs.append((values, ann))
    return AURelation(schema, pairs)


def tidb_loads(text: str) -> Tuple[Schema, List[Tuple[DetTuple, float]]]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != TIDB_MAGIC:
        raise ParseError("missing tidb header")
    schema = _parse_schema(lines[1], 2)
    rows = []
    for line_no, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != len(schema) + 1:
            raise ParseError(f"line {line_no}: expected {len(schema) + 1} fields")
        tup = tuple(_parse_value(f, k, line_no) for f, k in zip(fields[:-1], schema.kinds))
        try:
            prob = float(fields[-1])
        except ValueError:
            raise ParseError(f"line {line_no}: bad probability {fields[-1]!r}") from None
        rows.append((tup, prob))
    return schema, rows


def xdb_loads(text: str) -> Tuple[Schema, List[List[Tuple[DetTuple, float]]]]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != XDB_MAGIC:
        raise ParseError("missing xdb header")
    schema = _parse_schema(lines[1], 2)
    xtuples: List[List[Tuple[DetTuple, float]]] = []
    for line_no, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        if line.strip() == "xtuple":
            xtuples.append([])
            continue
        if not xtuples:
            raise ParseError(f"line {line_no}: alternative outside an xtuple block")
        fields = line.split("\t")
        if len(fields) != len(schema) + 1:
            raise ParseError(f"line {line_no}: expected {len(schema) + 1} fields")
        tup = tuple(_parse_value(f, k, line_no) for f, k in zip(fields[:-1], schema.kinds))
        try:
            prob = float(fields[-1])
        except ValueError:
            raise ParseError(f"line {line_no}: bad probability {fields[-1]!r}") from None
        xtuples[-1].append((tup, prob))
    return schema, xtuples


def det_dumps(rel: DetRelation) -> str:
    """Plain text rendering of a deterministic bag (used by the sgw command)."""
    lines = [_format_schema(rel.schema)]
    rows = sorted(
        rel.rows(),
        key=lambda r: tuple(_format_value(v, k) for v, k in zip(r[0], rel.schema.kinds)),
    )
    for tup, mult in rows:
        fields = [_format_value(v, k) for v, k in zip(tup, rel.schema.kinds)]
        fields.append(f"x{mult}")
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"

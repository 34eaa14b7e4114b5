"""Scalar expression AST with deterministic, incomplete and range-annotated semantics.

The primitive operator set is {and, or, not, =, <=, +, *, recip, if, mkuncert};
!=, <, >=, >, - are desugared at construction time so the range semantics has a
single source of truth per operator.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Set

from .errors import DivisionByZero, TypeMismatch, UnboundVariable
from .values import (
    BOOL,
    INT,
    REAL,
    RangeValue,
    Scalar,
    check_comparable,
    is_numeric,
    kind_of,
    scalar_eq,
    scalar_le,
)


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    value: Scalar


@dataclass(frozen=True)
class And(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Or(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Not(Expr):
    child: Expr


@dataclass(frozen=True)
class Eq(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Leq(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Plus(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Times(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Recip(Expr):
    child: Expr


@dataclass(frozen=True)
class IfThenElse(Expr):
    cond: Expr
    then: Expr
    other: Expr


@dataclass(frozen=True)
class MakeUncertain(Expr):
    """Assemble a range value from three deterministic child expressions."""

    lb: Expr
    sg: Expr
    ub: Expr


def neq(a: Expr, b: Expr) -> Expr:
    return Not(Eq(a, b))


def lt(a: Expr, b: Expr) -> Expr:
    return Not(Leq(b, a))


def geq(a: Expr, b: Expr) -> Expr:
    return Leq(b, a)


def gt(a: Expr, b: Expr) -> Expr:
    return Not(Leq(a, b))


def minus(a: Expr, b: Expr) -> Expr:
    return Plus(a, Times(Const(-1), b))


def vars_of(e: Expr) -> FrozenSet[str]:
    out: Set[str] = set()
    _collect_vars(e, out)
    return frozenset(out)


def _collect_vars(e: Expr, out: Set[str]) -> None:
    if isinstance(e, Var):
        out.add(e.name)
    elif isinstance(e, Const):
        pass
    elif isinstance(e, (And, Or, Eq, Leq, Plus, Times)):
        _collect_vars(e.left, out)
        _collect_vars(e.right, out)
    elif isinstance(e, (Not, Recip)):
        _collect_vars(e.child, out)
    elif isinstance(e, IfThenElse):
        _collect_vars(e.cond, out)
        _collect_vars(e.then, out)
        _collect_vars(e.other, out)
    elif isinstance(e, MakeUncertain):
        _collect_vars(e.lb, out)
        _collect_vars(e.sg, out)
        _collect_vars(e.ub, out)
    else:
        raise TypeMismatch(f"unknown expression node {e!r}")


def _as_bool(v: Scalar) -> bool:
    if kind_of(v) != BOOL:
        raise TypeMismatch(f"expected boolean, got {v!r}")
    return v


def _as_number(v: Scalar):
    if not is_numeric(kind_of(v)):
        raise TypeMismatch(f"expected number, got {v!r}")
    return v


def eval_det(e: Expr, valuation: Dict[str, Scalar]) -> Scalar:
    """Standard deterministic semantics."""
    if isinstance(e, Var):
        try:
            return valuation[e.name]
        except KeyError:
            raise UnboundVariable(f"unbound variable {e.name!r}") from None
    if isinstance(e, Const):
        return e.value
    if isinstance(e, And):
        return _as_bool(eval_det(e.left, valuation)) and _as_bool(eval_det(e.right, valuation))
    if isinstance(e, Or):
        return _as_bool(eval_det(e.left, valuation)) or _as_bool(eval_det(e.right, valuation))
    if isinstance(e, Not):
        return not _as_bool(eval_det(e.child, valuation))
    if isinstance(e, Eq):
        return scalar_eq(eval_det(e.left, valuation), eval_det(e.right, valuation))
    if isinstance(e, Leq):
        return scalar_le(eval_det(e.left, valuation), eval_det(e.right, valuation))
    if isinstance(e, Plus):
        return _as_number(eval_det(e.left, valuation)) + _as_number(eval_det(e.right, valuation))
    if isinstance(e, Times):
        return _as_number(eval_det(e.left, valuation)) * _as_number(eval_det(e.right, valuation))
    if isinstance(e, Recip):
        v = _as_number(eval_det(e.child, valuation))
        if v == 0:
            raise DivisionByZero("reciprocal of zero")
        return 1 / v
    if isinstance(e, IfThenElse):
        if _as_bool(eval_det(e.cond, valuation)):
            return eval_det(e.then, valuation)
        return eval_det(e.other, valuation)
    if isinstance(e, MakeUncertain):
        # Deterministically the constructor stands for its selected guess.
        return eval_det(e.sg, valuation)
    raise TypeMismatch(f"unknown expression node {e!r}")


def eval_incomplete(e: Expr, worlds: Iterable[Dict[str, Scalar]]) -> Set[Scalar]:
    """Possible-worlds semantics: the set of per-valuation results."""
    return {eval_det(e, phi) for phi in worlds}


def _branches_match(cond: Leq, then: Expr, other: Expr) -> str:
    # Peephole so that min(v,w) := if v<=w then v else w (and the symmetric max)
    # evaluates to the pointwise triple rather than the looser if-envelope.
    if then == cond.left and other == cond.right:
        return "min"
    if then == cond.right and other == cond.left:
        return "max"
    return ""


def eval_range(e: Expr, valuation: Dict[str, RangeValue]) -> RangeValue:
    """Bound-preserving semantics over range-annotated valuations.

    The selected-guess component always equals deterministic evaluation over
    the valuation's selected guesses.
    """
    if isinstance(e, Var):
        try:
            return valuation[e.name]
        except KeyError:
            raise UnboundVariable(f"unbound variable {e.name!r}") from None
    if isinstance(e, Const):
        return RangeValue.certain(e.value)
    if isinstance(e, And):
        a = _bool_range(eval_range(e.left, valuation))
        b = _bool_range(eval_range(e.right, valuation))
        return RangeValue(a.lb and b.lb, a.sg and b.sg, a.ub and b.ub)
    if isinstance(e, Or):
        a = _bool_range(eval_range(e.left, valuation))
        b = _bool_range(eval_range(e.right, valuation))
        return RangeValue(a.lb or b.lb, a.sg or b.sg, a.ub or b.ub)
    if isinstance(e, Not):
        a = _bool_range(eval_range(e.child, valuation))
        return RangeValue(not a.ub, not a.sg, not a.lb)
    if isinstance(e, Eq):
        a = eval_range(e.left, valuation)
        b = eval_range(e.right, valuation)
        check_comparable(a.sg, b.sg)
        lb = scalar_eq(a.ub, b.lb) and scalar_eq(b.ub, a.lb)
        ub = scalar_le(a.lb, b.ub) and scalar_le(b.lb, a.ub)
        return RangeValue(lb, scalar_eq(a.sg, b.sg), ub)
    if isinstance(e, Leq):
        a = eval_range(e.left, valuation)
        b = eval_range(e.right, valuation)
        return RangeValue(scalar_le(a.ub, b.lb), scalar_le(a.sg, b.sg), scalar_le(a.lb, b.ub))
    if isinstance(e, Plus):
        a = _num_range(eval_range(e.left, valuation))
        b = _num_range(eval_range(e.right, valuation))
        return RangeValue(a.lb + b.lb, a.sg + b.sg, a.ub + b.ub)
    if isinstance(e, Times):
        a = _num_range(eval_range(e.left, valuation))
        b = _num_range(eval_range(e.right, valuation))
        products = (a.lb * b.lb, a.lb * b.ub, a.ub * b.lb, a.ub * b.ub)
        return RangeValue(min(products), a.sg * b.sg, max(products))
    if isinstance(e, Recip):
        a = _num_range(eval_range(e.child, valuation))
        if a.lb <= 0 <= a.ub:
            raise DivisionByZero(f"reciprocal over a range containing zero: {a}")
        return RangeValue(1 / a.ub, 1 / a.sg, 1 / a.lb)
    if isinstance(e, IfThenElse):
        if isinstance(e.cond, Leq):
            which = _branches_match(e.cond, e.then, e.other)
            if which:
                a = eval_range(e.then, valuation)
                b = eval_range(e.other, valuation)
                check_comparable(a.sg, b.sg)
                if which == "min":
                    return RangeValue(min(a.lb, b.lb), min(a.sg, b.sg), min(a.ub, b.ub))
                return RangeValue(max(a.lb, b.lb), max(a.sg, b.sg), max(a.ub, b.ub))
        c = _bool_range(eval_range(e.cond, valuation))
        if c.lb and c.ub:
            return eval_range(e.then, valuation)
        if not c.lb and not c.ub:
            return eval_range(e.other, valuation)
        a = eval_range(e.then, valuation)
        b = eval_range(e.other, valuation)
        check_comparable(a.sg, b.sg)
        sg = a.sg if c.sg else b.sg
        return RangeValue(min(a.lb, b.lb), sg, max(a.ub, b.ub))
    if isinstance(e, MakeUncertain):
        sgs = {name: rv.sg for name, rv in valuation.items()}
        return RangeValue(eval_det(e.lb, sgs), eval_det(e.sg, sgs), eval_det(e.ub, sgs))
    raise TypeMismatch(f"unknown expression node {e!r}")


def _bool_range(v: RangeValue) -> RangeValue:
    if kind_of(v.sg) != BOOL:
        raise TypeMismatch(f"expected boolean range, got {v!r}")
    return v


def _num_range(v: RangeValue) -> RangeValue:
    if not is_numeric(kind_of(v.sg)):
        raise TypeMismatch(f"expected numeric range, got {v!r}")
    return v


def infer_kind(e: Expr, attr_kinds: Dict[str, str]) -> str:
    """Static result kind of an expression; raises on type errors."""
    if isinstance(e, Var):
        try:
            return attr_kinds[e.name]
        except KeyError:
            raise UnboundVariable(f"unknown attribute {e.name!r}") from None
    if isinstance(e, Const):
        return kind_of(e.value)
    if isinstance(e, (And, Or)):
        for side in (e.left, e.right):
            if infer_kind(side, attr_kinds) != BOOL:
                raise TypeMismatch(f"boolean operator over non-boolean operand: {e!r}")
        return BOOL
    if isinstance(e, Not):
        if infer_kind(e.child, attr_kinds) != BOOL:
            raise TypeMismatch(f"negation of a non-boolean: {e!r}")
        return BOOL
    if isinstance(e, (Eq, Leq)):
        ka = infer_kind(e.left, attr_kinds)
        kb = infer_kind(e.right, attr_kinds)
        if ka != kb and not (is_numeric(ka) and is_numeric(kb)):
            raise TypeMismatch(f"comparison between {ka} and {kb}: {e!r}")
        return BOOL
    if isinstance(e, (Plus, Times)):
        ka = infer_kind(e.left, attr_kinds)
        kb = infer_kind(e.right, attr_kinds)
        if not (is_numeric(ka) and is_numeric(kb)):
            raise TypeMismatch(f"arithmetic over {ka} and {kb}: {e!r}")
        return REAL if REAL in (ka, kb) else INT
    if isinstance(e, Recip):
        if not is_numeric(infer_kind(e.child, attr_kinds)):
            raise TypeMismatch(f"reciprocal of a non-number: {e!r}")
        return REAL
    if isinstance(e, IfThenElse):
        if infer_kind(e.cond, attr_kinds) != BOOL:
            raise TypeMismatch(f"condition is not boolean: {e!r}")
        ka = infer_kind(e.then, attr_kinds)
        kb = infer_kind(e.other, attr_kinds)
        if ka == kb:
            return ka
        if is_numeric(ka) and is_numeric(kb):
            return REAL
        raise TypeMismatch(f"branches of mixed kind {ka}/{kb}: {e!r}")
    if isinstance(e, MakeUncertain):
        kinds = {infer_kind(c, attr_kinds) for c in (e.lb, e.sg, e.ub)}
        if len(kinds) == 1:
            return kinds.pop()
        if all(is_numeric(k) for k in kinds):
            return REAL
        raise TypeMismatch(f"mkuncert children of mixed kind: {e!r}")
    raise TypeMismatch(f"unknown expression node {e!r}")

"""Ordered scalar domain, range-annotated values and the multiplicity semiring.

Scalars are plain Python values (bool, int, float, str). Integers and reals
share the numeric order; every other cross-kind comparison is an error.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import NaturalOverflow, TypeMismatch

Scalar = Union[bool, int, float, str]

BOOL = "bool"
INT = "int"
REAL = "real"
STR = "str"

KINDS = (BOOL, INT, REAL, STR)

MAX_NAT = 2**63 - 1


def kind_of(value: Scalar) -> str:
    # bool first: bool is a subclass of int
    if isinstance(value, bool):
        return BOOL
    if isinstance(value, int):
        return INT
    if isinstance(value, float):
        return REAL
    if isinstance(value, str):
        return STR
    raise TypeMismatch(f"not a scalar: {value!r}")


def is_numeric(kind: str) -> bool:
    return kind == INT or kind == REAL


def comparable(a: Scalar, b: Scalar) -> bool:
    ka, kb = kind_of(a), kind_of(b)
    if ka == kb:
        return True
    return is_numeric(ka) and is_numeric(kb)


def check_comparable(a: Scalar, b: Scalar) -> None:
    if not comparable(a, b):
        raise TypeMismatch(
            f"cannot compare {kind_of(a)} value {a!r} with {kind_of(b)} value {b!r}"
        )


def scalar_le(a: Scalar, b: Scalar) -> bool:
    check_comparable(a, b)
    return a <= b


def scalar_eq(a: Scalar, b: Scalar) -> bool:
    check_comparable(a, b)
    return a == b


def zero_of_kind(kind: str) -> Scalar:
    """The 'absent contribution' element used by the MIN/MAX scalar action."""
    if kind == INT:
        return 0
    if kind == REAL:
        return 0.0
    if kind == BOOL:
        return False
    return ""


@dataclass(frozen=True)
class RangeValue:
    """A scalar bracketed by a lower bound, a selected guess and an upper bound."""

    lb: Scalar
    sg: Scalar
    ub: Scalar

    def __post_init__(self):
        check_comparable(self.lb, self.sg)
        check_comparable(self.sg, self.ub)
        if not (self.lb <= self.sg <= self.ub):
            raise TypeMismatch(
                f"range triple not ordered: {self.lb!r} <= {self.sg!r} <= {self.ub!r} fails"
            )

    @staticmethod
    def certain(value: Scalar) -> "RangeValue":
        return RangeValue(value, value, value)

    @property
    def is_certain(self) -> bool:
        return self.lb == self.ub

    def overlaps(self, other: "RangeValue") -> bool:
        return scalar_le(self.lb, other.ub) and scalar_le(other.lb, self.ub)

    def contains(self, value: Scalar) -> bool:
        return scalar_le(self.lb, value) and scalar_le(value, self.ub)

    def envelope(self, other: "RangeValue") -> "RangeValue":
        """Widen to cover ``other``, keeping this value's selected guess."""
        check_comparable(self.lb, other.lb)
        return RangeValue(min(self.lb, other.lb), self.sg, max(self.ub, other.ub))


# Range-annotated booleans are just RangeValue over bools (False < True).
Bool3 = RangeValue

TRUE3 = RangeValue.certain(True)
FALSE3 = RangeValue.certain(False)


@dataclass(frozen=True)
class AUMult:
    """Tuple multiplicity annotation: ordered triple of naturals."""

    lb: int
    sg: int
    ub: int

    def __post_init__(self):
        for part in (self.lb, self.sg, self.ub):
            if not isinstance(part, int) or isinstance(part, bool) or part < 0:
                raise TypeMismatch(f"multiplicity component must be a natural: {part!r}")
        if not (self.lb <= self.sg <= self.ub):
            raise TypeMismatch(f"multiplicity triple not ordered: {self}")
        if self.ub > MAX_NAT:
            raise NaturalOverflow(f"natural overflow: {self.ub}")

    @property
    def is_zero(self) -> bool:
        return self.ub == 0


ZERO = AUMult(0, 0, 0)
ONE = AUMult(1, 1, 1)


def au_add(a: AUMult, b: AUMult) -> AUMult:
    return AUMult(a.lb + b.lb, a.sg + b.sg, a.ub + b.ub)


def au_mul(a: AUMult, b: AUMult) -> AUMult:
    return AUMult(a.lb * b.lb, a.sg * b.sg, a.ub * b.ub)


def nat_monus(a: int, b: int) -> int:
    """Truncating subtraction on naturals."""
    return a - b if a > b else 0


def rlift(b: Bool3) -> AUMult:
    """Map a range-annotated boolean to a 0/1 multiplicity triple."""
    if kind_of(b.lb) != BOOL:
        raise TypeMismatch(f"rlift expects a boolean triple, got {b!r}")
    return AUMult(int(b.lb), int(b.sg), int(b.ub))

"""Exception hierarchy shared by the whole engine."""


class AudbError(Exception):
    """Base class for all engine errors."""


class TypeMismatch(AudbError):
    pass


class UnboundVariable(AudbError):
    pass


class DivisionByZero(AudbError):
    pass


class NaturalOverflow(AudbError):
    pass


class SchemaMismatch(AudbError):
    pass


class PlanError(AudbError):
    """Unknown table/attribute or an ill-typed query plan."""


class ParseError(AudbError):
    """Syntax error; carries a character offset when available."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class SerializationError(AudbError):
    pass


class EmptyAggregateWarning(UserWarning):
    """MIN/MAX aggregate over input that may be empty; result carries a sentinel."""

"""Exception hierarchy; each family maps to one CLI exit code."""


class QuiverDTError(Exception):
    exit_code = 2


class InputError(QuiverDTError):
    """Malformed input: bad file, bad arguments, shape mismatches."""

    exit_code = 2


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class DimensionError(InputError):
    pass


class ArgumentError(InputError):
    pass


class UnsupportedError(InputError):
    """Input outside the supported class (short words, large sectors, ...)."""


class TheoremViolation(QuiverDTError):
    exit_code = 1


class ResourceError(QuiverDTError):
    exit_code = 3


class BudgetError(ResourceError):
    pass


class CongruenceError(ResourceError):
    pass


class InterpolationError(QuiverDTError):
    """Samples do not fit a Laurent polynomial of the allowed span."""

    exit_code = 1


class InternalConsistencyError(QuiverDTError):
    exit_code = 1

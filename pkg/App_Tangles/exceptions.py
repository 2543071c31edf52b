"""Error types raised by the tangle computations."""


class TanglesError(Exception):
    """Base class for every failure the library reports on purpose."""


class DomainError(TanglesError):
    """A precondition of an operation does not hold for its arguments."""


class SizeGuardError(TanglesError):

    def __init__(self, guard, limit, actual):
        self.guard = guard
        self.limit = limit
        self.actual = actual
        super().__init__(f"{guard} exceeded: {actual} > {limit}")


class OutOfOrderError(TanglesError):
    """Membership was asked for a set whose order is not below the tangle order."""


class IntegrityError(TanglesError):
    """An invariant the algorithms rely on was found broken."""


class ParseError(TanglesError):

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

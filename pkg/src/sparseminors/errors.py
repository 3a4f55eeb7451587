"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """A precondition on the inputs was violated."""


class ContractViolation(RuntimeError):
    """A mathematical claim the computation relies on turned out false."""


class ResourceLimit(RuntimeError):
    """An explicit cap (paths, S-pairs, subsets) was exceeded."""


class RetryWithNewPrime(ArithmeticError):
    """A denominator vanished modulo the probe prime."""


class GraphFormatError(InvalidArgument):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")

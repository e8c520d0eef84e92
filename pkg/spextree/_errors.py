class SpexError(Exception):
    pass


class ParameterRangeError(SpexError, ValueError):
    pass


class GraphFormatError(SpexError, ValueError):

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class TreeParseError(GraphFormatError):
    pass


class ClassificationDomainError(SpexError):
    pass


class ClassificationConsistencyError(SpexError):
    pass


class SpectralConvergenceError(SpexError, ArithmeticError):

    def __init__(self, message: str, interval: tuple[float, float]):
        super().__init__(f"{message} (last interval [{interval[0]!r}, {interval[1]!r}])")
        self.interval = interval


class BudgetExceededError(SpexError):

    def __init__(self, what: str, cap: int, value: int):
        super().__init__(f"{what} = {value} exceeds the cap of {cap}.")
        self.cap = cap
        self.value = value


class InconclusiveSearchError(SpexError):

    def __init__(self, nodes: int):
        super().__init__(f"Embedding search stopped after {nodes} nodes without a decision.")
        self.nodes = nodes


InputError = (GraphFormatError, ParameterRangeError, ClassificationDomainError)

"""Exception hierarchy shared by every module of the package."""


class SmtiError(Exception):
    """Base class for all errors raised by the package."""


class InstanceError(SmtiError, ValueError):
    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class RestrictionError(SmtiError, ValueError):
    def __init__(self, message, edges=()):
        super().__init__(message)
        self.edges = tuple(edges)


class MatchingError(SmtiError, ValueError):
    pass


class MasterListError(SmtiError, ValueError):
    pass


class StabilityError(SmtiError, ValueError):
    pass


class FormulaError(SmtiError, ValueError):
    pass


class ReductionError(SmtiError, ValueError):
    pass


class WitnessError(SmtiError, ValueError):
    pass


class ReductionInvariantError(SmtiError, RuntimeError):
    """An outcome the correctness argument of a construction rules out."""


class FormatError(SmtiError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GenerationError(SmtiError, RuntimeError):
    pass

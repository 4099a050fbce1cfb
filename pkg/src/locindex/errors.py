"""Exception hierarchy. The CLI maps each family onto an exit code."""


class LocIndexError(Exception):
    """Base class for all library errors."""


class ValidationError(LocIndexError, ValueError):
    """Precondition or input validation failure (CLI exit 2)."""


class InvalidSpaceError(ValidationError):
    pass


class SymbolDegenerateError(ValidationError):
    pass


class ParametrixError(ValidationError):
    def __init__(self, message, s0_norm=None, s1_norm=None):
        super().__init__(message)
        self.s0_norm = s0_norm
        self.s1_norm = s1_norm


class ConstructionError(ValidationError):
    pass


class AmbiguousRankError(ValidationError):
    def __init__(self, message, singular_values=None):
        super().__init__(message)
        self.singular_values = singular_values


class ContextError(ValidationError):
    pass


class BudgetError(LocIndexError):
    """Chain space larger than the configured budget (CLI exit 3)."""

    def __init__(self, message, dimension=None, budget=None):
        super().__init__(message)
        self.dimension = dimension
        self.budget = budget


class ConsistencyError(LocIndexError):
    """Two routes to the same quantity disagree (CLI exit 4)."""

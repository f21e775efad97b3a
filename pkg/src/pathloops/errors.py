"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the region where a formula or constructor is defined."""


class NumericalConsistencyError(ArithmeticError):
    """A computed quantity failed a built-in consistency check."""


class InternalError(RuntimeError):
    """An invariant that should be impossible to violate was violated."""


class DegenerateRecurrenceError(ArithmeticError):
    """The eigenvector pivot recurrence hit a (near) zero pivot."""

    def __init__(self, index, pivot):
        super().__init__(f"pivot a_{index} = {pivot:.3e} is degenerate")
        self.index = index
        self.pivot = pivot


class SearchFailure(RuntimeError):
    """A root search could not find a sign change in the allowed range."""

class BudgetExceeded(RuntimeError):
    """An enumeration or randomized search hit its configured cap."""


class NotInvariantError(ValueError):
    """A subspace expected to be a submodule is not stable under the action."""


class AlgebraMismatch(ValueError):
    pass

class BudgetExceeded(RuntimeError):
    """A computation was refused because it would exceed a configured budget."""

    def __init__(self, what: str, budget, estimate=None):
        self.what = what
        self.budget = budget
        self.estimate = estimate
        msg = f"{what}: budget {budget} exceeded"
        if estimate is not None:
            msg += f" (estimated {estimate})"
        super().__init__(msg)


class VerificationError(RuntimeError):
    """Two independent computations of the same quantity disagreed."""

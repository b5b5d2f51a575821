"""Exception types shared across the toolkit."""


class BudgetExceeded(RuntimeError):
    """A configured work or memory budget ran out before an answer was found.

    This is never the same as a negative answer: callers must treat it as
    "unknown".
    """


class FactorizationBudgetExceeded(BudgetExceeded):
    def __init__(self, cofactor, steps):
        super().__init__(f"cofactor {cofactor} resisted {steps} rho steps")
        self.cofactor = cofactor
        self.steps = steps


class SearchBudgetExceeded(BudgetExceeded):
    pass


class MemoryLimitExceeded(BudgetExceeded):
    pass


class NonCoprimeModuli(ValueError):
    def __init__(self, first, second):
        super().__init__(f"moduli {first} and {second} are not coprime")
        self.pair = (first, second)


class NotBlockedError(ValueError):
    """Raised when an operation needs a blocked pair (a, m) and gets one that is not."""


class NotACoverError(ValueError):
    pass


class LcmLimitExceeded(BudgetExceeded):
    def __init__(self, lcm, limit):
        super().__init__(f"lcm {lcm} exceeds the configured limit {limit}")
        self.lcm = lcm
        self.limit = limit

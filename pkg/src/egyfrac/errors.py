"""Exception types shared across the package."""


class EgyfracError(Exception):
    """Base class for all package-specific errors."""


class NotCoprime(EgyfracError):
    """Modular inverse requested for non-coprime arguments."""


class SplitAtOne(EgyfracError):
    """Splitting identity applied where the only denominator is 1."""


class SplitCollision(EgyfracError):
    """The telescoped split of 1/n would repeat a denominator (n+m hits a product)."""


class PreconditionViolated(EgyfracError):
    """An operation's stated precondition does not hold for the given input."""


class IntegerResidual(EgyfracError):
    """A clearing step received a residual with denominator 1."""


class ResidualNonzero(EgyfracError):
    """The small builder's recursion terminated on a nonzero integer residual."""

    def __init__(self, value, trace=None):
        super().__init__(f"final residual {value} != 0")
        self.value = value
        self.trace = trace


class NoSubsetFound(EgyfracError):
    """No subset of the candidate pool hits the required residue class."""


class NoPairInWindow(EgyfracError):
    """No admissible pair exists in the clearing window under the given cap."""


class InfeasibleAtScale(EgyfracError):
    """A construction stage cannot proceed at the requested numeric scale."""

    def __init__(self, stage, diagnostic):
        super().__init__(f"{stage}: {diagnostic}")
        self.stage = stage
        self.diagnostic = diagnostic


class NotARepresentation(EgyfracError):
    """A claimed representation does not sum to its target."""


class BudgetExceeded(EgyfracError):
    """Node or time budget exhausted before the search could finish."""

    def __init__(self, message="search budget exhausted", nodes=None, seconds=None):
        super().__init__(message)
        self.nodes = nodes
        self.seconds = seconds

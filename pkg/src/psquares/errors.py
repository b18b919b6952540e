"""Exception hierarchy shared by all modules."""


class PSquaresError(Exception):
    """Base class for every error raised by the package."""


class PreconditionError(PSquaresError, ValueError):
    """An input is outside the documented domain of an operation."""


class DomainError(PreconditionError):
    """The exponent c lies outside (1, 2) where the counting formulas apply."""


class HypothesisViolated(PreconditionError):
    """An exponent pair fails ``(1 - kappa)/2 <= lambda - kappa``."""


class RangeViolation(PreconditionError):
    """An exponent pair left the region 0 <= kappa <= 1/2 <= lambda <= 1."""


class DegenerateExponents(PreconditionError):
    """The triple-sum exponents make the Robert-Sargos bound inapplicable."""


class DegenerateFit(PreconditionError):
    """Too few usable points for a log-log regression."""


class NoFeasiblePair(PSquaresError):
    """Every enumerated exponent pair was rejected by the constraints."""


class BudgetError(PSquaresError):
    """Base class for resource exhaustion."""


class BudgetExceeded(BudgetError):
    """The work estimate of an enumeration exceeds the configured cap."""


class LimitTooLarge(BudgetError):
    """A sieve table would exceed the configured memory budget."""


class PrecisionExhausted(BudgetError):
    """Interval refinement reached the maximum precision without certifying."""

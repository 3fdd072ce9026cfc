"""Exception types shared across the library."""


class FlagError(Exception):
    """Base class for all flaginst errors."""


class CompositionNonzero(FlagError):
    """Consecutive maps of a complex do not compose to zero on F."""

    def __init__(self, position, row, col, value):
        self.position = position
        self.row = row
        self.col = col
        self.value = value
        super().__init__(
            "composition at position %d, entry (%d,%d) reduces to %s"
            % (position, row, col, value)
        )


class LiftInconsistent(FlagError):
    """The assembled total complex failed the d^2 = 0 assertion."""


class Undetermined(FlagError):
    """A cohomology entry is not forced by exact flanks plus chi."""


class ChernMismatch(FlagError):
    """Whitney Chern classes disagree with the declared charge."""


class BudgetExhausted(FlagError):
    """Randomized generation ran out of attempts."""

    def __init__(self, attempts, reasons):
        self.attempts = attempts
        self.reasons = reasons
        super().__init__(
            "no verified monad after %d attempts: %s" % (attempts, "; ".join(reasons))
        )


class TrimDegenerate(FlagError):
    """Constant rows of the augmented monad are not of full rank."""


class UnverifiedMonad(FlagError):
    """An operation required a verified monad but verification failed."""


class RankUnexpected(FlagError):
    """Restricted cohomology is not that of a rank-2 bundle on the curve."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class ReducibleInput(FlagError):
    """A smooth conic was required."""


class ConstantPencil(FlagError):
    """The pencil direction does not move the conic."""


class DegenerateBasis(FlagError):
    """No coordinate pair yields an independent parametrization basis."""


class IdenticallyZero(FlagError):
    """Every member of the pencil is a jumping conic."""


class RootValidationFailed(FlagError):
    """A determinant root was not confirmed by the splitting oracle."""

    def __init__(self, message, data=None):
        self.data = data
        super().__init__(message)

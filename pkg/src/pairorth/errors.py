"""Exception types raised by the package."""


class PairOrthError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(PairOrthError, ValueError):
    """Caller passed arguments violating a precondition."""


class ConstructionError(PairOrthError, ValueError):
    """Entries do not form a valid unit-column matrix."""


class DegeneratePairError(PairOrthError):
    """The selected pair of columns is numerically parallel.

    Carries the offending pair and the magnitude of their inner product so
    a failed run can be reproduced.
    """

    def __init__(self, pair, inner_abs):
        self.pair = tuple(pair)
        self.inner_abs = float(inner_abs)
        super().__init__(
            f"columns {self.pair} are numerically parallel "
            f"(|inner| = {self.inner_abs!r})"
        )


class SingularityError(PairOrthError):
    """A distance computation hit a numerically singular system."""

    def __init__(self, message, column=None):
        self.column = column
        super().__init__(message)


class DomainError(PairOrthError, ValueError):
    """A bound evaluator was called outside its stated domain."""


class ChainAbortError(PairOrthError):
    """A chain run aborted on a degenerate pair.

    Carries a diagnostic record (step index, pair, inner product magnitude)
    and the partial trajectory so the failure is never silently skipped.
    """

    def __init__(self, step, pair, inner_abs, partial_trajectory=None):
        self.step = int(step)
        self.pair = tuple(pair)
        self.inner_abs = float(inner_abs)
        self.partial_trajectory = partial_trajectory
        super().__init__(
            f"chain aborted at step {self.step}: degenerate pair {self.pair} "
            f"(|inner| = {self.inner_abs!r})"
        )

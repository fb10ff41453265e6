"""Exception hierarchy.

Validation problems derive from :class:`ValidationError` (CLI exit code 2),
numerical breakdowns from :class:`NumericalError` (CLI exit code 3).
"""


class PartialRankError(Exception):
    """Base class for all package errors."""


class ValidationError(PartialRankError, ValueError):
    """Input does not satisfy a documented precondition."""


class NumericalError(PartialRankError, ArithmeticError):
    """A computation produced a non-finite or otherwise unusable value."""


class CycleDetected(ValidationError):
    pass


class UnknownItem(ValidationError):
    pass


class SelfComparison(ValidationError):
    pass


class LimitExceeded(ValidationError):
    pass


class MissingUtility(ValidationError):
    pass


class MissingFeature(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class CountMismatch(ValidationError):
    pass


class EmptyCandidates(ValidationError):
    pass


class DuplicateChoice(ValidationError):
    pass


class EmptyDataset(ValidationError):
    pass


class UnknownNode(ValidationError):
    pass


class MissingDegree(ValidationError):
    pass


class InsufficientCandidates(ValidationError):
    pass


class AllComponentsImpossible(ValidationError):
    """Every mixture component assigns zero probability to some event."""


class DegenerateClustering(PartialRankError):
    """A K-means cluster stayed empty after re-seeding."""


class NonFiniteResult(NumericalError):
    pass


class NonFiniteLoss(NumericalError):
    pass

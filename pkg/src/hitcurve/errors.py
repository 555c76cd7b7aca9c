"""Exception hierarchy for hitcurve.

Everything derives from ``ValueError`` so callers that only guard against bad
values keep working. The CLI maps :class:`InputError` to exit code 2 and
:class:`DegenerateDataError` to exit code 3.
"""


class HitCurveError(ValueError):
    """Base class for all hitcurve errors."""


class InputError(HitCurveError):
    """The caller supplied invalid input."""


class DegenerateDataError(HitCurveError):
    """The data are valid but a quantity is undefined for them."""


class EmptyDataset(InputError):
    """A dataset with no samples."""


class NonBinaryLabel(InputError):
    """A label outside {0, 1}."""


class NonFiniteScore(InputError):
    """A NaN or infinite score."""


class InvalidPrevalence(InputError):
    """A prevalence outside the open interval (0, 1)."""


class InvalidCorrelation(InputError):
    """A correlation coefficient outside [-1, 1]."""


class DomainError(InputError):
    """An argument outside the domain of a function."""


class DegenerateScenario(InputError):
    """A simulation scenario that would produce an empty class."""


class MalformedInput(InputError):
    """A problem in an input file.

    Args:
        message: What went wrong
        line: 1-based line number in the file, when known
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateClass(DegenerateDataError):
    """One of the two classes has no members."""


class RandomDenominator(DegenerateDataError):
    """AUC is exactly 1/2, so the momentum estimate is undefined."""


class SingularInformation(DegenerateDataError):
    """The Fisher information matrix cannot be assembled (a zero-probability group)."""


class DegenerateReplicate(DegenerateDataError):
    """A resampling loop could not draw a replicate containing both classes."""

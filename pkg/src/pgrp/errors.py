"""Exception types shared across the package."""


class PgrpError(Exception):
    """Base class for all library errors."""


class CapacityError(PgrpError):
    """The requested object exceeds the dense-engine size limit."""


class EngineUnsupportedError(PgrpError):
    """The operation is not available on this group engine."""


class DimensionMismatchError(PgrpError):
    """Operands live in different ambient spaces or over different primes."""


class HandleMismatchError(PgrpError):
    """A subgroup or module handle belongs to a different parent group."""


class FaithfulnessError(PgrpError):
    """The module has a non-trivial kernel where a faithful one is required."""


class NotBestOffenderError(PgrpError):
    """Replacement was requested for a subgroup that is not a best offender."""


class RepresentationInvalidError(PgrpError):
    """Matrices fail the homomorphism or invertibility requirements."""


class GroupFileError(PgrpError):
    """A group or representation file is malformed.

    ``line`` is the 1-based line number of the first offending line.
    """

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ExprParseError(PgrpError):
    """A constructor expression is malformed.

    ``offset`` is the byte offset of the first offending character and
    ``kind`` is a stable diagnostic tag.
    """

    def __init__(self, message, offset, kind):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset
        self.kind = kind


class InvalidQSeriesError(PgrpError):
    """A candidate subgroup series violates normality or the vanishing rule.

    ``index`` is the 1-based index of the first failing step.
    """

    def __init__(self, message, index):
        super().__init__(f"step {index}: {message}")
        self.index = index


class IntegrityError(PgrpError):
    """An internal cross-check failed; indicates a bug or a false assumption."""

"""Exception types shared across the package."""


class SpliceFloerError(Exception):
    """Base class for all package errors."""


class NotRankOne(SpliceFloerError):
    """Localized homology of a complex is not a single tower."""


class DegreeMismatch(SpliceFloerError):
    pass


class SearchBudgetExceeded(SpliceFloerError):
    pass


class InvalidCone(SpliceFloerError):
    pass


class HypothesisFailed(SpliceFloerError):
    pass


class InvalidInput(SpliceFloerError):
    pass


class InadmissibleWord(SpliceFloerError):
    pass


class NotBlowdownable(SpliceFloerError):
    pass


class NoClasp(SpliceFloerError):
    pass


class OutOfRange(SpliceFloerError):
    pass


class NotType1(SpliceFloerError):
    pass


class ParseError(SpliceFloerError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)

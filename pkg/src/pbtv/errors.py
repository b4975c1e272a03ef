"""Exception hierarchy for pbtv.

Every error is a ``ValueError`` so callers that only care about bad input
can catch that; the CLI maps all of them to exit code 2.
"""


class PbtvError(ValueError):
    pass


class InvalidParams(PbtvError):
    pass


class InvalidPmf(PbtvError):
    pass


class LengthMismatch(PbtvError):
    pass


class NotDominating(PbtvError):
    pass


class NotUnimodal(PbtvError):
    pass


class NonPositiveMass(PbtvError):
    pass


class EmptyVector(PbtvError):
    pass


class EmptyPart(PbtvError):
    pass


class BadPartition(PbtvError):
    pass


class BadSplit(PbtvError):
    pass


class SupportTooLarge(PbtvError):
    pass


class TooLarge(PbtvError):
    pass


class TooLargeForBruteforce(TooLarge):
    pass


class BadGrid(PbtvError):
    pass


class BadConfig(PbtvError):
    pass


class UnknownSuite(PbtvError):
    pass

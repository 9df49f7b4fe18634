"""Exception types shared across the package."""


class LexdraftError(Exception):
    """Base class for all data/model errors raised by this package."""


class InvalidEncoding(LexdraftError):
    pass


class EmptyDocument(LexdraftError):
    pass


class EmptyCorpus(LexdraftError):
    pass


class DuplicateId(LexdraftError):
    pass


class InvalidId(LexdraftError):
    pass


class EncodingError(LexdraftError):
    pass


class IncompleteLexicon(LexdraftError):
    pass


class InvalidLexicon(LexdraftError):
    pass


class SpanOutOfRange(LexdraftError):
    pass


class NonFiniteLoss(LexdraftError):
    pass


class BadModelFile(LexdraftError):
    pass


class VocabMismatch(LexdraftError):
    pass


class Unreachable(LexdraftError):
    pass


class BadResponse(LexdraftError):
    pass

"""Exception hierarchy shared across the platform."""


class CodeLearnError(Exception):
    """Base class for all domain errors."""


# --- vector store ---

class DimensionMismatch(CodeLearnError):
    pass


class ZeroNormVector(CodeLearnError):
    """Cosine similarity is undefined for a zero-length vector."""


class DuplicateId(CodeLearnError):
    pass


class IoFailure(CodeLearnError):
    """Wraps the underlying OSError so callers map it uniformly."""


class CorruptIndex(CodeLearnError):
    pass


# --- ingestion ---

class ParseError(CodeLearnError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateTag(CodeLearnError):
    pass


# --- provider ---

class ProviderUnavailable(CodeLearnError):
    pass


class EmptyText(CodeLearnError):
    pass


# --- rag pipeline ---

class NoExemplars(CodeLearnError):
    pass


class GenerationUnparseable(CodeLearnError):
    pass


class EmptyMessage(CodeLearnError):
    pass


# --- learning domain ---

class InsufficientQuestions(CodeLearnError):
    pass


class SessionAlreadyCompleted(CodeLearnError):
    pass


class IncompleteAnswers(CodeLearnError):
    pass


class EmptyTopics(CodeLearnError):
    pass


class InvalidTimeline(CodeLearnError):
    pass


class NotFound(CodeLearnError):
    pass


# --- service ---

class InvalidCredentials(CodeLearnError):
    pass

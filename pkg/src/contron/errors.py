"""Exception hierarchy shared across the toolkit."""


class ContronError(Exception):
    """Base class for all toolkit errors."""


class IngestError(ContronError):
    """A document could not be read or converted."""


class EmptyDocumentError(IngestError):
    """Ingestion produced no text."""


class EmptyCorpusError(ContronError):
    """An operation that needs at least one document got none."""


class MissingDatabaseError(ContronError):
    """The lexical database directory is absent or incomplete."""


class OntologyFormatError(ContronError):
    """An ontology file violates the interchange schema."""

    def __init__(self, message: str, location: str | None = None):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class UnknownClassError(ContronError):
    """A class id does not exist in the ontology."""


class DisjointViolationError(ContronError):
    """Attempted to match an entity that was disjointed from the class."""


class KbError(ContronError):
    """Base class for knowledge-base client failures."""


class NetworkError(KbError):
    """The knowledge base could not be reached after retries."""


class RateLimitedError(KbError):
    """The knowledge base rejected the request rate."""


class MalformedResponseError(KbError):
    """The knowledge base answered with an unparseable body."""


class CacheMissError(KbError):
    """Offline mode was requested but the query is not cached."""


class UndefinedMetricError(ContronError):
    """A metric denominator is zero; the value is undefined, not 0."""


class GoldFileError(ContronError):
    """The gold-label file is malformed."""

"""Exception hierarchy shared across the package."""


class ConfGuardError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ConfGuardError):
    """Input violates a documented precondition."""


class SchemaError(ValidationError):
    """A graph mutation breaks the entity/relation schema."""


class IntegrityError(ConfGuardError):
    """A relation references a missing entity."""


class ParseError(ConfGuardError):
    """A serialized artifact could not be parsed; message names the location."""


class ExtractionError(ConfGuardError):
    """A document adapter failed; message carries the document id."""


class UsageError(ConfGuardError):
    """An operation was invoked with incompatible arguments."""


class ModelLoadError(ConfGuardError):
    """A persisted model file is corrupt or has an unknown version."""


class RemediationError(ConfGuardError):
    """A remediation plan contains conflicting or unapplicable edits."""

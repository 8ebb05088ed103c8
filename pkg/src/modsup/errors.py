"""Exception hierarchy shared across the package."""


class ModsupError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(ModsupError):
    """Malformed automaton text or manifest content."""


class EventConflictError(FormatError):
    """The same event carries different attributes in different sources."""


class AlphabetMismatchError(ModsupError):
    """An operation received automata or projections over incompatible alphabets."""


class InvalidProblemError(ModsupError):
    """A synthesis problem or modular system violates a structural precondition."""


class ManifestError(ModsupError):
    """A project manifest is missing, inconsistent, or refers to bad inputs."""

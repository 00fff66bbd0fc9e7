"""Exception taxonomy; each class maps to one CLI exit category."""


class CohypoError(Exception):
    """Base class for all errors raised by this package."""

    category = "internal"


class ContractError(CohypoError):
    """A documented precondition was violated by the caller."""

    category = "contract"


class UnknownWordError(ContractError):
    """Lookup of a word that is absent from the requested table."""

    def __init__(self, word, where):
        super().__init__(f"unknown word {word!r} in {where}")
        self.word = word


class InputFormatError(CohypoError):
    """Malformed input file content."""

    category = "format"

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc += f"{path}"
        if line is not None:
            loc += f":{line}"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = path
        self.line = line


class MissingInputError(CohypoError):
    """An input file or directory does not exist or cannot be read."""

    category = "io"


class ConfigError(CohypoError):
    """Invalid pipeline or run configuration."""

    category = "format"


class TrainingDivergedError(CohypoError):
    """Non-finite values appeared during embedding training."""

    category = "diverged"

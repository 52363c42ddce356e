"""Exception types raised across the package."""


class ParameterError(ValueError):
    """An input lies outside the admissible range of an operation.

    ``bound`` names the violated constraint so callers (and the CLI) can
    report it verbatim.
    """

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class DegenerateInputError(ValueError):
    """The input is valid in type but makes the quantity undefined (zero mass, zero seminorm)."""


class FieldFormatError(OSError):
    """A field file is truncated, has the wrong magic, or disagrees with its header."""

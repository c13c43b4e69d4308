"""Exception types shared across the package."""


class FormatError(ValueError):
    """A text file does not follow one of the package's formats."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(RuntimeError):
    """A configured node, variable, column or time cap would be exceeded."""


class InfeasibleError(ValueError):
    """The matrix has duplicate rows, so no column set can separate them."""


class StructureError(ValueError):
    """A column set does not have the shape every solution of a reduced instance has."""

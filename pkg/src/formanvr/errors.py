"""Exception types shared across the package."""


class FRCInputError(ValueError):
    """Invalid user input: malformed data, bad parameters, unsorted filtrations."""


class CSVFormatError(FRCInputError):
    """A CSV file could not be parsed; carries the offending 1-based line number."""

    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        super().__init__(f"{self.path}:{line}: {message}")


class InvariantViolation(RuntimeError):
    """An internal consistency check failed (e.g. a face arrived before its boundary)."""

class ParseError(ValueError):
    """Malformed input file (corpus, config, vectors, checkpoint)."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

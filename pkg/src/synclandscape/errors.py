"""Exception types raised across the package."""


class InvalidSizeError(ValueError):
    """A size argument (vertex count, enumeration limit) is out of range."""


class InvalidParameterError(ValueError):
    """A non-size parameter (k, p, gamma, step, ...) is out of range."""


class ShapeError(ValueError):
    """A phase vector does not match the graph it is paired with."""


class ParseError(ValueError):
    """Malformed input text. ``line`` is 1-based, or None for whole-file problems."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalError(ArithmeticError):
    """An eigensolver failed or a computation produced non-finite values."""


class NumericalDivergenceError(NumericalError):
    """Gradient descent produced a non-finite energy or gradient.

    ``context`` accumulates where it happened (iteration, trial, sub-seed,
    cell coordinates) as the error propagates outwards.
    """

    def __init__(self, message: str, **context):
        self.base_message = message
        self.context = dict(context)
        super().__init__(self._render())

    def _render(self) -> str:
        if not self.context:
            return self.base_message
        ctx = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{self.base_message} ({ctx})"

    def with_context(self, **context) -> "NumericalDivergenceError":
        merged = {**context, **self.context}
        return NumericalDivergenceError(self.base_message, **merged)

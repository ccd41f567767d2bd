"""Exception hierarchy shared by all modules."""


class GraphDefError(Exception):
    """Base class for library errors."""


class ParameterError(GraphDefError, ValueError):
    """Invalid parameter values for a generator or operation."""


class DomainError(GraphDefError, ValueError):
    """Input graph is outside the domain of the operation (e.g. not a tree)."""


class PreconditionError(GraphDefError, ValueError):
    """A documented precondition does not hold."""


class ResourceError(GraphDefError):
    """The request exceeds the configured resource envelope."""


class WellFormednessError(GraphDefError, ValueError):
    """A formula violates a structural rule (bad quantification, bad arity)."""


class EvaluationError(GraphDefError):
    """A formula cannot be evaluated under the given assignment."""


class ParseError(GraphDefError, ValueError):
    """Syntax error in formula or graph text, with a character position."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)

"""Exception hierarchy shared by all modules."""


class MeasInvError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(MeasInvError, ValueError):
    pass


class GroupMismatch(MeasInvError, ValueError):
    pass


class DependentSupport(MeasInvError):
    """The supplied points satisfy a nontrivial integer relation."""


class PreconditionViolated(MeasInvError):
    """A hypothesis of a lemma or theorem is not met by the input.

    ``hypothesis`` names the failed condition so callers can report it.
    """

    def __init__(self, hypothesis, detail=""):
        self.hypothesis = hypothesis
        self.detail = detail
        msg = hypothesis if not detail else f"{hypothesis}: {detail}"
        super().__init__(msg)


class NotApplicable(PreconditionViolated):
    """An inversion route cannot be used for this measure."""


class Singular(MeasInvError):
    """The measure is not invertible (its transform vanishes somewhere)."""


class DomainError(MeasInvError, ValueError):
    pass


class BudgetExceeded(MeasInvError):
    """Grid refinement ran out of mesh budget; ``profile`` is the last one computed."""

    def __init__(self, message, profile=None):
        super().__init__(message)
        self.profile = profile


class Infeasible(MeasInvError):
    pass


class ParseError(MeasInvError, ValueError):
    """Malformed group string or measure document."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)

"""Exception hierarchy; the CLI maps each family to an exit code."""


class PreconditionError(ValueError):
    """Input violates an operation's precondition (exit code 2)."""


class ConvergenceError(RuntimeError):
    """A numerical solver hit its iteration cap (exit code 3)."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class TheoremViolation(RuntimeError):
    """A computed quantity contradicts an invariant that must hold (exit code 4)."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness

"""Exception hierarchy shared by every fgdyn module."""


class FgdynError(Exception):
    """Base class for all library errors."""


class InputError(FgdynError, ValueError):
    """Malformed user input: bad letters, bad automorphism text, bad flags."""


class BudgetExceeded(FgdynError):
    """A configured length or iteration budget was exhausted.

    ``reached`` carries the last completed step when the caller can use it
    (for example the iterate index of a growth profile).
    """

    def __init__(self, message, reached=None):
        super().__init__(message)
        self.reached = reached


class PreconditionError(FgdynError):
    """An operation was called on an input it refuses to handle."""


class InverseNotFound(FgdynError):
    """Nielsen search for an inverse ran out of budget."""


class NoConvergence(FgdynError):
    """Iteration towards a boundary point did not stabilise."""


class NoStabilization(FgdynError):
    """A subword fingerprint did not stabilise within the iterate budget."""


class InvariantViolation(FgdynError):
    """A mathematical invariant audited at runtime failed."""

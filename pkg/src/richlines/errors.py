"""Exception types shared across the package.

Two failure classes matter to callers (and to the CLI exit status):
bad input, and a violated non-asymptotic invariant.
"""


class PreconditionError(ValueError):
    """Input does not satisfy an operation's precondition."""


class InvariantViolation(AssertionError):
    """A hard (non-asymptotic) guarantee failed; indicates a bug."""

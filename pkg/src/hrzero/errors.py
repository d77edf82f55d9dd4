"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter or point lies outside the operation's domain."""


class NonConvergedError(RuntimeError):
    """A numerical procedure could not reach the requested tolerance."""

"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Parameters outside an operation's documented domain."""


class GeometryError(InvalidInputError):
    """Geometry outside the far-field regime a formula assumes, without an
    explicit override."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to bracket or converge."""

"""Exception types shared by the library and the CLI."""


class ResourceCapError(RuntimeError):
    """A requested size exceeds a configured memory/work cap."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or bracket a root."""

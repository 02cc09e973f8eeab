class SomqeError(Exception):
    """Base class for errors raised by somqe."""


class FormatError(SomqeError, ValueError):
    """Malformed, truncated or unsupported file contents."""


class ReproductionError(SomqeError):
    """A reproduction run violated one of its stated assertions."""

class DomainError(ValueError):
    """A precondition on the mathematical input was violated."""


class CapExceeded(RuntimeError):
    """A configured resource cap (scan bound, iteration cap) was hit."""

"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised when user-supplied data violates a documented precondition."""


class ResourceLimitError(RuntimeError):
    """Raised when a search would exceed its configured size cap.

    The message names the cap and the flag that lifts it.
    """

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap


class DeadlineExceeded(RuntimeError):
    """Raised when a cooperatively cancelled search runs past its deadline."""

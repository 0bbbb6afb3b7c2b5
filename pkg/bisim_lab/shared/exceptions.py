"""Shared exceptions for Bisim Lab."""


class BisimLabException(Exception):
    """Base exception for all application errors."""
    
    def __init__(
        self, 
        message: str, 
        exit_code: int = 2, 
        error_code: str = "INTERNAL_ERROR"
    ):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code
        super().__init__(message)


class InputError(BisimLabException):
    """Malformed input or violated precondition."""
    
    def __init__(self, message: str):
        super().__init__(
            message=message,
            exit_code=2,
            error_code="INPUT_ERROR"
        )


class UnsupportedInputError(BisimLabException):
    """Well-formed input that an algorithm does not accept."""
    
    def __init__(self, message: str):
        super().__init__(
            message=message,
            exit_code=2,
            error_code="UNSUPPORTED_INPUT"
        )


class BoundExceededError(BisimLabException):
    """Exhaustive search refused above its configured size bound."""
    
    def __init__(self, what: str, size: int, bound: int):
        self.size = size
        self.bound = bound
        super().__init__(
            message=f"{what} refused: {size} states exceeds bound {bound}",
            exit_code=2,
            error_code="BOUND_EXCEEDED"
        )


class VerificationError(BisimLabException):
    """A trace, bound or runtime invariant failed its check."""
    
    def __init__(self, message: str):
        super().__init__(
            message=message,
            exit_code=1,
            error_code="VERIFICATION_FAILED"
        )

"""Shared package"""

from bisim_lab.shared.exceptions import (
    BisimLabException,
    InputError,
    UnsupportedInputError,
    BoundExceededError,
    VerificationError,
)

__all__ = [
    "BisimLabException",
    "InputError",
    "UnsupportedInputError",
    "BoundExceededError",
    "VerificationError",
]

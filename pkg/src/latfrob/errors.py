"""Exception types shared across the package."""


class IntegrityError(ArithmeticError):
    """An exact division that had to succeed did not.

    Raised from inside Witt/ghost solving this always indicates a bug in the
    construction, not bad input.
    """

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class NotInImage(ValueError):
    """A ghost vector is not the ghost of any Witt vector over the ring."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class VerificationFailure(AssertionError):
    """A certificate or identity check failed; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness

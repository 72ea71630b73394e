"""Shared exception types."""


class DegeneracyError(RuntimeError):
    """Numerical degeneracy: a factorization pivot or a squared power function
    left the range that exact arithmetic allows.

    ``pivot`` carries the offending pivot index when the failure came from a
    dense factorization, else None.
    """

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot

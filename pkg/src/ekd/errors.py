"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`EkdError`,
so callers (and the CLI's exit-code mapping) can tell them apart from bugs.
"""


class EkdError(Exception):
    """Base class for all deliberate failures."""


class InputError(EkdError, ValueError):
    """A precondition on the arguments does not hold."""


class UnsupportedDegreeError(InputError):
    pass


class NotSquarefreeError(InputError):
    def __init__(self, gcd):
        self.gcd = gcd
        super().__init__(f"polynomial is not squarefree: gcd(p, p') = {gcd}")


class CertificationError(EkdError):
    """Certification did not succeed before the precision cap."""

    def __init__(self, message, *, bits=None, index=None):
        self.bits = bits
        self.index = index
        super().__init__(message)


class BoundaryOverlapError(CertificationError):
    pass


class StructuralError(EkdError):
    """The half-space data violates the skew condition."""

    def __init__(self, message, pair=None):
        self.pair = pair
        super().__init__(message)


class ConsistencyError(EkdError):
    """Two computations that must agree did not."""


class NoGapError(EkdError):
    """Every modulus falls into a single tied group."""

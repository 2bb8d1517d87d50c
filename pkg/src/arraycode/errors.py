"""Exception hierarchy shared across the toolkit.

The CLI maps these onto process exit codes: parameter errors exit 2,
unrecoverable erasure patterns exit 3, shard format problems exit 4.
"""


class ArrayCodeError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(ArrayCodeError):
    """Invalid code parameters, exponents, or argument combinations."""


class InputError(ArrayCodeError):
    """Structurally valid arguments whose values violate a precondition
    (e.g. dividing a polynomial with an odd number of nonzero terms)."""


class UnrecoverableErasureError(ArrayCodeError):
    """Erasure pattern that cannot be repaired: too many columns lost,
    or no invertible parity subsystem covers the lost columns."""


class FormatError(ArrayCodeError):
    """Malformed or inconsistent shard files."""

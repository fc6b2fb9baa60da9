"""Semantic exception hierarchy.

Every failure mode in the kernel is one of four kinds: the caller handed
us malformed data (``InputError``), the caller handed us well-formed data
describing an irrational model (``ModelError``), the request exceeds the
configured desk-scale bounds (``ResourceLimitError``), or the kernel
itself broke an invariant (``InternalError``).  The CLI maps these to
exit codes; library users can catch ``DesirError`` for all of them.
"""


class DesirError(Exception):
    """Base class for all errors raised by this package."""


class InputError(DesirError, ValueError):
    """Malformed input: bad dimensions, dangling names, float literals, ..."""


class ModelError(DesirError):
    """Well-formed but irrational input: incoherent sets, inconsistent relations."""


class ResourceLimitError(DesirError):
    """A computation exceeds the configured desk-scale bounds."""


class InternalError(DesirError):
    """An internal invariant failed; indicates a bug in the kernel."""

"""Exception hierarchy shared by every module."""


class PGIError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(PGIError, ValueError):
    """Malformed or inconsistent construction input."""


class SizeLimitError(PGIError):
    """A group or closure would exceed the configured order cap."""


class ExtensionError(SpecError):
    """Cyclic extension data violates the compatibility conditions."""


class DedekindError(PGIError):
    """An invariant was requested for a group whose subgroups are all normal."""


class LatticeTooLargeError(SizeLimitError):
    """Subgroup enumeration exceeded the subgroup-count cap."""


class HypothesisError(PGIError, ValueError):
    """Preconditions of a constructive lemma are not met."""


class VerificationError(PGIError, AssertionError):
    """A checked statement turned out to be false."""

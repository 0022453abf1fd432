"""Exception hierarchy shared by the whole package.

The CLI maps these onto exit codes, so library code should not raise bare
ValueError for contract violations.
"""


class PredfuseError(Exception):
    """Base class for all package errors."""


class ValidationError(PredfuseError, ValueError):
    """Inputs violate a domain contract: bad ranges, malformed files, NaNs."""


class AlignmentError(ValidationError):
    """Two id-carrying collections do not share the same sample ids."""


class ConstraintError(PredfuseError):
    """A structural constraint is violated: even-K majority vote, a decision
    threshold outside its interval, negative combination weights."""


class DegenerateWeightsError(ConstraintError):
    """All combination weights are zero, so the weight-normalized score is
    undefined."""

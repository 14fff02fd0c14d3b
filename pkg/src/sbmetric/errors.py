class SbMetricError(Exception):
    """Base class for errors raised by sbmetric."""


class InputError(SbMetricError, ValueError):
    """Malformed input: wrong dimension, non-finite coordinate, bad radius."""


class UnknownNameError(SbMetricError, KeyError):
    """A catalog or map name that is not registered."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class PreconditionError(SbMetricError, ValueError):
    """An operation was called outside the hypotheses it relies on."""


class DegenerateError(SbMetricError, ValueError):
    """No sampled tuple had a positive denominator."""


class CertificateError(SbMetricError, ValueError):
    """A bound was requested for parameters whose certificate is not valid."""


class SingularMatrixError(SbMetricError, ArithmeticError):
    """Pivot breakdown during elimination."""

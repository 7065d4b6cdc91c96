"""Exception hierarchy shared by the library and the CLI.

Every error carries an ``exit_code`` so the CLI can map failures to
process exit codes: 2 = invalid configuration, 3 = bad or insufficient
data, 4 = internal invariant violation.
"""


class PosBeamError(Exception):
    exit_code = 1


class InvalidConfigError(PosBeamError):
    """A parameter or configuration value is out of its allowed domain."""

    exit_code = 2


class DataError(PosBeamError):
    """Input data cannot be used as-is."""

    exit_code = 3


class InvalidInputError(DataError):
    """A single value or record violates its contract."""


class DegenerateRangeError(DataError):
    """A coordinate range collapsed to a point; normalization undefined."""


class InsufficientDataError(DataError):
    """Not enough samples to perform the requested operation."""


class InvalidNoiseError(DataError):
    """Estimated noise power is not a valid lower bound of the signal powers."""


class InternalInvariantError(PosBeamError):
    """A condition the code guarantees by construction was violated."""

    exit_code = 4

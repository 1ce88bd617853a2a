"""Exception types raised by the library."""


class UncertaintyError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(UncertaintyError, ValueError):
    pass


class InvalidState(UncertaintyError, ValueError):
    """Amplitudes do not describe a normalized state of dimension >= 2."""


class NotHermitian(UncertaintyError, ValueError):
    pass


class ZeroDeviation(UncertaintyError, ValueError):
    """The state is (numerically) an eigenstate, so the deviation vector vanishes."""


class PreconditionViolated(UncertaintyError, ValueError):
    """An evaluator's admissibility condition does not hold for the inputs."""


class EvennessViolated(PreconditionViolated):
    pass

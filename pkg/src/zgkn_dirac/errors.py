"""Exception hierarchy shared by all solver modules."""


class ZgknError(Exception):
    """Base class for every error raised by this package."""


class IntegrationFailure(ZgknError):
    pass


class StepUnderflow(IntegrationFailure):
    pass


class NonFiniteRhs(IntegrationFailure):
    pass


class RootFindingError(ZgknError):
    pass


class NoSignChange(RootFindingError):
    pass


class MaxIterations(RootFindingError):
    pass


class TooFewSamples(ZgknError, ValueError):
    pass


class RingSingularity(ZgknError, ValueError):
    """Evaluation requested on (or within the guard radius of) the ring r = 0, theta = pi/2."""


class AxisSingularity(ZgknError, ValueError):
    """Evaluation requested on the symmetry axis where csc(theta) diverges."""


class NoBranchFound(ZgknError):
    pass


class OutOfGap(ZgknError, ValueError):
    """Energy outside the open spectral gap (-1, 1)."""


class TruncationTooSmall(ZgknError):
    pass


class InvalidQuantumNumbers(ZgknError, ValueError):
    pass


class ZeroNorm(ZgknError):
    pass


class ConfigError(ZgknError, ValueError):
    pass

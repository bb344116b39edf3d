"""Exception hierarchy shared by all grassint modules."""


class GrassintError(Exception):
    """Base class for all grassint errors."""


class RankDeficient(GrassintError):
    pass


class BaseMismatch(GrassintError):
    pass


class DimensionMismatch(GrassintError):
    pass


class OutOfInjectivityBall(GrassintError):
    pass


class SubspacesNotInGenericPosition(GrassintError):
    pass


class DegenerateInterval(GrassintError):
    pass


class EmptySampleSet(GrassintError):
    pass


class TooFewSnapshots(GrassintError):
    pass


class RankTooLow(GrassintError):
    pass


class ZeroReference(GrassintError):
    pass


class TimeGridMismatch(GrassintError):
    pass


class OutOfDomain(GrassintError):
    pass


class UnstableRun(GrassintError):
    pass


class Divergence(GrassintError):
    pass


class ConfigInvalid(GrassintError):
    pass


class GeodesicArcWarning(UserWarning):
    """Emitted when a geodesic evaluation travels an arc of length >= pi/2."""


class ExtrapolationWarning(UserWarning):
    """Emitted when an interpolation target lies outside the sampled hull."""

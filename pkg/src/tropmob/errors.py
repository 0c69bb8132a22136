"""Domain errors.  The CLI maps any :class:`TropMobError` to exit code 2 and
reports ``type(err).__name__`` verbatim together with ``err.module``."""


class TropMobError(Exception):
    module = "tropmob"


# lattice-geometry
class DegenerateDual(TropMobError):
    module = "lattice"


# pl-calculus
class NotMeasureScaling(TropMobError):
    module = "pl"


class UnsupportedMap(TropMobError):
    module = "pl"


# measures
class NotSmoothPoint(TropMobError):
    module = "measures"


class AnchorOffCornerLocus(TropMobError):
    module = "measures"


class NotCellwiseInjective(TropMobError):
    module = "measures"


class NoPreimage(TropMobError):
    module = "measures"


class OrderUndetermined(TropMobError):
    module = "measures"


# mobility
class UnsupportedRank(TropMobError):
    module = "mobility"


class NotMobile(TropMobError):
    module = "mobility"


class ConventionMismatch(TropMobError):
    module = "mobility"


class SamplingExhausted(TropMobError):
    module = "mobility"


# entropy
class EmptyFamily(TropMobError):
    module = "entropy"


class MassBoundViolated(TropMobError):
    module = "entropy"


class TransportFailure(TropMobError):
    module = "entropy"


class DilationMismatch(TropMobError):
    module = "entropy"


# amoeba
class NoRoots(TropMobError):
    module = "amoeba"


class BudgetExhausted(TropMobError):
    module = "amoeba"


# cli
class DimensionUnsupported(TropMobError):
    module = "cli"

"""Exception hierarchy shared by all solver stages."""


class FlowError(Exception):
    """Base class for every error raised by multipot."""


class GeometryError(FlowError):
    """Invalid boundary description (orientation, self-intersection, overlap)."""


class PointOnBoundary(GeometryError):
    pass


class NoInteriorPoint(GeometryError):
    pass


class CuspAtParameter(GeometryError):
    pass


class CoincidentPoints(GeometryError):
    pass


class SpectralError(FlowError):
    pass


class OddSampleCount(SpectralError):
    pass


class InsufficientSamples(SpectralError):
    pass


class NonzeroMean(SpectralError):
    pass


class SolverError(FlowError):
    pass


class SingularMatrix(SolverError):
    pass


class SingularConstantSystem(SolverError):
    pass


class EvaluationError(FlowError):
    pass


class PointInsideObstacle(EvaluationError):
    pass


class NearBoundary(EvaluationError):
    """Raised when the quadrature nodes are too coarse for the requested point.

    Retrying with a larger ``eval_n`` (see ``ComplexPotential.with_eval_n``)
    usually resolves it.
    """


class SeedInvalid(EvaluationError):
    pass


class ConfigError(FlowError):
    pass


class OutputError(FlowError):
    """Reading or writing a file failed."""

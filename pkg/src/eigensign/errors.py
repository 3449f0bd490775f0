"""Exception types raised across the recognition pipeline."""


class EigenSignError(Exception):
    """Base class for every error this package raises on purpose."""


class PnmError(EigenSignError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


# pipeline failures: a single image could not be turned into features
class PipelineError(EigenSignError):
    pass


class EmptyMask(PipelineError):
    """Segmentation left no foreground pixel, so there is no hand to crop."""


class DegenerateCrop(PipelineError):
    """The cropped raster has zero covariance (every row is constant)."""


class NotSymmetric(EigenSignError, ValueError):
    pass


class NoConvergence(EigenSignError, ArithmeticError):
    pass


class LengthMismatch(EigenSignError, ValueError):
    pass


class EmptyDatabase(EigenSignError, ValueError):
    pass


class ShapeMismatch(EigenSignError, ValueError):
    pass


class EmptyCorpus(EigenSignError, ValueError):
    pass


class TooFewTemplates(EigenSignError, ValueError):
    pass


class ModelFormatError(EigenSignError, ValueError):
    """A model file could not be parsed; ``line`` is 1-based."""

    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class BadMagic(ModelFormatError):
    pass


class VersionUnsupported(ModelFormatError):
    pass


class ModelShapeMismatch(ModelFormatError, ShapeMismatch):
    pass


class NormViolation(ModelFormatError):
    pass


class OrderViolation(ModelFormatError):
    pass

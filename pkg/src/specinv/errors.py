"""Exception types shared across the package."""


class SpecinvError(Exception):
    """Base class for all package errors."""


class GeometryError(SpecinvError):
    """Measurement/recovery geometry is inconsistent (sizes, divisibility, ranges)."""


class DivisionHazardError(SpecinvError):
    """A componentwise quotient hit a (near-)zero denominator.

    Carries the centered index of the first offending entry.
    """

    def __init__(self, index, magnitude, floor):
        self.index = index
        self.magnitude = magnitude
        self.floor = floor
        super().__init__(
            f"denominator magnitude {magnitude:.3e} at centered index {index} "
            f"is below the floor {floor:.3e}"
        )


class MaskInadmissibleError(SpecinvError):
    """Mask admissibility constant (mu) is below the configured floor."""


class IllConditionedSystemError(SpecinvError):
    """Partial Fourier system too ill-conditioned to invert reliably."""

    def __init__(self, sigma_min, message=""):
        self.sigma_min = sigma_min
        super().__init__(message or f"sigma_min(W) = {sigma_min:.3e}")


class NormalizationError(SpecinvError):
    """Deconvolution scale calibration failed; the transform chain is mis-scaled."""


class UndefinedArgumentError(SpecinvError):
    """A synchronization edge has (near-)zero magnitude, so its argument is undefined."""

    def __init__(self, edge, magnitude):
        self.edge = edge
        self.magnitude = magnitude
        super().__init__(
            f"edge {edge} has magnitude {magnitude:.3e}; its phase is undefined"
        )


class AlignmentError(SpecinvError):
    """Global-phase alignment is undefined (zero reference)."""


class GenerationError(SpecinvError):
    """Random generation (signal/mask) could not satisfy its constraints."""


class ConfigError(SpecinvError):
    """Invalid configuration value."""


class SchemaError(SpecinvError):
    """A CSV artifact is missing required columns."""


class PipelineError(SpecinvError):
    """Failure inside a recovery pipeline, tagged with the stage that raised it."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")

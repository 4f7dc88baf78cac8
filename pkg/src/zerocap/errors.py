"""Exception hierarchy shared by the library and the command-line frontend."""


class ZerocapError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(ZerocapError, ValueError):
    """Operand shapes are incompatible with the requested operation."""


class HermiticityError(ZerocapError, ValueError):
    """A matrix expected to be Hermitian is not, within tolerance."""


class NotPositiveError(ZerocapError, ValueError):
    """A matrix has an eigenvalue below the round-off clipping window."""


class NormalizationError(ZerocapError, ValueError):
    """A density matrix does not have unit trace."""


class ParameterDomainError(ZerocapError, ValueError):
    """A channel parameter lies outside the region where a construction exists.

    For the anti-degrading map, ``d_delta_sq`` carries the would-be value of
    ``d * delta**2 = (2x - 1) / x``, which is negative exactly when ``x < 1/2``.
    """

    def __init__(self, message, *, d_delta_sq=None):
        super().__init__(message)
        self.d_delta_sq = d_delta_sq


class FormatError(ZerocapError, ValueError):
    """A channel file could not be parsed."""


class ValidationError(ZerocapError, ValueError):
    """A parsed channel is not trace preserving within ingestion tolerance."""

    def __init__(self, message, *, residual=None):
        super().__init__(message)
        self.residual = residual

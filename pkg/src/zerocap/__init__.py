"""Numerical checks of zero quantum capacity for white-noise-contaminated channels."""

from .channels import (
    ChoiMatrix,
    KrausChannel,
    StinespringIsometry,
    apply,
    channels_equal,
    choi,
    choi_distance,
    complementary,
    compose,
    stinespring,
    validate_cpt,
)
from .errors import (
    DimensionError,
    FormatError,
    HermiticityError,
    NormalizationError,
    NotPositiveError,
    ParameterDomainError,
    ValidationError,
)
from .families import (
    AntiDegradingParams,
    NoiseParameter,
    antidegrading_map,
    antidegrading_params,
    contaminate,
    depolarizing,
    depolarizing_complement,
    transpose_depolarizing,
)
from .analysis import (
    CoherentInfoResult,
    OptimizerConfig,
    PptSpectrum,
    analytic_ppt_spectrum,
    antidegradability_residual,
    coherent_information,
    maximize_coherent_information,
    ppt_spectrum,
    ppt_threshold,
)

__version__ = "0.1.0"

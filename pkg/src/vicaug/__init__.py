"""Waveform-domain data augmentation with vicinal sampling and robustness checks.

Four seeded corruption schemes (band-limited noise, double-dip notch, wide
band-pass, noisy room reverberation), the Gaussian-mixture neighborhood
sampler built on them, and a Monte-Carlo verifier for the concentration of
smooth feature maps under input noise.
"""

from .augment import (
    AugmentConfig,
    AugmentRecord,
    AugmentScheme,
    SnrRange,
    apply_scheme,
    band_limited_white_noise,
    noisy_double_dip_notch,
    noisy_rir,
    noisy_widepass,
    replay,
    replay_clean,
)
from .errors import (
    CalibrationError,
    DegenerateSignalError,
    EmptyInputError,
    EvaluationError,
    GeometryError,
    MaterialLookupError,
    ParameterError,
    ShapeMismatchError,
    VicaugError,
    WavFormatError,
)
from .filters import (
    FilterBankLayout,
    NotchSpec,
    ParzenFilterSpec,
    bandwidth_to_gamma,
    epanechnikov_window,
    evenly_spaced_modes,
    format_taps,
    frequency_response,
    mel_wide_bandwidths,
    notch_filter,
    parzen_filter,
)
from .rng import RngState
from .room import (
    RoomConfig,
    SourceMicGeometry,
    image_source_arrivals,
    image_source_rir,
    material_absorption,
    sample_geometry,
    schroeder_curve,
)
from .signal import (
    FirFilter,
    Signal,
    circular_convolve,
    convolve_same,
    measure_snr,
    snr_scale,
    snr_scale_factor,
    white_noise,
)
from .theory import (
    BoundReport,
    SpectralConstants,
    StatisticFn,
    constants_ab,
    hessian_fd,
    identity_statistic,
    jacobian_fd,
    linear_statistic,
    quadratic_statistic,
    verify_bound,
)
from .vicinal import (
    VicinalComponent,
    VicinalDensity,
    default_density,
    online_augment,
    sample_vicinal,
    smooth_predict,
    vicinal_nll,
)
from .wavio import read_wav, write_wav

__version__ = "0.1.0"

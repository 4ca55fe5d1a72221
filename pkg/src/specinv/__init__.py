"""specinv: recovery of compactly supported smooth functions, up to a global
phase, from noisy spectrogram (STFT magnitude) measurements.

The pipeline deconvolves subsampled measurements into banded coefficient
autocorrelations, synchronizes phases greedily along the band, and assembles
a trigonometric-polynomial estimate.  Two mask regimes are supported
(trigonometric-polynomial and compactly supported), plus an HIO+ER
alternating-projection baseline and a reproducible experiment harness.
"""

__version__ = "0.1.0"

from .angsync import eigen_magnitudes, greedy_path, magnitudes, phases, synchronize
from .banded import (
    BandedAutocorrelation,
    band_extract,
    band_restrict,
    hermitianize,
    lift,
)
from .centered import (
    centered_range,
    circular_shift,
    dft,
    fourier_project,
    idft,
    pointwise,
)
from .deconv import (
    CalibrationRecord,
    DeconvGeometryCompact,
    DeconvGeometryTrig,
    SolverConfig,
    calibrate,
    deconvolve_compact,
    deconvolve_compact_alt,
    deconvolve_trig,
    iterated_tikhonov,
    tilde_transform,
)
from .masks import (
    MaskSpec,
    MuReport,
    make_compact_mask,
    make_trig_mask,
    mu1,
    mu2,
    sample_mask,
    structured_compact_samples,
)
from .measure import (
    MeasurementSet,
    QuadratureConfig,
    add_noise,
    discrete_oracle,
    measure_continuous,
    subsample,
)
from .reconstruct import (
    FilterSpec,
    ReconstructionResult,
    RecoverOptions,
    align_phase,
    assemble,
    error_db,
    lowpass,
    recover_compact,
    recover_trig,
)
from .signals import (
    TestFunctionSpec,
    bump,
    check_fourier_decay,
    fourier_coefficients,
    random_decay_coefficients,
    random_test_function,
)
from .baselines import HioConfig, MaskedFourierOperator, hio_er, shift_samples

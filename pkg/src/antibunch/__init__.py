"""Two-photon interference of frequency-entangled pairs at a 50/50 beamsplitter."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .dispersion import (
    CrystalParams,
    DetuningCalibration,
    cooling_trajectory,
    mu_of_temperature,
    phase_mismatch_linearized,
    zeta_from_bandwidth,
    zeta_from_crystal,
)
from .errors import DomainError
from .interference import (
    CoincidenceResult,
    amplitude_oracle,
    coincidence_probability,
    pc_analytic,
    pc_degenerate,
    pc_general,
    pc_numeric_oracle,
    pc_zero_delay,
    peak_antibunching,
)
from .separability import WitnessVerdict, pc_mixture, pc_separable, witness
from .spectral import (
    FrequencyGrid,
    SpectralAmplitude,
    exchange,
    make_gaussian_spectrum,
    make_sinc_jsa,
    normalize,
    overlap,
    symmetry_split,
)

"""Phase sensing with symmetric and asymmetric two-mode entangled coherent states."""
from .ecs import (
    EcsParams,
    PhotonStatistics,
    amplitude_for_mean_photon,
    coherent_overlap,
    normalization,
    photon_statistics,
)
from .intensity import PhaseSensitivity, SzStatistics, optimal_phase_error, phase_error, sz_statistics
from .lossless import QfiReport, asymptotic_bound, qfi_at_mean_photon, qfi_pure
from .lossy import (
    LOSSLESS,
    LossChannel,
    ReducedState,
    SpectralDecomposition,
    apply_loss,
    qfi_lossy,
    qfi_lossy_at_mean_photon,
    spectral_decomposition,
)

__version__ = "0.1.0"

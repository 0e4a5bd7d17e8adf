"""Kernel spectral clustering with automatic cluster-count estimation."""

from .calibration import (
    CalibrationResult,
    calibrate_bandwidth,
    mean_squared_kernel,
    select_power,
)
from .cluster import (
    Clustering,
    PipelineConfig,
    PipelineResult,
    cluster_pipeline,
    greedy_cluster,
)
from .data import (
    blob_centers,
    extract_windows,
    gen_blobs,
    gen_rings,
    load_pgm,
    load_points,
    save_points,
    squared_distances,
)
from .errors import (
    CalibrationError,
    DegenerateSpectrumError,
    KspectralError,
    NumericalError,
    ParameterError,
    ParseError,
    VanishingSelfAffinityError,
)
from .estimator import KernelSpectralClustering
from .kernels import KernelMatrix, compose_kernel, gaussian_kernel, induced_distances
from .markov import (
    diffusion_operator,
    diffusion_profile,
    stationary_distribution,
    transition_matrix,
    tv_matrix,
)
from .spectral import (
    AffinityProfile,
    DegreeVector,
    SpectralDecomposition,
    affinity_profile,
    degrees,
    eig_sym,
    embedding,
    matrix_power,
    normalized_operator,
    spectrum_report,
)

__version__ = "0.1.0"

__all__ = [
    "AffinityProfile",
    "CalibrationError",
    "CalibrationResult",
    "Clustering",
    "DegenerateSpectrumError",
    "DegreeVector",
    "KernelMatrix",
    "KernelSpectralClustering",
    "KspectralError",
    "NumericalError",
    "ParameterError",
    "ParseError",
    "PipelineConfig",
    "PipelineResult",
    "SpectralDecomposition",
    "VanishingSelfAffinityError",
    "affinity_profile",
    "blob_centers",
    "calibrate_bandwidth",
    "cluster_pipeline",
    "compose_kernel",
    "degrees",
    "diffusion_operator",
    "diffusion_profile",
    "eig_sym",
    "embedding",
    "extract_windows",
    "gen_blobs",
    "gen_rings",
    "gaussian_kernel",
    "greedy_cluster",
    "induced_distances",
    "load_pgm",
    "load_points",
    "matrix_power",
    "mean_squared_kernel",
    "normalized_operator",
    "save_points",
    "select_power",
    "spectrum_report",
    "squared_distances",
    "stationary_distribution",
    "transition_matrix",
    "tv_matrix",
]

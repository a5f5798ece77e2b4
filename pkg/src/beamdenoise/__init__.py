"""Sparsity-adaptive denoising of 1-bit quantized beamspace channel vectors."""

from .beamspace import (
    ComplexVec,
    ConfigurationError,
    Domain,
    DomainError,
    SortedMagnitudes,
    antenna,
    beamspace,
    dft,
    idft,
    read_vector_csv,
    sort_magnitudes,
    write_vector_csv,
)
from .bussgang import BussgangParams, compute_params, cross_moment, mc_alpha, mc_cross_moment
from .channel import (
    ChannelRealization,
    NoiseModel,
    add_noise,
    gaussian_channel,
    generate_channel,
    quantize_1bit,
    steering_vector,
    stream,
)
from .denoisers import (
    DenoiseResult,
    SureSums,
    alpha_beaches,
    beaches,
    blmmse,
    denoise,
    gamma_star,
    ml_1bit,
    mse,
    one_beaches,
    sand,
    soft_threshold,
    sure_evaluate,
)
from .harness import SweepConfig, SweepRecord, load_config, run_sweep, run_validation

__version__ = "0.1.0"

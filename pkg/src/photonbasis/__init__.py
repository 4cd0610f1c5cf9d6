"""Countable basis |n j m lam> for free electromagnetic fields."""

from .basis import (
    BasisIndex,
    ScaleConfig,
    WaveVector,
    basis_count,
    c_multipolar,
    c_planewave,
    enumerate_basis,
    multipolar_norm,
    planewave_norm,
)
from .exceptions import ConfigError, DomainError, GridMismatchError
from .hilbert import (
    QuadratureRule,
    SpectralChannel,
    basis_channel,
    energy,
    gauss_laguerre_rule,
    gram_matrix,
    inner_product,
    laguerre_energy_oracle,
    laguerre_overlap_oracle,
    photon_number,
    sample_channel,
)
from .projection import CoefficientVector, CountableBasisTransformer, dilate, project, reconstruct, residual
from .timedomain import KernelSpec, RadialTemporalTrace, radial_kernel, smoothness_probe, wavelet_scan

__version__ = "0.1.0"

"""Cavity Rydberg-EIT transmission spectra.

Resolvents of the effective non-Hermitian polariton matrix, two-spinwave
loop integrals, the resummed interaction amplitude T0, elastic/inelastic
spectra and 2-D parameter maps, plus a brute-force truncated-basis
reference model for validation at small feeding rate.
"""

from ._core import (
    ElasticWeights,
    GridSpec,
    LoopMethod,
    MapResult,
    Ridge,
    ScalingFit,
    ScalingObservable,
    Sector,
    SpectrumResult,
    SystemParams,
    TMatrixMethod,
    TMatrixResult,
    TwoTimeSpectrum,
    alpha_scaling,
    blockade_radius,
    compute_spectrum,
    compute_tmatrix,
    elastic_weights,
    find_ridges,
    greens,
    inelastic_density,
    loop_integral,
    oracle_spectrum,
    polariton_energies,
    spectrum_map,
    t0_resummed,
)

__all__ = [
    "ElasticWeights",
    "GridSpec",
    "LoopMethod",
    "MapResult",
    "Ridge",
    "ScalingFit",
    "ScalingObservable",
    "Sector",
    "SpectrumResult",
    "SystemParams",
    "TMatrixMethod",
    "TMatrixResult",
    "TwoTimeSpectrum",
    "alpha_scaling",
    "blockade_radius",
    "compute_spectrum",
    "compute_tmatrix",
    "elastic_weights",
    "find_ridges",
    "greens",
    "inelastic_density",
    "loop_integral",
    "oracle_spectrum",
    "polariton_energies",
    "spectrum_map",
    "t0_resummed",
]

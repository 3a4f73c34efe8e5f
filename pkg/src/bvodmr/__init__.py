"""Forward modeling and inversion for spin-1 defect ODMR under tilted
magnetic fields.

The package diagonalizes the ground-triplet spin Hamiltonian exactly to
predict the two ODMR transition frequencies for any field orientation,
synthesizes spectra and Rabi traces, and solves the two inverse
problems: the off-axis field angle from resonance-vs-field data, and
the coherence time from a damped Rabi oscillation.
"""

from .fitting import (
    AngleFitOptions,
    CoherencePoint,
    FitReport,
    RabiFitOptions,
    ResonanceDataset,
    UnidentifiableDatasetError,
    angle_residuals,
    coherence_vs_angle,
    fit_angle,
    fit_rabi,
)
from .hamiltonian import (
    AmbiguousBrightStateError,
    EigenSystem,
    NonHermitianMatrixError,
    ResonancePair,
    build_hamiltonian,
    eigensolve,
    transition_frequencies,
    transition_sweep,
)
from .kernels import backend_name
from .operators import SpinOperators, spin1_operators
from .params import FieldVector, SpinParams
from .synth import (
    RabiModel,
    SpectrumModel,
    add_noise,
    rabi_waveform,
    synth_rabi,
    synth_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousBrightStateError",
    "AngleFitOptions",
    "CoherencePoint",
    "EigenSystem",
    "FieldVector",
    "FitReport",
    "NonHermitianMatrixError",
    "RabiFitOptions",
    "RabiModel",
    "ResonanceDataset",
    "ResonancePair",
    "SpectrumModel",
    "SpinOperators",
    "SpinParams",
    "UnidentifiableDatasetError",
    "add_noise",
    "angle_residuals",
    "backend_name",
    "build_hamiltonian",
    "coherence_vs_angle",
    "eigensolve",
    "fit_angle",
    "fit_rabi",
    "rabi_waveform",
    "spin1_operators",
    "synth_rabi",
    "synth_spectrum",
    "transition_frequencies",
    "transition_sweep",
]

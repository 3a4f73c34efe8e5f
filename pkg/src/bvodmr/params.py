"""Spin-system parameters and external-field description.

Canonical internal units throughout the package: MHz for energies and
frequencies, Gauss for magnetic fields, MHz/Gauss for the gyromagnetic
ratio, nanoseconds for times, degrees for angles.  Unit conversion for
external interfaces lives in :mod:`bvodmr.units`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Ground-state constants of the boron-vacancy spin triplet.
DEFAULT_D_MHZ = 3490.0          # zero-field splitting
DEFAULT_E_MHZ = 50.0            # transverse strain splitting
DEFAULT_GAMMA_MHZ_PER_G = 2.8   # electron gyromagnetic ratio


@dataclass(frozen=True)
class SpinParams:
    """Ground-triplet Hamiltonian parameters.

    Attributes
    ----------
    d_zfs : float
        Zero-field splitting D in MHz.  Must be positive.
    e_strain : float
        Strain (transverse anisotropy) splitting E in MHz.  Non-negative.
    gamma_e : float
        Electron gyromagnetic ratio in MHz/Gauss.  Must be positive.
    """

    d_zfs: float = DEFAULT_D_MHZ
    e_strain: float = DEFAULT_E_MHZ
    gamma_e: float = DEFAULT_GAMMA_MHZ_PER_G

    def __post_init__(self):
        if not self.d_zfs > 0:
            raise ValueError(f"d_zfs must be positive, got {self.d_zfs}")
        if self.e_strain < 0:
            raise ValueError(f"e_strain must be non-negative, got {self.e_strain}")
        if not self.gamma_e > 0:
            raise ValueError(f"gamma_e must be positive, got {self.gamma_e}")


@dataclass(frozen=True)
class FieldVector:
    """Static magnetic field in spherical form.

    Attributes
    ----------
    magnitude : float
        Field strength |B| in Gauss.  Non-negative.
    theta : float
        Polar angle from the defect c-axis in degrees.  Stored
        normalized to [0, 180].
    phi : float
        Azimuthal angle in the basal plane in degrees, measured from
        the strain (x) axis.  Stored normalized to [0, 360).

    Angles outside the canonical ranges are folded onto the same
    physical direction, e.g. ``theta=200`` becomes ``theta=160`` with
    ``phi`` advanced by 180.
    """

    magnitude: float
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.magnitude < 0:
            raise ValueError(f"magnitude must be non-negative, got {self.magnitude}")
        theta = self.theta % 360.0
        phi = self.phi
        if theta > 180.0:
            theta = 360.0 - theta
            phi += 180.0
        phi %= 360.0
        if phi == 360.0:  # float modulo of a tiny negative rounds up
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    def cartesian(self) -> tuple[float, float, float]:
        """Cartesian components (B_x, B_y, B_z) in Gauss.

        z is the c-axis, x the strain axis:
        B_x = |B| sin(theta) cos(phi), B_y = |B| sin(theta) sin(phi),
        B_z = |B| cos(theta).
        """
        th = math.radians(self.theta)
        ph = math.radians(self.phi)
        st = math.sin(th)
        return (
            self.magnitude * st * math.cos(ph),
            self.magnitude * st * math.sin(ph),
            self.magnitude * math.cos(th),
        )

"""Ground-triplet spin Hamiltonian: construction, exact diagonalization
and ODMR transition frequencies.

The Hamiltonian implemented here is the conventional traceless form

    H = D (S_z^2 - (2/3) I) + E (S_x^2 - S_y^2) + gamma_e B . S

in MHz, with B in Gauss, in the m_s = {+1, 0, -1} basis.  At zero field
it places the two microwave transitions at D - E and D + E.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .operators import spin1_operators
from .params import FieldVector, SpinParams

#: Two eigenvectors whose |<0|v>|^2 agree more closely than this cannot
#: be told apart as "the optically bright state".
BRIGHT_TIE_TOL = 1e-9

_HERM_RTOL = 1e-9


class NonHermitianMatrixError(ValueError):
    """Input matrix deviates from Hermiticity beyond tolerance."""


class AmbiguousBrightStateError(RuntimeError):
    """No unique eigenstate of maximal m_s = 0 character.

    Raised when the two best |<0|v>|^2 overlaps tie within
    ``BRIGHT_TIE_TOL``; transition labeling is then ill-defined and the
    caller may fall back to sorted eigenvalue gaps.
    """


@dataclass(frozen=True)
class EigenSystem:
    """Eigen-decomposition of the ground triplet.

    Attributes
    ----------
    eigenvalues : np.ndarray
        Three real energies in MHz, ascending.
    eigenvectors : np.ndarray
        3x3 complex matrix; column ``i`` holds the coefficients of
        eigenstate ``i`` in the {+1, 0, -1} basis.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class ResonancePair:
    """The two ODMR transition frequencies at a given field, in MHz.

    ``f_minus`` is the lower (0 -> -1 like) and ``f_plus`` the higher
    (0 -> +1 like) transition; ``f_minus <= f_plus`` always.
    """

    f_minus: float
    f_plus: float

    def __post_init__(self):
        if self.f_minus > self.f_plus:
            raise ValueError(
                f"f_minus={self.f_minus} exceeds f_plus={self.f_plus}"
            )

    @property
    def splitting(self) -> float:
        return self.f_plus - self.f_minus


def build_hamiltonian(params: SpinParams, field: FieldVector) -> np.ndarray:
    """Construct the 3x3 Hermitian Hamiltonian matrix in MHz.

    Built from the spin-1 operator matrices; traceless by construction
    (the -(2/3)I counterterm of the zero-field-splitting part).
    """
    ops = spin1_operators()
    bx, by, bz = field.cartesian()
    h = (
        params.d_zfs * (ops.s_z @ ops.s_z - (2.0 / 3.0) * ops.identity)
        + params.e_strain * (ops.s_x @ ops.s_x - ops.s_y @ ops.s_y)
        + params.gamma_e * (bx * ops.s_x + by * ops.s_y + bz * ops.s_z)
    )
    return h


def eigensolve(h: np.ndarray) -> EigenSystem:
    """Diagonalize a 3x3 Hermitian matrix with the package conventions.

    Eigenvalues ascending; near-degenerate pairs ordered by descending
    weight on |+1>; each eigenvector's largest component made real
    positive.  Deterministic for identical input.

    Raises
    ------
    NonHermitianMatrixError
        If ``h`` deviates from its conjugate transpose by more than
        1e-9 relative to its magnitude (malformed upstream input).
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h))))
    dev = float(np.max(np.abs(h - h.conj().T)))
    if dev > _HERM_RTOL * scale:
        raise NonHermitianMatrixError(
            f"matrix deviates from Hermiticity by {dev:.3e} "
            f"(tolerance {_HERM_RTOL * scale:.3e})"
        )
    w, v = kernels.eigh3((h + h.conj().T) / 2.0)
    return EigenSystem(eigenvalues=w, eigenvectors=v)


def transition_frequencies(params: SpinParams, field: FieldVector) -> ResonancePair:
    """ODMR transition pair from the optically bright eigenstate.

    The bright state is the eigenstate with maximal |<0|v>|^2 (the
    state the defect is polarized into under illumination); the two
    returned frequencies are its absolute energy differences to the
    other eigenstates, ascending.

    Raises
    ------
    AmbiguousBrightStateError
        If the two best overlaps tie within ``BRIGHT_TIE_TOL``.
    """
    bx, by, bz = field.cartesian()
    f_minus, f_plus, margin = kernels.resonance_pair(
        params.d_zfs, params.e_strain, params.gamma_e, bx, by, bz
    )
    if margin < BRIGHT_TIE_TOL:
        raise AmbiguousBrightStateError(
            f"bright-state overlap margin {margin:.3e} below "
            f"{BRIGHT_TIE_TOL:.0e}; labeling ill-defined at "
            f"|B|={field.magnitude} G, theta={field.theta} deg"
        )
    return ResonancePair(f_minus=f_minus, f_plus=f_plus)


def transition_sweep(
    params: SpinParams,
    magnitudes,
    theta_deg,
    phi_deg=0.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized transition pairs over broadcast field coordinates.

    ``magnitudes``, ``theta_deg`` and ``phi_deg`` broadcast against each
    other; returns ``(f_minus, f_plus)`` arrays of the broadcast shape.
    Raises :class:`AmbiguousBrightStateError` if any point has an
    ill-defined bright state.
    """
    b, th, ph = np.broadcast_arrays(
        np.asarray(magnitudes, dtype=np.float64),
        np.asarray(theta_deg, dtype=np.float64),
        np.asarray(phi_deg, dtype=np.float64),
    )
    shape = b.shape
    b = b.ravel()
    th_r = np.radians(th.ravel())
    ph_r = np.radians(ph.ravel())
    st = np.sin(th_r)
    bx = b * st * np.cos(ph_r)
    by = b * st * np.sin(ph_r)
    bz = b * np.cos(th_r)
    f_minus, f_plus, margin = kernels.resonance_sweep(
        params.d_zfs, params.e_strain, params.gamma_e, bx, by, bz
    )
    if np.any(margin < BRIGHT_TIE_TOL):
        k = int(np.argmin(margin))
        raise AmbiguousBrightStateError(
            f"bright-state labeling ill-defined at sweep point {k} "
            f"(|B|={b[k]:.6g} G, theta={math.degrees(th_r[k]):.6g} deg)"
        )
    return f_minus.reshape(shape), f_plus.reshape(shape)

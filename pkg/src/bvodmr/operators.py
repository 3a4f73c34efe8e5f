"""Dimensionless spin-1 operators in the m_s = {+1, 0, -1} basis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SQ2 = np.sqrt(2.0)

_SX = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _SQ2
_SY = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / _SQ2
_SZ = np.array([[1, 0, 0], [0, 0, 0], [0, 0, -1]], dtype=complex)
_ID = np.eye(3, dtype=complex)


@dataclass(frozen=True)
class SpinOperators:
    """The spin-1 operator triple plus the identity.

    Satisfies [s_x, s_y] = i s_z (and cyclic) and
    s_x^2 + s_y^2 + s_z^2 = 2 * identity.
    """

    s_x: np.ndarray
    s_y: np.ndarray
    s_z: np.ndarray
    identity: np.ndarray


def spin1_operators() -> SpinOperators:
    """Fresh copies of the spin-1 operators (callers may mutate freely)."""
    return SpinOperators(_SX.copy(), _SY.copy(), _SZ.copy(), _ID.copy())

"""Hamiltonian construction: closed forms, Hermiticity and trace."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bvodmr import FieldVector, SpinParams, build_hamiltonian
from bvodmr import kernels

DEFAULTS = SpinParams()

params_st = st.builds(
    SpinParams,
    d_zfs=st.floats(1.0, 10000.0),
    e_strain=st.floats(0.0, 500.0),
    gamma_e=st.floats(0.1, 10.0),
)
field_st = st.builds(
    FieldVector,
    magnitude=st.floats(0.0, 1000.0),
    theta=st.floats(0.0, 180.0),
    phi=st.floats(0.0, 360.0),
)


def test_zero_field_block_structure():
    h = build_hamiltonian(DEFAULTS, FieldVector(0.0))
    # diagonal D-part plus the E coupling between |+1> and |-1>
    expected = np.array(
        [
            [DEFAULTS.d_zfs / 3, 0, DEFAULTS.e_strain],
            [0, -2 * DEFAULTS.d_zfs / 3, 0],
            [DEFAULTS.e_strain, 0, DEFAULTS.d_zfs / 3],
        ],
        dtype=complex,
    )
    assert np.allclose(h, expected, atol=1e-12)
    # closed-form spectrum {-2D/3, D/3 - E, D/3 + E}
    w = np.linalg.eigvalsh(h)
    assert w == pytest.approx(
        [-2326.6666666666667, 1113.3333333333333, 1213.3333333333333], abs=1e-9
    )


def test_axial_100g_closed_form():
    h = build_hamiltonian(DEFAULTS, FieldVector(100.0, theta=0.0))
    w = np.linalg.eigvalsh(h)
    root = math.sqrt(DEFAULTS.e_strain**2 + (DEFAULTS.gamma_e * 100.0) ** 2)
    expected = sorted(
        [-2 * DEFAULTS.d_zfs / 3, DEFAULTS.d_zfs / 3 - root, DEFAULTS.d_zfs / 3 + root]
    )
    assert w == pytest.approx(expected, abs=1e-9)


def test_zeeman_limit_matrix():
    params = SpinParams(d_zfs=1e-12, e_strain=0.0)
    for theta, phi in [(0.0, 0.0), (90.0, 0.0), (37.0, 212.0), (120.0, 45.0)]:
        h = build_hamiltonian(params, FieldVector(50.0, theta, phi))
        w = np.linalg.eigvalsh(h)
        gb = params.gamma_e * 50.0
        assert w == pytest.approx([-gb, 0.0, gb], abs=1e-9)


@given(params_st, field_st)
def test_hermitian_and_traceless(params, field):
    h = build_hamiltonian(params, field)
    assert np.max(np.abs(h - h.conj().T)) < 1e-12
    assert abs(np.trace(h)) < 1e-9


@given(params_st, field_st)
def test_kernel_fill_matches_operator_construction(params, field):
    bx, by, bz = field.cartesian()
    hk = kernels.build_matrix(
        params.d_zfs, params.e_strain, params.gamma_e, bx, by, bz
    )
    h = build_hamiltonian(params, field)
    assert np.max(np.abs(hk - h)) < 1e-9

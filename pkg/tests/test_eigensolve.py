"""Eigensolver contracts: invariants, oracle agreement, determinism."""

import numpy as np
import pytest

from bvodmr import (
    FieldVector,
    NonHermitianMatrixError,
    SpinParams,
    build_hamiltonian,
    eigensolve,
)

from cubic_oracle import eigvals3_cardano

DEFAULTS = SpinParams()


def random_hermitian(rng, scale=1.0):
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return scale * (m + m.conj().T) / 2


def test_diagonal_matrix():
    es = eigensolve(np.diag([3.0, 1.0, 2.0]).astype(complex))
    assert es.eigenvalues == pytest.approx([1.0, 2.0, 3.0])
    # permutation eigenvectors
    perm = np.abs(es.eigenvectors)
    assert np.allclose(perm, np.eye(3)[:, [1, 2, 0]], atol=1e-12)


def test_zero_field_closed_form():
    es = eigensolve(build_hamiltonian(DEFAULTS, FieldVector(0.0)))
    assert es.eigenvalues == pytest.approx(
        [-2326.6666666666667, 1113.3333333333333, 1213.3333333333333], abs=1e-9
    )


def test_demo_field_matches_cardano():
    h = build_hamiltonian(DEFAULTS, FieldVector(164.0, theta=68.0, phi=0.0))
    es = eigensolve(h)
    oracle = eigvals3_cardano(h)
    assert np.max(np.abs(es.eigenvalues - oracle)) < 1e-6


def test_eigensystem_invariants_random():
    rng = np.random.default_rng(11)
    for _ in range(300):
        h = random_hermitian(rng, scale=rng.uniform(0.5, 2000.0))
        es = eigensolve(h)
        v = es.eigenvectors
        # unit norms and mutual orthogonality
        gram = v.conj().T @ v
        assert np.max(np.abs(gram - np.eye(3))) < 1e-10
        # eigenvalue sum equals the trace
        tr = np.trace(h).real
        assert abs(es.eigenvalues.sum() - tr) <= 1e-8 * max(1.0, abs(tr))
        # reconstruction residual
        norm = np.linalg.norm(h)
        resid = np.linalg.norm(h @ v - v * es.eigenvalues)
        assert resid <= 1e-8 * max(1.0, norm)
        assert np.all(np.diff(es.eigenvalues) >= 0.0)


def test_oracle_equivalence_over_field_draws():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        params = SpinParams(
            d_zfs=rng.uniform(500, 5000),
            e_strain=rng.uniform(0, 200),
            gamma_e=rng.uniform(1, 5),
        )
        field = FieldVector(
            rng.uniform(0, 500), rng.uniform(0, 180), rng.uniform(0, 360)
        )
        h = build_hamiltonian(params, field)
        es = eigensolve(h)
        assert np.max(np.abs(es.eigenvalues - eigvals3_cardano(h))) < 1e-6


def test_rejects_non_hermitian():
    h = np.array([[1.0, 2.0, 0.0], [0.1, 1.0, 0.0], [0.0, 0.0, 1.0]], dtype=complex)
    with pytest.raises(NonHermitianMatrixError):
        eigensolve(h)


def test_rejects_wrong_shape():
    with pytest.raises(ValueError):
        eigensolve(np.eye(4, dtype=complex))


def test_deterministic_output():
    h = build_hamiltonian(DEFAULTS, FieldVector(123.0, theta=41.0, phi=17.0))
    a = eigensolve(h)
    b = eigensolve(h)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_degenerate_subspace_convention():
    # E=0, B=0: the +-1 levels are exactly degenerate; ordering inside
    # the pair must follow descending weight on |+1> and stay stable
    es = eigensolve(build_hamiltonian(SpinParams(e_strain=0.0), FieldVector(0.0)))
    w_plus_first = abs(es.eigenvectors[0, 1]) ** 2
    w_plus_second = abs(es.eigenvectors[0, 2]) ** 2
    assert w_plus_first >= w_plus_second
    # largest component of each eigenvector is real positive
    for col in range(3):
        k = int(np.argmax(np.abs(es.eigenvectors[:, col])))
        comp = es.eigenvectors[k, col]
        assert comp.real > 0.0
        assert abs(comp.imag) < 1e-12

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Cython twin of ``bvodmr._kernels_py`` — same algorithms, ordering and
phase conventions; see that module for the kernel contract.  The inner
loops run on C stack arrays with no Python objects.
"""

import numpy as np

from libc.math cimport fabs, sqrt

cdef double _OFF_TOL = 1e-13
cdef int _MAX_SWEEPS = 100
cdef double _TIE_REL = 1e-8
cdef double _SQRT_HALF = 0.7071067811865476

ctypedef double complex dcomplex


cdef inline double _cabs2(dcomplex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef int _jacobi3(dcomplex[3][3] a, dcomplex[3][3] v) nogil:
    """Cyclic complex Jacobi in place; accumulates the unitary into v."""
    cdef double frob2 = 0.0, off_stop2, off2, r, app, aqq, theta, t, c, s
    cdef dcomplex z, u, uc, us, apm, aqm, new_pm, new_qm, vp, vq
    cdef int sweeps = 0, i, p, q, m, pair

    for i in range(3):
        for m in range(3):
            frob2 += _cabs2(a[i][m])
    if frob2 == 0.0:
        return 0
    off_stop2 = (_OFF_TOL * _OFF_TOL) * frob2

    while sweeps < _MAX_SWEEPS:
        off2 = _cabs2(a[0][1]) + _cabs2(a[0][2]) + _cabs2(a[1][2])
        if off2 <= off_stop2:
            break
        sweeps += 1
        for pair in range(3):
            if pair == 0:
                p = 0; q = 1
            elif pair == 1:
                p = 0; q = 2
            else:
                p = 1; q = 2
            z = a[p][q]
            r = sqrt(_cabs2(z))
            if r == 0.0:
                continue
            u = z / r
            app = a[p][p].real
            aqq = a[q][q].real
            theta = (aqq - app) / (2.0 * r)
            t = (1.0 if theta >= 0.0 else -1.0) / (
                fabs(theta) + sqrt(1.0 + theta * theta)
            )
            c = 1.0 / sqrt(1.0 + t * t)
            s = t * c
            uc = u * c
            us = u * s

            a[p][p] = app - t * r
            a[q][q] = aqq + t * r
            a[p][q] = 0
            a[q][p] = 0
            m = 3 - p - q
            apm = a[p][m]
            aqm = a[q][m]
            new_pm = uc.conjugate() * apm - s * aqm
            new_qm = us.conjugate() * apm + c * aqm
            a[p][m] = new_pm
            a[m][p] = new_pm.conjugate()
            a[q][m] = new_qm
            a[m][q] = new_qm.conjugate()

            for i in range(3):
                vp = v[i][p]
                vq = v[i][q]
                v[i][p] = uc * vp - s * vq
                v[i][q] = us * vp + c * vq
    return sweeps


cdef void _load(dcomplex[3][3] a, dcomplex[3][3] v,
                double d, double e, double g,
                double bx, double by, double bz) nogil:
    cdef dcomplex zp = g * (bx + 1j * by) * _SQRT_HALF
    cdef double gz = g * bz
    cdef double third = d / 3.0
    a[0][0] = third + gz
    a[0][1] = zp.conjugate()
    a[0][2] = e
    a[1][0] = zp
    a[1][1] = -2.0 * third
    a[1][2] = zp.conjugate()
    a[2][0] = e
    a[2][1] = zp
    a[2][2] = third - gz
    cdef int i, j
    for i in range(3):
        for j in range(3):
            v[i][j] = 1 if i == j else 0


cdef void _order3(double[3] w, dcomplex[3][3] v, int[3] order) nogil:
    """Ascending eigenvalue order; ties by descending |v[0][k]|^2."""
    cdef int i, j, tmp
    cdef double tie, amax
    order[0] = 0; order[1] = 1; order[2] = 2
    for i in range(2):
        for j in range(2 - i):
            if w[order[j + 1]] < w[order[j]]:
                tmp = order[j]; order[j] = order[j + 1]; order[j + 1] = tmp
    amax = 1.0
    for i in range(3):
        if fabs(w[i]) > amax:
            amax = fabs(w[i])
    tie = _TIE_REL * amax
    for i in range(3):
        j = i % 2  # passes over pairs (0,1), (1,2), (0,1)
        if (w[order[j + 1]] - w[order[j]] <= tie) and (
            _cabs2(v[0][order[j + 1]]) > _cabs2(v[0][order[j]])
        ):
            tmp = order[j]; order[j] = order[j + 1]; order[j + 1] = tmp


def build_matrix(double d, double e, double g,
                 double bx, double by, double bz):
    """Hamiltonian D(Sz^2 - (2/3)I) + E(Sx^2 - Sy^2) + g B.S as ndarray."""
    cdef dcomplex[3][3] a
    cdef dcomplex[3][3] v
    _load(a, v, d, e, g, bx, by, bz)
    out = np.empty((3, 3), dtype=np.complex128)
    cdef dcomplex[:, ::1] mv = out
    cdef int i, j
    for i in range(3):
        for j in range(3):
            mv[i, j] = a[i][j]
    return out


def eigh3(h):
    """Eigen-decomposition of a Hermitian 3x3 matrix (no validation)."""
    harr = np.ascontiguousarray(h, dtype=np.complex128)
    cdef dcomplex[:, ::1] hv = harr
    cdef dcomplex[3][3] a
    cdef dcomplex[3][3] v
    cdef double[3] w
    cdef int[3] order
    cdef int i, j, k, big
    cdef double mag, m2
    cdef dcomplex ph

    for i in range(3):
        for j in range(3):
            a[i][j] = hv[i, j]
            v[i][j] = 1 if i == j else 0
    _jacobi3(a, v)
    for i in range(3):
        w[i] = a[i][i].real
    _order3(w, v, order)

    vals = np.empty(3, dtype=np.float64)
    vecs = np.empty((3, 3), dtype=np.complex128)
    cdef double[::1] valv = vals
    cdef dcomplex[:, ::1] vecv = vecs
    for j in range(3):
        k = order[j]
        valv[j] = w[k]
        big = 0
        mag = _cabs2(v[0][k])
        for i in range(1, 3):
            m2 = _cabs2(v[i][k])
            if m2 > mag:
                mag = m2
                big = i
        ph = v[big][k] / sqrt(mag)
        ph = ph.conjugate()
        for i in range(3):
            vecv[i, j] = v[i][k] * ph
    return vals, vecs


cdef void _pair(double d, double e, double g,
                double bx, double by, double bz,
                double* f_minus, double* f_plus, double* margin) nogil:
    cdef dcomplex[3][3] a
    cdef dcomplex[3][3] v
    cdef double[3] w
    cdef int i, best
    cdef double o, o_best, o_second, f1, f2

    _load(a, v, d, e, g, bx, by, bz)
    _jacobi3(a, v)
    for i in range(3):
        w[i] = a[i][i].real

    best = 0
    o_best = -1.0
    o_second = -1.0
    for i in range(3):
        o = _cabs2(v[1][i])
        if o > o_best:
            o_second = o_best
            o_best = o
            best = i
        elif o > o_second:
            o_second = o
    f1 = fabs(w[(best + 1) % 3] - w[best])
    f2 = fabs(w[(best + 2) % 3] - w[best])
    if f2 < f1:
        f1, f2 = f2, f1
    f_minus[0] = f1
    f_plus[0] = f2
    margin[0] = o_best - o_second


def resonance_pair(double d, double e, double g,
                   double bx, double by, double bz):
    """Bright-state transition pair plus labeling margin."""
    cdef double fm, fp, mg
    _pair(d, e, g, bx, by, bz, &fm, &fp, &mg)
    return fm, fp, mg


def resonance_sweep(double d, double e, double g, bx, by, bz):
    """resonance_pair mapped over coordinate arrays."""
    bxa = np.ascontiguousarray(bx, dtype=np.float64)
    bya = np.ascontiguousarray(by, dtype=np.float64)
    bza = np.ascontiguousarray(bz, dtype=np.float64)
    cdef double[::1] bxv = bxa
    cdef double[::1] byv = bya
    cdef double[::1] bzv = bza
    cdef Py_ssize_t n = bxv.shape[0], k
    f_minus = np.empty(n, dtype=np.float64)
    f_plus = np.empty(n, dtype=np.float64)
    margin = np.empty(n, dtype=np.float64)
    cdef double[::1] fmv = f_minus
    cdef double[::1] fpv = f_plus
    cdef double[::1] mgv = margin
    with nogil:
        for k in range(n):
            _pair(d, e, g, bxv[k], byv[k], bzv[k],
                  &fmv[k], &fpv[k], &mgv[k])
    return f_minus, f_plus, margin

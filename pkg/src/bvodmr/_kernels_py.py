"""Pure-Python numerical kernels.

Fallback twin of the compiled extension ``bvodmr._kernels_cy``; the two
implement the same algorithms with identical ordering and phase
conventions.  Inner loops use plain Python complex scalars — for 3x3
problems that is considerably faster than numpy elementwise work.

Kernel contract (shared by both backends):

``build_matrix(d, e, g, bx, by, bz)``
    3x3 complex Hermitian ground-triplet Hamiltonian in MHz, basis
    m_s = {+1, 0, -1}.

``eigh3(h)``
    Eigenvalues ascending (ties broken by descending weight on |+1>),
    eigenvector columns phase-fixed so the largest-magnitude component
    is real positive.  Cyclic Jacobi, relative off-diagonal tolerance
    1e-13, at most 100 sweeps.

``resonance_pair(d, e, g, bx, by, bz)``
    (f_minus, f_plus, margin): transition frequencies from the
    eigenstate of maximal |<0|v>|^2 to the other two, ascending, plus
    the overlap margin between the two best |<0|v>|^2 candidates.

``resonance_sweep(d, e, g, bx, by, bz)``
    Vectorized ``resonance_pair`` over equal-length coordinate arrays.
"""

from __future__ import annotations

import math

import numpy as np

_OFF_TOL = 1e-13     # relative off-diagonal Frobenius tolerance
_MAX_SWEEPS = 100
_TIE_REL = 1e-8      # eigenvalue tie window, relative
_SQRT_HALF = math.sqrt(0.5)


def build_matrix(d, e, g, bx, by, bz):
    """Hamiltonian D(Sz^2 - (2/3)I) + E(Sx^2 - Sy^2) + g B.S as ndarray."""
    zp = g * (bx + 1j * by) * _SQRT_HALF
    gz = g * bz
    third = d / 3.0
    return np.array(
        [
            [third + gz, zp.conjugate(), e],
            [zp, -2.0 * third, zp.conjugate()],
            [e, zp, third - gz],
        ],
        dtype=np.complex128,
    )


def _jacobi3(a, v):
    """Cyclic complex Jacobi on a Hermitian 3x3 nested list, in place.

    Accumulates the unitary into ``v``.  Returns the sweep count.
    """
    frob2 = 0.0
    for i in range(3):
        for j in range(3):
            x = a[i][j]
            frob2 += x.real * x.real + x.imag * x.imag
    if frob2 == 0.0:
        return 0
    off_stop2 = (_OFF_TOL * _OFF_TOL) * frob2

    sweeps = 0
    while sweeps < _MAX_SWEEPS:
        off2 = (
            abs(a[0][1]) ** 2 + abs(a[0][2]) ** 2 + abs(a[1][2]) ** 2
        )
        if off2 <= off_stop2:
            break
        sweeps += 1
        for p, q in ((0, 1), (0, 2), (1, 2)):
            z = a[p][q]
            r = abs(z)
            if r == 0.0:
                continue
            u = z / r
            app = a[p][p].real
            aqq = a[q][q].real
            theta = (aqq - app) / (2.0 * r)
            t = (1.0 if theta >= 0.0 else -1.0) / (
                abs(theta) + math.sqrt(1.0 + theta * theta)
            )
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            uc = u * c
            us = u * s

            a[p][p] = complex(app - t * r)
            a[q][q] = complex(aqq + t * r)
            a[p][q] = 0j
            a[q][p] = 0j
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


def _order_and_fix(w, v):
    """Sort ascending (ties by descending |<+1|v>|^2), fix column phases."""
    order = sorted(range(3), key=lambda k: w[k])
    tie = _TIE_REL * max(1.0, max(abs(x) for x in w))
    for i, j in ((0, 1), (1, 2), (0, 1)):
        wi, wj = order[i], order[j]
        if (w[wj] - w[wi] <= tie) and (abs(v[0][wj]) ** 2 > abs(v[0][wi]) ** 2):
            order[i], order[j] = wj, wi

    vals = np.empty(3, dtype=np.float64)
    vecs = np.empty((3, 3), dtype=np.complex128)
    for col, k in enumerate(order):
        vals[col] = w[k]
        big = 0
        mag = abs(v[0][k])
        for i in (1, 2):
            if abs(v[i][k]) > mag:
                mag = abs(v[i][k])
                big = i
        ph = v[big][k] / mag
        pc = ph.conjugate()
        for i in range(3):
            vecs[i, col] = v[i][k] * pc
    return vals, vecs


def eigh3(h):
    """Eigen-decomposition of a Hermitian 3x3 matrix (no validation)."""
    a = [[complex(h[i][j]) for j in range(3)] for i in range(3)]
    v = [[1 + 0j, 0j, 0j], [0j, 1 + 0j, 0j], [0j, 0j, 1 + 0j]]
    _jacobi3(a, v)
    return _order_and_fix([a[0][0].real, a[1][1].real, a[2][2].real], v)


def resonance_pair(d, e, g, bx, by, bz):
    """Bright-state transition pair plus labeling margin."""
    zp = g * (bx + 1j * by) * _SQRT_HALF
    zm = zp.conjugate()
    gz = g * bz
    third = d / 3.0
    a = [
        [complex(third + gz), zm, complex(e)],
        [zp, complex(-2.0 * third), zm],
        [complex(e), zp, complex(third - gz)],
    ]
    v = [[1 + 0j, 0j, 0j], [0j, 1 + 0j, 0j], [0j, 0j, 1 + 0j]]
    _jacobi3(a, v)
    w = [a[0][0].real, a[1][1].real, a[2][2].real]

    best = 0
    o_best = -1.0
    o_second = -1.0
    for i in range(3):
        o = abs(v[1][i]) ** 2
        if o > o_best:
            o_second = o_best
            o_best = o
            best = i
        elif o > o_second:
            o_second = o
    f1 = abs(w[(best + 1) % 3] - w[best])
    f2 = abs(w[(best + 2) % 3] - w[best])
    if f2 < f1:
        f1, f2 = f2, f1
    return f1, f2, o_best - o_second


def resonance_sweep(d, e, g, bx, by, bz):
    """resonance_pair mapped over coordinate arrays."""
    bx = np.asarray(bx, dtype=np.float64)
    by = np.asarray(by, dtype=np.float64)
    bz = np.asarray(bz, dtype=np.float64)
    n = bx.shape[0]
    f_minus = np.empty(n, dtype=np.float64)
    f_plus = np.empty(n, dtype=np.float64)
    margin = np.empty(n, dtype=np.float64)
    for k in range(n):
        f_minus[k], f_plus[k], margin[k] = resonance_pair(
            d, e, g, bx[k], by[k], bz[k]
        )
    return f_minus, f_plus, margin

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Nystrom kernel assembly (series regime |k r| <= SERIES_CUTOFF).

Mirrors ``_kernels_py.layer_blocks`` on the square 2n-point grid.  The caller
checks the cutoff; pairs beyond it are not handled here.
"""

import numpy as np
cimport numpy as cnp

from libc.math cimport log, sqrt, sin, M_PI

cdef extern from "complex.h" nogil:
    double cabs(double complex)

cdef double INV4PI = 1.0 / (4.0 * M_PI)
cdef double INV2PI = 1.0 / (2.0 * M_PI)
cdef enum:
    NTERMS = 60

cdef double A_COEF[NTERMS]   # 1/(m!)^2
cdef double B_COEF[NTERMS]   # 1/(2 m! (m+1)!)
cdef double P_COEF[NTERMS]   # H_m/(m!)^2
cdef double Q_COEF[NTERMS]   # H_{m+1}/((m+1)! m!)


cdef void _init_coefficients():
    cdef int m
    cdef double fm = 1.0, fm1 = 1.0, hm = 0.0, hm1
    for m in range(NTERMS):
        hm1 = hm + 1.0 / (m + 1)
        A_COEF[m] = 1.0 / (fm * fm)
        B_COEF[m] = 0.5 / (fm * fm1)
        P_COEF[m] = hm / (fm * fm)
        Q_COEF[m] = hm1 / (fm1 * fm)
        fm *= m + 1
        fm1 *= m + 2
        hm = hm1

_init_coefficients()


cdef inline void _series(double complex z, double complex *j0, double complex *j1z,
                         double complex *p, double complex *q) nogil:
    cdef double complex v = -0.25 * z * z
    cdef double complex vp = 1.0
    cdef double complex s0 = 0, s1 = 0, sp = 0, sq = 0
    cdef int m
    for m in range(NTERMS):
        s0 += A_COEF[m] * vp
        s1 += B_COEF[m] * vp
        sp += P_COEF[m] * vp
        sq += Q_COEF[m] * vp
        if cabs(vp) * A_COEF[m] < 1e-18:
            break
        vp = vp * v
    j0[0] = s0
    j1z[0] = s1
    p[0] = sp
    q[0] = sq


def layer_matrices(ks, double[::1] t, double[:, ::1] x, double[:, ::1] nu,
                   double[::1] curvature, double[::1] speed, int n,
                   const double[:, ::1] R, double complex[::1] A):
    """Return ``(S, K)`` arrays of shape ``(len(ks), 2n, 2n)``.

    ``A[i]`` is the log constant of ``ks[i]`` (0 for the static kernel).
    """
    cdef Py_ssize_t N = t.shape[0]
    cdef Py_ssize_t nk = len(ks)
    cdef double complex[::1] kv = np.asarray(ks, dtype=complex)
    S_arr = np.empty((nk, N, N), dtype=complex)
    K_arr = np.empty((nk, N, N), dtype=complex)
    cdef double complex[:, :, ::1] S = S_arr
    cdef double complex[:, :, ::1] K = K_arr
    cdef Py_ssize_t a, i, j
    cdef double h = M_PI / n
    cdef double dx0, dx1, r2, r, c, lr, wj, s2
    cdef double complex k, k2, z, j0, j1z, p, q, gs, g1, l1, l2, m1, m2, Ak
    with nogil:
        for a in range(nk):
            k = kv[a]
            k2 = k * k
            Ak = A[a]
            for i in range(N):
                for j in range(N):
                    wj = speed[j]
                    if i == j:
                        l1 = INV4PI * wj
                        l2 = wj * (INV2PI * log(wj) + Ak)
                        m1 = 0
                        m2 = INV4PI * curvature[i] * wj
                    else:
                        dx0 = x[i, 0] - x[j, 0]
                        dx1 = x[i, 1] - x[j, 1]
                        r2 = dx0 * dx0 + dx1 * dx1
                        r = sqrt(r2)
                        c = dx0 * nu[i, 0] + dx1 * nu[i, 1]
                        s2 = sin(0.5 * (t[i] - t[j]))
                        lr = log(r2 / (4.0 * s2 * s2))
                        if k2 == 0:
                            j0 = 1.0
                            j1z = 0.5
                            gs = 0
                            g1 = 0
                        else:
                            z = k * r
                            _series(z, &j0, &j1z, &p, &q)
                            gs = Ak * j0 - INV2PI * p
                            g1 = -Ak * j1z + 0.5 * INV2PI * q
                        l1 = INV4PI * j0 * wj
                        l2 = wj * (INV4PI * j0 * lr + gs)
                        m1 = -k2 * INV4PI * j1z * c * wj
                        m2 = m1 * lr + wj * (INV2PI * j0 * c / r2 + k2 * g1 * c)
                    S[a, i, j] = R[i, j] * l1 + h * l2
                    K[a, i, j] = R[i, j] * m1 + h * m2
    return S_arr, K_arr

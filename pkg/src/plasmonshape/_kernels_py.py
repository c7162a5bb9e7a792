"""Pure-NumPy Nystrom kernels (reference path and fallback for the compiled core).

The single-layer kernel G(x, y) = -(i/4) H_0^(1)(k|x-y|) and its normal
derivative at x are split as

    G(t, s) |x'(s)|      = L1 log(4 sin^2((t-s)/2)) + L2
    dG/dnu_x |x'(s)|     = M1 log(4 sin^2((t-s)/2)) + M2

with L1, L2, M1, M2 smooth.  Both the log coefficient and the smooth part are
summed from the J-Bessel ascending series in v = -(z/2)^2, so the split holds
for complex k.  Pairs with |k r| above ``SERIES_CUTOFF`` use Hankel values.
"""

from __future__ import annotations

import numpy as np

from . import special

SERIES_CUTOFF = 4.0
_INV4PI = 1.0 / (4.0 * np.pi)
_INV2PI = 1.0 / (2.0 * np.pi)


def log_constant(k):
    """Constant A_k with G(r) = log(r)/(2 pi) + A_k + O(r^2 log r); 0 for k = 0."""
    if k == 0:
        return 0.0
    return -0.25j + _INV2PI * (np.log(k / 2.0) + special.EULER_GAMMA)


def log_weights(s, t, n):
    """Quadrature weights R_j(s) for int_0^{2pi} log(4 sin^2((s-t)/2)) f(t) dt."""
    d = np.subtract.outer(np.asarray(s, float), np.asarray(t, float))
    m = np.arange(1, n)
    R = -(2 * np.pi / n) * (np.cos(np.multiply.outer(d, m)) / m).sum(axis=-1)
    return R - (np.pi / n**2) * np.cos(n * d)


def log_weight_matrix(n):
    """Circulant ``R[i, j] = R_j(t_i)`` on the 2n-point grid."""
    t = np.pi * np.arange(2 * n) / n
    row = log_weights(t[:1], t, n)[0]
    idx = (np.arange(2 * n)[None, :] - np.arange(2 * n)[:, None]) % (2 * n)
    return row[idx]


def _series(z):
    """J0, J1/z, P and Q on an array, where with v = -(z/2)^2

    P = sum_{m>=1} H_m v^m / (m!)^2,  Q = sum_{m>=0} H_{m+1} v^m / ((m+1)! m!).
    """
    v = -0.25 * z * z
    vp = np.ones_like(z)
    j0 = np.zeros_like(z)
    j1z = np.zeros_like(z)
    p = np.zeros_like(z)
    q = np.zeros_like(z)
    fm = 1.0   # m!
    fm1 = 1.0  # (m+1)!
    hm = 0.0   # H_m
    for m in range(80):
        a = 1.0 / (fm * fm)
        j0 = j0 + a * vp
        j1z = j1z + (0.5 / (fm * fm1)) * vp
        p = p + hm * a * vp
        hm1 = hm + 1.0 / (m + 1)
        q = q + (hm1 / (fm1 * fm)) * vp
        if np.all(np.abs(vp) * a < 1e-18):
            break
        vp = vp * v
        fm *= m + 1
        fm1 *= m + 2
        hm = hm1
    return j0, j1z, p, q


def _smooth_parts(k, r):
    """J0(kr), J1(kr)/(kr), smooth remainder Gs and g1 = Gs'(z)/z."""
    z = k * r
    A = log_constant(k)
    if k == 0:
        one = np.ones_like(z)
        return one, 0.5 * one, np.zeros_like(z), np.zeros_like(z)
    j0 = np.empty_like(z)
    j1z = np.empty_like(z)
    gs = np.empty_like(z)
    g1 = np.empty_like(z)
    small = np.abs(z) <= SERIES_CUTOFF
    if np.any(small):
        a, b, p, q = _series(z[small])
        j0[small], j1z[small] = a, b
        gs[small] = A * a - _INV2PI * p
        g1[small] = -A * b + 0.5 * _INV2PI * q
    if np.any(~small):
        zl, rl = z[~small], r[~small]
        J, _, H = special.cylinder_tables(1, zl)
        j0[~small] = J[0]
        j1z[~small] = J[1] / zl
        gs[~small] = -0.25j * H[0] - _INV2PI * J[0] * np.log(rl)
        dgs = 0.25j * H[1] + _INV2PI * (J[1] * np.log(rl) - J[0] / (k * rl))
        g1[~small] = dgs / zl
    return j0, j1z, gs, g1


def layer_blocks(k, tgt, src, n, R=None):
    """Nystrom matrices of S^k and (K^k)* from ``src`` nodes to ``tgt`` points.

    ``tgt`` and ``src`` are tuples ``(t, points, normals, curvature, speed)``;
    source parameters must be the 2n-point grid.  Targets whose parameter
    coincides with a source node get the diagonal limits.  ``R`` may carry
    precomputed log weights ``R_j(t_i)``.
    """
    tt, xt, nt, kt, st = tgt
    ts, xs, _, _, ss = src
    k = complex(k)
    dx = xt[:, None, :] - xs[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", dx, dx)
    dpar = np.subtract.outer(tt, ts)
    sin2 = 4.0 * np.sin(0.5 * dpar) ** 2
    diag = sin2 < 1e-26
    r2s = np.where(diag, 1.0, r2)
    r = np.sqrt(r2s)
    c = np.einsum("ijk,ik->ij", dx, nt)
    j0, j1z, gs, g1 = _smooth_parts(k, r.astype(complex))
    logratio = np.log(r2s / np.where(diag, 1.0, sin2))
    w = ss[None, :]

    L1 = _INV4PI * j0 * w
    L2 = w * (_INV4PI * j0 * logratio + gs)
    M1 = -(k * k) * _INV4PI * j1z * c * w
    M2 = M1 * logratio + w * (_INV2PI * j0 * c / r2s + (k * k) * g1 * c)

    if np.any(diag):
        i, j = np.nonzero(diag)
        A = log_constant(k)
        L1[i, j] = _INV4PI * ss[j]
        L2[i, j] = ss[j] * (_INV2PI * np.log(ss[j]) + A)
        M1[i, j] = 0.0
        M2[i, j] = _INV4PI * kt[i] * ss[j]

    if R is None:
        R = log_weights(tt, ts, n)
    h = np.pi / n
    return R * L1 + h * L2, R * M1 + h * M2


def layer_matrices(ks, t, points, normals, curvature, speed, n, R=None):
    """Square on-grid matrices for every wavenumber in ``ks``.

    Returns arrays ``S, K`` of shape ``(len(ks), 2n, 2n)``.
    """
    geo = (t, points, normals, curvature, speed)
    if R is None:
        R = log_weight_matrix(n)
    out_s, out_k = [], []
    for k in ks:
        S, K = layer_blocks(k, geo, geo, n, R=R)
        out_s.append(S)
        out_k.append(K)
    return np.array(out_s), np.array(out_k)

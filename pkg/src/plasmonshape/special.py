"""Integer-order cylinder functions J_n, Y_n and H_n^(1) for complex arguments.

Small arguments (``|z| <= SERIES_RADIUS``) use the ascending power series for
J_n and the logarithmic series for Y_0, Y_1; Y_n for n >= 2 follows by upward
recurrence, which is stable for the second kind.  Larger arguments use Miller's
backward recurrence for J_n, while H_0, H_1 come from Steed's continued fraction
for K_0, K_1 and H_n follows by upward recurrence; Y_n = -i (H_n - J_n) there.

All public functions are vectorised over ``z`` and take a scalar integer order.
Negative orders are reduced with C_{-n} = (-1)^n C_n.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
SERIES_RADIUS = 2.0
MAX_ABS_Z = 30.0
MAX_ORDER = 60

_SERIES_RTOL = 1e-18
_MAX_TERMS = 400


def _as_complex(z):
    return np.asarray(z, dtype=complex)


def check_domain(z, allow_zero=False):
    """Raise DomainError unless every entry satisfies 0 < |z| <= 30, |arg z| <= pi/2."""
    z = _as_complex(z)
    a = np.abs(z)
    if np.any(~np.isfinite(z)):
        raise DomainError("non-finite argument")
    if np.any(a > MAX_ABS_Z):
        raise DomainError(f"|z| = {a.max():.4g} exceeds {MAX_ABS_Z}")
    nonzero = a > 0
    if not allow_zero and not np.all(nonzero):
        raise DomainError("z = 0 is a singular point")
    if np.any(z.real[nonzero] < -1e-14 * a[nonzero]):
        raise DomainError("argument outside the right half-plane |arg z| <= pi/2")


def _check_order(n):
    if abs(int(n)) > MAX_ORDER:
        raise DomainError(f"order {n} exceeds cap {MAX_ORDER}")


# ---------------------------------------------------------------------------
# series regime
# ---------------------------------------------------------------------------

def _j_series(n, z):
    """Ascending series for J_n, n >= 0, on a flat complex array."""
    half = 0.5 * z
    term = half**n / float(np.prod(np.arange(1, n + 1), dtype=float)) if n else np.ones_like(z)
    total = term.copy()
    u = -half * half
    for k in range(1, _MAX_TERMS):
        term = term * u / (k * (n + k))
        total = total + term
        if np.all(np.abs(term) <= _SERIES_RTOL * np.abs(total)):
            break
    return total


def _y01_series(z):
    """Logarithmic series for Y_0 and Y_1 (z != 0)."""
    half = 0.5 * z
    u = -half * half
    logh = np.log(half)
    j0 = _j_series(0, z)
    j1 = _j_series(1, z)

    # Y0 = (2/pi)(log(z/2)+gamma) J0 - (2/pi) sum_{k>=1} H_k u^k / (k!)^2
    s0 = np.zeros_like(z)
    term = np.ones_like(z)
    hk = 0.0
    for k in range(1, _MAX_TERMS):
        term = term * u / (k * k)
        hk += 1.0 / k
        inc = hk * term
        s0 = s0 + inc
        if np.all(np.abs(inc) <= _SERIES_RTOL * np.abs(s0)):
            break
    y0 = (2.0 / np.pi) * (logh + EULER_GAMMA) * j0 - (2.0 / np.pi) * s0

    # Y1 = -2/(pi z) + (2/pi) log(z/2) J1
    #      - (1/pi) sum_{k>=0} (H_k + H_{k+1} - 2 gamma) u^k (z/2) / (k!(k+1)!)
    term = half.copy()
    hk, hk1 = 0.0, 1.0
    s1 = (hk + hk1 - 2 * EULER_GAMMA) * term
    for k in range(1, _MAX_TERMS):
        term = term * u / (k * (k + 1))
        hk += 1.0 / k
        hk1 += 1.0 / (k + 1)
        inc = (hk + hk1 - 2 * EULER_GAMMA) * term
        s1 = s1 + inc
        if np.all(np.abs(inc) <= _SERIES_RTOL * np.abs(s1)):
            break
    y1 = -2.0 / (np.pi * z) + (2.0 / np.pi) * logh * j1 - s1 / np.pi
    return y0, y1


# ---------------------------------------------------------------------------
# large-argument regime
# ---------------------------------------------------------------------------

def _miller(nmax, z):
    """J_0..J_{N} by backward recurrence, normalised; returns array (N+1, M)."""
    amax = float(np.max(np.abs(z)))
    start = int(max(nmax, amax) + 30 + np.sqrt(40.0 * max(nmax, amax)))
    start += start % 2
    vals = np.zeros((start + 2, z.size), dtype=complex)
    vals[start] = 1e-30
    for k in range(start, 0, -1):
        vals[k - 1] = (2.0 * k / z) * vals[k] - vals[k + 1]
        big = np.abs(vals[k - 1]) > 1e250
        if np.any(big):
            vals[:, big] *= 1e-250
    even = vals[0:start + 1:2]
    signs = (-1.0) ** np.arange(even.shape[0])
    s1 = even[0] + 2.0 * even[1:].sum(axis=0)
    s2 = even[0] + 2.0 * (signs[1:, None] * even[1:]).sum(axis=0)
    # pick the normalisation with the least cancellation
    use_cos = np.abs(s2) > np.abs(s1)
    scale = np.where(use_cos, np.cos(z), 1.0) / np.where(use_cos, s2, s1)
    return vals[: start + 1] * scale


def _h01_steed(z):
    """H_0^(1), H_1^(1) from K_0, K_1 at w = -iz via Steed's continued fraction.

    Evaluating H directly (rather than J + iY) avoids cancellation where H is
    recessive, i.e. for large Im z.  Requires |z| > 2 and Re(-iz) >= 0.
    """
    x = -1j * z
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25
    q = np.full_like(x, a1)
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 20000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if np.all(np.abs(dels) < 1e-17 * np.abs(s)):
            break
    k0 = np.sqrt(np.pi / (2.0 * x)) * np.exp(-x) / s
    k1 = k0 * (x + 0.5 - a1 * h) / x
    return (2.0 / (np.pi * 1j)) * k0, -(2.0 / np.pi) * k1


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

def cylinder_tables(nmax, z):
    """Return ``(J, Y, H)`` with shape ``(nmax+2,) + z.shape``, orders 0..nmax+1.

    ``Y`` and ``H`` are NaN where ``z == 0``.  The extra order serves the
    derivative formulas.  ``H`` is computed directly where it is recessive, so
    use it rather than ``J + 1j * Y``.
    """
    _check_order(nmax)
    z = _as_complex(z)
    shape = z.shape
    zf = z.ravel()
    top = nmax + 1
    J = np.zeros((top + 1, zf.size), dtype=complex)
    Y = np.full((top + 1, zf.size), np.nan + 0j)
    H = np.full((top + 1, zf.size), np.nan + 0j)
    small = np.abs(zf) <= SERIES_RADIUS
    if np.any(small):
        zs = zf[small]
        for n in range(top + 1):
            J[n, small] = _j_series(n, zs)
        nz = zs != 0
        if np.any(nz):
            idx = np.flatnonzero(small)[nz]
            y0, y1 = _y01_series(zs[nz])
            Y[0, idx], Y[1, idx] = y0, y1
            # upward recurrence is stable for the second kind
            for n in range(1, top):
                Y[n + 1, idx] = (2.0 * n / zs[nz]) * Y[n, idx] - Y[n - 1, idx]
        H[:, small] = J[:, small] + 1j * Y[:, small]
    if np.any(~small):
        zl = zf[~small]
        jall = _miller(top, zl)
        J[:, ~small] = jall[: top + 1]
        # the continued fraction needs Im z >= 0; below the axis work at conj(z)
        # and reflect with H_n(z) = 2 J_n(z) - conj(H_n(conj z))
        up = zl.imag >= 0
        za = np.where(up, zl, np.conj(zl))
        hl = np.empty((top + 1, zl.size), dtype=complex)
        hl[0], hl[1] = _h01_steed(za)
        for n in range(1, top):
            hl[n + 1] = (2.0 * n / za) * hl[n] - hl[n - 1]
        hl = np.where(up, hl, 2 * jall[: top + 1] - np.conj(hl))
        H[:, ~small] = hl
        Y[:, ~small] = -1j * (hl - J[:, ~small])
    out = (top + 1,) + shape
    return J.reshape(out), Y.reshape(out), H.reshape(out)


def _order_sign(n):
    return -1.0 if (n < 0 and n % 2) else 1.0


def bessel_j(n, z):
    """Bessel function of the first kind J_n(z); J_n(0) = delta_{n0}."""
    check_domain(z, allow_zero=True)
    m = abs(int(n))
    J, _, _ = cylinder_tables(m, z)
    return _order_sign(n) * J[m]


def bessel_y(n, z):
    check_domain(z)
    m = abs(int(n))
    _, Y, _ = cylinder_tables(m, z)
    return _order_sign(n) * Y[m]


def hankel1(n, z):
    """Hankel function of the first kind H_n^(1)(z) = J_n(z) + i Y_n(z)."""
    check_domain(z)
    m = abs(int(n))
    _, _, H = cylinder_tables(m, z)
    return _order_sign(n) * H[m]


def _prime(table, n):
    m = abs(int(n))
    if m == 0:
        d = -table[1]
    else:
        d = 0.5 * (table[m - 1] - table[m + 1])
    return _order_sign(n) * d


def bessel_j_prime(n, z):
    check_domain(z, allow_zero=True)
    J, _, _ = cylinder_tables(max(abs(int(n)), 1), z)
    return _prime(J, n)


def bessel_y_prime(n, z):
    check_domain(z)
    _, Y, _ = cylinder_tables(max(abs(int(n)), 1), z)
    return _prime(Y, n)


def hankel1_prime(n, z):
    check_domain(z)
    _, _, H = cylinder_tables(max(abs(int(n)), 1), z)
    return _prime(H, n)

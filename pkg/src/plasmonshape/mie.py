"""Separation-of-variables solution for a centred disk.

With ``alpha_n = exp(i n (pi/2 - t_d))`` the plane wave is
``sum_n alpha_n J_n(k_m r) e^{int}``, the scattered field is
``sum_n a_n H_n(k_m r) e^{int}`` and the interior field is
``sum_n b_n J_n(k_c r) e^{int}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import special
from .errors import RadiusOnBoundary, SeriesDivergence
from .materials import MaterialConfig

DEFAULT_TRUNCATION = 20
TAIL_TOL = 1e-14


@dataclass(frozen=True)
class MieSolution:
    """Coefficients for orders ``-N..N`` (``orders[i]`` labels ``a[i]``, ``b[i]``)."""

    r0: float
    k_m: complex
    k_c: complex
    orders: np.ndarray
    alpha: np.ndarray
    a: np.ndarray
    b: np.ndarray
    tail: float

    @property
    def truncation(self) -> int:
        return int(self.orders[-1])


def _ratios(N, r0, mat):
    """Return ``a_n / alpha_n`` and ``b_n / alpha_n`` for ``n = 0..N``."""
    km, kc = mat.k_m, mat.k_c
    zm, zc = km * r0, kc * r0
    Jm, _, Hm = special.cylinder_tables(N, np.array([zm]))
    Jc, _, _ = special.cylinder_tables(N, np.array([zc]))
    Jm, Hm, Jc = Jm[:, 0], Hm[:, 0], Jc[:, 0]

    def prime(C):
        d = np.empty(N + 1, dtype=complex)
        d[0] = -C[1]
        d[1:] = 0.5 * (C[:N] - C[2:N + 2])
        return d

    dJm, dHm, dJc = prime(Jm), prime(Hm), prime(Jc)
    gm, gc = km / mat.mu_m, kc / mat.mu_c
    Jm, Hm, Jc = Jm[: N + 1], Hm[: N + 1], Jc[: N + 1]
    den = gc * dJc * Hm - gm * Jc * dHm
    ra = (gm * dJm * Jc - gc * dJc * Jm) / den
    rb = gm * (dJm * Hm - Jm * dHm) / den
    return ra, rb, Hm, Jc


def mie_coefficients(r0: float, mat: MaterialConfig, t_d: float = np.pi / 3,
                     truncation: int = DEFAULT_TRUNCATION, amplitude: complex = 1.0) -> MieSolution:
    """Scattering and interior coefficients of a disk of radius ``r0``.

    The tail estimate is the largest boundary contribution of the two outermost
    orders relative to the largest over all orders.

    Raises
    ------
    SeriesDivergence
        If the tail estimate exceeds ``TAIL_TOL`` (after growing the truncation
        up to the order cap).
    """
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    N = int(truncation)
    while True:
        ra, rb, Hm, Jc = _ratios(N, r0, mat)
        contrib = np.abs(ra * Hm) + np.abs(rb * Jc)
        tail = float(contrib[-1] / np.max(contrib)) if np.max(contrib) > 0 else 0.0
        if tail < TAIL_TOL:
            break
        if N >= special.MAX_ORDER - 1:
            raise SeriesDivergence(f"tail {tail:.2e} at order {N}")
        N = min(2 * N, special.MAX_ORDER - 1)
    n = np.arange(-N, N + 1)
    alpha = amplitude * np.exp(1j * n * (np.pi / 2 - t_d))
    idx = np.abs(n)
    return MieSolution(float(r0), mat.k_m, mat.k_c, n, alpha, alpha * ra[idx], alpha * rb[idx], tail)


def _sum(sol, r, t, k, coef, kind, deriv):
    """``sum_n coef_n C_n(k r) e^{int}`` or its radial derivative."""
    N = sol.truncation
    J, _, H = special.cylinder_tables(N, k * r)
    C = J if kind == "J" else H
    n = sol.orders
    idx = np.abs(n)
    sign = np.where((n < 0) & (idx % 2 == 1), -1.0, 1.0)[:, None]
    if deriv:
        d = np.empty_like(C[: N + 1])
        d[0] = -C[1]
        d[1:] = 0.5 * (C[:N] - C[2:N + 2])
        vals = k * d[idx] * sign
    else:
        vals = C[idx] * sign
    phase = np.exp(1j * np.multiply.outer(n, t))
    return np.sum(coef[:, None] * vals * phase, axis=0)


def mie_field(sol: MieSolution, pts, part: str = "scattered", deriv: bool = False):
    """Field of ``sol`` at ``pts`` (shape ``(P, 2)``).

    ``part`` is ``"scattered"``, ``"incident"``, ``"total"`` (exterior points) or
    ``"interior"`` (points inside the disk).  With ``deriv=True`` the radial
    derivative is returned.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    r = np.hypot(pts[:, 0], pts[:, 1])
    t = np.arctan2(pts[:, 1], pts[:, 0])
    if np.any(np.abs(r - sol.r0) < 1e-12):
        raise RadiusOnBoundary("evaluation point on the disk boundary")
    if part == "interior":
        if np.any(r > sol.r0):
            raise ValueError("interior field requested outside the disk")
        return _sum(sol, r, t, sol.k_c, sol.b, "J", deriv)
    if part == "incident":
        return _sum(sol, r, t, sol.k_m, sol.alpha, "J", deriv)
    if np.any(r < sol.r0):
        raise ValueError("exterior field requested inside the disk")
    us = _sum(sol, r, t, sol.k_m, sol.a, "H", deriv)
    if part == "scattered":
        return us
    if part == "total":
        return us + _sum(sol, r, t, sol.k_m, sol.alpha, "J", deriv)
    raise ValueError(f"unknown part {part!r}")

"""Shape sensitivity of the near field: finite-difference SSF, Jacobian and SVD."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import forward, geometry
from .errors import FDUnstable
from .forward import IncidentWave
from .materials import MaterialConfig

DEFAULT_EPS = 1e-4
DEFAULT_FD_STEP = 1e-6
DEFAULT_RTOL = 1e-3


@dataclass(frozen=True)
class SensitivityReport:
    ssf_values: np.ndarray
    ssf_norm: float
    eps_fd: float
    error_estimate: float
    h_id: str = ""


@dataclass(frozen=True)
class SVDReport:
    singular_values: np.ndarray

    @property
    def s_max(self) -> float:
        return float(self.singular_values[0])

    @property
    def s_min(self) -> float:
        return float(self.singular_values[-1])

    @property
    def cond(self) -> float:
        return self.s_max / self.s_min if self.s_min > 0 else np.inf


def boundary_norm(values, R0: float = forward.DEFAULT_R0) -> float:
    """Discrete L2 norm on the observation circle (equal arclength weights)."""
    values = np.asarray(values)
    return float(np.sqrt(np.sum(np.abs(values) ** 2) * 2 * np.pi * R0 / values.size))


def _central(shape, h, eps, field):
    plus = field(geometry.perturb(shape, h, eps))
    minus = field(geometry.perturb(shape, h, -eps))
    return (plus - minus) / (2 * eps)


def ssf(shape, mat: MaterialConfig, inc: IncidentWave = IncidentWave(), h=None,
        eps_fd: float = DEFAULT_EPS, n: int = forward.DEFAULT_N, n_obs: int = forward.DEFAULT_N_OBS,
        R0: float = forward.DEFAULT_R0, rtol: float = DEFAULT_RTOL, h_id: str = "") -> SensitivityReport:
    """Central-difference shape derivative of the near field along ``h nu``.

    A second difference at ``eps_fd / 2`` gives a Richardson error estimate.

    Raises
    ------
    FDUnstable
        If the two differences disagree by more than ``10 * rtol`` relative.
    """
    h = geometry.h_linear() if h is None else h

    def field(s):
        return forward.near_field(s, mat, inc, n, n_obs, R0).values

    d1 = _central(shape, h, eps_fd, field)
    d2 = _central(shape, h, eps_fd / 2, field)
    err = 4.0 / 3.0 * np.linalg.norm(d1 - d2)
    scale = np.linalg.norm(d1)
    if scale > 0 and err / scale > 10 * rtol:
        raise FDUnstable(f"Richardson disagreement {err / scale:.2e}")
    return SensitivityReport(d1, boundary_norm(d1, R0), eps_fd, float(err), h_id)


def stacked(values) -> np.ndarray:
    """Complex vector as real ``[Re; Im]``."""
    return np.concatenate([np.real(values), np.imag(values)])


def forward_map(q, mat: MaterialConfig, inc: IncidentWave = IncidentWave(), n: int = forward.DEFAULT_N,
                n_obs: int = forward.DEFAULT_N_OBS, R0: float = forward.DEFAULT_R0, backend=None) -> np.ndarray:
    """Complex near field of the trig-series shape with coefficients ``q``."""
    shape = geometry.trig_series(q)
    return forward.near_field(shape, mat, inc, n, n_obs, R0, backend).values


def jacobian(q, mat: MaterialConfig, inc: IncidentWave = IncidentWave(), fd_step: float = DEFAULT_FD_STEP,
             n: int = forward.DEFAULT_N, n_obs: int = forward.DEFAULT_N_OBS, R0: float = forward.DEFAULT_R0,
             central: bool = False, base=None) -> np.ndarray:
    """Real ``(2 n_obs, 2m+1)`` Jacobian of the stacked near field by finite differences.

    ``base`` may pass an already computed ``F(q)`` (forward mode only).
    """
    q = np.asarray(q, dtype=float)

    def F(c):
        return stacked(forward_map(c, mat, inc, n, n_obs, R0))

    f0 = None if central else (F(q) if base is None else stacked(base))
    G = np.empty((2 * n_obs, q.size))
    for k in range(q.size):
        step = fd_step * max(1.0, abs(q[k]))
        e = np.zeros_like(q)
        e[k] = step
        if central:
            G[:, k] = (F(q + e) - F(q - e)) / (2 * step)
        else:
            G[:, k] = (F(q + e) - f0) / step
    return G


def svd_report(G) -> SVDReport:
    return SVDReport(np.linalg.svd(np.asarray(G), compute_uv=False))


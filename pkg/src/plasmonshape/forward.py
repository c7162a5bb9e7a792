"""Nystrom solver for the transmission problem and near-field evaluation.

The total field is ``u^i + S^{k_m}[psi]`` outside the inclusion and
``S^{k_c}[phi]`` inside; continuity of ``u`` and of ``u_nu / mu`` across the
boundary gives the 2x2 block system assembled in :func:`system_matrix`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import geometry, kernels, special
from .errors import PointInsideInclusion, SingularSystem
from .materials import MaterialConfig

COND_LIMIT = 1e14
DEFAULT_N = 25
DEFAULT_N_SYNTH = 32
DEFAULT_N_OBS = 50
DEFAULT_R0 = 1.5


@dataclass(frozen=True)
class IncidentWave:
    """Plane wave ``amplitude * exp(i k_m d . x)`` with ``d = (cos t_d, sin t_d)``."""

    angle: float = np.pi / 3
    amplitude: complex = 1.0

    @property
    def direction(self) -> np.ndarray:
        return np.array([np.cos(self.angle), np.sin(self.angle)])

    def field(self, k_m, pts):
        return self.amplitude * np.exp(1j * k_m * (np.asarray(pts) @ self.direction))

    def normal_derivative(self, k_m, pts, normals):
        return 1j * k_m * (np.asarray(normals) @ self.direction) * self.field(k_m, pts)


@dataclass(frozen=True)
class DensityPair:
    psi: np.ndarray
    phi: np.ndarray
    residual: float
    cond: float


@dataclass(frozen=True)
class NearFieldData:
    """Scattered-field samples on the circle of radius ``R0``."""

    t_obs: np.ndarray
    obs_points: np.ndarray
    values: np.ndarray
    delta: float = 0.0
    seed: int | None = None

    @property
    def R0(self) -> float:
        return float(np.hypot(*self.obs_points[0]))


def observation_points(n_obs: int = DEFAULT_N_OBS, R0: float = DEFAULT_R0):
    t = 2 * np.pi * np.arange(n_obs) / n_obs
    return t, R0 * np.stack([np.cos(t), np.sin(t)], axis=-1)


def system_matrix(grid, mat: MaterialConfig, backend=None):
    """Block matrix acting on ``(psi, phi)``."""
    (Sm, Sc), (Km, Kc) = kernels.layer_matrices([mat.k_m, mat.k_c], grid, backend)
    eye = 0.5 * np.eye(grid.size)
    top = np.hstack([Sm, -Sc])
    bottom = np.hstack([(eye + Km) / mat.mu_m, (eye - Kc) / mat.mu_c])
    return np.vstack([top, bottom])


def solve_densities(grid, mat: MaterialConfig, inc: IncidentWave = IncidentWave(), backend=None) -> DensityPair:
    """Solve the boundary-integral system for ``(psi, phi)``.

    Raises
    ------
    SingularSystem
        If the 2-norm condition number exceeds ``COND_LIMIT``.
    """
    A = system_matrix(grid, mat, backend)
    ui = inc.field(mat.k_m, grid.points)
    dui = inc.normal_derivative(mat.k_m, grid.points, grid.normals)
    rhs = np.concatenate([-ui, -dui / mat.mu_m])
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystem(f"condition estimate {cond:.3e}")
    x = np.linalg.solve(A, rhs)
    res = float(np.linalg.norm(A @ x - rhs) / max(np.linalg.norm(rhs), 1e-300))
    return DensityPair(x[: grid.size], x[grid.size:], res, cond)


def _single_layer(k, grid, density, pts):
    d = pts[:, None, :] - grid.points[None, :, :]
    r = np.hypot(d[..., 0], d[..., 1])
    G = -0.25j * special.hankel1(0, k * r)
    return G @ (density * grid.weights)


def _radius_at(grid, theta):
    """Trigonometric interpolation of the sampled radius."""
    c = np.fft.fft(grid.radius) / grid.size
    m = np.fft.fftfreq(grid.size, 1.0 / grid.size)
    return np.real(np.exp(1j * np.multiply.outer(theta, m)) @ c)


def scattered_field(dens: DensityPair, grid, mat: MaterialConfig, pts):
    """``S^{k_m}[psi]`` at points outside the inclusion."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    rho = np.hypot(pts[:, 0], pts[:, 1])
    if np.any(rho <= _radius_at(grid, np.arctan2(pts[:, 1], pts[:, 0]))):
        raise PointInsideInclusion("scattered field requested inside the inclusion")
    return _single_layer(mat.k_m, grid, dens.psi, pts)


def interior_field(dens: DensityPair, grid, mat: MaterialConfig, pts):
    """``S^{k_c}[phi]`` at points inside the inclusion."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    rho = np.hypot(pts[:, 0], pts[:, 1])
    if np.any(rho >= _radius_at(grid, np.arctan2(pts[:, 1], pts[:, 0]))):
        raise ValueError("interior field requested outside the inclusion")
    return _single_layer(mat.k_c, grid, dens.phi, pts)


def near_field(shape, mat: MaterialConfig, inc: IncidentWave = IncidentWave(), n: int = DEFAULT_N,
               n_obs: int = DEFAULT_N_OBS, R0: float = DEFAULT_R0, backend=None) -> NearFieldData:
    """Scattered field of ``shape`` sampled at ``n_obs`` points on the circle ``R0``."""
    grid = geometry.discretize(shape, n)
    dens = solve_densities(grid, mat, inc, backend)
    t, pts = observation_points(n_obs, R0)
    return NearFieldData(t, pts, scattered_field(dens, grid, mat, pts))


def add_noise(data: NearFieldData, delta: float, seed=None) -> NearFieldData:
    """``u + delta xi/|xi|`` with complex Gaussian ``xi``; the perturbation has norm ``delta``."""
    if delta < 0:
        raise ValueError("noise level must be nonnegative")
    if delta == 0:
        return replace(data, delta=0.0, seed=seed)
    rng = np.random.default_rng(seed)
    xi = rng.standard_normal(data.values.size) + 1j * rng.standard_normal(data.values.size)
    xi *= delta / np.sqrt(np.sum(xi.real**2 + xi.imag**2))
    return replace(data, values=data.values + xi, delta=float(delta), seed=seed)

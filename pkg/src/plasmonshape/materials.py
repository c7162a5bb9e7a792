"""Material parameters, the contrast map lambda(mu_c) and the Drude permeability."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateContrast, DegenerateLambda, DomainError, NoBracket


@dataclass(frozen=True)
class MaterialConfig:
    """Background ``(eps_m, mu_m)``, inclusion ``(eps_c, mu_c)`` and frequency ``omega``."""

    omega: float = 0.01
    mu_c: complex = 5.0
    eps_c: float = 2.0
    eps_m: float = 1.0
    mu_m: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mu_c", complex(self.mu_c))
        if self.omega <= 0:
            raise DomainError("omega must be positive")
        if self.eps_m <= 0 or self.mu_m <= 0 or self.eps_c <= 0:
            raise DomainError("eps_m, mu_m and eps_c must be positive")
        if self.mu_c.imag < 0:
            raise DomainError("Im mu_c must be nonnegative")
        if self.mu_c == -self.mu_m:
            raise DegenerateContrast("mu_c = -mu_m is excluded")

    @property
    def k_m(self) -> complex:
        return complex(self.omega * np.sqrt(self.eps_m * self.mu_m))

    @property
    def k_c(self) -> complex:
        return complex(self.omega * np.sqrt(complex(self.eps_c * self.mu_c)))

    @property
    def lam(self) -> complex:
        return lambda_of_mu(self.mu_m, self.mu_c)

    def with_mu_c(self, mu_c) -> "MaterialConfig":
        return MaterialConfig(self.omega, mu_c, self.eps_c, self.eps_m, self.mu_m)


def lambda_of_mu(mu_m, mu_c) -> complex:
    """``lambda = (mu_m + mu_c) / (2 (mu_m - mu_c))``."""
    if mu_c == mu_m:
        raise DegenerateContrast("lambda undefined for mu_c = mu_m")
    return complex((mu_m + mu_c) / (2 * (mu_m - mu_c)))


def mu_of_lambda(mu_m, lam) -> complex:
    """Inverse map ``mu_c = mu_m (2 lambda - 1) / (2 lambda + 1)``."""
    if lam == -0.5:
        raise DegenerateLambda("lambda = -1/2 has no finite mu_c")
    return complex(mu_m * (2 * lam - 1) / (2 * lam + 1))


@dataclass(frozen=True)
class DrudeParams:
    """Drude model ``mu_c(w) = mu_0 (1 - F w^2 / (w^2 - w_0^2 + i w / tau))``."""

    mu_0: float = 1.0
    filling: float = 0.8
    omega_0: float = 1.0
    tau: float = 100.0

    def __post_init__(self):
        if min(self.mu_0, self.filling, self.omega_0, self.tau) <= 0 or self.filling >= 1:
            raise DomainError("Drude parameters must be positive with F < 1")


def drude_mu(p: DrudeParams, omega):
    """Drude permeability at ``omega`` (scalar or array)."""
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise DomainError("omega must be positive")
    out = p.mu_0 * (1 - p.filling * w**2 / (w**2 - p.omega_0**2 + 1j * w / p.tau))
    return complex(out) if out.ndim == 0 else out


def drude_negative_criterion(p: DrudeParams, omega) -> bool:
    """True when the sufficient condition for ``Re mu_c < 0`` holds at ``omega``."""
    s = omega**2 - p.omega_0**2
    lhs = (1 - p.filling) * s**2 - p.filling * p.omega_0**2 * s + omega**2 / p.tau**2
    return bool(lhs < 0)


def find_resonant_omega(p: DrudeParams, mu_m, lam_target, bracket, tol=1e-10, max_iter=200) -> float:
    """Bisection root of ``Re lambda(omega) = lam_target`` on ``bracket``."""
    lo, hi = map(float, bracket)

    def f(w):
        return lambda_of_mu(mu_m, drude_mu(p, w)).real - lam_target

    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoBracket(f"Re lambda - target has the same sign at {lo} and {hi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0 or hi - lo < tol:
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)

"""Gaussian (Laplace) approximation of the posterior at the MAP point and sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import geometry
from .errors import NotPositiveDefinite

DEFAULT_SAMPLES = 10000
CHUNK = 2500


@dataclass(frozen=True)
class PosteriorGaussian:
    mean: np.ndarray
    cov: np.ndarray
    chol: np.ndarray  # lower triangular, cov = chol @ chol.T


@dataclass(frozen=True)
class SampleSet:
    samples: np.ndarray  # (N_e, 2m+1)

    @property
    def size(self) -> int:
        return self.samples.shape[0]

    @property
    def mean(self) -> np.ndarray:
        return self.samples.mean(axis=0)

    def radius_curves(self, t) -> np.ndarray:
        m = (self.samples.shape[1] - 1) // 2
        return self.samples @ geometry.trig_basis(t, m).T

    def band(self, t, level: float = 0.95):
        """Pointwise lower and upper radius quantiles at coverage ``level``."""
        r = self.radius_curves(t)
        a = 0.5 * (1 - level)
        return np.quantile(r, a, axis=0), np.quantile(r, 1 - a, axis=0)


def build_gaussian(q_map, G, mu_reg: float, delta: float) -> PosteriorGaussian:
    """``N(q_map, C)`` with precision ``(mu_reg I + G^T G) / delta^2``.

    The covariance comes from a Cholesky solve against the precision matrix.
    """
    if delta <= 0 or mu_reg <= 0:
        raise ValueError("delta and mu_reg must be positive")
    G = np.asarray(G, dtype=float)
    q_map = np.asarray(q_map, dtype=float)
    P = (mu_reg * np.eye(q_map.size) + G.T @ G) / delta**2
    try:
        factor = scipy.linalg.cho_factor(P, lower=True)
        C = scipy.linalg.cho_solve(factor, np.eye(q_map.size))
        C = 0.5 * (C + C.T)
        L = np.linalg.cholesky(C)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    return PosteriorGaussian(q_map, C, L)


def sample(pg: PosteriorGaussian, n_samples: int = DEFAULT_SAMPLES, seed=None) -> SampleSet:
    """Draw ``q_map + L B`` with ``B ~ N(0, I)``.

    Draws come in fixed-size chunks, each with its own stream spawned from
    ``seed``, so the output does not depend on how chunks are scheduled.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples")
    dim = pg.mean.size
    sizes = [CHUNK] * (n_samples // CHUNK)
    if n_samples % CHUNK:
        sizes.append(n_samples % CHUNK)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    blocks = [np.random.default_rng(s).standard_normal((k, dim)) for s, k in zip(streams, sizes)]
    B = np.vstack(blocks)
    return SampleSet(pg.mean + B @ pg.chol.T)

"""Static layer operators and the Neumann-Poincare spectrum.

``K*`` is self-adjoint for ``<u, v> = -<u, S~[v]>``, where ``S~`` agrees with
the static single layer on mean-zero densities and maps the equilibrium
density ``phi_0`` (``K* phi_0 = phi_0 / 2``, unit total charge) to ``-1``.
The eigenproblem is solved as a symmetric-definite generalized problem in
that inner product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import kernels
from .errors import EigSolverFailure
from .geometry import BoundaryGrid

ZERO_CLUSTER = 1e-4


@dataclass(frozen=True)
class NPDiscretization:
    grid: BoundaryGrid
    S: np.ndarray
    Kstar: np.ndarray
    W: np.ndarray  # quadrature weights (diagonal of the weight matrix)


@dataclass(frozen=True)
class NPSpectrum:
    """Eigenpairs sorted by ``|lambda|`` descending, ``lambda_0 = 1/2`` first."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def lambda0(self) -> float:
        return float(self.values[0])

    @property
    def candidates(self) -> np.ndarray:
        """All eigenvalues except ``lambda_0``."""
        return self.values[1:]

    @property
    def resonant(self) -> np.ndarray:
        """Candidates outside the numerically-zero cluster."""
        c = self.candidates
        return c[np.abs(c) >= ZERO_CLUSTER]


def assemble(grid: BoundaryGrid, backend=None) -> NPDiscretization:
    S, K = kernels.layer_matrices([0.0], grid, backend)
    return NPDiscretization(grid, S[0].real.copy(), K[0].real.copy(), grid.weights.copy())


def equilibrium_density(d: NPDiscretization) -> np.ndarray:
    """Null vector of ``K* - 1/2`` with ``sum(W phi_0) = 1``."""
    _, _, vh = np.linalg.svd(d.Kstar - 0.5 * np.eye(d.W.size))
    phi0 = vh[-1]
    return phi0 / (d.W @ phi0)


def hstar_gram(d: NPDiscretization) -> np.ndarray:
    """Gram matrix ``-W S~`` of the H* inner product (symmetrised)."""
    phi0 = equilibrium_density(d)
    St = d.S - np.outer(d.S @ phi0 + 1.0, d.W)
    A = -d.W[:, None] * St
    return 0.5 * (A + A.T)


def spectrum(d: NPDiscretization, count: int | None = None) -> NPSpectrum:
    """Eigenpairs of ``K*`` in the H* inner product.

    Raises
    ------
    EigSolverFailure
        If the Gram matrix is not positive definite or LAPACK fails.
    """
    A = hstar_gram(d)
    B = A @ d.Kstar
    B = 0.5 * (B + B.T)
    try:
        vals, vecs = scipy.linalg.eigh(B, A)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigSolverFailure(str(exc)) from exc
    order = np.argsort(-np.abs(vals), kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    i0 = int(np.argmin(np.abs(vals - 0.5)))
    order = np.r_[i0, np.delete(np.arange(vals.size), i0)]
    vals, vecs = vals[order], vecs[:, order]
    if count is not None:
        vals, vecs = vals[:count], vecs[:, :count]
    return NPSpectrum(vals, vecs)


def plain_eigenvalues(d: NPDiscretization) -> np.ndarray:
    """Eigenvalues of the unsymmetrised matrix (cross-check)."""
    v = np.linalg.eigvals(d.Kstar)
    return v[np.argsort(-np.abs(v), kind="stable")]

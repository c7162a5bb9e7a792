"""Backend selection for Nystrom kernel assembly.

The compiled core (``_kernels``, Cython) is used when it imports and every
node pair lies in the series regime ``|k r| <= SERIES_CUTOFF``; otherwise the
NumPy implementation runs.  Set ``PLASMONSHAPE_BACKEND=python`` to force the
fallback.
"""

from __future__ import annotations

import functools
import os

import numpy as np

from . import _kernels_py
from ._kernels_py import SERIES_CUTOFF, layer_blocks, log_constant, log_weights

try:  # pragma: no cover - depends on the build
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover
    _compiled = None

__all__ = ["BACKEND", "layer_blocks", "layer_matrices", "log_constant", "log_weights", "log_weight_matrix"]


def _pick_backend():
    forced = os.environ.get("PLASMONSHAPE_BACKEND", "").strip().lower()
    if forced == "python" or _compiled is None:
        return "python"
    return "compiled"


BACKEND = _pick_backend()


@functools.lru_cache(maxsize=16)
def log_weight_matrix(n: int) -> np.ndarray:
    R = _kernels_py.log_weight_matrix(n)
    R.setflags(write=False)
    return R


def layer_matrices(ks, grid, backend=None):
    """On-grid ``S^k`` and ``(K^k)*`` Nystrom matrices for each ``k`` in ``ks``.

    Returns ``(S, K)`` with shape ``(len(ks), 2n, 2n)``.
    """
    backend = backend or BACKEND
    ks = np.atleast_1d(np.asarray(ks, dtype=complex))
    R = log_weight_matrix(grid.n)
    pts = np.ascontiguousarray(grid.points)
    if backend == "compiled" and _compiled is not None:
        diam = 2.0 * float(np.max(np.hypot(pts[:, 0], pts[:, 1])))
        if float(np.max(np.abs(ks))) * diam <= SERIES_CUTOFF:
            A = np.array([log_constant(k) for k in ks], dtype=complex)
            return _compiled.layer_matrices(
                ks,
                np.ascontiguousarray(grid.t),
                pts,
                np.ascontiguousarray(grid.normals),
                np.ascontiguousarray(grid.curvature),
                np.ascontiguousarray(grid.speed),
                grid.n,
                np.ascontiguousarray(R),
                A,
            )
    geo = (grid.t, grid.points, grid.normals, grid.curvature, grid.speed)
    S = np.empty((ks.size, grid.size, grid.size), dtype=complex)
    K = np.empty_like(S)
    for a, k in enumerate(ks):
        S[a], K[a] = layer_blocks(k, geo, geo, grid.n, R=R)
    return S, K

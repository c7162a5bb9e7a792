"""Starlike boundary curves ``x(t) = q(t) (cos t, sin t)`` and their sampled geometry."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NonPositiveRadius

CLOSED_FORMS = ("disk", "peanut", "peach", "ellipse")
DEFAULT_TRIG_ORDER = 3


@dataclass(frozen=True)
class StarlikeShape:
    """Radial boundary curve.

    ``kind`` is one of :data:`CLOSED_FORMS` or ``"trig_series"``.  For closed
    forms ``params`` holds the curve parameters (``disk``: ``(r0,)``;
    ``peanut``: ``(a, phase)`` for ``sqrt(cos^2 t + a sin^2(t + phase))``;
    ``peach``: no parameters; ``ellipse``: semi-axes ``(a, b)``).  For trig
    series ``params`` is ``(a_0, ..., a_m, b_1, ..., b_m)`` with
    ``q(t) = sum a_k cos kt + sum b_k sin kt``.  ``scale`` multiplies the radius.
    """

    kind: str
    params: tuple = ()
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in CLOSED_FORMS + ("trig_series",):
            raise ValueError(f"unknown shape kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.kind == "trig_series" and len(self.params) % 2 == 0:
            raise ValueError("trig series needs 2m+1 coefficients")
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    @property
    def coeffs(self) -> np.ndarray:
        """Coefficient vector of a trig-series shape (scale folded in)."""
        if self.kind != "trig_series":
            raise TypeError(f"{self.kind} shape has no coefficient vector")
        return self.scale * np.asarray(self.params)

    @property
    def order(self) -> int:
        return (len(self.params) - 1) // 2

    def evaluate(self, t):
        """Return ``(q, q', q'')`` at parameter(s) ``t``."""
        t = np.asarray(t, dtype=float)
        q, dq, ddq = _EVALUATORS[self.kind](self.params, t)
        return self.scale * q, self.scale * dq, self.scale * ddq

    def radius(self, t):
        return self.evaluate(t)[0]


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _eval_disk(params, t):
    (r0,) = params
    q = np.full_like(t, r0)
    return q, np.zeros_like(t), np.zeros_like(t)


def _eval_peanut(params, t):
    a, phase = params if params else (0.26, 0.5)
    f = np.cos(t) ** 2 + a * np.sin(t + phase) ** 2
    df = -np.sin(2 * t) + a * np.sin(2 * (t + phase))
    ddf = -2 * np.cos(2 * t) + 2 * a * np.cos(2 * (t + phase))
    q = np.sqrt(f)
    dq = df / (2 * q)
    ddq = ddf / (2 * q) - df**2 / (4 * q**3)
    return q, dq, ddq


PEACH_COEFFS = (18 / 25, 0.0, 0.0, -3 / 35, -1 / 5, 0.0, 0.0)


def _eval_peach(params, t):
    return _eval_trig(PEACH_COEFFS, t)


def _eval_ellipse(params, t):
    a, b = params
    g = b**2 * np.cos(t) ** 2 + a**2 * np.sin(t) ** 2
    dg = (a**2 - b**2) * np.sin(2 * t)
    ddg = 2 * (a**2 - b**2) * np.cos(2 * t)
    q = a * b * g**-0.5
    dq = -0.5 * a * b * g**-1.5 * dg
    ddq = a * b * (0.75 * g**-2.5 * dg**2 - 0.5 * g**-1.5 * ddg)
    return q, dq, ddq


def _eval_trig(params, t):
    c = np.asarray(params, dtype=float)
    m = (c.size - 1) // 2
    k = np.arange(m + 1)
    a, b = c[: m + 1], np.concatenate(([0.0], c[m + 1:]))
    kt = np.multiply.outer(t, k)
    cos, sin = np.cos(kt), np.sin(kt)
    q = cos @ a + sin @ b
    dq = (-sin * k) @ a + (cos * k) @ b
    ddq = (-cos * k**2) @ a + (-sin * k**2) @ b
    return q, dq, ddq


_EVALUATORS = {
    "disk": _eval_disk,
    "peanut": _eval_peanut,
    "peach": _eval_peach,
    "ellipse": _eval_ellipse,
    "trig_series": _eval_trig,
}


def disk(r0: float) -> StarlikeShape:
    return StarlikeShape("disk", (r0,))


def peanut(a: float = 0.26, phase: float = 0.5) -> StarlikeShape:
    return StarlikeShape("peanut", (a, phase))


def peach() -> StarlikeShape:
    return StarlikeShape("peach")


def ellipse(a: float, b: float) -> StarlikeShape:
    return StarlikeShape("ellipse", (a, b))


def trig_series(coeffs: Sequence[float]) -> StarlikeShape:
    return StarlikeShape("trig_series", tuple(coeffs))


def trig_basis(t, m: int) -> np.ndarray:
    """Design matrix mapping ``(a_0..a_m, b_1..b_m)`` to ``q(t)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    kt = np.multiply.outer(t, np.arange(m + 1))
    return np.hstack([np.cos(kt), np.sin(kt[:, 1:])])


def fit_trig_series(shape: StarlikeShape, m: int = DEFAULT_TRIG_ORDER, samples: int = 512) -> np.ndarray:
    """Least-squares (= truncated Fourier) coefficients of ``shape``'s radius."""
    t = 2 * np.pi * np.arange(samples) / samples
    c = np.fft.rfft(shape.radius(t)) / samples
    a = np.concatenate(([c[0].real], 2 * c[1: m + 1].real))
    b = -2 * c[1: m + 1].imag
    return np.concatenate((a, b))


# ---------------------------------------------------------------------------
# sampled geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryGrid:
    """Equispaced parameter grid with 2n nodes on a starlike curve.

    ``speed`` is ``|x'(t_j)|`` (arclength per unit parameter); the trapezoid
    weight of node ``j`` is ``speed[j] * pi / n``.
    """

    n: int
    t: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    curvature: np.ndarray
    speed: np.ndarray
    radius: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return 2 * self.n

    @property
    def weights(self) -> np.ndarray:
        return self.speed * (np.pi / self.n)

    def perimeter(self) -> float:
        return float(self.weights.sum())


def curve_frame(shape: StarlikeShape, t):
    """Points, outward normals, signed curvature and speed at parameters ``t``."""
    t = np.asarray(t, dtype=float)
    q, dq, ddq = shape.evaluate(t)
    c, s = np.cos(t), np.sin(t)
    pts = np.stack([q * c, q * s], axis=-1)
    dx = np.stack([dq * c - q * s, dq * s + q * c], axis=-1)
    speed = np.sqrt(q**2 + dq**2)
    normals = np.stack([dx[..., 1], -dx[..., 0]], axis=-1) / speed[..., None]
    curvature = (q**2 + 2 * dq**2 - q * ddq) / speed**3
    return pts, normals, curvature, speed, q


def discretize(shape: StarlikeShape, n: int) -> BoundaryGrid:
    """Sample ``shape`` at ``t_j = j pi / n``, ``j = 0..2n-1``."""
    if n < 8:
        raise ValueError("discretize needs n >= 8")
    t = np.pi * np.arange(2 * n) / n
    pts, normals, curvature, speed, q = curve_frame(shape, t)
    if np.min(q) <= 0:
        raise NonPositiveRadius(f"min radius {np.min(q):.3g} <= 0")
    return BoundaryGrid(n, t, pts, normals, curvature, speed, q)


def scale(shape: StarlikeShape, factor: float) -> StarlikeShape:
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    if shape.kind == "trig_series":
        return StarlikeShape("trig_series", tuple(factor * np.asarray(shape.params)), shape.scale)
    return StarlikeShape(shape.kind, shape.params, shape.scale * factor)


def max_curvature(shape: StarlikeShape, n: int = 512) -> float:
    return float(np.max(np.abs(discretize(shape, n).curvature)))


def perimeter(shape: StarlikeShape, n: int = 256) -> float:
    return discretize(shape, n).perimeter()


# ---------------------------------------------------------------------------
# normal perturbations
# ---------------------------------------------------------------------------

BoundaryFunction = Callable[[np.ndarray], np.ndarray]


def h_constant(value: float = 1.0) -> BoundaryFunction:
    return lambda x: np.full(x.shape[:-1], float(value))


def h_linear(a: float = 1.0, b: float = 1.0) -> BoundaryFunction:
    """``h(x) = a x_1 + b x_2``."""
    return lambda x: a * x[..., 0] + b * x[..., 1]


def perturb(shape: StarlikeShape, h: BoundaryFunction, eps: float, samples: int = 256) -> StarlikeShape:
    """Shape bounded by ``x + eps h(x) nu(x)``, re-expressed as a radius function.

    Each sample ray ``theta`` is intersected with the displaced curve by a
    fixed-point solve for the source parameter (contraction factor O(eps)),
    and the sampled radii are converted to a trig series with every mode
    below Nyquist kept.
    """
    if eps == 0:
        return shape
    theta = 2 * np.pi * np.arange(samples) / samples

    def displaced(s):
        pts, nrm, _, _, _ = curve_frame(shape, s)
        return pts + eps * h(pts)[:, None] * nrm

    s = theta.copy()
    for _ in range(60):
        y = displaced(s)
        d = np.angle(np.exp(1j * (np.arctan2(y[:, 1], y[:, 0]) - theta)))
        s = s - d
        if np.max(np.abs(d)) < 1e-15:
            break
    y = displaced(s)
    # signed along the ray: a point pushed through the origin counts as negative
    r = y[:, 0] * np.cos(s) + y[:, 1] * np.sin(s)
    if np.min(r) <= 0 or np.min(shape.radius(theta)) <= 0:
        raise NonPositiveRadius("perturbed radius not positive")
    m = samples // 2 - 1
    c = np.fft.rfft(r) / samples
    coeffs = np.concatenate(([c[0].real], 2 * c[1: m + 1].real, -2 * c[1: m + 1].imag))
    return trig_series(coeffs)

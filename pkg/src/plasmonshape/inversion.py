"""Shape reconstruction by regularised Gauss-Newton steps with a gamma hyperprior.

Each sweep computes the data misfit and Jacobian at ``q_z``, takes the step
``dq = (G^T G + eta delta^2 I)^{-1} G^T F`` and then refreshes ``eta`` from its
conditional mode ``((2m+1)/2 + alpha_0 - 1) / (q^T q / 2 + beta_0)``.
Complex data are stacked as ``[Re; Im]`` so every quantity is real.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import forward, geometry, sensitivity
from .errors import NonPositiveRadius, SingularNormalEq, StepRejected
from .forward import IncidentWave, NearFieldData
from .materials import MaterialConfig

DEFAULT_M = 3
MAX_BACKTRACK = 20
ERROR_SAMPLES = 256


@dataclass(frozen=True)
class InversionConfig:
    m: int = DEFAULT_M
    q0: tuple | None = None  # default: circle of radius 1
    eta0: float = 1000.0
    alpha0: float = 1000.0
    beta0: float = 0.01
    max_iters: int = 100
    stop_tol: float = 1e-5
    fd_step: float = sensitivity.DEFAULT_FD_STEP
    n: int = forward.DEFAULT_N
    freeze_eta: bool = False

    def __post_init__(self):
        if self.beta0 <= 0:
            raise ValueError("beta0 must be positive")
        if (2 * self.m + 1) / 2 + self.alpha0 - 1 <= 0:
            raise ValueError("alpha0 too small for a positive eta update")

    def initial(self) -> np.ndarray:
        if self.q0 is not None:
            q = np.asarray(self.q0, dtype=float)
            if q.size != 2 * self.m + 1:
                raise ValueError("q0 length does not match 2m+1")
            return q
        q = np.zeros(2 * self.m + 1)
        q[0] = 1.0
        return q


@dataclass
class ReconstructionState:
    q: np.ndarray
    eta: float
    z: int = 0
    residual_norm: float = np.nan
    step_norm: float = np.inf
    log: list = field(default_factory=list)
    reason: str = ""


def eta_update(q, cfg: InversionConfig) -> float:
    q = np.asarray(q, dtype=float)
    num = (2 * cfg.m + 1) / 2 + cfg.alpha0 - 1
    return float(num / (q @ q / 2 + cfg.beta0))


def _feasible(q, R0) -> bool:
    """Radius positive and inside the observation circle."""
    t = 2 * np.pi * np.arange(ERROR_SAMPLES) / ERROR_SAMPLES
    r = geometry.trig_basis(t, (len(q) - 1) // 2) @ q
    return bool(np.min(r) > 0 and np.max(r) < R0)


def regularized_step(G, F, reg) -> np.ndarray:
    """Solve ``(G^T G + reg I) dq = G^T F``."""
    A = G.T @ G + reg * np.eye(G.shape[1])
    if np.linalg.cond(A) > 1e15:
        raise SingularNormalEq("normal matrix numerically singular")
    return np.linalg.solve(A, G.T @ F)


def lm_step(q, eta, data: NearFieldData, cfg: InversionConfig, mat: MaterialConfig,
            inc: IncidentWave = IncidentWave()):
    """One regularised step from ``q``; returns ``(q_new, residual_norm, G)``.

    The step is halved until the radius stays positive and below ``R0``.

    Raises
    ------
    StepRejected
        If ``MAX_BACKTRACK`` halvings do not restore feasibility.
    """
    n_obs = data.values.size
    R0 = data.R0
    Fq = sensitivity.forward_map(q, mat, inc, cfg.n, n_obs, R0)
    F = sensitivity.stacked(data.values - Fq)
    G = sensitivity.jacobian(q, mat, inc, cfg.fd_step, cfg.n, n_obs, R0, base=Fq)
    dq = regularized_step(G, F, eta * data.delta**2)
    for _ in range(MAX_BACKTRACK + 1):
        if _feasible(q + dq, R0):
            return q + dq, float(np.linalg.norm(F)), G
        dq = 0.5 * dq
    raise StepRejected("no feasible step after backtracking")


def reconstruct(data: NearFieldData, cfg: InversionConfig, mat: MaterialConfig,
                inc: IncidentWave = IncidentWave()) -> ReconstructionState:
    """Alternate regularised steps and ``eta`` updates until the step is below ``stop_tol``.

    The log holds one ``(z, eta, |F|, E)`` tuple per sweep; ``state.reason``
    records why the loop ended.
    """
    q = cfg.initial()
    state = ReconstructionState(q=q, eta=float(cfg.eta0))
    for z in range(1, cfg.max_iters + 1):
        try:
            q_new, res, _ = lm_step(state.q, state.eta, data, cfg, mat, inc)
        except (StepRejected, NonPositiveRadius) as exc:
            state.reason = f"step rejected: {exc}"
            return state
        step = float(np.linalg.norm(q_new - state.q))
        eta = state.eta if cfg.freeze_eta else eta_update(q_new, cfg)
        state.q, state.eta, state.z = q_new, eta, z
        state.residual_norm, state.step_norm = res, step
        state.log.append((z, eta, res, step))
        if step <= cfg.stop_tol:
            state.reason = "converged"
            return state
    state.reason = "max_iters"
    return state


def relative_error(q_est, true_shape) -> float:
    """Relative discrete L2 radius error over ``ERROR_SAMPLES`` angles."""
    t = 2 * np.pi * np.arange(ERROR_SAMPLES) / ERROR_SAMPLES
    if isinstance(q_est, geometry.StarlikeShape):
        est = q_est.radius(t)
    else:
        q_est = np.asarray(q_est, dtype=float)
        est = geometry.trig_basis(t, (q_est.size - 1) // 2) @ q_est
    ref = true_shape.radius(t)
    return float(np.linalg.norm(est - ref) / np.linalg.norm(ref))

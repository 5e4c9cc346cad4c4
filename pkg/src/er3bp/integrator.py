"""
Nonlinear propagation of the equations of motion in the rotating frame,

    x'' - 2 n y' = Ux,    y'' + 2 n x' = Uy.

The system is autonomous, so C = 2 U - (x'^2 + y'^2) is conserved and is
tracked as the accuracy diagnostic.  The adaptive propagator wraps the
8(5,3) Dormand-Prince pair from scipy; a fixed-step classical RK4 is kept
for convergence-order checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import DOP853
from scipy.optimize import minimize_scalar

from .errors import CollisionError, StepUnderflow
from .model import PlanarState, SystemParams, gradient, mean_motion, potential, primary_distances

COLLISION_RADIUS = 1e-6
# within this distance of a primary the step interior is searched for the closest approach
NEAR_PRIMARY = 1e-2
MIN_STEP = 1e-14
MAX_STEP = 0.1


def _as_array(state) -> np.ndarray:
    if isinstance(state, PlanarState):
        return state.to_array()
    arr = np.asarray(state, dtype=float)
    if arr.shape != (4,):
        raise ValueError(f"state must have 4 components, got shape {arr.shape}")
    return arr


def state_derivative(params: SystemParams, state) -> np.ndarray:
    """(x', y', x'', y'') for a :class:`PlanarState` or a length-4 array."""
    x, y, vx, vy = _as_array(state)
    n = mean_motion(params)
    ux, uy = gradient(params, (x, y))
    return np.array([vx, vy, ux + 2.0 * n * vy, uy - 2.0 * n * vx])


def jacobi_constant(params: SystemParams, state) -> float:
    x, y, vx, vy = _as_array(state)
    return 2.0 * potential(params, (x, y)) - (vx * vx + vy * vy)


@dataclass
class TrajectoryStats:
    n_steps: int = 0
    n_evaluations: int = 0
    max_jacobi_drift: float = 0.0


@dataclass
class Trajectory:
    """Dense samples of a propagated state.

    ``t`` has shape (N,), ``states`` shape (N, 4) with columns x, y, vx, vy.
    """

    t: np.ndarray
    states: np.ndarray
    params: SystemParams
    stats: TrajectoryStats = field(default_factory=TrajectoryStats)

    @property
    def samples(self) -> list[tuple[float, PlanarState]]:
        return [(float(t), PlanarState.from_array(s)) for t, s in zip(self.t, self.states)]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def jacobi(self) -> np.ndarray:
        return np.array([jacobi_constant(self.params, s) for s in self.states])


def sample_times(t_end: float, dense_dt: float) -> np.ndarray:
    n = int(math.floor(t_end / dense_dt + 1e-9))
    t = dense_dt * np.arange(n + 1)
    if t_end - t[-1] > 1e-12 * max(1.0, t_end):
        t = np.append(t, t_end)
    else:
        t[-1] = t_end
    return t


def _closest_approach(params: SystemParams, interp, t0: float, t1: float) -> tuple[float, float]:
    def dist(t):
        s = interp(t)
        return min(primary_distances(params, s[0], s[1]))

    res = minimize_scalar(dist, bounds=(t0, t1), method="bounded", options={"xatol": 1e-12})
    return float(res.x), float(res.fun)


def propagate(
    params: SystemParams,
    ic,
    t_end: float,
    rel_tol: float = 1e-12,
    dense_dt: float = 0.01,
) -> Trajectory:
    """Adaptive propagation from ``ic`` over [0, t_end], sampled every ``dense_dt``.

    Raises :class:`CollisionError` (``time`` = time of closest approach)
    when the body comes within ``COLLISION_RADIUS`` of a primary, and
    :class:`StepUnderflow` when the step size collapses below ``MIN_STEP``.
    """
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if not 1e-14 <= rel_tol <= 1e-6:
        raise ValueError(f"rel_tol = {rel_tol!r} outside [1e-14, 1e-6]")
    if not dense_dt > 0:
        raise ValueError("dense_dt must be positive")
    y0 = _as_array(ic)
    n = mean_motion(params)

    def rhs(t, s):
        ux, uy = gradient(params, (s[0], s[1]))
        return np.array([s[2], s[3], ux + 2.0 * n * s[3], uy - 2.0 * n * s[2]])

    t_eval = sample_times(t_end, dense_dt)
    out = np.empty((len(t_eval), 4))
    out[0] = y0
    filled = 1
    solver = DOP853(rhs, 0.0, y0, t_end, rtol=rel_tol, atol=rel_tol * 1e-2, max_step=MAX_STEP)
    n_steps = 0
    while solver.status == "running":
        t_old = solver.t
        message = solver.step()
        if solver.status == "failed":
            raise StepUnderflow(f"step size fell below {MIN_STEP:g} near t = {t_old:.6g}: {message}")
        n_steps += 1
        interp = solver.dense_output()
        r_min = min(primary_distances(params, solver.y[0], solver.y[1]))
        t_hit = solver.t
        if r_min < NEAR_PRIMARY:
            t_hit, r_min = min((t_hit, r_min), _closest_approach(params, interp, t_old, solver.t), key=lambda p: p[1])
        if r_min < COLLISION_RADIUS:
            raise CollisionError(
                f"body reached a primary (r = {r_min:.3e}) at t = {t_hit:.6g}", time=t_hit
            )
        if solver.status == "running" and solver.step_size < MIN_STEP:
            raise StepUnderflow(
                f"step size {solver.step_size:.3e} below {MIN_STEP:g} at t = {solver.t:.6g}"
            )
        stop = int(np.searchsorted(t_eval, solver.t, side="right"))
        if stop > filled:
            out[filled:stop] = interp(t_eval[filled:stop]).T
            filled = stop
    out[-1] = solver.y

    traj = Trajectory(t_eval, out, params)
    c = traj.jacobi()
    scale = abs(c[0]) if c[0] != 0 else 1.0
    traj.stats = TrajectoryStats(
        n_steps=n_steps,
        n_evaluations=int(solver.nfev),
        max_jacobi_drift=float(np.max(np.abs(c - c[0])) / scale),
    )
    return traj


def rk4_fixed(params: SystemParams, ic, t_end: float, dt: float) -> np.ndarray:
    """Final state after fixed-step classical RK4; dt must divide t_end."""
    steps = int(round(t_end / dt))
    if steps < 1 or abs(steps * dt - t_end) > 1e-9 * t_end:
        raise ValueError("dt must divide t_end")
    s = _as_array(ic).copy()
    for _ in range(steps):
        k1 = state_derivative(params, s)
        k2 = state_derivative(params, s + 0.5 * dt * k1)
        k3 = state_derivative(params, s + 0.5 * dt * k2)
        k4 = state_derivative(params, s + dt * k3)
        s = s + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return s

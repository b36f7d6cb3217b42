"""Time-domain integration of the driven junction and its companion system.

Two routes to the same phase:

* the scalar equation ``phi' = q(t) - sin(phi)`` integrated directly, and
* the linear companion system ``2x' = x + q*y``, ``2y' = -(q*x + y)`` whose
  solutions encode the phase through ``exp(i*phi) = (x - i*y)/(x + i*y)``,
  i.e. ``phi = 2*atan2(-y, x)`` up to the usual 2*pi branch bookkeeping.

Both integrators are hand-written fixed-step classical Runge-Kutta, so the
two routes stay independent of each other and of any closed-form machinery
they are later used to cross-check.  The default step is period/2000.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidParams, NonFiniteState, OriginUndefined
from .model import RsjParams, Trajectory

__all__ = ["bias", "integrate_phase", "integrate_xy", "phase_from_xy"]

DEFAULT_STEPS_PER_PERIOD = 2000


def bias(p: RsjParams, t):
    """Drive q(t) = B + A*cos(omega*t); accepts scalars or arrays."""
    return p.B + p.A * np.cos(p.omega * np.asarray(t, dtype=float))


def _grid(p: RsjParams, t_end: float, h: float | None) -> tuple[int, float]:
    """Uniform grid hitting t_end exactly with step no larger than requested."""
    if not (isinstance(t_end, (int, float)) and math.isfinite(t_end)) or t_end <= 0:
        raise InvalidParams(f"t_end must be a positive real, got {t_end!r}")
    if h is None:
        h = p.period / DEFAULT_STEPS_PER_PERIOD
    if not (isinstance(h, (int, float)) and math.isfinite(h)) or h <= 0:
        raise InvalidParams(f"step h must be a positive real, got {h!r}")
    n_steps = max(1, math.ceil(t_end / h - 1e-9))
    return n_steps, t_end / n_steps


def integrate_phase(
    p: RsjParams, phi0: float, t_end: float, h: float | None = None
) -> Trajectory:
    """Integrate phi' = q(t) - sin(phi) from phi(0) = phi0 with classical RK4."""
    n_steps, dt = _grid(p, t_end, h)
    A, B, w = p.A, p.B, p.omega
    cos, sin = math.cos, math.sin

    phi = float(phi0)
    out = np.empty(n_steps + 1)
    out[0] = phi
    for i in range(n_steps):
        t = i * dt
        k1 = B + A * cos(w * t) - sin(phi)
        q_mid = B + A * cos(w * (t + 0.5 * dt))
        k2 = q_mid - sin(phi + 0.5 * dt * k1)
        k3 = q_mid - sin(phi + 0.5 * dt * k2)
        k4 = B + A * cos(w * (t + dt)) - sin(phi + dt * k3)
        phi += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        out[i + 1] = phi

    if not np.all(np.isfinite(out)):
        raise NonFiniteState("phase integration produced a non-finite sample")
    times = np.arange(n_steps + 1) * dt
    return Trajectory(times=times, values=out, kind="phase")


def integrate_xy(
    p: RsjParams, x0: float, y0: float, t_end: float, h: float | None = None
) -> Trajectory:
    """Integrate the companion system 2x' = x + q*y, 2y' = -(q*x + y)."""
    n_steps, dt = _grid(p, t_end, h)
    A, B, w = p.A, p.B, p.omega
    cos = math.cos

    x, y = float(x0), float(y0)
    out = np.empty((n_steps + 1, 2))
    out[0] = (x, y)
    for i in range(n_steps):
        t = i * dt
        q1 = B + A * cos(w * t)
        qm = B + A * cos(w * (t + 0.5 * dt))
        q4 = B + A * cos(w * (t + dt))

        kx1 = 0.5 * (x + q1 * y)
        ky1 = -0.5 * (q1 * x + y)
        x2 = x + 0.5 * dt * kx1
        y2 = y + 0.5 * dt * ky1
        kx2 = 0.5 * (x2 + qm * y2)
        ky2 = -0.5 * (qm * x2 + y2)
        x3 = x + 0.5 * dt * kx2
        y3 = y + 0.5 * dt * ky2
        kx3 = 0.5 * (x3 + qm * y3)
        ky3 = -0.5 * (qm * x3 + y3)
        x4 = x + dt * kx3
        y4 = y + dt * ky3
        kx4 = 0.5 * (x4 + q4 * y4)
        ky4 = -0.5 * (q4 * x4 + y4)

        x += dt * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4) / 6.0
        y += dt * (ky1 + 2.0 * ky2 + 2.0 * ky3 + ky4) / 6.0
        out[i + 1] = (x, y)

    if not np.all(np.isfinite(out)):
        raise NonFiniteState("companion integration produced a non-finite sample")
    times = np.arange(n_steps + 1) * dt
    return Trajectory(times=times, values=out, kind="xy")


def phase_from_xy(traj: Trajectory) -> Trajectory:
    """Convert a companion trajectory to the unwrapped phase 2*atan2(-y, x).

    The raw angles live on (-2*pi, 2*pi]; unwrapping picks the 2*pi branches
    that keep the sequence continuous, so the trajectory must be sampled
    finely enough that true increments stay below pi per step.
    """
    if traj.kind != "xy" or traj.values.shape[1] != 2:
        raise InvalidParams("phase_from_xy needs an 'xy' trajectory")
    x = traj.values[:, 0]
    y = traj.values[:, 1]
    if np.any(np.hypot(x, y) == 0.0):
        raise OriginUndefined("companion state reached x = y = 0")
    phi = np.unwrap(2.0 * np.arctan2(-y, x))
    return Trajectory(times=traj.times, values=phi, kind="phase")

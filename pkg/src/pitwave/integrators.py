"""Fixed-step time integrators and the propagator abstraction.

Three explicit schemes: a non-split three-stage Runge-Kutta (RK3), a
partially split forward Euler with forward-backward acoustic substeps
(SplitFE-FB), and a partially split RK3 with forward-backward substeps per
stage (SplitRK3-FB).  All are linear maps of the state for these linear
models, which the subspace reuse in the KSE-Parareal driver relies on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .mesh import ACOUSTIC, Grid2D, State, face_normal_velocities
from .physics import ModelSpec, advective_tendencies, damping_coefficients, rhs_for

RK3 = "rk3"
SPLIT_FE_FB = "split_fe_fb"
SPLIT_RK3_FB = "split_rk3_fb"
SCHEMES = (RK3, SPLIT_FE_FB, SPLIT_RK3_FB)


@dataclass(frozen=True)
class PropagatorSpec:
    """A scheme with its model, mesh, Courant number and acoustic substeps.

    The step size is h = cfl * min(dx, dy) / c with c the sound speed for
    the acoustic model and the largest advecting-velocity component for
    pure advection.
    """

    scheme: str
    model: ModelSpec
    grid: Grid2D
    cfl: float
    n_sound: int = 1

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.cfl <= 0:
            raise ValueError(f"cfl must be positive, got {self.cfl}")
        if self.n_sound < 1:
            raise ValueError(f"n_sound must be at least 1, got {self.n_sound}")
        if self.scheme != RK3 and self.model.kind != ACOUSTIC:
            raise ValueError(f"{self.scheme} is a split acoustic scheme; model is {self.model.kind}")
        if self.reference_speed <= 0:
            raise ValueError("reference wave speed is zero; cannot derive a step size")

    @property
    def reference_speed(self) -> float:
        if self.model.kind == ACOUSTIC:
            return self.model.sound_speed
        return self.model.vel.max_component_speed(self.grid)

    @property
    def dt(self) -> float:
        return self.cfl * min(self.grid.dx, self.grid.dy) / self.reference_speed


def make_propagator(scheme: str, model: ModelSpec, grid: Grid2D, cfl: float,
                    n_sound: int = 1) -> PropagatorSpec:
    """Build a PropagatorSpec, filling the model damping timescale.

    tau = h for the non-split RK3 and h/n_sound for the split schemes (the
    damping acts in every acoustic substep there).
    """
    spec = PropagatorSpec(scheme=scheme, model=model, grid=grid, cfl=cfl, n_sound=n_sound)
    if model.nu_damp > 0:
        tau = spec.dt if scheme == RK3 else spec.dt / n_sound
        spec = PropagatorSpec(scheme=scheme, model=model.with_timescale(tau),
                              grid=grid, cfl=cfl, n_sound=n_sound)
    return spec


def rk3_step(state: State, spec: PropagatorSpec, h: float) -> State:
    """s1 = q + h/3 f(q); s2 = q + h/2 f(s1); q+ = q + h f(s2)."""
    rhs = rhs_for(spec.model)
    grid = spec.grid
    s1 = state + (h / 3.0) * rhs(state, spec.model, grid)
    s2 = state + (h / 2.0) * rhs(s1, spec.model, grid)
    return state + h * rhs(s2, spec.model, grid)


def _fb_integrate(start: State, adv, spec: PropagatorSpec, tau: float, nsub: int) -> State:
    """nsub forward-backward substeps from ``start`` with frozen slow tendency."""
    model = spec.model
    grid = spec.grid
    if model.nu_damp > 0:
        a1, a2 = damping_coefficients(model.nu_damp, grid.dx, grid.dy, tau)
    else:
        a1 = a2 = 0.0
    u, v, p = kernels.fb_substeps(
        start.u, start.v, start.p, adv[0], adv[1], adv[2],
        tau, nsub, grid.dx, grid.dy, model.sound_speed, a1, a2,
    )
    return State.acoustic(grid, u, v, p)


def split_fe_fb_step(state: State, spec: PropagatorSpec, dt: float) -> State:
    """Forward Euler on the advective tendency, N_sound FB acoustic substeps."""
    adv = advective_tendencies(state, spec.model, spec.grid)
    return _fb_integrate(state, adv, spec, dt / spec.n_sound, spec.n_sound)


def split_rk3_fb_step(state: State, spec: PropagatorSpec, dt: float) -> State:
    """RK3 stages on the advective tendency; FB substeps over each stage.

    Every stage restarts the fast integration from the step-start state over
    dt/3, dt/2 and dt, with ceil(n_sound * fraction) substeps (at least 1).
    """
    cur = state
    for frac in (1.0 / 3.0, 0.5, 1.0):
        adv = advective_tendencies(cur, spec.model, spec.grid)
        nsub = max(1, math.ceil(spec.n_sound * frac))
        cur = _fb_integrate(state, adv, spec, frac * dt / nsub, nsub)
    return cur


_STEPPERS = {RK3: rk3_step, SPLIT_FE_FB: split_fe_fb_step, SPLIT_RK3_FB: split_rk3_fb_step}


def propagate(spec: PropagatorSpec, state: State, t0: float, t1: float) -> State:
    """Advance from t0 to t1 with the scheme's fixed step.

    (t1 - t0) must be an integer number of steps to 1e-9 relative; the loop
    is strictly sequential so results compose bitwise.
    """
    if t1 == t0:
        return state
    span = t1 - t0
    h = spec.dt
    n_real = span / h
    n = round(n_real)
    if n < 1 or abs(n_real - n) > 1e-9 * max(1.0, abs(n_real)):
        raise ValueError(f"interval {span} is not an integer multiple of the step {h} (ratio {n_real})")
    step = _STEPPERS[spec.scheme]
    # blow-up is a designed-for outcome (detected via finiteness checks, not
    # FP warnings), so let unstable runs overflow to inf/nan quietly
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n):
            state = step(state, spec, h)
    return state


def warm_up(spec: PropagatorSpec, state: State) -> None:
    """Trigger kernel compilation for this spec's code path (one step's work)."""
    # Face-velocity cache fill plus one step of each kernel signature.
    face_normal_velocities(spec.model.vel, spec.grid)
    _STEPPERS[spec.scheme](state, spec, spec.dt)

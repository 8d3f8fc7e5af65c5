"""Right-hand sides of the two model systems.

Pure 2D advection q_t + U.grad(q) = 0, and the linear acoustic-advection
system for (u, v, pi) with sound speed c_s, both in conservation form on the
periodic mesh.  Divergence damping acts on the momentum equations only with
coefficients alpha = nu * dx^2 / tau.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .mesh import ACOUSTIC, SCALAR, Grid2D, State, face_normal_velocities
from .stencils import _check_order

ACOUSTIC_FLUX_ORDER = 2  # acoustic terms are always second-order centered


@dataclass(frozen=True)
class ModelSpec:
    """Continuous model plus the discretization knobs that define an RHS.

    ``nu_damp`` is the dimensionless damping strength; ``damping_timescale``
    is the tau in alpha = nu*dx^2/tau (the step of the propagator the model
    is attached to: dt for a non-split scheme, dt/N_sound per acoustic
    substep in a split scheme).
    """

    kind: str
    vel: object
    advective_flux_order: int = 6
    sound_speed: float = 30.0
    nu_damp: float = 0.0
    damping_timescale: float | None = None

    def __post_init__(self):
        if self.kind not in (SCALAR, ACOUSTIC):
            raise ValueError(f"model kind must be {SCALAR!r} or {ACOUSTIC!r}, got {self.kind!r}")
        _check_order(self.advective_flux_order)
        if self.kind == ACOUSTIC and self.sound_speed <= 0:
            raise ValueError(f"sound speed must be positive, got {self.sound_speed}")
        if self.nu_damp < 0:
            raise ValueError(f"damping strength must be nonnegative, got {self.nu_damp}")
        if self.nu_damp > 0 and self.kind == ACOUSTIC:
            if self.damping_timescale is None or self.damping_timescale <= 0:
                raise ValueError("damping_timescale must be positive when nu_damp > 0")

    def with_timescale(self, tau: float) -> "ModelSpec":
        return replace(self, damping_timescale=tau)


def damping_coefficients(nu: float, dx: float, dy: float, tau: float):
    """(alpha1, alpha2) = nu * (dx^2, dy^2) / tau."""
    if tau <= 0:
        raise ValueError(f"damping timescale must be positive, got {tau}")
    return nu * dx * dx / tau, nu * dy * dy / tau


def _alphas(model: ModelSpec, grid: Grid2D):
    if model.nu_damp == 0.0:
        return 0.0, 0.0
    return damping_coefficients(model.nu_damp, grid.dx, grid.dy, model.damping_timescale)


def advective_tendencies(state: State, model: ModelSpec, grid: Grid2D) -> np.ndarray:
    """Flux-form advective tendency of every variable, shape like state.fields."""
    ux, vy = face_normal_velocities(model.vel, grid)
    order = model.advective_flux_order
    out = np.empty_like(state.fields)
    for k in range(state.fields.shape[0]):
        out[k] = kernels.advective_tendency(state.fields[k], ux, vy, grid.dx, grid.dy, order)
    return out


def advection_rhs(state: State, model: ModelSpec, grid: Grid2D) -> State:
    if model.kind != SCALAR or state.kind != SCALAR:
        raise ValueError("advection_rhs needs a scalar model and state")
    return State(grid, advective_tendencies(state, model, grid))


def acoustic_advection_rhs(state: State, model: ModelSpec, grid: Grid2D) -> State:
    if model.kind != ACOUSTIC or state.kind != ACOUSTIC:
        raise ValueError("acoustic_advection_rhs needs an acoustic model and state")
    ux, vy = face_normal_velocities(model.vel, grid)
    a1, a2 = _alphas(model, grid)
    du, dv, dp = kernels.acoustic_rhs(
        state.u, state.v, state.p, ux, vy, grid.dx, grid.dy,
        model.sound_speed, model.advective_flux_order, a1, a2,
    )
    return State.acoustic(grid, du, dv, dp)


def rhs_for(model: ModelSpec):
    return advection_rhs if model.kind == SCALAR else acoustic_advection_rhs

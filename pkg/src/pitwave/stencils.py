"""Interface fluxes, conservation-form divergence and derivative operators.

Advective interface fluxes use the upwind/centered stencil family of orders
1 to 6; odd orders add an upwind-biased dissipative term proportional to
|U|, even orders are purely centered.  Acoustic terms and divergence
damping use second-order centered differences throughout.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .mesh import Grid2D

VALID_ORDERS = (1, 2, 3, 4, 5, 6)


def _check_order(order: int) -> int:
    if order not in VALID_ORDERS:
        raise ValueError(f"flux order must be one of {VALID_ORDERS}, got {order}")
    return int(order)


def advective_interface_flux(order: int, u_face: float, window) -> float:
    """Flux through one interface from its six-point window.

    ``window`` holds (q_{i-2}, q_{i-1}, q_i, q_{i+1}, q_{i+2}, q_{i+3}) for
    the interface between cells i and i+1.  This scalar form is the
    reference the array kernels are tested against.
    """
    _check_order(order)
    qm2, qm1, q0, qp1, qp2, qp3 = (float(w) for w in window)
    u = float(u_face)
    if order == 1:
        return u * q0 if u >= 0.0 else u * qp1
    if order == 2:
        return u * 0.5 * (q0 + qp1)
    f4 = u * (7.0 * (q0 + qp1) - (qm1 + qp2)) / 12.0
    if order == 3:
        return f4 - abs(u) * (3.0 * (qp1 - q0) - (qp2 - qm1)) / 12.0
    if order == 4:
        return f4
    f6 = u * (37.0 * (q0 + qp1) - 8.0 * (qm1 + qp2) + (qm2 + qp3)) / 60.0
    if order == 5:
        return f6 - abs(u) * (10.0 * (qp1 - q0) - 5.0 * (qp2 - qm1) + (qp3 - qm2)) / 60.0
    return f6


def advective_flux_x(q: np.ndarray, u_face: np.ndarray, order: int) -> np.ndarray:
    """Fluxes on all x interfaces; out[j, f] belongs to the face at x = f*dx."""
    return kernels.flux_x(q, u_face, _check_order(order))


def advective_flux_y(q: np.ndarray, v_face: np.ndarray, order: int) -> np.ndarray:
    """Fluxes on all y interfaces; out[f, i] belongs to the face at y = f*dy."""
    return kernels.flux_y(q, v_face, _check_order(order))


def flux_divergence(fx: np.ndarray, gy: np.ndarray, grid: Grid2D) -> np.ndarray:
    """Cell tendency -(F_{i+1/2}-F_{i-1/2})/dx - (G_{j+1/2}-G_{j-1/2})/dy."""
    shape = (grid.ny, grid.nx)
    if fx.shape != shape or gy.shape != shape:
        raise ValueError(f"flux arrays must be shaped {shape}, got {fx.shape} and {gy.shape}")
    return kernels.flux_divergence(fx, gy, grid.dx, grid.dy)


def centered_derivative(field: np.ndarray, axis: str, grid: Grid2D) -> np.ndarray:
    """Second-order centered first derivative with periodic wrap."""
    if axis == "x":
        return kernels.centered_dx(field, grid.dx)
    if axis == "y":
        return kernels.centered_dy(field, grid.dy)
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def divergence_damping(u: np.ndarray, v: np.ndarray, grid: Grid2D, a1: float, a2: float):
    """Momentum tendencies (a1*(div u)_x, a2*(div u)_y), centered throughout."""
    if a1 < 0.0 or a2 < 0.0:
        raise ValueError(f"damping coefficients must be nonnegative, got ({a1}, {a2})")
    return kernels.damping_tendencies(u, v, grid.dx, grid.dy, a1, a2)

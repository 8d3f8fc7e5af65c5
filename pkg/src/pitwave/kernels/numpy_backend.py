"""Vectorized numpy implementation of the grid kernels.

Reference fallback for the numba backend; selected via PITWAVE_KERNELS=numpy.
All arrays are (ny, nx) float64 with periodic wrap; x is axis 1, y axis 0.

Face convention: flux_x[j, f] sits on the x interface at x = f*dx, i.e.
between cells f-1 and f of row j; flux_y[f, i] sits on the y interface at
y = f*dy.  In the interface-flux formulas the interface separates cells
i and i+1, so cell i of the formula is array index f-1.
"""
import numpy as np

BACKEND_NAME = "numpy"


def _shift_x(q, n):
    # positive n: values from n cells to the left (lower x index)
    return np.roll(q, n, axis=1)


def _shift_y(q, n):
    return np.roll(q, n, axis=0)


def _flux_1d(order, uf, qm2, qm1, q0, qp1, qp2, qp3):
    """Interface fluxes from the six-point windows (q_{i-2}..q_{i+3})."""
    if order == 1:
        return uf * 0.5 * (q0 + qp1) - np.abs(uf) * 0.5 * (qp1 - q0)
    if order == 2:
        return uf * 0.5 * (q0 + qp1)
    f4 = uf * (7.0 * (q0 + qp1) - (qm1 + qp2)) / 12.0
    if order == 3:
        return f4 - np.abs(uf) * (3.0 * (qp1 - q0) - (qp2 - qm1)) / 12.0
    if order == 4:
        return f4
    f6 = uf * (37.0 * (q0 + qp1) - 8.0 * (qm1 + qp2) + (qm2 + qp3)) / 60.0
    if order == 5:
        return f6 - np.abs(uf) * (10.0 * (qp1 - q0) - 5.0 * (qp2 - qm1) + (qp3 - qm2)) / 60.0
    if order == 6:
        return f6
    raise ValueError(f"flux order must be in 1..6, got {order}")


def flux_x(q, uf, order):
    return _flux_1d(
        order, uf,
        _shift_x(q, 3), _shift_x(q, 2), _shift_x(q, 1),
        q, _shift_x(q, -1), _shift_x(q, -2),
    )


def flux_y(q, vf, order):
    return _flux_1d(
        order, vf,
        _shift_y(q, 3), _shift_y(q, 2), _shift_y(q, 1),
        q, _shift_y(q, -1), _shift_y(q, -2),
    )


def flux_divergence(fx, gy, dx, dy):
    """Conservation-form tendency -(d`fx`/dx + d`gy`/dy) from face fluxes."""
    return -(_shift_x(fx, -1) - fx) / dx - (_shift_y(gy, -1) - gy) / dy


def centered_dx(f, dx):
    return (_shift_x(f, -1) - _shift_x(f, 1)) / (2.0 * dx)


def centered_dy(f, dy):
    return (_shift_y(f, -1) - _shift_y(f, 1)) / (2.0 * dy)


def damping_tendencies(u, v, dx, dy, a1, a2):
    """Divergence-damping momentum tendencies (a1*(div u)_x, a2*(div u)_y)."""
    div = centered_dx(u, dx) + centered_dy(v, dy)
    return a1 * centered_dx(div, dx), a2 * centered_dy(div, dy)


def advective_tendency(q, uf, vf, dx, dy, order):
    return flux_divergence(flux_x(q, uf, order), flux_y(q, vf, order), dx, dy)


def acoustic_rhs(u, v, p, uf, vf, dx, dy, cs, order, a1, a2):
    """Full acoustic-advection tendency for (u, v, p).

    Advective transport of every variable in flux form at the given order,
    second-order centered acoustic coupling, and divergence damping on the
    momentum only.
    """
    du = advective_tendency(u, uf, vf, dx, dy, order) - cs * centered_dx(p, dx)
    dv = advective_tendency(v, uf, vf, dx, dy, order) - cs * centered_dy(p, dy)
    dp = advective_tendency(p, uf, vf, dx, dy, order) - cs * (centered_dx(u, dx) + centered_dy(v, dy))
    if a1 != 0.0 or a2 != 0.0:
        ddu, ddv = damping_tendencies(u, v, dx, dy, a1, a2)
        du = du + ddu
        dv = dv + ddv
    return du, dv, dp


def fb_substeps(u, v, p, au, av, ap, tau, nsub, dx, dy, cs, a1, a2):
    """n forward-backward acoustic substeps of size tau.

    Momentum first with the current pressure gradient and current-velocity
    damping, then pressure from the freshly updated velocity divergence.
    The frozen slow tendencies (au, av, ap) are added in every substep.
    """
    u = u.copy()
    v = v.copy()
    p = p.copy()
    for _ in range(nsub):
        du = au - cs * centered_dx(p, dx)
        dv = av - cs * centered_dy(p, dy)
        if a1 != 0.0 or a2 != 0.0:
            ddu, ddv = damping_tendencies(u, v, dx, dy, a1, a2)
            du = du + ddu
            dv = dv + ddv
        u += tau * du
        v += tau * dv
        p += tau * (ap - cs * (centered_dx(u, dx) + centered_dy(v, dy)))
    return u, v, p

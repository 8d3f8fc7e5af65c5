"""Periodic 2D grid, field storage and initial conditions.

Fields live at cell centers of a uniform rectangular mesh with periodic
boundaries in both directions.  Arrays are indexed ``[j, i]`` with ``j`` the
y index (axis 0) and ``i`` the x index (axis 1), so that a C-order ravel is
row-major with the x index fastest.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SCALAR = "scalar"
ACOUSTIC = "acoustic"

# Widest flux stencil reaches 3 cells to each side of an interface.
MIN_CELLS = 8


@dataclass(frozen=True)
class Grid2D:
    """Uniform periodic mesh on [0, Lx) x [0, Ly)."""

    nx: int
    ny: int
    lx: float = 1.0
    ly: float = 1.0

    def __post_init__(self):
        if self.nx < MIN_CELLS or self.ny < MIN_CELLS:
            raise ValueError(
                f"grid too small: nx={self.nx}, ny={self.ny} "
                f"(need at least {MIN_CELLS} cells per direction for the widest stencil)"
            )
        if self.lx <= 0 or self.ly <= 0:
            raise ValueError(f"domain lengths must be positive: Lx={self.lx}, Ly={self.ly}")

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dy(self) -> float:
        return self.ly / self.ny

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    def x_centers(self) -> np.ndarray:
        return (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self) -> np.ndarray:
        return (np.arange(self.ny) + 0.5) * self.dy

    def center_mesh(self):
        """Cell-center coordinate arrays (X, Y), each shaped (ny, nx)."""
        return np.meshgrid(self.x_centers(), self.y_centers())

    def nearest_cell(self, x: float, y: float):
        """Indices (i, j) of the cell whose center is closest to (x, y)."""
        i = int(round(x / self.dx - 0.5)) % self.nx
        j = int(round(y / self.dy - 0.5)) % self.ny
        return i, j


def build_grid(nx: int, ny: int, lx: float = 1.0, ly: float = 1.0) -> Grid2D:
    """Validated grid constructor; rejects meshes below stencil support."""
    return Grid2D(nx=nx, ny=ny, lx=lx, ly=ly)


class State:
    """Flattened field vector on a grid.

    Either a single advected scalar q (kind ``scalar``) or the acoustic
    triple (u, v, pi) (kind ``acoustic``).  ``fields`` has shape
    (nvar, ny, nx); the flat layout is variable-major, row-major within each
    variable, x fastest.
    """

    __slots__ = ("grid", "fields")

    def __init__(self, grid: Grid2D, fields: np.ndarray):
        fields = np.asarray(fields, dtype=np.float64)
        if fields.ndim != 3 or fields.shape[1:] != (grid.ny, grid.nx):
            raise ValueError(f"fields shape {fields.shape} does not match grid ({grid.ny}, {grid.nx})")
        if fields.shape[0] not in (1, 3):
            raise ValueError(f"expected 1 (scalar) or 3 (acoustic) variables, got {fields.shape[0]}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "fields", fields)

    @classmethod
    def scalar(cls, grid: Grid2D, q: np.ndarray) -> "State":
        return cls(grid, np.asarray(q, dtype=np.float64)[np.newaxis, :, :])

    @classmethod
    def acoustic(cls, grid: Grid2D, u, v, p) -> "State":
        return cls(grid, np.stack([u, v, p]).astype(np.float64, copy=False))

    @classmethod
    def zeros(cls, grid: Grid2D, kind: str) -> "State":
        nvar = 1 if kind == SCALAR else 3
        return cls(grid, np.zeros((nvar, grid.ny, grid.nx)))

    @property
    def kind(self) -> str:
        return SCALAR if self.fields.shape[0] == 1 else ACOUSTIC

    @property
    def dim(self) -> int:
        return self.fields.size

    @property
    def q(self) -> np.ndarray:
        return self.fields[0]

    @property
    def u(self) -> np.ndarray:
        return self.fields[0]

    @property
    def v(self) -> np.ndarray:
        return self.fields[1]

    @property
    def p(self) -> np.ndarray:
        """Pressure perturbation (third acoustic variable)."""
        return self.fields[2]

    def flatten(self) -> np.ndarray:
        return self.fields.ravel().copy()

    @classmethod
    def unflatten(cls, grid: Grid2D, vec: np.ndarray, kind: str) -> "State":
        nvar = 1 if kind == SCALAR else 3
        return cls(grid, np.asarray(vec, dtype=np.float64).reshape(nvar, grid.ny, grid.nx).copy())

    def all_finite(self) -> bool:
        return bool(np.isfinite(self.fields).all())

    def copy(self) -> "State":
        return State(self.grid, self.fields.copy())

    # Linear-space operations used by the Parareal correction sweeps.
    def __add__(self, other: "State") -> "State":
        return State(self.grid, self.fields + other.fields)

    def __sub__(self, other: "State") -> "State":
        return State(self.grid, self.fields - other.fields)

    def __mul__(self, a: float) -> "State":
        return State(self.grid, self.fields * a)

    __rmul__ = __mul__

    def __repr__(self):
        return f"State(kind={self.kind}, nx={self.grid.nx}, ny={self.grid.ny})"


@dataclass(frozen=True)
class ConstantVelocity:
    """Position-independent advecting velocity (U, V)."""

    u: float
    v: float

    def u_at(self, x, y):
        return np.broadcast_to(np.float64(self.u), np.broadcast(x, y).shape).copy()

    def v_at(self, x, y):
        return np.broadcast_to(np.float64(self.v), np.broadcast(x, y).shape).copy()

    def max_component_speed(self, grid: Grid2D) -> float:
        return max(abs(self.u), abs(self.v))


@dataclass(frozen=True)
class SolidBodyRotation:
    """Rotating velocity U = gamma*(y - yc), V = -gamma*(x - xc).

    One full (clockwise) revolution takes 2*pi/gamma time units; the
    velocity vanishes exactly at the center.
    """

    gamma: float = np.pi
    center: tuple = (0.5, 0.5)

    def u_at(self, x, y):
        return self.gamma * (np.asarray(y, dtype=np.float64) - self.center[1]) + 0.0 * np.asarray(x)

    def v_at(self, x, y):
        return -self.gamma * (np.asarray(x, dtype=np.float64) - self.center[0]) + 0.0 * np.asarray(y)

    def max_component_speed(self, grid: Grid2D) -> float:
        xc, yc = self.center
        span = max(abs(0.0 - yc), abs(grid.ly - yc), abs(0.0 - xc), abs(grid.lx - xc))
        return abs(self.gamma) * span


def init_cosine_bump(grid: Grid2D, x0: float, y0: float) -> np.ndarray:
    """Cell-centered samples of the compact cosine bump centered at (x0, y0).

    u0 = 0.5*(cos(pi*r) + 1) with r = min(1, 4*sqrt(((x-x0)^2 + (y-y0)^2)/0.5^2)),
    so the bump has radius 0.125 and peak value 1.
    """
    if not (0.0 <= x0 <= grid.lx and 0.0 <= y0 <= grid.ly):
        raise ValueError(f"bump center ({x0}, {y0}) outside domain")
    xx, yy = grid.center_mesh()
    r = np.minimum(1.0, 4.0 * np.sqrt(((xx - x0) ** 2 + (yy - y0) ** 2) / 0.5**2))
    return 0.5 * (np.cos(np.pi * r) + 1.0)


def velocity_at_interface(vel, face, grid: Grid2D) -> float:
    """Normal velocity component at one interface midpoint.

    ``face`` is ("x", i, j) for the interface at (i*dx, (j+1/2)*dy) or
    ("y", i, j) for the interface at ((i+1/2)*dx, j*dy); the normal component
    is U for x faces and V for y faces.
    """
    axis, i, j = face
    if axis == "x":
        x, y = i * grid.dx, (j + 0.5) * grid.dy
        return float(vel.u_at(x, y))
    if axis == "y":
        x, y = (i + 0.5) * grid.dx, j * grid.dy
        return float(vel.v_at(x, y))
    raise ValueError(f"face axis must be 'x' or 'y', got {axis!r}")


@lru_cache(maxsize=64)
def face_normal_velocities(vel, grid: Grid2D):
    """Arrays of normal velocities at all interface midpoints.

    Returns (ux, vy), each (ny, nx): ux[j, i] is the x velocity at the x face
    (i*dx, (j+1/2)*dy), vy[j, i] the y velocity at the y face
    ((i+1/2)*dx, j*dy).  Cached per (velocity, grid); treat as read-only.
    """
    xf = np.arange(grid.nx) * grid.dx
    yc = (np.arange(grid.ny) + 0.5) * grid.dy
    ux = np.ascontiguousarray(vel.u_at(*np.meshgrid(xf, yc)))

    xc = (np.arange(grid.nx) + 0.5) * grid.dx
    yf = np.arange(grid.ny) * grid.dy
    vy = np.ascontiguousarray(vel.v_at(*np.meshgrid(xc, yf)))
    return ux, vy

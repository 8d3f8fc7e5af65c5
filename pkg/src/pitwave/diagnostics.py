"""Run diagnostics: vorticity, energy, norms, probes and the error metric."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .mesh import ACOUSTIC, Grid2D, State


def vorticity(u: np.ndarray, v: np.ndarray, grid: Grid2D) -> np.ndarray:
    """omega = u_y - v_x with second-order centered differences.

    Sign convention follows the source system (opposite to the usual curl).
    """
    return kernels.centered_dy(u, grid.dy) - kernels.centered_dx(v, grid.dx)


def total_energy(state: State, grid: Grid2D) -> float:
    """Domain integral of u^2 + v^2 + pi^2 (or q^2 for a scalar state)."""
    with np.errstate(over="ignore"):  # inf is the honest answer mid blow-up
        return float(np.sum(state.fields**2) * grid.cell_area)


def relative_l2_error(q_par: State, q_seq: State) -> float:
    """|q_par - q_seq|_2 / |q_seq|_2 over all components of all fields."""
    ref = np.linalg.norm(q_seq.fields)
    if ref == 0.0:
        raise ValueError("reference state has zero norm")
    return float(np.linalg.norm(q_par.fields - q_seq.fields) / ref)


def max_norm(state: State) -> float:
    """Largest absolute entry over the full state vector."""
    return float(np.max(np.abs(state.fields)))


def sample_probe(state: State, x: float, y: float, variable: str) -> float:
    """Value of one variable at the cell center nearest (x, y)."""
    names = {"q": 0, "u": 0, "v": 1, "pi": 2}
    try:
        k = names[variable]
    except KeyError:
        raise ValueError(f"unknown probe variable {variable!r}") from None
    if k > 0 and state.kind != ACOUSTIC:
        raise ValueError(f"variable {variable!r} needs an acoustic state")
    i, j = state.grid.nearest_cell(x, y)
    return float(state.fields[k, j, i])


@dataclass
class ProbeSeries:
    """Point samples of one variable over time at a fixed probe location."""

    x: float
    y: float
    variable: str
    times: list = field(default_factory=list)
    values: list = field(default_factory=list)

    def append(self, t: float, state: State) -> None:
        if self.times and t <= self.times[-1]:
            raise ValueError(f"probe times must be strictly increasing, got {t} after {self.times[-1]}")
        self.times.append(float(t))
        self.values.append(sample_probe(state, self.x, self.y, self.variable))

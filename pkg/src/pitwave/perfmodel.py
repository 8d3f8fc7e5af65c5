"""Analytical speedup model for one parallel step.

Estimates the ratio of sequential to parallel execution time from the
per-step costs of the two propagators and the per-iteration cost of the
subspace update, plus upper bounds exposing the three separate limits
(iteration count, coarse cost, QR cost).
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SpeedupInputs:
    """Counts and phase costs for one parallel step.

    n_c coarse intervals per window on n_p processors, n_f fine steps per
    coarse interval (so n_t = n_c*n_f fine steps per window), tau_c/tau_f
    per-step propagator costs and tau_qr per-iteration subspace-update cost.
    """

    n_p: int
    n_it: int
    n_c: int
    n_f: int
    tau_c: float
    tau_f: float
    tau_qr: float = 0.0

    def __post_init__(self):
        for name in ("n_p", "n_c", "n_f"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer, got {getattr(self, name)}")
        if self.n_it < 0:  # 0 = bare coarse sweep, no correction
            raise ValueError(f"n_it must be nonnegative, got {self.n_it}")
        if self.tau_c <= 0 or self.tau_f <= 0:
            raise ValueError(f"per-step costs must be positive, got tau_c={self.tau_c}, tau_f={self.tau_f}")
        if self.tau_qr < 0:
            raise ValueError(f"tau_qr must be nonnegative, got {self.tau_qr}")

    @property
    def n_t(self) -> int:
        return self.n_c * self.n_f


def speedup_estimate(inputs: SpeedupInputs) -> float:
    """s = N_t*tau_f / [N_c*tau_c + N_it*(N_c*tau_c + N_t/N_p*tau_f) + N_it*tau_qr]."""
    i = inputs
    denom = (
        i.n_c * i.tau_c
        + i.n_it * (i.n_c * i.tau_c + (i.n_t / i.n_p) * i.tau_f)
        + i.n_it * i.tau_qr
    )
    return i.n_t * i.tau_f / denom


def speedup_bounds(inputs: SpeedupInputs):
    """(iteration, coarse-cost, qr-cost) upper bounds on the speedup.

    All three follow from dropping terms of the full cost model:
    b_iter = N_p/N_it, b_coarse = N_f*tau_f/((1+N_it)*tau_c) and
    b_qr = N_t*tau_f/(N_it*tau_qr) (infinite when the update is free).
    """
    i = inputs
    b_iter = float("inf") if i.n_it == 0 else i.n_p / i.n_it
    b_coarse = i.n_f * i.tau_f / ((1 + i.n_it) * i.tau_c)
    qr_work = i.n_it * i.tau_qr
    b_qr = float("inf") if qr_work == 0.0 else i.n_t * i.tau_f / qr_work
    return b_iter, b_coarse, b_qr


def speedup_cfl_estimate(c_f: float, c_c: float, cost_ratio: float,
                         n_p: int, n_it: int, printed_form: bool = False) -> float:
    """Speedup from CFL numbers: 1 / [(1+N_it)*(C_f/C_c)*(tau_c/tau_f) + N_it/N_p].

    ``cost_ratio`` is tau_c/tau_f.  The final term is N_it/N_p, consistent
    with the full cost model; ``printed_form`` flips it to N_p/N_it, a
    variant kept only for side-by-side documentation, not for estimation.
    """
    if c_f <= 0 or c_c <= 0 or cost_ratio <= 0:
        raise ValueError(f"CFL numbers and cost ratio must be positive, got {c_f}, {c_c}, {cost_ratio}")
    if n_p < 1 or n_it < 1:
        raise ValueError(f"n_p and n_it must be positive integers, got {n_p}, {n_it}")
    last = (n_p / n_it) if printed_form else (n_it / n_p)
    return 1.0 / ((1 + n_it) * (c_f / c_c) * cost_ratio + last)

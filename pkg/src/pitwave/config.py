"""Experiment configuration: key=value parsing and validation.

A config file is UTF-8 text with one ``key = value`` per line and ``#``
comments.  Every structural invariant (grid size, step-size ratios, window
divisibility) is checked up front so a run can only fail numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .integrators import RK3, SCHEMES, SPLIT_FE_FB, make_propagator
from .mesh import ACOUSTIC, SCALAR, ConstantVelocity, SolidBodyRotation, State, build_grid, init_cosine_bump
from .parareal import ORIGINAL, PitConfig, window_count
from .physics import ModelSpec
from .subspace import DEFAULT_RANK_TOL


class ConfigError(ValueError):
    """Invalid configuration text or values; maps to exit code 2."""


_REQUIRED = ("model", "nx", "ny", "t_end", "fine_cfl", "coarse_cfl", "n_p", "n_it")

_INT_KEYS = {"nx", "ny", "n_p", "n_it", "n_sound", "fine_n_sound", "workers"}
_FLOAT_KEYS = {
    "lx", "ly", "t_end", "cs", "gamma", "center_x", "center_y", "vel_u", "vel_v",
    "x0", "y0", "fine_cfl", "coarse_cfl", "nu_f", "nu_c", "tolerance",
    "probe_x", "probe_y", "rank_tol", "cost_ratio", "tau_qr",
}
_STR_KEYS = {"model", "velocity", "fine_scheme", "coarse_scheme", "out_dir"}
_ORDER_KEYS = {"fine_order", "coarse_order"}
_KNOWN = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _ORDER_KEYS


@dataclass
class ExperimentConfig:
    """Parsed and validated experiment description."""

    model: str
    nx: int
    ny: int
    t_end: float
    fine_cfl: float
    coarse_cfl: float
    n_p: int
    n_it: int
    lx: float = 1.0
    ly: float = 1.0
    cs: float = 30.0
    velocity: str = "solid_body"
    gamma: float = math.pi
    center_x: float = 0.5
    center_y: float = 0.5
    vel_u: float | None = None
    vel_v: float | None = None
    x0: float = 0.5
    y0: float = 0.5
    fine_scheme: str = RK3
    fine_order: int = 6
    nu_f: float = 0.005
    fine_n_sound: int = 1
    coarse_scheme: str | None = None
    coarse_order: int = 1
    nu_c: float = 0.0
    n_sound: int = 1
    tolerance: float | None = None
    probe_x: float = 0.49
    probe_y: float = 0.34
    rank_tol: float = DEFAULT_RANK_TOL
    workers: int = 1
    out_dir: str = "out"
    cost_ratio: float = 1.165
    tau_qr: float = 0.0

    def __post_init__(self):
        if self.model not in (SCALAR, ACOUSTIC):
            raise ConfigError(f"model must be '{SCALAR}' or '{ACOUSTIC}', got {self.model!r}")
        if self.velocity not in ("solid_body", "constant"):
            raise ConfigError(f"velocity must be 'solid_body' or 'constant', got {self.velocity!r}")
        if self.velocity == "constant" and (self.vel_u is None or self.vel_v is None):
            raise ConfigError("velocity=constant requires vel_u and vel_v")
        if self.coarse_scheme is None:
            self.coarse_scheme = SPLIT_FE_FB if self.model == ACOUSTIC else RK3
        for key in ("fine_scheme", "coarse_scheme"):
            if getattr(self, key) not in SCHEMES:
                raise ConfigError(f"{key} must be one of {SCHEMES}, got {getattr(self, key)!r}")
        if self.t_end <= 0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        self._build()  # every structural invariant is enforced here

    def _wrap(self, what, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{what}: {exc}") from exc

    def _build(self):
        self.grid = self._wrap("grid", build_grid, self.nx, self.ny, self.lx, self.ly)
        if self.velocity == "constant":
            vel = ConstantVelocity(self.vel_u, self.vel_v)
        else:
            vel = SolidBodyRotation(self.gamma, (self.center_x, self.center_y))
        self.vel = vel

        def model_for(order, nu):
            return ModelSpec(kind=self.model, vel=vel, advective_flux_order=order,
                             sound_speed=self.cs, nu_damp=nu,
                             damping_timescale=1.0 if nu > 0 else None)

        self.fine = self._wrap(
            "fine propagator", make_propagator, self.fine_scheme,
            model_for(self.fine_order, self.nu_f if self.model == ACOUSTIC else 0.0),
            self.grid, self.fine_cfl, self.fine_n_sound)
        self.coarse = self._wrap(
            "coarse propagator", make_propagator, self.coarse_scheme,
            model_for(self.coarse_order, self.nu_c if self.model == ACOUSTIC else 0.0),
            self.grid, self.coarse_cfl, self.n_sound)
        if not (0.0 <= self.x0 <= self.lx and 0.0 <= self.y0 <= self.ly):
            raise ConfigError(f"bump center ({self.x0}, {self.y0}) outside domain")
        if not (0.0 <= self.probe_x <= self.lx and 0.0 <= self.probe_y <= self.ly):
            raise ConfigError(f"probe ({self.probe_x}, {self.probe_y}) outside domain")
        # Validates dt_coarse/dt_fine integrality and window divisibility.
        pit = self._wrap("parallel setup", self.pit_config, ORIGINAL)
        self.n_windows = self._wrap("windowing", window_count, pit, self.t_end)

    def pit_config(self, mode: str, workers: int | None = None) -> PitConfig:
        return PitConfig(mode=mode, fine=self.fine, coarse=self.coarse,
                         n_p=self.n_p, n_it=self.n_it, tol=self.tolerance,
                         rank_tol=self.rank_tol,
                         workers=self.workers if workers is None else workers)

    def initial_state(self) -> State:
        bump = init_cosine_bump(self.grid, self.x0, self.y0)
        if self.model == SCALAR:
            return State.scalar(self.grid, bump)
        zero = 0.0 * bump
        return State.acoustic(self.grid, bump, zero, zero.copy())

    @property
    def probe(self):
        return (self.probe_x, self.probe_y)


def parse_config(text: str) -> ExperimentConfig:
    """Parse key=value lines into a validated ExperimentConfig."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _KNOWN:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _convert(key, val, lineno)

    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    return ExperimentConfig(**values)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _convert(key: str, val: str, lineno: int):
    try:
        if key in _INT_KEYS:
            return int(val)
        if key in _ORDER_KEYS:
            order = int(val)
            if order not in (1, 2, 3, 4, 5, 6):
                raise ValueError(f"flux order must be in 1..6, got {order}")
            return order
        if key in _FLOAT_KEYS:
            return float(val)
        return val
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc

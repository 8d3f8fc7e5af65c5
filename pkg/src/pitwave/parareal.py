"""Parareal drivers: original iteration, Krylov-enhanced iteration, windows.

One parallel step (window) iterates N_c coarse intervals together: a serial
coarse initialization, then per iteration a fine predictor on every interval
(the only concurrent part) followed by a serial correction sweep.  The KSE
variant replaces the coarse propagator in the correction by
K(q) = G((I - P)q) + F~(Pq) built from the subspace of all predictor inputs.

The sweep cores work on flat state vectors and generic propagator callables
so they serve both the PDE configurations and small ODE test systems.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import ProbeSeries, max_norm, total_energy
from .integrators import PropagatorSpec, propagate
from .mesh import ACOUSTIC, State
from .subspace import DEFAULT_RANK_TOL, Subspace, kse_coarse

ORIGINAL = "original"
KSE = "kse"

DEFAULT_PROBE = (0.49, 0.34)


@dataclass
class Timings:
    """Accumulated exclusive wall time per phase (seconds)."""

    coarse: float = 0.0
    fine: float = 0.0
    qr: float = 0.0

    @property
    def total(self) -> float:
        return self.coarse + self.fine + self.qr

    def fractions(self) -> dict:
        tot = self.total
        if tot == 0.0:
            return {"coarse": 0.0, "fine": 0.0, "qr": 0.0}
        return {"coarse": self.coarse / tot, "fine": self.fine / tot, "qr": self.qr / tot}


def iteration_residual(prev, nxt) -> float:
    """Largest Euclidean norm of the endpoint updates between two sweeps."""
    if len(prev) != len(nxt):
        raise ValueError(f"endpoint lists differ in length: {len(prev)} vs {len(nxt)}")
    r = 0.0
    for a, b in zip(prev, nxt):
        va = a.flatten() if isinstance(a, State) else np.asarray(a, dtype=np.float64)
        vb = b.flatten() if isinstance(b, State) else np.asarray(b, dtype=np.float64)
        r = max(r, float(np.linalg.norm(vb - va)))
    return r


def _fine_all(fine, states, pool):
    if pool is None:
        return [fine(q) for q in states]
    return list(pool.map(fine, states))


def parareal_sweep(q0, fine, coarse, n_c, n_it, tol=None, timings=None, pool=None):
    """Original Parareal on one window of n_c coarse intervals.

    ``fine`` and ``coarse`` map a flat state across one coarse interval.
    Returns (endpoint vectors q_1..q_{n_c}, residual per iteration).
    """
    timings = timings if timings is not None else Timings()
    tic = time.perf_counter()
    qk = [q0]
    for i in range(n_c):
        qk.append(coarse(qk[i]))
    timings.coarse += time.perf_counter() - tic

    residuals = []
    for _ in range(n_it):
        tic = time.perf_counter()
        preds = _fine_all(fine, qk[:n_c], pool)
        timings.fine += time.perf_counter() - tic

        tic = time.perf_counter()
        qn = [q0]
        for i in range(n_c):
            qn.append(coarse(qn[i]) + preds[i] - coarse(qk[i]))
        timings.coarse += time.perf_counter() - tic

        residuals.append(iteration_residual(qk[1:], qn[1:]))
        qk = qn
        if tol is not None and residuals[-1] <= tol:
            break
    return qk[1:], residuals


def kse_sweep(q0, fine, coarse, n_c, n_it, tol=None, rank_tol=DEFAULT_RANK_TOL,
              timings=None, pool=None):
    """Krylov-subspace-enhanced Parareal on one window.

    The subspace starts empty, collects the predictor inputs of every
    iteration with their fine images, and enhances both coarse terms of the
    correction.  Requires linear autonomous propagators.
    Returns (endpoints, residuals, final subspace).
    """
    timings = timings if timings is not None else Timings()
    sub = Subspace(np.size(q0), rank_tol)

    tic = time.perf_counter()
    qk = [q0]
    for i in range(n_c):
        qk.append(coarse(qk[i]))
    timings.coarse += time.perf_counter() - tic

    residuals = []
    for _ in range(n_it):
        tic = time.perf_counter()
        preds = _fine_all(fine, qk[:n_c], pool)
        timings.fine += time.perf_counter() - tic

        tic = time.perf_counter()
        sub = sub.update(qk[:n_c], preds)
        timings.qr += time.perf_counter() - tic

        tic = time.perf_counter()
        qn = [q0]
        for i in range(n_c):
            qn.append(kse_coarse(sub, coarse, qn[i]) + preds[i] - kse_coarse(sub, coarse, qk[i]))
        timings.coarse += time.perf_counter() - tic

        residuals.append(iteration_residual(qk[1:], qn[1:]))
        qk = qn
        if tol is not None and residuals[-1] <= tol:
            break
    return qk[1:], residuals, sub


@dataclass(frozen=True)
class PitConfig:
    """Parallel-in-time run configuration.

    The coarse interval is one step of the coarse propagator; n_p intervals
    form one window, handled by (nominally) n_p workers.
    """

    mode: str
    fine: PropagatorSpec
    coarse: PropagatorSpec
    n_p: int
    n_it: int
    tol: float | None = None
    rank_tol: float = DEFAULT_RANK_TOL
    workers: int = 1

    def __post_init__(self):
        if self.mode not in (ORIGINAL, KSE):
            raise ValueError(f"mode must be {ORIGINAL!r} or {KSE!r}, got {self.mode!r}")
        if self.n_p < 1 or self.n_it < 1:
            raise ValueError(f"n_p and n_it must be at least 1, got {self.n_p}, {self.n_it}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if self.fine.grid != self.coarse.grid:
            raise ValueError("fine and coarse propagators must share the grid")
        if self.fine.model.kind != self.coarse.model.kind:
            raise ValueError("fine and coarse propagators must share the model kind")
        self.n_fine_per_coarse  # validates the step ratio

    @property
    def n_fine_per_coarse(self) -> int:
        ratio = self.coarse.dt / self.fine.dt
        n = round(ratio)
        if n < 1 or abs(ratio - n) > 1e-9 * max(1.0, ratio):
            raise ValueError(
                f"coarse/fine step ratio must be a positive integer: "
                f"dt_coarse={self.coarse.dt}, dt_fine={self.fine.dt}, ratio={ratio}"
            )
        return n

    def vector_propagators(self):
        """(fine, coarse) callables on flat vectors over one coarse interval."""
        grid = self.fine.grid
        kind = self.fine.model.kind
        dt = self.coarse.dt

        def make(spec):
            def run(vec):
                state = State.unflatten(grid, vec, kind)
                return propagate(spec, state, 0.0, dt).flatten()
            return run

        return make(self.fine), make(self.coarse)


def window_count(cfg: PitConfig, t_end: float, t_start: float = 0.0) -> int:
    """Number of parallel steps M_p covering [t_start, t_end]; validates divisibility."""
    dt = cfg.coarse.dt
    span = t_end - t_start
    m_c_real = span / dt
    m_c = round(m_c_real)
    if m_c < 1 or abs(m_c_real - m_c) > 1e-9 * max(1.0, m_c_real):
        raise ValueError(
            f"time span {span} is not an integer number of coarse intervals "
            f"(dt={dt}, ratio={m_c_real})"
        )
    if m_c % cfg.n_p != 0:
        raise ValueError(f"M_c={m_c} coarse intervals not divisible by N_p={cfg.n_p}")
    return m_c // cfg.n_p


def parareal_window(cfg: PitConfig, q_start: State, t_start: float = 0.0,
                    timings=None, pool=None):
    """One original-Parareal parallel step; returns (endpoint states, residuals)."""
    fine, coarse = cfg.vector_propagators()
    vecs, residuals = parareal_sweep(
        q_start.flatten(), fine, coarse, cfg.n_p, cfg.n_it,
        tol=cfg.tol, timings=timings, pool=pool,
    )
    grid, kind = q_start.grid, q_start.kind
    return [State.unflatten(grid, v, kind) for v in vecs], residuals


def kse_parareal_window(cfg: PitConfig, q_start: State, t_start: float = 0.0,
                        timings=None, pool=None):
    """One KSE-Parareal parallel step; returns (endpoints, residuals, subspace)."""
    fine, coarse = cfg.vector_propagators()
    vecs, residuals, sub = kse_sweep(
        q_start.flatten(), fine, coarse, cfg.n_p, cfg.n_it,
        tol=cfg.tol, rank_tol=cfg.rank_tol, timings=timings, pool=pool,
    )
    grid, kind = q_start.grid, q_start.kind
    return [State.unflatten(grid, v, kind) for v in vecs], residuals, sub


@dataclass
class RunReport:
    """Windowed-run record: states, residuals, diagnostic series, timings."""

    window_endpoints: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    window_indices: list = field(default_factory=list)
    times: list = field(default_factory=list)
    max_norms: list = field(default_factory=list)
    energies: list = field(default_factory=list)
    probe_u: ProbeSeries | None = None
    probe_pi: ProbeSeries | None = None
    timings: Timings = field(default_factory=Timings)
    blowup_time: float | None = None
    final_state: State | None = None

    def record(self, window_index: int, t: float, state: State) -> None:
        grid = state.grid
        self.window_indices.append(window_index)
        self.times.append(t)
        self.max_norms.append(max_norm(state))
        self.energies.append(total_energy(state, grid))
        if self.probe_u is not None:
            self.probe_u.append(t, state)
        if self.probe_pi is not None:
            self.probe_pi.append(t, state)
        self.final_state = state

    def series_rows(self):
        """Rows (window_index, t, max_norm, energy, probe_u, probe_pi)."""
        rows = []
        for k in range(len(self.times)):
            pu = self.probe_u.values[k] if self.probe_u is not None else 0.0
            pp = self.probe_pi.values[k] if self.probe_pi is not None else 0.0
            rows.append((self.window_indices[k], self.times[k], self.max_norms[k],
                         self.energies[k], pu, pp))
        return rows


def _new_report(q0: State, probe) -> RunReport:
    report = RunReport()
    px, py = probe
    var_u = "u" if q0.kind == ACOUSTIC else "q"
    report.probe_u = ProbeSeries(px, py, var_u)
    report.probe_pi = ProbeSeries(px, py, "pi") if q0.kind == ACOUSTIC else None
    return report


def run_windowed(cfg: PitConfig, q0: State, t_end: float, t_start: float = 0.0,
                 probe=DEFAULT_PROBE) -> RunReport:
    """Chain parallel steps over [t_start, t_end].

    Each window is seeded with the corrected endpoint of the previous one;
    the subspace is rebuilt from scratch every window in KSE mode.
    Diagnostics are recorded after each completed window; the run stops
    early if any state entry turns non-finite.
    """
    m_p = window_count(cfg, t_end, t_start)
    window_span = cfg.n_p * cfg.coarse.dt

    report = _new_report(q0, probe)
    report.record(0, t_start, q0)

    pool = ThreadPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        q_cur = q0
        t = t_start
        for w in range(1, m_p + 1):
            if cfg.mode == KSE:
                endpoints, residuals, _ = kse_parareal_window(
                    cfg, q_cur, t, timings=report.timings, pool=pool)
            else:
                endpoints, residuals = parareal_window(
                    cfg, q_cur, t, timings=report.timings, pool=pool)
            t = t_start + w * window_span
            q_cur = endpoints[-1]
            report.window_endpoints.append(endpoints)
            report.residuals.append(residuals)
            report.record(w, t, q_cur)
            if not q_cur.all_finite():
                report.blowup_time = t
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return report


def run_sequential(spec: PropagatorSpec, q0: State, t_end: float, record_dt: float,
                   t_start: float = 0.0, probe=DEFAULT_PROBE, phase: str = "fine") -> RunReport:
    """Sequential reference run recorded on the same cadence as the windows."""
    n_rec_real = (t_end - t_start) / record_dt
    n_rec = round(n_rec_real)
    if n_rec < 1 or abs(n_rec_real - n_rec) > 1e-9 * max(1.0, n_rec_real):
        raise ValueError(f"(t_end - t_start)={t_end - t_start} is not a multiple of record_dt={record_dt}")

    report = _new_report(q0, probe)
    report.record(0, t_start, q0)
    q_cur = q0
    for w in range(1, n_rec + 1):
        tic = time.perf_counter()
        q_cur = propagate(spec, q_cur, 0.0, record_dt)
        elapsed = time.perf_counter() - tic
        setattr(report.timings, phase, getattr(report.timings, phase) + elapsed)
        report.record(w, t_start + w * record_dt, q_cur)
        if not q_cur.all_finite():
            report.blowup_time = t_start + w * record_dt
            break
    return report

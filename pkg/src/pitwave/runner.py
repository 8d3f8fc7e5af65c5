"""Experiment orchestration and CSV serialization.

Every run writes the same file set into the output directory:
series.csv (per-window diagnostics), residuals.csv (per-iteration Parareal
residuals, empty for sequential runs), timing.csv (phase wall times) and one
field snapshot per variable at the end time.  Floats are written with 17
significant digits so a write/read round trip is bit exact.
"""
from __future__ import annotations

import os

import numpy as np

from .config import ExperimentConfig
from .mesh import State
from .parareal import KSE, ORIGINAL, RunReport, run_sequential, run_windowed
from .perfmodel import SpeedupInputs, speedup_bounds, speedup_cfl_estimate, speedup_estimate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3

MODES = ("fine-seq", "coarse-seq", "parareal", "kse", "estimate")

_FIELD_VARS = {"scalar": ("q",), "acoustic": ("u", "v", "pi")}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_series(path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("window_index,t,max_norm,energy,probe_u,probe_pi\n")
        for w, t, mn, en, pu, pp in rows:
            fh.write(f"{w},{_fmt(t)},{_fmt(mn)},{_fmt(en)},{_fmt(pu)},{_fmt(pp)}\n")


def read_series(path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            w, *vals = line.strip().split(",")
            rows.append((int(w), *(float(v) for v in vals)))
    return rows


def write_residuals(path, residuals) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("window_index,iteration,r_k\n")
        for w, window_res in enumerate(residuals, start=1):
            for k, r in enumerate(window_res, start=1):
                fh.write(f"{w},{k},{_fmt(r)}\n")


def write_timing(path, timings) -> None:
    fractions = timings.fractions()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("phase,total_seconds,fraction\n")
        for phase in ("coarse", "fine", "qr"):
            fh.write(f"{phase},{_fmt(getattr(timings, phase))},{_fmt(fractions[phase])}\n")


def read_timing(path):
    out = {}
    with open(path, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            phase, secs, frac = line.strip().split(",")
            out[phase] = (float(secs), float(frac))
    return out


def field_filename(var: str, t: float) -> str:
    return f"{var}_{t:.6f}.csv"


def write_field(path, field: np.ndarray) -> None:
    ny, nx = field.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"nx,{nx}\n")
        fh.write(f"ny,{ny}\n")
        for j in range(ny):
            fh.write(",".join(_fmt(v) for v in field[j]) + "\n")


def read_field(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        nx = int(fh.readline().split(",")[1])
        ny = int(fh.readline().split(",")[1])
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape != (ny, nx):
        raise ValueError(f"field file {path} is {data.shape}, header says ({ny}, {nx})")
    return data


def write_state_fields(out_dir, state: State, t: float) -> None:
    for k, var in enumerate(_FIELD_VARS[state.kind]):
        write_field(os.path.join(out_dir, field_filename(var, t)), state.fields[k])


def _write_report(out_dir, report: RunReport) -> None:
    write_series(os.path.join(out_dir, "series.csv"), report.series_rows())
    write_residuals(os.path.join(out_dir, "residuals.csv"), report.residuals)
    write_timing(os.path.join(out_dir, "timing.csv"), report.timings)
    if report.final_state is not None and report.final_state.all_finite():
        write_state_fields(out_dir, report.final_state, report.times[-1])


def _resolve_workers(cfg: ExperimentConfig, workers) -> int:
    if workers is not None:
        return int(workers)
    env = os.environ.get("PIT_WORKERS")
    if env is not None:
        return int(env)
    return cfg.workers


def run_experiment(cfg: ExperimentConfig, mode: str, out_dir=None, workers=None,
                   log=print) -> int:
    """Run one experiment mode and write its CSV outputs.

    Returns 0 on success and 3 if the state turned non-finite (the time
    reached is reported); config errors raise ConfigError before any run.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    out_dir = cfg.out_dir if out_dir is None else out_dir
    os.makedirs(out_dir, exist_ok=True)

    if mode == "estimate":
        return _run_estimate(cfg, out_dir, log)

    n_workers = _resolve_workers(cfg, workers)
    q0 = cfg.initial_state()
    record_dt = cfg.n_p * cfg.coarse.dt

    if mode == "fine-seq":
        report = run_sequential(cfg.fine, q0, cfg.t_end, record_dt, probe=cfg.probe, phase="fine")
    elif mode == "coarse-seq":
        report = run_sequential(cfg.coarse, q0, cfg.t_end, record_dt, probe=cfg.probe, phase="coarse")
    else:
        pit = cfg.pit_config(ORIGINAL if mode == "parareal" else KSE, workers=n_workers)
        report = run_windowed(pit, q0, cfg.t_end, probe=cfg.probe)

    _write_report(out_dir, report)
    if report.blowup_time is not None:
        log(f"blow-up: non-finite state at t={report.blowup_time:.6f}; partial output in {out_dir}")
        return EXIT_BLOWUP
    log(f"{mode}: reached t={report.times[-1]:.6f} in {len(report.residuals) or len(report.times) - 1} "
        f"windows; output in {out_dir}")
    return EXIT_OK


def _run_estimate(cfg: ExperimentConfig, out_dir, log) -> int:
    n_f = cfg.pit_config(ORIGINAL).n_fine_per_coarse
    est = speedup_cfl_estimate(cfg.fine_cfl, cfg.coarse_cfl, cfg.cost_ratio, cfg.n_p, cfg.n_it)
    inputs = SpeedupInputs(n_p=cfg.n_p, n_it=cfg.n_it, n_c=cfg.n_p, n_f=n_f,
                           tau_c=cfg.cost_ratio, tau_f=1.0, tau_qr=cfg.tau_qr)
    full = speedup_estimate(inputs)
    b_iter, b_coarse, b_qr = speedup_bounds(inputs)
    path = os.path.join(out_dir, "estimate.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("n_p,n_it,c_f,c_c,cost_ratio,tau_qr,estimate_cfl,estimate_full,"
                 "bound_iteration,bound_coarse,bound_qr\n")
        fh.write(",".join([str(cfg.n_p), str(cfg.n_it), _fmt(cfg.fine_cfl), _fmt(cfg.coarse_cfl),
                           _fmt(cfg.cost_ratio), _fmt(cfg.tau_qr), _fmt(est), _fmt(full),
                           _fmt(b_iter), _fmt(b_coarse), _fmt(b_qr)]) + "\n")
    log(f"estimated speedup s = {est:.4g} (N_p={cfg.n_p}, N_it={cfg.n_it}, "
        f"C_f={cfg.fine_cfl}, C_c={cfg.coarse_cfl}, cost ratio {cfg.cost_ratio})")
    log(f"bounds: iteration {b_iter:.4g}, coarse cost {b_coarse:.4g}, qr cost {b_qr:.4g}")
    return EXIT_OK


def _snapshot_tags(out_dir):
    tags = {}
    for name in sorted(os.listdir(out_dir)):
        if not name.endswith(".csv"):
            continue
        stem = name[:-4]
        var, _, tag = stem.partition("_")
        if var in ("q", "u", "v", "pi") and tag:
            tags.setdefault(tag, {})[var] = os.path.join(out_dir, name)
    return tags


def compare_runs(dir_a, dir_b):
    """Relative l2 differences between the field snapshots of two runs.

    Snapshots are matched by time tag; all variables present at a time are
    concatenated before taking the norm.  Returns [(t, error), ...].
    """
    tags_a = _snapshot_tags(dir_a)
    tags_b = _snapshot_tags(dir_b)
    common = sorted(set(tags_a) & set(tags_b), key=float)
    if not common:
        raise ValueError(f"no matching field snapshots between {dir_a} and {dir_b}")
    out = []
    for tag in common:
        vars_a, vars_b = tags_a[tag], tags_b[tag]
        if set(vars_a) != set(vars_b):
            raise ValueError(f"variable sets differ at t={tag}: {sorted(vars_a)} vs {sorted(vars_b)}")
        fa = np.concatenate([read_field(vars_a[v]).ravel() for v in sorted(vars_a)])
        fb = np.concatenate([read_field(vars_b[v]).ravel() for v in sorted(vars_b)])
        if fa.shape != fb.shape:
            raise ValueError(f"field shapes differ at t={tag}")
        ref = np.linalg.norm(fb)
        if ref == 0.0:
            raise ValueError(f"reference fields at t={tag} have zero norm")
        out.append((float(tag), float(np.linalg.norm(fa - fb) / ref)))
    return out


def write_comparison(path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,rel_l2_error\n")
        for t, err in rows:
            fh.write(f"{_fmt(t)},{_fmt(err)}\n")

"""Parallel-in-time integration of 2D linear advection and acoustic-advection.

Original and Krylov-subspace-enhanced Parareal over explicit finite
difference propagators (non-split RK3 and partially split forward-Euler /
RK3 schemes with forward-backward acoustic substeps), plus diagnostics and
an analytical speedup model.
"""
from .mesh import (ACOUSTIC, SCALAR, ConstantVelocity, Grid2D, SolidBodyRotation, State,
                   build_grid, init_cosine_bump)
from .physics import ModelSpec, damping_coefficients
from .integrators import PropagatorSpec, make_propagator, propagate
from .parareal import KSE, ORIGINAL, PitConfig, RunReport, run_windowed
from .subspace import Subspace, kse_coarse
from .perfmodel import SpeedupInputs, speedup_bounds, speedup_cfl_estimate, speedup_estimate
from .config import ConfigError, ExperimentConfig, parse_config
from .kernels import BACKEND_NAME as KERNEL_BACKEND

__version__ = "0.1.0"

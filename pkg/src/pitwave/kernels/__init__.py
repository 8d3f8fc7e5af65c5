"""Hot grid kernels with selectable backend.

PITWAVE_KERNELS picks the implementation: "numba" (require numba), "numpy"
(pure numpy), or "auto" (default: numba when importable, numpy otherwise).
Both backends expose the same functions and are interchangeable up to
floating-point summation order; benchmarks/bench_kernels.py compares them.
"""
import os

_choice = os.environ.get("PITWAVE_KERNELS", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"PITWAVE_KERNELS must be auto, numba or numpy, got {_choice!r}")

if _choice == "numpy":
    from . import numpy_backend as _impl
elif _choice == "numba":
    from . import numba_backend as _impl
else:
    try:
        from . import numba_backend as _impl
    except ImportError:
        from . import numpy_backend as _impl

BACKEND_NAME = _impl.BACKEND_NAME

flux_x = _impl.flux_x
flux_y = _impl.flux_y
flux_divergence = _impl.flux_divergence
centered_dx = _impl.centered_dx
centered_dy = _impl.centered_dy
damping_tendencies = _impl.damping_tendencies
advective_tendency = _impl.advective_tendency
acoustic_rhs = _impl.acoustic_rhs
fb_substeps = _impl.fb_substeps

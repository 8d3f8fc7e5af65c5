"""Krylov subspace of coarse-point states and its fine-propagator images.

The subspace collects every state handed to the fine propagator during the
Parareal iteration together with the corresponding fine results.  A pivoted
QR factorization of the full snapshot matrix (recomputed on every update,
which is cheap and avoids the re-orthogonalization drift of incremental
Gram-Schmidt) yields an orthonormal basis Q; because the fine propagator is
linear and autonomous, its action on the basis is recovered from the stored
snapshot images without any extra fine runs.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import qr, solve_triangular

try:
    # The snapshot matrices are tall and very thin; threaded BLAS only adds
    # wake-up latency here (and competes with the propagator threads).
    from threadpoolctl import ThreadpoolController

    _BLAS = ThreadpoolController()

    def _single_threaded_blas():
        return _BLAS.limit(limits=1, user_api="blas")
except ImportError:  # pragma: no cover
    from contextlib import nullcontext as _single_threaded_blas

DEFAULT_RANK_TOL = 1e-10


class Subspace:
    """Orthonormal basis ``q`` (d x r) plus fine images ``fq`` of its columns."""

    def __init__(self, dim: int, rank_tol: float = DEFAULT_RANK_TOL):
        self.dim = int(dim)
        self.rank_tol = float(rank_tol)
        self.snapshots = np.empty((self.dim, 0))
        self.images = np.empty((self.dim, 0))
        self.q = np.empty((self.dim, 0))
        self.fq = np.empty((self.dim, 0))

    @property
    def rank(self) -> int:
        return self.q.shape[1]

    def update(self, new_states, new_images) -> "Subspace":
        """Return a new subspace including the given snapshot/image pairs.

        Each image must be the fine propagation of its state over one coarse
        interval (they are the Parareal predictor outputs, so this costs no
        additional fine runs).
        """
        if len(new_states) != len(new_images):
            raise ValueError(f"got {len(new_states)} states but {len(new_images)} images")
        for vec in (*new_states, *new_images):
            if np.shape(vec) != (self.dim,):
                raise ValueError(f"snapshot shape {np.shape(vec)} does not match dimension {self.dim}")

        out = Subspace(self.dim, self.rank_tol)
        out.snapshots = np.column_stack([self.snapshots, *new_states])
        out.images = np.column_stack([self.images, *new_images])

        # check_finite=False: inputs are propagator outputs already guarded
        # by the run-level blow-up check, and the scan dominates the cost;
        # F-order scratch copy lets LAPACK factor in place
        with _single_threaded_blas():
            qfull, rfull, piv = qr(np.asfortranarray(out.snapshots), mode="economic",
                                   pivoting=True, check_finite=False, overwrite_a=True)
            diag = np.abs(np.diag(rfull))
            if diag.size == 0 or diag[0] == 0.0:
                return out
            r = int(np.count_nonzero(diag > self.rank_tol * diag[0]))
            out.q = qfull[:, :r]
            # Q[:, :r] = A[:, piv[:r]] @ inv(R[:r, :r]); apply the same
            # combination to the stored images (fine propagator is linear).
            coeff = solve_triangular(rfull[:r, :r], np.eye(r), check_finite=False)
            scatter = np.zeros((out.snapshots.shape[1], r))
            scatter[piv[:r], :] = coeff
            out.fq = out.images @ scatter
        return out

    def project(self, vec: np.ndarray) -> np.ndarray:
        """Euclidean orthogonal projection onto the subspace."""
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (self.dim,):
            raise ValueError(f"vector shape {vec.shape} does not match dimension {self.dim}")
        if self.rank == 0:
            return np.zeros(self.dim)
        return self.q @ (self.q.T @ vec)

    def fine_on_projection(self, vec: np.ndarray) -> np.ndarray:
        """Fine propagation of project(vec), from stored images only."""
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (self.dim,):
            raise ValueError(f"vector shape {vec.shape} does not match dimension {self.dim}")
        if self.rank == 0:
            return np.zeros(self.dim)
        return self.fq @ (self.q.T @ vec)


def update_subspace(sub: Subspace, new_states, new_images) -> Subspace:
    return sub.update(new_states, new_images)


def kse_coarse(sub: Subspace, coarse, vec: np.ndarray) -> np.ndarray:
    """Enhanced coarse propagator K(q) = G((I - P)q) + F~(Pq).

    ``coarse`` maps a flat state over one coarse interval; the fine part
    comes from the stored subspace images.
    """
    return coarse(vec - sub.project(vec)) + sub.fine_on_projection(vec)

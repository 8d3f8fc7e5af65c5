"""Independent brute-force implementations used as test oracles.

Deliberately different routes from the package: SVD-based projectors
instead of pivoted QR, direct dense-matrix propagator application instead
of stored-image reuse, plain loops instead of the production sweeps.
"""
import numpy as np


def gram_schmidt_basis(columns, tol=1e-10):
    """Orthonormal basis by modified Gram-Schmidt with one re-pass."""
    basis = []
    first_norm = None
    for c in columns:
        c = np.asarray(c, dtype=np.float64)
        if first_norm is None:
            first_norm = np.linalg.norm(c)
        w = c.copy()
        for _ in range(2):
            for b in basis:
                w = w - (b @ w) * b
        n = np.linalg.norm(w)
        if first_norm > 0 and n > tol * first_norm:
            basis.append(w / n)
    if not basis:
        return np.empty((np.size(columns[0]), 0))
    return np.column_stack(basis)


def svd_projector(snapshot_columns, rank_tol=1e-10):
    mat = np.column_stack(snapshot_columns)
    u, sig, _ = np.linalg.svd(mat, full_matrices=False)
    r = int(np.count_nonzero(sig > rank_tol * sig[0])) if sig.size and sig[0] > 0 else 0
    basis = u[:, :r]
    return basis @ basis.T


def dense_parareal_window(q0, a_fine, a_coarse, n_c, n_it):
    """Original Parareal on dense matrices, straight from the iteration formula."""
    qk = [np.asarray(q0, dtype=np.float64)]
    for i in range(n_c):
        qk.append(a_coarse @ qk[i])
    residuals = []
    for _ in range(n_it):
        preds = [a_fine @ qk[i] for i in range(n_c)]
        qn = [qk[0]]
        for i in range(n_c):
            qn.append(a_coarse @ qn[i] + preds[i] - a_coarse @ qk[i])
        residuals.append(max(np.linalg.norm(a - b) for a, b in zip(qn[1:], qk[1:])))
        qk = qn
    return qk[1:], residuals


def dense_kse_window(q0, a_fine, a_coarse, n_c, n_it, rank_tol=1e-10):
    """KSE-Parareal on dense matrices.

    The enhanced propagator applies a_fine directly to the projected part
    (no image reuse) with an SVD projector over all predictor inputs.
    """
    q0 = np.asarray(q0, dtype=np.float64)
    qk = [q0]
    for i in range(n_c):
        qk.append(a_coarse @ qk[i])
    snaps = []
    residuals = []
    for _ in range(n_it):
        preds = [a_fine @ qk[i] for i in range(n_c)]
        snaps.extend(qk[:n_c])
        proj = svd_projector(snaps, rank_tol)

        def enhanced(q):
            pq = proj @ q
            return a_coarse @ (q - pq) + a_fine @ pq

        qn = [q0]
        for i in range(n_c):
            qn.append(enhanced(qn[i]) + preds[i] - enhanced(qk[i]))
        residuals.append(max(np.linalg.norm(a - b) for a, b in zip(qn[1:], qk[1:])))
        qk = qn
    return qk[1:], residuals


def random_stable_pair(rng, d, dt=0.1):
    """(fine, coarse) propagator matrices of a random damped linear system.

    Fine is the exact flow over dt, coarse a forward-Euler step: linearly
    consistent, clearly different accuracy.
    """
    from scipy.linalg import expm

    a = rng.standard_normal((d, d))
    a = 0.5 * (a - a.T) - 0.3 * np.eye(d) - 0.1 * (a @ a.T) / d
    return expm(dt * a), np.eye(d) + dt * a

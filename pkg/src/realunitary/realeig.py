"""Reference real-arithmetic eigensolver for orthogonal matrices.

An orthogonal ``M`` is normal, so its symmetric part ``C = (M + M^T)/2`` and
skew part ``K = (M - M^T)/2`` commute. Each eigenspace of ``C`` (eigenvalue
``cos t``) is invariant under ``K``, and on it ``-K^2 = sin(t)^2``. A unit
vector ``x`` there pairs with ``y = K x / sin t`` into the complex
eigenvectors ``x -+ i y`` for ``exp(+-i t)``. Everything up to that final
pairing runs in real arithmetic with cyclic Jacobi.

The solver stands in for whatever external real-valued solver a workflow
uses; recovery never relies on its particular output basis.
"""
from dataclasses import dataclass

import numpy as np

from .embedding import RealEmbedding
from .exceptions import ConvergenceError, DimensionError, NotOrthogonalError
from .matcore import EPS, as_complex_matrix, as_real_matrix, round_robin_pairs

__all__ = ["EigenDecomposition", "jacobi_eigh", "real_normal_eig", "eig_residual"]

# gap (absolute) below which sorted cos/sin values are treated as one cluster
CLUSTER_TOL = 1e-10
# sin(t) at or below this counts as a real eigenvalue +-1
REAL_SIN_TOL = 1e-7


@dataclass(frozen=True)
class EigenDecomposition:
    """Complete eigendecomposition ``M Z = Z diag(sigma)``.

    The columns of `Z` are eigenvectors. They need not be orthonormal.
    """

    Z: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        Z = as_complex_matrix(self.Z)
        sigma = np.asarray(self.sigma, dtype=np.complex128).ravel()
        if Z.shape[0] != Z.shape[1] or Z.shape[1] != sigma.size:
            raise DimensionError(f"Z {Z.shape} and sigma ({sigma.size},) do not match")
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "sigma", sigma)

    @property
    def dim(self):
        return self.Z.shape[0]


def jacobi_eigh(S, max_sweeps=60):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Rotations are scheduled in round-robin order so each round applies a
    set of disjoint rotations at once.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues in ascending order.
    V : (n, n) ndarray
        Orthonormal eigenvectors as columns.
    """
    A = as_real_matrix(S)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionError(f"jacobi_eigh needs a square matrix, got {A.shape}")
    A = (A + A.T) / 2
    V = np.eye(n)
    floor = EPS * EPS * np.linalg.norm(A)
    rounds = round_robin_pairs(n)
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p, q in rounds:
            apq = A[p, q]
            app = A[p, p]
            aqq = A[q, q]
            act = (np.abs(apq) > EPS * np.sqrt(np.abs(app * aqq))) & (np.abs(apq) > floor)
            if not act.any():
                continue
            rotated = True
            p, q = p[act], q[act]
            apq, app, aqq = apq[act], app[act], aqq[act]
            tau = (aqq - app) / (2.0 * apq)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.hypot(1.0, t)
            s = t * c
            for X in (A, V):
                xp = X[:, p].copy()
                xq = X[:, q].copy()
                X[:, p] = c * xp - s * xq
                X[:, q] = s * xp + c * xq
            rp = A[p, :].copy()
            rq = A[q, :].copy()
            A[p, :] = c[:, None] * rp - s[:, None] * rq
            A[q, :] = s[:, None] * rp + c[:, None] * rq
            A[p, q] = 0.0
            A[q, p] = 0.0
        if not rotated:
            break
    else:
        raise ConvergenceError("symmetric Jacobi did not converge", max_sweeps)
    w = np.diagonal(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def _clusters(sorted_values, tol):
    # single-linkage runs of a sorted 1-D array
    if sorted_values.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(sorted_values) > tol) + 1
    return np.split(np.arange(sorted_values.size), breaks)


def _pair_skew(Kg):
    """Split the space of a skew matrix with ``Kg^2 = -s^2 I`` into planes.

    Returns a list of orthonormal pairs ``(x, y)`` with ``Kg x = s y``.
    """
    # the span of accepted pairs is Kg-invariant, hence so is its complement:
    # any candidate orthogonalized against it starts a new pair
    k = Kg.shape[0]
    if k % 2:
        raise ConvergenceError("skew block has odd dimension; cannot pair eigenvectors", 0)
    basis = np.zeros((k, 0))
    pairs = []
    for j in range(k):
        if basis.shape[1] == k:
            break
        x = np.zeros(k)
        x[j] = 1.0
        for _ in range(2):
            x -= basis @ (basis.T @ x)
        nx = np.linalg.norm(x)
        if nx < 0.5:
            continue
        x /= nx
        y = Kg @ x
        for _ in range(2):
            y -= basis @ (basis.T @ y)
            y -= x * (x @ y)
        y /= np.linalg.norm(y)
        pairs.append((x, y))
        basis = np.column_stack([basis, x, y])
    if basis.shape[1] != k:
        raise ConvergenceError("could not split skew block into invariant planes", 0)
    return pairs


def real_normal_eig(M):
    """Complete eigendecomposition of a real orthogonal matrix.

    Parameters
    ----------
    M : RealEmbedding or (N, N) array_like
        Must satisfy ``||M^T M - I||_F <= 1e-8 * N / 2``.

    Returns
    -------
    EigenDecomposition
        Non-real eigenvalues come in conjugate pairs. Eigenvalues are ordered
        by ``(|phase|, phase)``, so each conjugate pair is adjacent with the
        negative phase first.

    Raises
    ------
    NotOrthogonalError
        If `M` is not orthogonal within tolerance.
    ConvergenceError
        If a Jacobi sweep budget is exhausted.
    """
    if isinstance(M, RealEmbedding):
        M = M.matrix
    M = as_real_matrix(M)
    N = M.shape[0]
    if M.shape != (N, N):
        raise DimensionError(f"real_normal_eig needs a square matrix, got {M.shape}")
    half = max(N / 2, 1.0)
    orth = float(np.linalg.norm(M.T @ M - np.eye(N)))
    if orth > 1e-8 * half:
        raise NotOrthogonalError(f"matrix is not orthogonal: ||M^T M - I||_F = {orth:.3e}")

    C = (M + M.T) / 2
    K = (M - M.T) / 2
    cvals, Qc = jacobi_eigh(C)

    vecs, vals = [], []
    r = 1.0 / np.sqrt(2.0)
    for idx in _clusters(cvals, CLUSTER_TOL):
        B = Qc[:, idx]
        Kc = B.T @ K @ B
        Kc = (Kc - Kc.T) / 2
        s2, P = jacobi_eigh(Kc.T @ Kc)
        sins = np.sqrt(np.clip(s2, 0.0, None))
        real = sins <= REAL_SIN_TOL
        for j in np.flatnonzero(real):
            x = B @ P[:, j]
            vecs.append(x.astype(np.complex128))
            vals.append(complex(x @ M @ x))
        rest = np.flatnonzero(~real)
        for sub in _clusters(sins[rest], CLUSTER_TOL):
            G = B @ P[:, rest[sub]]
            Kg = G.T @ K @ G
            for xc, yc in _pair_skew((Kg - Kg.T) / 2):
                w = (G @ xc - 1j * (G @ yc)) * r
                mu = complex(np.vdot(w, M @ w))
                vecs.extend([w, w.conj()])
                vals.extend([mu, mu.conjugate()])

    Z = np.column_stack(vecs)
    sigma = np.array(vals, dtype=np.complex128)
    phase = np.angle(sigma)
    phase[np.isclose(phase, -np.pi, rtol=0, atol=1e-15)] = np.pi
    order = np.lexsort((phase, np.abs(phase)))
    return EigenDecomposition(Z[:, order], sigma[order])


def eig_residual(M, E):
    """Relative eigen-equation residual ``||M Z - Z diag(sigma)||_F / max(1, ||M||_F)``."""
    if isinstance(M, RealEmbedding):
        M = M.matrix
    M = np.asarray(M)
    if M.shape != E.Z.shape:
        raise DimensionError(f"matrix {M.shape} and eigenbasis {E.Z.shape} do not match")
    res = np.linalg.norm(M @ E.Z - E.Z * E.sigma)
    return float(res / max(1.0, np.linalg.norm(M)))

"""Dense complex/real matrix kernels.

Matrices are plain 2-D numpy arrays (``complex128`` or ``float64``). The
factorizations here are written out explicitly (Householder QR, one-sided
Jacobi SVD) so that phase conventions and rank decisions are fully under
our control; ``numpy`` is only used for storage and BLAS-level products.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, DimensionError

EPS = np.finfo(np.float64).eps

__all__ = [
    "SingularSpectrum",
    "as_complex_matrix",
    "as_real_matrix",
    "gemm",
    "adjoint",
    "unitarity_residual",
    "householder_qr",
    "svd",
    "range_basis",
    "largest_principal_angle",
    "round_robin_pairs",
]


def _check_matrix(A, dtype):
    A = np.asarray(A)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {A.shape}")
    A = A.astype(dtype, copy=False)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def as_complex_matrix(A):
    """Return `A` as a finite 2-D ``complex128`` array."""
    return _check_matrix(A, np.complex128)


def as_real_matrix(A):
    """Return `A` as a finite 2-D ``float64`` array."""
    A = np.asarray(A)
    if np.iscomplexobj(A):
        raise TypeError("expected a real matrix, got complex entries")
    return _check_matrix(A, np.float64)


def gemm(A, B):
    """Matrix product ``A @ B`` with a shape check that names both operands."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def adjoint(A):
    """Conjugate transpose."""
    return np.conj(np.asarray(A)).T.copy()


def unitarity_residual(A):
    """Frobenius norm of ``A^H A - I``."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"unitarity residual needs a square matrix, got {A.shape}")
    n = A.shape[0]
    return float(np.linalg.norm(adjoint(A) @ A - np.eye(n)))


def householder_qr(A):
    """Thin QR factorization by Householder reflections.

    Parameters
    ----------
    A : (m, k) array_like, m >= k

    Returns
    -------
    Q : (m, k) complex ndarray with orthonormal columns
    R : (k, k) complex ndarray, upper triangular with a real nonnegative
        diagonal. The diagonal convention makes the factorization unique
        for full-rank `A`, which is what Haar sampling relies on.
    """
    A = as_complex_matrix(A)
    m, k = A.shape
    if m < k:
        raise DimensionError(f"householder_qr needs rows >= cols, got {A.shape}")
    R = A.copy()
    Q = np.eye(m, dtype=np.complex128)
    for j in range(k):
        x = R[j:, j]
        normx = np.linalg.norm(x)
        if normx == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = x.copy()
        v[0] += phase * normx
        v /= np.linalg.norm(v)
        R[j:, j:] -= 2.0 * np.outer(v, v.conj() @ R[j:, j:])
        Q[:, j:] -= 2.0 * np.outer(Q[:, j:] @ v, v.conj())
    d = np.diagonal(R[:k, :k]).copy()
    mag = np.abs(d)
    ph = np.ones(k, dtype=np.complex128)
    nz = mag > 0
    ph[nz] = d[nz] / mag[nz]
    Q = Q[:, :k] * ph
    R = np.triu(R[:k, :k] * ph.conj()[:, None])
    R[np.diag_indices(k)] = mag
    return Q, R


def round_robin_pairs(k):
    """Partition all index pairs of ``range(k)`` into rounds of disjoint pairs.

    Within a round the pairs touch distinct indices, so the corresponding
    Jacobi rotations commute and can be applied at once.
    """
    m = k + (k % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < k and b < k:
                p.append(min(a, b))
                q.append(max(a, b))
        if p:
            rounds.append((np.array(p), np.array(q)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


@dataclass(frozen=True)
class SingularSpectrum:
    """Thin singular value decomposition ``A = left @ diag(values) @ right^H``."""

    values: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray


def _complete_orthonormal(Q, count):
    # extend the orthonormal columns of Q by `count` more, drawn from the
    # standard basis and orthogonalized twice
    m = Q.shape[0]
    cols = [Q[:, j] for j in range(Q.shape[1])]
    added = []
    for i in range(m):
        if len(added) == count:
            break
        v = np.zeros(m, dtype=np.complex128)
        v[i] = 1.0
        for _ in range(2):
            for c in cols:
                v -= c * np.vdot(c, v)
        nv = np.linalg.norm(v)
        if nv > 0.5:
            v /= nv
            cols.append(v)
            added.append(v)
    return np.column_stack(added) if added else np.zeros((m, 0), dtype=np.complex128)


def svd(A, max_sweeps=60):
    """Singular value decomposition by one-sided (Hestenes) Jacobi.

    Columns of a working copy of `A` are rotated pairwise until they are
    mutually orthogonal; the column norms are then the singular values.
    Wide matrices are handled through their adjoint.

    Raises
    ------
    ConvergenceError
        If the columns are not orthogonal after `max_sweeps` sweeps.
    """
    A = as_complex_matrix(A)
    m, k = A.shape
    if m < k:
        s = svd(adjoint(A), max_sweeps=max_sweeps)
        return SingularSpectrum(s.values, s.right_basis, s.left_basis)
    # work at unit scale; couplings near the underflow threshold are noise
    scale = float(np.max(np.abs(A), initial=0.0))
    W = A / scale if scale > 0 else A.copy()
    V = np.eye(k, dtype=np.complex128)
    tol = EPS * m
    floor = np.finfo(np.float64).tiny / EPS
    rounds = round_robin_pairs(k)
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p, q in rounds:
            wp = W[:, p]
            wq = W[:, q]
            alpha = np.einsum("ij,ij->j", wp.conj(), wp).real
            beta = np.einsum("ij,ij->j", wq.conj(), wq).real
            gamma = np.einsum("ij,ij->j", wp.conj(), wq)
            g = np.abs(gamma)
            # split sqrt so tiny columns do not underflow the threshold
            act = (g > tol * np.sqrt(alpha) * np.sqrt(beta)) & (g > floor)
            if not act.any():
                continue
            rotated = True
            p, q = p[act], q[act]
            alpha, beta, gamma, g = alpha[act], beta[act], gamma[act], g[act]
            with np.errstate(over="ignore"):
                zeta = (beta - alpha) / (2.0 * g)
            sgn = np.where(zeta >= 0, 1.0, -1.0)
            t = sgn / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.hypot(1.0, t)
            s = c * t
            # componentwise, since complex division by a subnormal g can overflow
            e = gamma.real / g - 1j * (gamma.imag / g)
            for X in (W, V):
                xp = X[:, p].copy()
                xq = X[:, q] * e
                X[:, p] = c * xp - s * xq
                X[:, q] = s * xp + c * xq
        if not rotated:
            break
    else:
        raise ConvergenceError("one-sided Jacobi SVD did not converge", max_sweeps)

    values = np.linalg.norm(W, axis=0)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    W = W[:, order]
    V = V[:, order]
    nz = values > 0
    left = np.zeros_like(W)
    left[:, nz] = W[:, nz] / values[nz]
    if not nz.all():
        left[:, ~nz] = _complete_orthonormal(left[:, nz], int((~nz).sum()))
    if scale > 0:
        values = values * scale
    return SingularSpectrum(values, left, V)


def range_basis(X, tol=None):
    """Rank-revealing orthonormal basis for the column space of `X`.

    Parameters
    ----------
    X : (m, k) array_like
    tol : float, optional
        Singular values strictly above `tol` count toward the rank. The
        default is ``max(m, k) * sigma_max * 1e-12``.

    Returns
    -------
    Q : (m, rank) complex ndarray
        Leading left singular vectors.
    rank : int
    """
    X = as_complex_matrix(X)
    m, k = X.shape
    if m == 0 or k == 0:
        return np.zeros((m, 0), dtype=np.complex128), 0
    s = svd(X)
    if tol is None:
        tol = max(m, k) * s.values[0] * 1e-12
    if tol < 0:
        raise ValueError(f"rank tolerance must be nonnegative, got {tol}")
    rank = int(np.count_nonzero(s.values > tol))
    return s.left_basis[:, :rank].copy(), rank


def largest_principal_angle(A, B):
    """Largest principal angle (radians) between two column spaces.

    Both inputs must have orthonormal columns. The angle is computed from
    its sine, ``||(I - B B^H) A||_2``, which stays accurate for nearly
    coincident subspaces where the arccos of the cosines does not.
    Subspaces of different dimension are reported as ``pi / 2`` apart.
    """
    A = as_complex_matrix(A)
    B = as_complex_matrix(B)
    if A.shape[0] != B.shape[0]:
        raise DimensionError(f"bases live in different spaces: {A.shape} vs {B.shape}")
    if A.shape[1] != B.shape[1]:
        return np.pi / 2
    if A.shape[1] == 0:
        return 0.0
    R = A - B @ (adjoint(B) @ A)
    sine = svd(R).values[0]
    return float(np.arcsin(min(1.0, sine)))

"""Real block embedding ``M = [[A, -B], [B, A]]`` of a complex ``U = A + iB``."""
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, StructureError
from .matcore import as_complex_matrix, as_real_matrix, unitarity_residual

# last-digit noise allowed when a matrix comes back from a text file
INGEST_TOL = 1e-13


@dataclass(frozen=True)
class RealEmbedding:
    """A ``2n x 2n`` real matrix carrying the ``[[A, -B], [B, A]]`` structure.

    Build one with :func:`embed` or, for matrices of external origin,
    :meth:`from_matrix`, which checks the structure.
    """

    matrix: np.ndarray

    def __post_init__(self):
        M = as_real_matrix(self.matrix)
        rows, cols = M.shape
        if rows != cols or rows % 2:
            raise DimensionError(f"embedding must be square with even size, got {M.shape}")
        object.__setattr__(self, "matrix", M)

    @property
    def n(self):
        return self.matrix.shape[0] // 2

    @property
    def A(self):
        return self.matrix[: self.n, : self.n]

    @property
    def B(self):
        return self.matrix[self.n :, : self.n]

    @classmethod
    def from_matrix(cls, M, tol=INGEST_TOL):
        """Validate the block structure of `M` and symmetrize it.

        The two copies of ``A`` and the two copies of ``+-B`` are averaged,
        which is exact when they already agree bit for bit.

        Raises
        ------
        StructureError
            If the blocks disagree by more than `tol` (absolute).
        """
        M = as_real_matrix(M)
        rows, cols = M.shape
        if rows != cols or rows % 2:
            raise DimensionError(f"embedding must be square with even size, got {M.shape}")
        n = rows // 2
        a1, a2 = M[:n, :n], M[n:, n:]
        b1, b2 = M[n:, :n], -M[:n, n:]
        gap = max(float(np.max(np.abs(a1 - a2))), float(np.max(np.abs(b1 - b2))))
        if gap > tol:
            raise StructureError(
                f"block structure violated: max block discrepancy {gap:.3e} exceeds {tol:.1e}",
                gap,
            )
        A = (a1 + a2) / 2
        B = (b1 + b2) / 2
        return cls(np.block([[A, -B], [B, A]]))


def embed(U):
    """Real embedding of a square complex matrix.

    A warning is issued when `U` is visibly non-unitary; the embedding is
    still returned since it is well defined for any complex matrix.
    """
    U = as_complex_matrix(U)
    n, m = U.shape
    if n != m:
        raise DimensionError(f"embed needs a square matrix, got {U.shape}")
    res = unitarity_residual(U)
    if res > 1e-8 * n:
        warnings.warn(f"embedding a non-unitary matrix (||U^H U - I||_F = {res:.2e})", stacklevel=2)
    A = U.real.copy()
    B = U.imag.copy()
    return RealEmbedding(np.block([[A, -B], [B, A]]))


def extract(M, tol=INGEST_TOL):
    """Recover ``U = A + iB`` from an embedding.

    `M` may be a :class:`RealEmbedding` or a raw array, which is passed
    through :meth:`RealEmbedding.from_matrix` first.
    """
    if not isinstance(M, RealEmbedding):
        M = RealEmbedding.from_matrix(M, tol=tol)
    U = np.empty((M.n, M.n), dtype=np.complex128)
    U.real = M.A
    U.imag = M.B
    return U


def build_W(V, eigenvalues):
    """Eigenbasis of ``embed(V diag(eigenvalues) V^H)`` known in closed form.

    Returns
    -------
    W : (2n, 2n) complex ndarray
        ``[W_plus, W_minus]`` with ``W_plus = [V; -iV] / sqrt(2)`` and
        ``W_minus = [-i conj(V); conj(V)] / sqrt(2)``.
    sigma : (2n,) complex ndarray
        Matching eigenvalues, the input followed by their conjugates.
    """
    V = as_complex_matrix(V)
    lam = np.asarray(eigenvalues, dtype=np.complex128).ravel()
    n = V.shape[0]
    if V.shape != (n, n) or lam.size != n:
        raise DimensionError(f"V {V.shape} and eigenvalues ({lam.size},) do not match")
    r = 1.0 / np.sqrt(2.0)
    Vb = V.conj()
    W_plus = np.vstack([V, -1j * V]) * r
    W_minus = np.vstack([-1j * Vb, Vb]) * r
    return np.hstack([W_plus, W_minus]), np.concatenate([lam, lam.conj()])

"""Recover ``U = V diag(lambda) V^H`` from an eigendecomposition of ``embed(U)``.

Eigenvectors of the embedding are grouped by eigenvalue. Each group block
``Z_mu`` (stacked real/imaginary halves) is projected with
``L z = z_top + i z_bottom``, which keeps the component belonging to ``U``
and annihilates the one belonging to ``conj(U)``. A rank-revealing
orthonormalization of the projected block then yields an orthonormal basis
of the ``U``-eigenspace for ``mu``, and its rank is the multiplicity of
``mu`` in ``U``; rank zero means ``mu`` is an eigenvalue of ``conj(U)`` only.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np

from .embedding import extract
from .exceptions import DimensionError, NotOrthogonalError, RecoveryError
from .matcore import as_complex_matrix, range_basis, svd
from .realeig import EigenDecomposition

__all__ = [
    "EigenGroup",
    "GroupRecord",
    "RecoveryReport",
    "VerificationRecord",
    "UnitaryLog",
    "BranchBoundaryWarning",
    "principal_phase",
    "group_eigenvalues",
    "project_L",
    "recover",
    "verify",
    "check_decomposition",
    "unitary_log",
    "principal_log",
]

DELTA_GROUP = 1e-8
RANK_RTOL = 1e-12
VERIFY_RTOL = 1e-8
BRANCH_TOL = 1e-12


def principal_phase(z):
    """Argument in ``(-pi, pi]``."""
    t = np.angle(z)
    return np.where(t == -np.pi, np.pi, t) if np.ndim(t) else (np.pi if t == -np.pi else float(t))


def _angle_gap(a, b):
    return abs(float(np.angle(np.exp(1j * (a - b)))))


@dataclass
class EigenGroup:
    """One numerically distinct eigenvalue of the embedding and its eigenvectors."""

    mu: complex
    raw_mu: complex
    indices: np.ndarray
    columns: np.ndarray
    raw_mus: np.ndarray

    @property
    def m_M(self):
        return self.indices.size

    @property
    def phase(self):
        return principal_phase(self.mu)


def group_eigenvalues(E, delta_group=DELTA_GROUP):
    """Cluster eigenvalues of an orthogonal embedding on the unit circle.

    Eigenvalues are sorted by phase and linked whenever neighbouring phases
    (with wraparound at +-pi) differ by at most `delta_group` radians. Each
    cluster is represented by the unit-modulus number at the circular mean
    of its members. Groups are returned in ascending principal phase.

    Raises
    ------
    NotOrthogonalError
        If any eigenvalue modulus is off by more than 0.1 from 1.
    """
    sigma = E.sigma
    if sigma.size == 0:
        raise ValueError("empty eigendecomposition")
    if delta_group <= 0:
        raise ValueError(f"delta_group must be positive, got {delta_group}")
    mod = np.abs(sigma)
    if np.any(np.abs(mod - 1) > 0.1):
        worst = float(mod[np.argmax(np.abs(mod - 1))])
        raise NotOrthogonalError(
            f"eigenvalue of modulus {worst:.3g}: input not from an orthogonal embedding"
        )
    phases = np.angle(sigma)
    order = np.argsort(phases, kind="stable")
    ph = phases[order]
    N = ph.size
    gap_after = np.empty(N)
    gap_after[:-1] = np.diff(ph)
    gap_after[-1] = ph[0] + 2 * np.pi - ph[-1]
    cuts = np.flatnonzero(gap_after > delta_group)
    if cuts.size == 0:
        runs = [order]
    else:
        start = (cuts[0] + 1) % N
        rolled = np.roll(np.arange(N), -start)
        split_at = [i + 1 for i, k in enumerate(rolled) if gap_after[k] > delta_group][:-1]
        runs = [order[r] for r in np.split(rolled, split_at)]

    groups = []
    for idx in runs:
        idx = np.sort(idx)
        raw = sigma[idx]
        raw_mu = complex(np.mean(raw))
        centre = np.mean(raw / np.abs(raw))
        mu = complex(np.exp(1j * principal_phase(centre)))
        groups.append(EigenGroup(mu, raw_mu, idx, E.Z[:, idx], raw))
    groups.sort(key=lambda g: g.phase)
    return groups


def project_L(Zmu):
    """Apply ``[I, iI]``: the top half plus ``i`` times the bottom half."""
    Zmu = as_complex_matrix(Zmu)
    rows = Zmu.shape[0]
    if rows % 2:
        raise DimensionError(f"projection needs an even row count, got {rows}")
    n = rows // 2
    return Zmu[:n] + 1j * Zmu[n:]


@dataclass(frozen=True)
class GroupRecord:
    mu: complex
    raw_mu: complex
    m_M: int
    rank: int
    tau: float

    @property
    def m_Ubar(self):
        return self.m_M - self.rank


@dataclass
class RecoveryReport:
    """Result of :func:`recover`.

    ``V`` and ``eigenvalues`` satisfy ``U = V diag(eigenvalues) V^H``. A
    ``tau_rank`` of ``None`` means the automatic per-group tolerance was
    used; each record carries the value actually applied.
    """

    V: np.ndarray
    eigenvalues: np.ndarray
    groups: list
    residual_decomp: float
    residual_unitary: float
    residual_reconstruction: float
    delta_group: float
    tau_rank: float = None
    min_group_gap: float = float("inf")
    bases: list = field(default_factory=list, repr=False)

    @property
    def n(self):
        return self.V.shape[0]

    @property
    def ranks(self):
        return [g.rank for g in self.groups]

    @property
    def complete(self):
        return sum(self.ranks) == self.n


def _source_unitary(E, M):
    if M is not None:
        return extract(M)
    # rebuild the embedding from its own decomposition: M = Z diag(sigma) Z^-1
    Z = E.Z
    Mhat = np.linalg.solve(Z.T, (Z * E.sigma).T).T.real
    return extract(Mhat, tol=np.inf)


def recover(E, delta_group=DELTA_GROUP, tau_rank=None, M=None):
    """Unitary eigendecomposition of ``U`` from any eigendecomposition of ``embed(U)``.

    Parameters
    ----------
    E : EigenDecomposition
        ``M Z = Z diag(sigma)`` with invertible, not necessarily orthonormal `Z`.
    delta_group : float
        Phase gap (radians) that separates distinct eigenvalues.
    tau_rank : float, optional
        Absolute singular-value threshold for the rank of each projected
        block. By default it is ``max(n, m_M) * sigma_max(Z_mu) * 1e-12``
        per group; the scale comes from the unprojected block so that a
        block projecting to pure rounding noise gets rank zero.
    M : RealEmbedding or array_like, optional
        The embedded matrix. Only used for the residuals in the report; when
        omitted it is reassembled from `E`.

    Raises
    ------
    RecoveryError
        If the group ranks do not add up to ``n`` or the assembled ``V`` is
        not unitary. The report built so far is attached.
    """
    if not isinstance(E, EigenDecomposition):
        raise TypeError("recover expects an EigenDecomposition")
    if E.dim % 2:
        raise DimensionError(f"eigenbasis dimension must be even, got {E.dim}")
    n = E.dim // 2
    groups = group_eigenvalues(E, delta_group)

    bases, records = [], []
    for g in groups:
        X = project_L(g.columns)
        tau = tau_rank
        if tau is None:
            tau = max(n, g.m_M) * svd(g.columns).values[0] * RANK_RTOL
        Q, rank = range_basis(X, tau)
        bases.append(Q)
        records.append(GroupRecord(g.mu, g.raw_mu, g.m_M, rank, float(tau)))

    V = np.hstack(bases) if bases else np.zeros((n, 0), dtype=np.complex128)
    lam = np.concatenate([np.full(r.rank, r.mu, dtype=np.complex128) for r in records])

    U = _source_unitary(E, M)
    r = V.shape[1]
    residual_decomp = float(np.linalg.norm(U @ V - V * lam))
    residual_unitary = float(np.linalg.norm(V.conj().T @ V - np.eye(r)))
    residual_rec = float(np.linalg.norm((V * lam) @ V.conj().T - U))

    gaps = [_angle_gap(groups[i].phase, groups[i - 1].phase) for i in range(1, len(groups))]
    if len(groups) > 1:
        gaps.append(_angle_gap(groups[0].phase, groups[-1].phase))
    report = RecoveryReport(
        V=V,
        eigenvalues=lam,
        groups=records,
        residual_decomp=residual_decomp,
        residual_unitary=residual_unitary,
        residual_reconstruction=residual_rec,
        delta_group=delta_group,
        tau_rank=tau_rank,
        min_group_gap=min(gaps) if gaps else float("inf"),
        bases=bases,
    )
    if report.min_group_gap <= 10 * delta_group:
        warnings.warn(
            f"eigenvalue groups only {report.min_group_gap:.2e} rad apart; "
            f"consider retuning delta_group={delta_group:g}",
            stacklevel=2,
        )
    if r != n:
        raise RecoveryError(
            f"multiplicity accounting failure: ranks {report.ranks} sum to {r}, expected {n} "
            f"(delta_group={delta_group:g}, tau_rank={'auto' if tau_rank is None else tau_rank})",
            report,
        )
    if residual_unitary > VERIFY_RTOL * n:
        raise RecoveryError(
            f"recovered eigenvectors are not orthonormal across groups "
            f"(||V^H V - I||_F = {residual_unitary:.2e}); retune delta_group/tau_rank",
            report,
        )
    return report


@dataclass(frozen=True)
class VerificationRecord:
    residual_decomp: float
    residual_unitary: float
    residual_reconstruction: float
    modulus_deviation: np.ndarray
    threshold: float
    checks: dict
    passed: bool


def check_decomposition(U, V, eigenvalues, rtol=VERIFY_RTOL):
    """Check ``U = V diag(eigenvalues) V^H`` with a unitary ``V``.

    Every residual must be at most ``rtol * n``. Failures are reported in the
    returned record, never raised.
    """
    U = as_complex_matrix(U)
    V = as_complex_matrix(V)
    lam = np.asarray(eigenvalues, dtype=np.complex128).ravel()
    n = U.shape[0]
    if U.shape != (n, n) or V.shape != (n, n) or lam.size != n:
        raise DimensionError(f"U {U.shape}, V {V.shape}, eigenvalues ({lam.size},) do not match")
    thr = rtol * n
    dec = float(np.linalg.norm(U @ V - V * lam))
    uni = float(np.linalg.norm(V.conj().T @ V - np.eye(n)))
    rec = float(np.linalg.norm((V * lam) @ V.conj().T - U))
    dev = np.abs(lam) - 1
    checks = {
        "decomposition": dec <= thr,
        "unitary": uni <= thr,
        "reconstruction": rec <= thr,
        "modulus": bool(np.all(np.abs(dev) <= thr)),
    }
    return VerificationRecord(dec, uni, rec, dev, thr, checks, all(checks.values()))


def verify(U, report, rtol=VERIFY_RTOL):
    """Verify a :class:`RecoveryReport` against the original ``U``."""
    return check_decomposition(U, report.V, report.eigenvalues, rtol)


class BranchBoundaryWarning(UserWarning):
    """An eigenvalue sits on the branch cut of the principal logarithm."""


@dataclass(frozen=True)
class UnitaryLog:
    H: np.ndarray
    phases: np.ndarray
    branch_boundary: bool
    hermiticity_residual: float


def principal_log(V, eigenvalues):
    """Hermitian ``H`` with ``exp(iH) = V diag(eigenvalues) V^H``.

    Phases are principal values in ``(-pi, pi]``. Eigenvalues within 1e-12
    of -1 get phase ``pi`` and set the ``branch_boundary`` flag.
    """
    V = as_complex_matrix(V)
    lam = np.asarray(eigenvalues, dtype=np.complex128).ravel()
    if V.shape != (lam.size, lam.size):
        raise DimensionError(f"V {V.shape} and eigenvalues ({lam.size},) do not match")
    theta = np.asarray(principal_phase(lam), dtype=float).reshape(-1)
    boundary = np.abs(lam + 1) <= BRANCH_TOL
    theta[boundary] = np.pi
    if boundary.any():
        warnings.warn(
            f"branch boundary: {int(boundary.sum())} eigenvalue(s) at -1, phase pi chosen",
            BranchBoundaryWarning,
            stacklevel=2,
        )
    H = (V * theta) @ V.conj().T
    herm = float(np.linalg.norm(H - H.conj().T))
    return UnitaryLog(H, theta, bool(boundary.any()), herm)


def unitary_log(report):
    """Principal-branch generator ``H`` of a recovered ``U = exp(iH)``."""
    return principal_log(report.V, report.eigenvalues)

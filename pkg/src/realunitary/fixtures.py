"""Unitary matrices with planted spectra, and eigenbasis scrambling.

Randomness comes from numpy's PCG64 generator (``np.random.default_rng``)
seeded with a 64-bit unsigned integer, so a given ``(spec, seed)`` yields
bit-identical fixtures on every run of this implementation.
"""
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .matcore import householder_qr
from .realeig import EigenDecomposition

__all__ = [
    "SpectrumSpec",
    "PlantedUnitary",
    "TAXONOMY",
    "parse_spectrum",
    "load_spectrum",
    "haar_unitary",
    "planted_unitary",
    "random_mixing",
    "scramble_eigenbasis",
]

DEFAULT_DELTA_GROUP = 1e-8


def _angle_distance(a, b):
    d = np.mod(a - b + np.pi, 2 * np.pi) - np.pi
    return abs(float(d))


@dataclass(frozen=True)
class SpectrumSpec:
    """Eigenphases with multiplicities, ``((theta, m), ...)``."""

    items: tuple
    seed: int = 0

    def __post_init__(self):
        items = tuple((float(t), int(m)) for t, m in self.items)
        if not items:
            raise ValueError("spectrum spec is empty")
        for t, m in items:
            if m < 1:
                raise ValueError(f"multiplicity must be >= 1, got {m} at phase {t}")
            if not np.isfinite(t):
                raise ValueError(f"phase must be finite, got {t}")
        object.__setattr__(self, "items", items)

    @property
    def n(self):
        return sum(m for _, m in self.items)

    @property
    def phases(self):
        return np.repeat([t for t, _ in self.items], [m for _, m in self.items])

    @property
    def eigenvalues(self):
        return np.exp(1j * self.phases)

    def validate(self, delta_group=DEFAULT_DELTA_GROUP):
        """Require distinct phases to sit more than ``10 * delta_group`` apart."""
        ts = [t for t, _ in self.items]
        for i in range(len(ts)):
            for j in range(i + 1, len(ts)):
                d = _angle_distance(ts[i], ts[j])
                if 1e-15 < d <= 10 * delta_group:
                    raise ValueError(
                        f"phases {ts[i]!r} and {ts[j]!r} are {d:.2e} apart; "
                        f"need > {10 * delta_group:.1e} or identical"
                    )

    def scaled(self, factor):
        return SpectrumSpec(tuple((t, m * factor) for t, m in self.items), self.seed)


def parse_spectrum(text, seed=0):
    """Parse ``theta_radians multiplicity`` lines; ``#`` starts a comment."""
    items = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"line {lineno}: expected 'theta multiplicity', got {raw!r}")
        try:
            theta = float(fields[0])
            mult = int(fields[1])
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
        items.append((theta, mult))
    return SpectrumSpec(tuple(items), seed)


def load_spectrum(path, seed=0):
    return parse_spectrum(Path(path).read_text(), seed)


# Degeneracy patterns every pipeline test must cover: a repeated non-real
# eigenvalue, the real eigenvalues +1 and -1, a conjugate pair present in
# U with different multiplicities, and a mixture.
TAXONOMY = {
    "repeated_nonreal": SpectrumSpec(((np.pi / 3, 3), (1.0, 1), (-2.0, 2))),
    "real_pm1": SpectrumSpec(((0.0, 2), (np.pi, 3), (0.7, 1))),
    "conjugate_asymmetric": SpectrumSpec(((2 * np.pi / 5, 3), (-2 * np.pi / 5, 1), (1.2, 2), (-1.2, 2))),
    "mixed": SpectrumSpec(
        ((np.pi / 3, 3), (0.0, 2), (2 * np.pi / 5, 1), (-2 * np.pi / 5, 1), (np.pi, 1))
    ),
}


def _haar(n, rng):
    G = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    Q, _ = householder_qr(G)
    return Q


def haar_unitary(n, seed):
    """Haar-distributed ``n x n`` unitary: QR of a complex Ginibre matrix."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return _haar(n, np.random.default_rng(seed))


@dataclass(frozen=True)
class PlantedUnitary:
    U: np.ndarray
    V: np.ndarray
    eigenvalues: np.ndarray


def planted_unitary(spec, delta_group=DEFAULT_DELTA_GROUP):
    """``U = V diag(exp(i theta)) V^H`` with ``V = haar_unitary(n, spec.seed)``."""
    spec.validate(delta_group)
    V = haar_unitary(spec.n, spec.seed)
    lam = spec.eigenvalues
    U = (V * lam) @ V.conj().T
    return PlantedUnitary(U, V, lam)


def random_mixing(m, cond_bound, rng):
    """Random ``m x m`` matrix with condition number at most `cond_bound`.

    Built as ``Q1 diag(s) Q2`` with Haar ``Q1, Q2`` and singular values
    log-uniform in ``[cond_bound**-0.5, cond_bound**0.5]``.
    """
    if cond_bound < 1:
        raise ValueError(f"cond_bound must be >= 1, got {cond_bound}")
    half = 0.5 * np.log(cond_bound)
    s = np.exp(rng.uniform(-half, half, m))
    return (_haar(m, rng) * s) @ _haar(m, rng)


def scramble_eigenbasis(E, groups, cond_bound, seed):
    """Mix eigenvectors within each eigenvalue group by random invertible maps.

    This imitates a solver that returns an arbitrary, non-orthonormal basis
    of each eigenspace. Column spans per group are unchanged, and so is the
    eigenvalue equation.
    """
    if cond_bound < 1:
        raise ValueError(f"cond_bound must be >= 1, got {cond_bound}")
    rng = np.random.default_rng(seed)
    Z = E.Z.copy()
    for g in groups:
        idx = g.indices
        Z[:, idx] = Z[:, idx] @ random_mixing(idx.size, cond_bound, rng)
    return EigenDecomposition(Z, E.sigma.copy())

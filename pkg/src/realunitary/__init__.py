"""Unitary eigendecompositions recovered from real block embeddings."""

__version__ = "0.1.0"

from .embedding import RealEmbedding, build_W, embed, extract
from .exceptions import (
    ConvergenceError,
    DimensionError,
    NotOrthogonalError,
    RecoveryError,
    StructureError,
)
from .fixtures import SpectrumSpec, haar_unitary, planted_unitary, scramble_eigenbasis
from .realeig import EigenDecomposition, eig_residual, real_normal_eig
from .recover import (
    EigenGroup,
    RecoveryReport,
    group_eigenvalues,
    project_L,
    recover,
    unitary_log,
    verify,
)

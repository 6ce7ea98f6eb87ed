import numpy as np
import pytest
from numpy.testing import assert_array_equal

from conftest import multiset_angle_error
from realunitary.embedding import RealEmbedding, build_W, embed, extract
from realunitary.exceptions import DimensionError, StructureError
from realunitary.fixtures import SpectrumSpec, haar_unitary, planted_unitary
from realunitary.matcore import unitarity_residual
from realunitary.recover import project_L


def test_embed_identity():
    assert_array_equal(embed(np.eye(1)).matrix, np.eye(2))


def test_embed_i():
    # A = 0, B = 1 gives [[A, -B], [B, A]]
    assert_array_equal(embed([[1j]]).matrix, [[0, -1], [1, 0]])


def test_embed_real_matrix_is_block_diagonal():
    U = np.array([[0.0, -1.0], [1.0, 0.0]])
    M = embed(U).matrix
    assert_array_equal(M[:2, :2], U)
    assert_array_equal(M[2:, 2:], U)
    assert_array_equal(M[:2, 2:], 0)
    assert_array_equal(M[2:, :2], 0)


def test_embed_rejects_non_square():
    with pytest.raises(DimensionError):
        embed(np.ones((2, 3)))


def test_embed_warns_on_non_unitary():
    with pytest.warns(UserWarning, match="non-unitary"):
        M = embed([[2.0]])
    assert_array_equal(M.matrix, 2 * np.eye(2))


def test_extract_examples():
    assert_array_equal(extract(embed(np.eye(3))), np.eye(3))
    assert_array_equal(extract(np.array([[0.0, -1.0], [1.0, 0.0]])), [[1j]])


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_round_trip_bit_identical(seed):
    U = haar_unitary(8, seed)
    assert_array_equal(extract(embed(U)), U)


def test_extract_rejects_broken_structure():
    M = embed(haar_unitary(3, 5)).matrix.copy()
    M[0, 4] += 1e-6
    with pytest.raises(StructureError, match="discrepancy") as info:
        extract(M)
    assert info.value.discrepancy == pytest.approx(1e-6, rel=1e-6)


def test_ingest_symmetrizes_small_noise():
    U = haar_unitary(3, 5)
    M = embed(U).matrix.copy()
    M[4, 4] += 4e-14
    out = RealEmbedding.from_matrix(M)
    assert_array_equal(out.matrix[:3, :3], out.matrix[3:, 3:])
    assert_array_equal(out.matrix[:3, 3:], -out.matrix[3:, :3])
    assert np.max(np.abs(extract(out) - U)) <= 3e-14


def test_embedding_shape_checked():
    with pytest.raises(DimensionError):
        RealEmbedding(np.eye(3))


def test_build_W_scalar_identity():
    W, sigma = build_W(np.eye(1), [1.0])
    r = 1 / np.sqrt(2)
    assert np.max(np.abs(W - r * np.array([[1, -1j], [-1j, 1]]))) <= 1e-16
    assert_array_equal(sigma, [1, 1])


def test_build_W_scalar_i():
    W, sigma = build_W(np.eye(1), [1j])
    M = embed([[1j]]).matrix
    w = W[:, 0]
    assert np.max(np.abs(w - np.array([1, -1j]) / np.sqrt(2))) <= 1e-16
    assert np.max(np.abs(M @ w - 1j * w)) <= 1e-16
    assert_array_equal(sigma, [1j, -1j])


def test_build_W_random():
    n = 6
    rng = np.random.default_rng(3)
    V = haar_unitary(n, 11)
    lam = np.exp(1j * rng.uniform(-np.pi, np.pi, n))
    W, sigma = build_W(V, lam)
    M = embed((V * lam) @ V.conj().T).matrix
    assert np.linalg.norm(M @ W - W * sigma) <= 1e-10 * n
    assert unitarity_residual(W) <= 1e-10 * n


def test_build_W_dimension_mismatch():
    with pytest.raises(DimensionError):
        build_W(np.eye(3), [1, 1])


def test_L_annihilates_W_minus():
    V = haar_unitary(5, 2)
    W, _ = build_W(V, np.ones(5))
    assert np.max(np.abs(project_L(W[:, 5:]))) <= 1e-14
    assert np.max(np.abs(project_L(W[:, :5]) - np.sqrt(2) * V)) <= 1e-14


@pytest.mark.parametrize("seed", range(5))
def test_embedding_is_orthogonal(seed):
    n = 7
    M = embed(haar_unitary(n, seed)).matrix
    assert np.linalg.norm(M.T @ M - np.eye(2 * n)) <= 1e-10 * n


@pytest.mark.parametrize("seed", range(5))
def test_projection_intertwines_embedding(seed):
    # L (M z) = U (L z) for any stacked vector z
    n = 6
    rng = np.random.default_rng(seed)
    U = haar_unitary(n, seed)
    M = embed(U).matrix
    z = rng.standard_normal((2 * n, 3)) + 1j * rng.standard_normal((2 * n, 3))
    assert np.linalg.norm(project_L(M @ z) - U @ project_L(z)) <= 1e-12 * n


def test_spectrum_of_embedding_is_union_with_conjugate():
    spec = SpectrumSpec(((0.4, 2), (-2.2, 1), (np.pi, 1), (0.0, 1)), seed=9)
    planted = planted_unitary(spec)
    got = np.linalg.eigvals(embed(planted.U).matrix)
    want = np.concatenate([planted.eigenvalues, planted.eigenvalues.conj()])
    assert multiset_angle_error(got, want) <= 1e-8

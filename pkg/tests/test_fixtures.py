import numpy as np
import pytest
from numpy.testing import assert_array_equal

from conftest import multiset_angle_error
from realunitary.embedding import embed
from realunitary.fixtures import (
    TAXONOMY,
    SpectrumSpec,
    haar_unitary,
    parse_spectrum,
    planted_unitary,
    random_mixing,
    scramble_eigenbasis,
)
from realunitary.matcore import largest_principal_angle, unitarity_residual
from realunitary.realeig import eig_residual, real_normal_eig
from realunitary.recover import group_eigenvalues


def test_haar_scalar_is_unit_modulus():
    u = haar_unitary(1, 3)
    assert u.shape == (1, 1)
    assert abs(abs(u[0, 0]) - 1) <= 1e-15


def test_haar_unitarity_and_determinism():
    U = haar_unitary(4, 42)
    assert unitarity_residual(U) <= 1e-12 * 4
    assert_array_equal(U, haar_unitary(4, 42))
    assert np.linalg.norm(U - haar_unitary(4, 43)) > 0.1


def test_haar_first_column_phase_statistics():
    # Haar columns are rotation invariant: E[U_00] = 0 and E|U_00|^2 = 1/n
    n = 3
    samples = np.array([haar_unitary(n, s)[0, 0] for s in range(3000)])
    assert abs(samples.mean()) < 0.05
    assert abs(np.mean(np.abs(samples) ** 2) - 1 / n) < 0.02


def test_planted_identity():
    planted = planted_unitary(SpectrumSpec(((0.0, 4),), seed=1))
    # V V^H, so identity up to rounding
    assert np.max(np.abs(planted.U - np.eye(4))) <= 1e-14


def test_planted_scalar():
    planted = planted_unitary(SpectrumSpec(((np.pi / 2, 1),), seed=8))
    assert abs(planted.U[0, 0] - 1j) <= 1e-15


def test_planted_mixed_eigenvalues_match_brute_force():
    planted = planted_unitary(TAXONOMY["mixed"])
    assert planted.U.shape == (8, 8)
    got = np.linalg.eigvals(planted.U)
    assert multiset_angle_error(got, planted.eigenvalues) <= 1e-10
    # Hermitian parts carry cos and sin of the phases
    c = np.linalg.eigvalsh((planted.U + planted.U.conj().T) / 2)
    s = np.linalg.eigvalsh(1j * (planted.U.conj().T - planted.U) / 2)
    assert np.max(np.abs(np.sort(c) - np.sort(planted.eigenvalues.real))) <= 1e-10
    assert np.max(np.abs(np.sort(s) - np.sort(planted.eigenvalues.imag))) <= 1e-10


@pytest.mark.parametrize("n", [1, 5, 16, 64])
def test_planted_unitarity(n):
    rng = np.random.default_rng(n)
    spec = SpectrumSpec(tuple((t, 1) for t in rng.uniform(-np.pi, np.pi, n)), seed=n)
    assert unitarity_residual(planted_unitary(spec).U) <= 1e-11 * n


def test_spec_phase_separation():
    with pytest.raises(ValueError, match="apart"):
        planted_unitary(SpectrumSpec(((0.5, 1), (0.5 + 5e-8, 1))))
    # identical phases merge, and +pi / -pi are the same point
    SpectrumSpec(((0.5, 1), (0.5, 2), (np.pi, 1), (-np.pi, 1))).validate()


def test_spec_rejects_bad_items():
    with pytest.raises(ValueError):
        SpectrumSpec(((0.1, 0),))
    with pytest.raises(ValueError):
        SpectrumSpec(())


def test_parse_spectrum():
    spec = parse_spectrum("# comment\n0.5 2  # trailing\n\n-1.0 1\n", seed=4)
    assert spec.items == ((0.5, 2), (-1.0, 1))
    assert spec.n == 3 and spec.seed == 4
    with pytest.raises(ValueError, match="line 1"):
        parse_spectrum("abc")
    with pytest.raises(ValueError):
        parse_spectrum("0.1 2 3")


def test_taxonomy_covers_degeneracy_sources():
    def has(spec, pred):
        return any(pred(t, m) for t, m in spec.items)

    rep = TAXONOMY["repeated_nonreal"]
    assert has(rep, lambda t, m: m > 1 and np.sin(t) != 0)
    real = TAXONOMY["real_pm1"]
    assert has(real, lambda t, m: t == 0) and has(real, lambda t, m: t == np.pi)
    conj = dict(TAXONOMY["conjugate_asymmetric"].items)
    assert any(-t in conj and conj[-t] != m for t, m in conj.items())


def test_random_mixing_condition_bound():
    rng = np.random.default_rng(0)
    for m in (1, 2, 5):
        C = random_mixing(m, 1e3, rng)
        assert np.linalg.cond(C) <= 1e3 * (1 + 1e-10)
    with pytest.raises(ValueError):
        random_mixing(2, 0.5, rng)


def _decomposition(spec):
    planted = planted_unitary(spec)
    M = embed(planted.U)
    return M, real_normal_eig(M)


def test_scramble_preserves_residual_and_spans():
    M, E = _decomposition(TAXONOMY["mixed"])
    groups = group_eigenvalues(E)
    S = scramble_eigenbasis(E, groups, 1e3, seed=5)
    assert_array_equal(S.sigma, E.sigma)
    # each column keeps its eigenvalue equation, so the residual stays at rounding level
    assert eig_residual(M, S) <= max(1e-12, 1e-12 * np.linalg.norm(S.Z))
    for g in groups:
        a, _ = np.linalg.qr(E.Z[:, g.indices])
        b, _ = np.linalg.qr(S.Z[:, g.indices])
        assert largest_principal_angle(a, b) <= 1e-10


def test_scramble_unit_bound_is_phase_only():
    _, E = _decomposition(SpectrumSpec(((0.3, 1), (1.4, 1), (-2.5, 1)), seed=2))
    groups = group_eigenvalues(E)
    assert all(g.m_M == 1 for g in groups)
    S = scramble_eigenbasis(E, groups, 1.0, seed=9)
    ratio = S.Z / E.Z
    for k in range(E.dim):
        col = ratio[:, k][np.abs(E.Z[:, k]) > 1e-8]
        assert np.allclose(col, col[0], atol=1e-12)
        assert abs(abs(col[0]) - 1) <= 1e-12


def test_scramble_rejects_bad_bound():
    _, E = _decomposition(TAXONOMY["mixed"])
    with pytest.raises(ValueError):
        scramble_eigenbasis(E, group_eigenvalues(E), 0.5, seed=0)

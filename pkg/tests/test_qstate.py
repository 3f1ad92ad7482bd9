import numpy as np
import pytest
from scipy.stats import unitary_group

from steerkit import qstate
from steerkit.errors import (BadSubsystem, DimensionMismatch, InvalidBasis, InvalidDensity,
                             NonHermitian, NonUnitTrace, NotPositive)
from steerkit.qstate import (joint_distribution, marginal_distribution, partial_trace, pure_state,
                             validate_density, von_neumann_entropy)


def random_bipartite(rng, da, db, pure=False):
    if pure:
        v = rng.standard_normal(da * db) + 1j * rng.standard_normal(da * db)
        return pure_state(v, [da, db])
    m = qstate.random_mixed_state(da * db, rng).matrix
    return validate_density(m, [da, db])


def random_basis(rng, n):
    return qstate.ObservableBasis(unitary_group.rvs(n, random_state=rng).T)


class TestValidateDensity:
    def test_anticorrelated_is_valid(self, anticorrelated):
        assert anticorrelated.dims == (2, 2)

    def test_maximally_mixed(self):
        assert validate_density(np.eye(2) / 2, [2]).dim == 2

    def test_trace_two(self):
        with pytest.raises(NonUnitTrace) as info:
            validate_density(np.eye(2), [2])
        assert info.value.defect == pytest.approx(1.0)

    def test_non_hermitian(self):
        with pytest.raises(NonHermitian):
            validate_density([[0.5, 0.3], [0.0, 0.5]], [2])

    def test_negative_eigenvalue(self):
        with pytest.raises(NotPositive) as info:
            validate_density(np.diag([1.2, -0.2]), [2])
        assert info.value.defect == pytest.approx(0.2)

    def test_collects_all_violations(self):
        with pytest.raises(InvalidDensity) as info:
            validate_density([[2.0, 1.0], [0.0, -2.0]], [2])
        names = [name for name, _ in info.value.violations]
        assert names == ["NonHermitian", "NonUnitTrace", "NotPositive"]

    def test_dims_must_multiply(self):
        with pytest.raises(DimensionMismatch):
            validate_density(np.eye(4) / 4, [2, 3])

    def test_dimension_limits(self):
        with pytest.raises(DimensionMismatch):
            validate_density(np.eye(65) / 65, [65])


class TestPartialTrace:
    def test_anticorrelated(self, anticorrelated):
        np.testing.assert_allclose(partial_trace(anticorrelated, 1).matrix, np.eye(2) / 2, atol=1e-15)
        np.testing.assert_allclose(partial_trace(anticorrelated, 0).matrix, np.eye(2) / 2, atol=1e-15)

    def test_product(self, upup):
        np.testing.assert_allclose(partial_trace(upup, 0).matrix, [[1, 0], [0, 0]], atol=1e-15)

    def test_singlet(self, singlet):
        np.testing.assert_allclose(partial_trace(singlet, 1).matrix, np.eye(2) / 2, atol=1e-15)

    def test_matches_explicit_sum(self, rng):
        # oracle: Tr_A rho = sum_i (<i| x I) rho (|i> x I)
        rho = random_bipartite(rng, 3, 2)
        expected = np.zeros((2, 2), complex)
        for i in range(3):
            e = np.zeros((3, 1))
            e[i] = 1
            k = np.kron(e, np.eye(2))
            expected += k.T @ rho.matrix @ k
        np.testing.assert_allclose(partial_trace(rho, 1).matrix, expected, atol=1e-14)

    def test_tripartite_middle(self, rng):
        a = qstate.random_mixed_state(2, rng)
        b = qstate.random_mixed_state(3, rng)
        c = qstate.random_mixed_state(2, rng)
        rho = qstate.tensor(a, b, c)
        np.testing.assert_allclose(partial_trace(rho, 1).matrix, b.matrix, atol=1e-14)

    def test_bad_index(self, anticorrelated):
        with pytest.raises(BadSubsystem):
            partial_trace(anticorrelated, 2)

    def test_trace_preserved(self, rng):
        for _ in range(200):
            da, db = rng.integers(2, 5, size=2)
            rho = random_bipartite(rng, int(da), int(db))
            for keep in (0, 1):
                assert np.trace(partial_trace(rho, keep).matrix).real == pytest.approx(1.0, abs=1e-12)


class TestBornRule:
    def test_mixture_z_table(self, anticorrelated, sz):
        np.testing.assert_allclose(joint_distribution(anticorrelated, sz, sz).table,
                                   [[0, 0.5], [0.5, 0]], atol=1e-15)

    def test_mixture_x_table(self, anticorrelated, sx):
        np.testing.assert_allclose(joint_distribution(anticorrelated, sx, sx).table,
                                   np.full((2, 2), 0.25), atol=1e-15)

    def test_upup(self, upup, sz):
        np.testing.assert_allclose(joint_distribution(upup, sz, sz).table, [[1, 0], [0, 0]], atol=1e-15)

    @pytest.mark.parametrize("state, axis, expected", [
        (np.eye(2) / 2, "z", [0.5, 0.5]),
        ([[1, 0], [0, 0]], "x", [0.5, 0.5]),
        ([[1, 0], [0, 0]], "z", [1.0, 0.0]),
    ])
    def test_marginal_examples(self, state, axis, expected):
        p = marginal_distribution(validate_density(state, [2]), qstate.pauli_basis(axis))
        np.testing.assert_allclose(p, expected, atol=1e-15)

    def test_dimension_mismatch(self, anticorrelated, sz):
        with pytest.raises(DimensionMismatch):
            joint_distribution(anticorrelated, sz, qstate.computational_basis(3))
        with pytest.raises(DimensionMismatch):
            marginal_distribution(anticorrelated, sz)

    def test_joint_marginals_match_reduced_states(self, rng):
        for _ in range(200):
            da, db = (int(x) for x in rng.integers(2, 5, size=2))
            rho = random_bipartite(rng, da, db)
            ba, bb = random_basis(rng, da), random_basis(rng, db)
            d = joint_distribution(rho, ba, bb)
            pa = marginal_distribution(partial_trace(rho, 0), ba)
            pb = marginal_distribution(partial_trace(rho, 1), bb)
            assert np.abs(d.marginal("A") - pa).max() <= 1e-10
            assert np.abs(d.marginal("B") - pb).max() <= 1e-10


class TestVonNeumann:
    def test_examples(self):
        assert von_neumann_entropy(validate_density(np.eye(2) / 2)) == pytest.approx(1.0, abs=1e-12)
        assert von_neumann_entropy(validate_density(np.diag([0.5, 0.25, 0.25]))) == pytest.approx(1.5, abs=1e-12)

    def test_pure_is_zero(self, rng):
        for n in (2, 3, 5):
            assert von_neumann_entropy(qstate.random_pure_state(n, rng)) == pytest.approx(0.0, abs=1e-12)

    def test_range(self, rng):
        for n in (2, 3, 4, 8):
            s = von_neumann_entropy(qstate.random_mixed_state(n, rng))
            assert 0 <= s <= np.log2(n) + 1e-12

    def test_unitary_invariance(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 7))
            rho = qstate.random_mixed_state(n, rng)
            u = unitary_group.rvs(n, random_state=rng)
            rotated = validate_density(u @ rho.matrix @ u.conj().T, [n])
            assert von_neumann_entropy(rotated) == pytest.approx(von_neumann_entropy(rho), abs=1e-9)

    def test_schmidt_symmetry(self, rng):
        for _ in range(200):
            da, db = (int(x) for x in rng.integers(2, 6, size=2))
            rho = random_bipartite(rng, da, db, pure=True)
            sa = von_neumann_entropy(partial_trace(rho, 0))
            sb = von_neumann_entropy(partial_trace(rho, 1))
            assert sa == pytest.approx(sb, abs=1e-9)


class TestBases:
    def test_rejects_non_orthonormal(self):
        with pytest.raises(InvalidBasis):
            qstate.ObservableBasis([[1, 0], [1, 1]])

    def test_fourier_is_mub_with_computational(self):
        for n in (2, 3, 5):
            f = qstate.fourier_basis(n)
            overlaps = np.abs(qstate.computational_basis(n).vectors.conj() @ f.vectors.T) ** 2
            np.testing.assert_allclose(overlaps, 1 / n, atol=1e-14)

    def test_random_mub_pair(self, rng):
        q, r = qstate.random_mub_pair(4, rng)
        np.testing.assert_allclose(np.abs(q.vectors.conj() @ r.vectors.T) ** 2, 0.25, atol=1e-12)

    def test_ppt(self, anticorrelated, singlet):
        assert qstate.is_ppt(anticorrelated)
        assert not qstate.is_ppt(singlet)

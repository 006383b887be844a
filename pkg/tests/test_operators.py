import numpy as np
import pytest

from qentro.errors import DimMismatch, NotHermitian, NotPositive
from qentro.operators import (
    HermitianOperator,
    PositiveOperator,
    partial_trace,
    spectrum,
    tensor,
    validate_positive,
)
from qentro.sampling import random_complex, random_hermitian, rng_for

from .conftest import bell_state, random_density
from .oracles import partial_trace_index_sum


class TestHermitianOperator:
    def test_symmetrizes_within_tolerance(self):
        m = np.array([[1.0, 0.5 + 1e-12j], [0.5, 2.0]])
        op = HermitianOperator(m)
        assert np.allclose(op.matrix, op.matrix.conj().T)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            HermitianOperator([[0.0, 1.0], [0.0, 0.0]])

    def test_rejects_non_square(self):
        with pytest.raises(DimMismatch):
            HermitianOperator(np.zeros((2, 3)))


class TestValidatePositive:
    def test_identity(self):
        op = validate_positive(HermitianOperator(np.eye(2)))
        assert op.trace == pytest.approx(2.0, abs=1e-12)

    def test_indefinite_rejected(self):
        with pytest.raises(NotPositive):
            validate_positive(HermitianOperator(np.diag([1.0, -1.0])))

    def test_clipping_rule(self):
        op = validate_positive(HermitianOperator(np.diag([0.5, -1e-14])))
        assert op.trace == pytest.approx(0.5, abs=1e-12)
        assert op.eigenvalues.min() == 0.0
        assert np.allclose(op.matrix, np.diag([0.5, 0.0]), atol=1e-12)

    def test_membership_predicates(self):
        state = PositiveOperator.maximally_mixed(3)
        assert state.is_state and state.is_subnormalized
        sub = PositiveOperator.from_matrix(0.5 * np.eye(2) / 2)
        assert sub.is_subnormalized and not sub.is_state

    @pytest.mark.parametrize("dim", [2, 4, 6])
    def test_random_positive_invariants(self, rng, dim):
        for _ in range(20):
            op = random_density(rng, dim)
            assert op.eigenvalues.min() >= 0.0
            assert abs(op.trace - op.eigenvalues.sum()) <= 1e-10


class TestPartialTrace:
    def test_bell_marginal(self):
        reduced = partial_trace(bell_state(), (2, 2), "A")
        assert np.allclose(reduced.matrix, np.eye(2) / 2, atol=1e-12)

    def test_product_state(self, rng):
        a = random_density(rng, 2)
        b = random_density(rng, 3)
        prod = PositiveOperator.from_matrix(np.kron(a.matrix, b.matrix))
        assert np.allclose(partial_trace(prod, (2, 3), "A").matrix, a.matrix, atol=1e-10)
        assert np.allclose(partial_trace(prod, (2, 3), "B").matrix, b.matrix, atol=1e-10)

    def test_against_index_sum_oracle(self, rng):
        for _ in range(10):
            op = random_density(rng, 4)
            for keep in ("A", "B"):
                expected = partial_trace_index_sum(op.matrix, 2, 2, keep)
                got = partial_trace(op, (2, 2), keep)
                assert np.allclose(got.matrix, expected, atol=1e-12)
                assert got.trace == pytest.approx(op.trace, abs=1e-12)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            partial_trace(PositiveOperator.maximally_mixed(4), (3, 2), "A")


class TestTensor:
    def test_identity(self):
        t = tensor(HermitianOperator(np.eye(2)), HermitianOperator(np.eye(2)))
        assert np.allclose(t.matrix, np.eye(4))

    def test_basis_bookkeeping(self):
        t = tensor(HermitianOperator(np.diag([1.0, 0.0])), HermitianOperator(np.diag([0.0, 1.0])))
        assert np.allclose(t.matrix, np.diag([0.0, 1.0, 0.0, 0.0]))

    def test_partial_trace_adjointness(self, rng):
        a = random_density(rng, 2)
        b = random_density(rng, 2)
        prod = PositiveOperator.from_matrix(np.kron(a.matrix, b.matrix))
        back = partial_trace(prod, (2, 2), "A")
        assert np.allclose(back.matrix, a.matrix * b.trace, atol=1e-10)
        # Tr[(X ox I) C] = Tr[X Tr_B C] for random X, C
        for _ in range(10):
            x = random_hermitian(rng, 3)
            c = random_density(rng, 6)
            lhs = np.trace(np.kron(x.matrix, np.eye(2)) @ c.matrix)
            rhs = np.trace(x.matrix @ partial_trace(c, (3, 2), "A").matrix)
            assert abs(lhs - rhs) <= 1e-9


class TestSpectrum:
    def test_diagonal_sorted(self):
        spec = spectrum(HermitianOperator(np.diag([0.2, 0.7, 0.1])))
        assert np.allclose(spec.eigenvalues, [0.7, 0.2, 0.1])

    def test_rank_one_projector(self):
        spec = spectrum(bell_state().base)
        assert np.allclose(spec.eigenvalues, [1.0, 0.0, 0.0, 0.0], atol=1e-12)

    def test_trace_identity(self, rng):
        op = random_hermitian(rng, 5)
        spec = spectrum(op)
        assert spec.eigenvalues.sum() == pytest.approx(np.trace(op.matrix).real, abs=1e-10)

    def test_reconstruction_error(self, rng):
        for _ in range(10):
            op = random_hermitian(rng, 8)
            spec = spectrum(op)
            assert float(np.max(np.abs(spec.reconstruct() - op.matrix))) <= 1e-9

    def test_degenerate_ordering_deterministic(self):
        op = HermitianOperator(np.eye(4) * 0.25)
        s1 = spectrum(op)
        s2 = spectrum(op)
        assert np.array_equal(s1.eigenvectors, s2.eigenvectors)


@pytest.fixture
def rng():
    return rng_for(11)

import math

import numpy as np
import pytest

from qentro.capacity import (
    ConstraintSet,
    Ensemble,
    eof,
    eof_local_operation_probe,
    holevo_capacity,
    holevo_quantity,
    optimal_ensemble_report,
)
from qentro.channels import (
    KrausOperation,
    apply,
    dephasing_channel,
    depolarizing_channel,
    identity_channel,
)
from qentro.continuity import divergence_center
from qentro.entropy import output_entropy, quantum_entropy
from qentro.errors import (
    BadDistribution,
    InfeasibleConstraint,
    ScaleExceeded,
    VanishingOutput,
)
from qentro.operators import HermitianOperator, PositiveOperator
from qentro.sampling import haar_unitary, random_kraus_set, random_pure_state, rng_for

from .conftest import bell_state, random_density
from .oracles import h2_scalar, wootters_eof_nats


@pytest.fixture
def rng():
    return rng_for(71)


def basis_state(index, dim=2):
    v = np.zeros(dim)
    v[index] = 1.0
    return PositiveOperator.pure(v)


class TestEnsemble:
    def test_barycenter(self, rng):
        a = random_density(rng, 2)
        b = random_density(rng, 2)
        ens = Ensemble(((0.25, a), (0.75, b)))
        expected = 0.25 * a.matrix + 0.75 * b.matrix
        assert np.allclose(ens.barycenter().matrix, expected, atol=1e-12)

    def test_weight_validation(self, rng):
        a = random_density(rng, 2)
        with pytest.raises(BadDistribution):
            Ensemble(((0.5, a), (0.4, a)))


class TestHolevoQuantity:
    def test_singleton_zero(self, rng):
        ens = Ensemble(((1.0, random_density(rng, 2)),))
        assert holevo_quantity(identity_channel(2), ens) == pytest.approx(0.0, abs=1e-10)

    def test_orthogonal_pure_states(self):
        ens = Ensemble(((0.5, basis_state(0)), (0.5, basis_state(1))))
        assert holevo_quantity(identity_channel(2), ens) == pytest.approx(
            math.log(2.0), abs=1e-10
        )

    def test_dephasing_x_basis_two_routes(self):
        p = 0.3
        phi = dephasing_channel(p)
        plus = PositiveOperator.pure(np.array([1.0, 1.0]) / math.sqrt(2.0))
        minus = PositiveOperator.pure(np.array([1.0, -1.0]) / math.sqrt(2.0))
        ens = Ensemble(((0.5, plus), (0.5, minus)))
        chi = holevo_quantity(phi, ens)
        assert chi == pytest.approx(math.log(2.0) - h2_scalar(p), abs=1e-10)
        # entropy-difference route must agree for channels
        avg = apply(phi, ens.barycenter())
        diff = quantum_entropy(avg) - 0.5 * (
            output_entropy(phi, plus) + output_entropy(phi, minus)
        )
        assert chi == pytest.approx(diff, abs=1e-9)

    def test_entropy_difference_identity_random(self, rng):
        phi = KrausOperation(random_kraus_set(rng, 2, 3, 2))
        states = [random_density(rng, 2) for _ in range(3)]
        weights = rng.dirichlet(np.ones(3))
        ens = Ensemble(tuple((float(w), s) for w, s in zip(weights, states)))
        chi = holevo_quantity(phi, ens)
        avg = apply(phi, ens.barycenter())
        diff = quantum_entropy(avg) - sum(
            w * output_entropy(phi, s) for w, s in ens.parts
        )
        assert chi == pytest.approx(diff, abs=1e-9)

    def test_nonnegative_and_zero_iff_constant(self, rng):
        rho = random_density(rng, 2)
        ens = Ensemble(((0.5, rho), (0.5, rho)))
        assert holevo_quantity(identity_channel(2), ens) == pytest.approx(0.0, abs=1e-10)


class TestHolevoCapacity:
    def test_identity_qubit(self):
        sol = holevo_capacity(identity_channel(2), restarts=8, seed=3)
        assert sol.value == pytest.approx(math.log(2.0), abs=1e-6)
        assert sol.bound_direction == "lower"

    def test_dephasing(self):
        sol = holevo_capacity(dephasing_channel(0.25), restarts=8, seed=3)
        assert sol.value == pytest.approx(math.log(2.0), abs=1e-6)

    def test_depolarizing_closed_form(self):
        sol = holevo_capacity(depolarizing_channel(0.25), restarts=8, seed=3)
        expected = math.log(2.0) - h2_scalar(0.125)
        assert sol.value == pytest.approx(expected, abs=1e-6)

    def test_dimension_ceiling(self, rng):
        phi = KrausOperation(random_kraus_set(rng, 2, 2, 3))
        sol = holevo_capacity(phi, restarts=4, seed=1)
        assert sol.value <= math.log(2.0) + 1e-9

    def test_monotone_in_m(self):
        phi = depolarizing_channel(0.35)
        values = [
            holevo_capacity(phi, m=m, restarts=4, seed=5).value for m in (1, 2, 4)
        ]
        for small, large in zip(values, values[1:]):
            assert large >= small - 1e-9

    def test_mean_observable_constraint_active(self):
        # steeply priced |1> direction: the average must tilt toward |0>
        h = HermitianOperator(np.diag([0.0, 1.0]))
        constraint = ConstraintSet.mean_observable(h, 0.2)
        phi = identity_channel(2)
        sol = holevo_capacity(phi, constraint, restarts=6, seed=11)
        avg = sol.ensemble.barycenter()
        assert float(np.real(np.trace(avg.matrix @ h.matrix))) <= 0.2 + 1e-9
        unconstrained = holevo_capacity(phi, restarts=6, seed=11).value
        assert sol.value <= unconstrained + 1e-9
        # still beats the trivial singleton
        assert sol.value > 0.1

    def test_infeasible_constraint(self):
        h = HermitianOperator(np.diag([0.5, 1.0]))
        with pytest.raises(InfeasibleConstraint):
            ConstraintSet.mean_observable(h, 0.2)

    def test_fixed_barycenter_identity_channel(self, rng):
        rho = random_density(rng, 2)
        sol = holevo_capacity(
            identity_channel(2),
            ConstraintSet.fixed_barycenter(rho),
            restarts=6,
            seed=2,
        )
        # pure decompositions of rho make chi = H(rho) exactly
        assert sol.value == pytest.approx(quantum_entropy(rho), abs=1e-7)
        assert np.allclose(sol.ensemble.barycenter().matrix, rho.matrix, atol=1e-8)

    def test_scale_guard(self):
        with pytest.raises(ScaleExceeded):
            holevo_capacity(identity_channel(5))


class TestOptimalEnsembleReport:
    def test_identity_solution_equal_distances(self):
        sol = holevo_capacity(identity_channel(2), restarts=6, seed=3)
        report = optimal_ensemble_report(phi=identity_channel(2), constraint=None, solution=sol)
        assert report.max_deviation <= 1e-4
        assert not report.flagged
        for d in report.member_divergences:
            assert d == pytest.approx(math.log(2.0), abs=1e-4)

    def test_perturbed_ensemble_flagged(self):
        ens = Ensemble(
            (
                (0.5, basis_state(0)),
                (0.3, basis_state(1)),
                (0.2, PositiveOperator.pure(np.array([1.0, 1.0]) / math.sqrt(2.0))),
            )
        )
        from qentro.capacity import HolevoSolution

        fake = HolevoSolution(holevo_quantity(identity_channel(2), ens), ens, 1)
        report = optimal_ensemble_report(identity_channel(2), None, fake)
        assert report.flagged


class TestEoF:
    def test_product_pure_zero(self):
        omega = PositiveOperator.pure(np.array([1.0, 0.0, 0.0, 0.0]))
        assert eof(omega, (2, 2), restarts=3, seed=1) == pytest.approx(0.0, abs=1e-9)

    def test_bell_log_two(self):
        assert eof(bell_state(), (2, 2), restarts=5, seed=1) == pytest.approx(
            math.log(2.0), abs=1e-6
        )

    def test_werner_mixture_against_wootters(self):
        omega = PositiveOperator.from_matrix(
            0.8 * bell_state().matrix + 0.2 * np.eye(4) / 4.0
        )
        value = eof(omega, (2, 2), restarts=10, seed=1)
        assert value == pytest.approx(wootters_eof_nats(omega.matrix), abs=1e-3)

    def test_local_unitary_invariance(self, rng):
        omega = PositiveOperator.from_matrix(
            0.7 * bell_state().matrix + 0.3 * np.eye(4) / 4.0
        )
        u = np.kron(haar_unitary(rng, 2), haar_unitary(rng, 2))
        rotated = PositiveOperator.from_matrix(u @ omega.matrix @ u.conj().T)
        v1 = eof(omega, (2, 2), restarts=8, seed=4)
        v2 = eof(rotated, (2, 2), restarts=8, seed=4)
        assert v1 == pytest.approx(v2, abs=1e-6)

    def test_monotone_non_increasing_in_m(self):
        omega = PositiveOperator.from_matrix(
            0.6 * bell_state().matrix + 0.4 * np.eye(4) / 4.0
        )
        values = [eof(omega, (2, 2), m=m, restarts=6, seed=9) for m in (4, 8, 16)]
        for small_m, large_m in zip(values, values[1:]):
            assert large_m <= small_m + 1e-9

    def test_scale_guard(self, rng):
        with pytest.raises(ScaleExceeded):
            eof(random_density(rng, 18), (3, 6))


class TestEoFLocalProbe:
    def test_identity_pair_unchanged(self):
        before, after, trace = eof_local_operation_probe(
            bell_state(), (2, 2), identity_channel(2), identity_channel(2), restarts=4, seed=2
        )
        assert trace == pytest.approx(1.0, abs=1e-10)
        assert after == pytest.approx(before, abs=1e-6)

    def test_local_unitary_on_bell(self, rng):
        u = KrausOperation([haar_unitary(rng, 2)])
        before, after, trace = eof_local_operation_probe(
            bell_state(), (2, 2), u, identity_channel(2), restarts=4, seed=2
        )
        assert before == pytest.approx(math.log(2.0), abs=1e-6)
        assert after == pytest.approx(math.log(2.0), abs=1e-6)
        assert trace == pytest.approx(1.0, abs=1e-10)

    def test_projective_filter_renormalizes(self):
        keep = KrausOperation([np.diag([1.0, 0.0]).astype(complex)])
        before, after, trace = eof_local_operation_probe(
            bell_state(), (2, 2), keep, identity_channel(2), restarts=4, seed=2
        )
        assert trace == pytest.approx(0.5, abs=1e-10)
        # filtered Bell collapses to a product state
        assert after == pytest.approx(0.0, abs=1e-8)

    def test_vanishing_output(self):
        annihilate = KrausOperation([np.zeros((2, 2), dtype=complex) + np.diag([1e-8, 0.0])])
        with pytest.raises(VanishingOutput):
            eof_local_operation_probe(
                basis_state(1, 2).__class__.pure(np.array([0.0, 1.0, 0.0, 0.0])),
                (2, 2),
                annihilate,
                KrausOperation([np.diag([0.0, 1.0]).astype(complex)]),
                restarts=2,
            )


class TestCrossModule:
    def test_divergence_radius_equals_holevo_quantity(self, rng):
        # symmetric pair: equal-purity states mirrored about the z axis
        theta = 0.7
        up = PositiveOperator.pure(np.array([math.cos(theta), math.sin(theta)]))
        down = PositiveOperator.pure(np.array([math.cos(theta), -math.sin(theta)]))
        center = divergence_center([up, down], tol=1e-9)
        ens = Ensemble(((0.5, up), (0.5, down)))
        chi = holevo_quantity(identity_channel(2), ens)
        assert center.radius == pytest.approx(chi, abs=1e-6)

"""Entropy functionals on the positive cone, plus inequality checkers.

The quantum entropy used throughout is the cone extension
H(A) = sum eta(lambda_i) - eta(sum lambda_i) over the eigenvalues of A, which
reduces to the von Neumann entropy on states. The classical entropy applies
the same formula to nonnegative weight sequences. All logarithms are natural;
base conversion happens only at CLI output formatting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channels
from .errors import DimMismatch, DomainError, HypothesisViolated
from .operators import TOL_PSD, PositiveOperator

# Trace mass of A outside the numerical support of B above which the
# relative entropy is declared infinite. Structural violations in practice
# are O(1); this only filters rounding-level leakage.
SUPPORT_LEAK_TOL = 1e-9


class _InfiniteEntropy:
    """Tag for an infinite extended-real entropy value.

    Used when supp A is not contained in supp B in the relative entropy;
    a structural condition, so it is never encoded as a float sentinel.
    Orders above every float and converts to math.inf on demand.
    """

    __slots__ = ()

    def __repr__(self):
        return "INFINITE_ENTROPY"

    def __float__(self):
        return math.inf

    def __gt__(self, other):
        return not isinstance(other, _InfiniteEntropy)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _InfiniteEntropy)


INFINITE_ENTROPY = _InfiniteEntropy()


def is_infinite(value) -> bool:
    return isinstance(value, _InfiniteEntropy)


def eta(x: float) -> float:
    """The function eta(x) = -x ln x, extended by continuity with eta(0) = 0."""
    if x < 0.0:
        raise DomainError(f"eta undefined for negative argument {x}")
    if x == 0.0:
        return 0.0
    return -x * math.log(x)


def _eta_sum(values: np.ndarray) -> float:
    """Sum of eta over an array, treating entries below TOL_PSD as zeros."""
    v = values[values > TOL_PSD]
    if v.size == 0:
        return 0.0
    return float(-np.sum(v * np.log(v)))


def entropy_from_eigenvalues(eigs: np.ndarray) -> float:
    """Cone entropy from a nonnegative eigenvalue array; hot-path helper."""
    total = float(np.sum(eigs))
    if total <= TOL_PSD:
        return 0.0
    return _eta_sum(eigs) - eta(total)


def quantum_entropy(a: PositiveOperator) -> float:
    """Cone-extended entropy H(A); homogeneous of degree one and concave."""
    return entropy_from_eigenvalues(a.eigenvalues)


def classical_entropy(weights) -> float:
    """Entropy of a nonnegative weight sequence; Shannon entropy when it sums to 1."""
    w = np.asarray(weights, dtype=float)
    if w.size and w.min() < -1e-12:
        raise DomainError(f"negative weight {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    return entropy_from_eigenvalues(w)


def binary_h2(x: float) -> float:
    """h2(x) = eta(x) + eta(1-x), symmetric about 1/2 with maximum ln 2."""
    if x < -1e-12 or x > 1.0 + 1e-12:
        raise DomainError(f"binary entropy argument {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return eta(x) + eta(1.0 - x)


def relative_entropy(a: PositiveOperator, b: PositiveOperator):
    """Relative entropy H(A||B) = Tr[A ln A - A ln B + B - A] on the cone.

    Returns the tagged :data:`INFINITE_ENTROPY` value when the support of A
    leaks outside the numerical support of B (eigenvalues above TOL_PSD) by
    more than ``SUPPORT_LEAK_TOL`` in trace mass.
    """
    if a.dim != b.dim:
        raise DimMismatch(f"operands of dim {a.dim} and {b.dim}")
    b_spec = b.spectrum()
    b_vals = b_spec.eigenvalues
    b_vecs = b_spec.eigenvectors
    support = b_vals > TOL_PSD
    if not support.all():
        kernel = b_vecs[:, ~support]
        leak = float(np.real(np.einsum("ij,jk,ki->", kernel.conj().T, a.matrix, kernel)))
        if leak > SUPPORT_LEAK_TOL * max(1.0, a.trace):
            return INFINITE_ENTROPY
    a_vals = a.eigenvalues
    a_term = float(np.sum(a_vals[a_vals > TOL_PSD] * np.log(a_vals[a_vals > TOL_PSD])))
    vs = b_vecs[:, support]
    weights = np.real(np.einsum("ij,jk,ki->i", vs.conj().T, a.matrix, vs))
    cross = float(np.sum(weights * np.log(b_vals[support])))
    return a_term - cross + b.trace - a.trace


def output_entropy(phi: channels.KrausOperation, a: PositiveOperator) -> float:
    """Entropy of the operation output, H(phi(A))."""
    if a.dim != phi.dim_in:
        raise DimMismatch(f"state dim {a.dim} != operation input dim {phi.dim_in}")
    return quantum_entropy(channels.apply(phi, a))


def coherent_information(phi: channels.KrausOperation, rho: PositiveOperator) -> float:
    """Difference between output entropy and environment-output entropy.

    Vanishes on pure inputs, where the two entropies coincide.
    """
    if rho.dim != phi.dim_in:
        raise DimMismatch(f"state dim {rho.dim} != operation input dim {phi.dim_in}")
    env = PositiveOperator.from_matrix(channels.environment_output(phi, rho.matrix))
    return output_entropy(phi, rho) - entropy_from_eigenvalues(env.eigenvalues)


# ---------------------------------------------------------------------------
# Inequality checkers. Each one evaluates both sides numerically and reports
# the slack; they double as oracles for the randomized property suites.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    slack: float  # rhs - lhs; pass means slack >= -tol
    passed: bool
    certified: bool = True
    note: str = ""


def _report(name: str, lhs: float, rhs: float, tol: float) -> InequalityReport:
    slack = rhs - lhs
    return InequalityReport(name, lhs, rhs, slack, slack >= -tol)


def sandwich_bound_check(
    a: PositiveOperator, b: PositiveOperator, tol: float = 1e-9
) -> tuple[InequalityReport, InequalityReport]:
    """Two-sided bound H(A) + H(B-A) <= H(B) <= H(A) + H(B-A) + Tr(B) h2(TrA/TrB).

    Requires A <= B; raises :class:`HypothesisViolated` otherwise.
    """
    if a.dim != b.dim:
        raise DimMismatch("operands of different dimension")
    gap_eigs = np.linalg.eigvalsh(b.matrix - a.matrix)
    if gap_eigs.min() < -1e-9:
        raise HypothesisViolated(f"B - A has eigenvalue {gap_eigs.min():.3e}")
    diff = PositiveOperator.from_matrix(b.matrix - a.matrix, tol_psd=1e-9)
    split = quantum_entropy(a) + quantum_entropy(diff)
    middle = quantum_entropy(b)
    mix_term = b.trace * binary_h2(a.trace / b.trace) if b.trace > TOL_PSD else 0.0
    return (
        _report("sandwich_lower", split, middle, tol),
        _report("sandwich_upper", middle, split + mix_term, tol),
    )


def mixing_bound_check(
    weights, ops: list[PositiveOperator], tol: float = 1e-9
) -> tuple[InequalityReport, InequalityReport]:
    """Convex-mixing bound: sum l_i H(A_i) <= H(sum l_i A_i) <= ... + H({l_i}).

    The operators must lie in the trace-<=1 ball and the weights must form a
    probability distribution.
    """
    lam = np.asarray(weights, dtype=float)
    if lam.min() < -1e-12 or abs(lam.sum() - 1.0) > 1e-9:
        raise HypothesisViolated("weights are not a probability distribution")
    for op in ops:
        if not op.is_subnormalized:
            raise HypothesisViolated(f"operator trace {op.trace:.6g} exceeds 1")
    mixture = PositiveOperator.from_matrix(
        sum(l * op.matrix for l, op in zip(lam, ops))
    )
    avg = float(sum(l * quantum_entropy(op) for l, op in zip(lam, ops)))
    mid = quantum_entropy(mixture)
    return (
        _report("mixing_lower", avg, mid, tol),
        _report("mixing_upper", mid, avg + classical_entropy(lam), tol),
    )


def additive_mixing_check(
    ops: list[PositiveOperator], tol: float = 1e-9
) -> tuple[InequalityReport, InequalityReport]:
    """Unweighted sum bound: sum H(A_i) <= H(sum A_i) <= sum H(A_i) + H({Tr A_i})."""
    for op in ops:
        if not op.is_subnormalized:
            raise HypothesisViolated(f"operator trace {op.trace:.6g} exceeds 1")
    total = PositiveOperator.from_matrix(sum(op.matrix for op in ops))
    parts = float(sum(quantum_entropy(op) for op in ops))
    mid = quantum_entropy(total)
    traces = [op.trace for op in ops]
    return (
        _report("additive_lower", parts, mid, tol),
        _report("additive_upper", mid, parts + classical_entropy(traces), tol),
    )


def pinching_bound_check(
    a: PositiveOperator, basis: np.ndarray, tol: float = 1e-9
) -> InequalityReport:
    """H(A) <= classical entropy of the diagonal of A in an orthonormal basis."""
    basis = np.asarray(basis, dtype=complex)
    gram = basis.conj().T @ basis
    if float(np.max(np.abs(gram - np.eye(basis.shape[1])))) > 1e-9:
        raise HypothesisViolated("basis columns are not orthonormal")
    diag = np.real(np.einsum("ij,jk,ki->i", basis.conj().T, a.matrix, basis))
    return _report("pinching", quantum_entropy(a), classical_entropy(diag), tol)


def triangle_inequality_check(
    c: PositiveOperator, dims: tuple[int, int], tol: float = 1e-9
) -> InequalityReport:
    """H(C) >= |H(Tr_B C) - H(Tr_A C)| for a bipartite positive operator."""
    from .operators import partial_trace

    left = quantum_entropy(partial_trace(c, dims, "A"))
    right = quantum_entropy(partial_trace(c, dims, "B"))
    return _report("triangle", abs(left - right), quantum_entropy(c), tol)


def output_entropy_estimate_check(
    phi: channels.KrausOperation,
    a: PositiveOperator,
    pure_sup: float | None = None,
    tol: float = 1e-9,
) -> InequalityReport:
    """H(phi(A)) <= pure_sup * Tr(A) + H(A), certified only with a known supremum.

    ``pure_sup`` is the supremum of the output entropy over pure inputs. It
    is an optimization in its own right, so when it is not supplied the
    checker refuses to certify rather than silently under-approximate;
    analytic values exist for the identity, dephasing and depolarizing
    constructors (see ``channels.dephasing_pure_entropy_sup`` and
    ``channels.depolarizing_pure_entropy_sup``).
    """
    lhs = output_entropy(phi, a)
    if pure_sup is None:
        return InequalityReport(
            "output_entropy_estimate",
            lhs,
            math.nan,
            math.nan,
            False,
            certified=False,
            note="pure-state supremum unknown; not certified",
        )
    rhs = pure_sup * a.trace + quantum_entropy(a)
    report = _report("output_entropy_estimate", lhs, rhs, tol)
    return report


def vanishing_tail_profile(y_values, x_points: int = 4097) -> list[tuple[float, float]]:
    """sup over x in [0,1] of (x+y) h2(y/(x+y)), tabulated on a y-grid.

    The integrand collapses to the two-point classical entropy of (x, y);
    the supremum tends to zero with y, and the table makes the decay
    inspectable.
    """
    xs = np.linspace(0.0, 1.0, x_points)
    rows = []
    for y in y_values:
        if y < 0.0:
            raise DomainError(f"y must be nonnegative, got {y}")
        best = max(classical_entropy([x, y]) for x in xs)
        rows.append((float(y), best))
    return rows

"""Quantum operations as finite Kraus sets.

A :class:`KrausOperation` is an ordered list of rectangular complex matrices
V_i with sum V_i^* V_i <= I (trace non-increasing); it is a channel when the
sum equals the identity. The module provides application, duals, the
environment-side (complementary) operation, composition, tensor products and
the example-channel constructors.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    BadDistribution,
    DimMismatch,
    NotContraction,
    PovmIncomplete,
)
from .operators import (
    TOL_PSD,
    HermitianOperator,
    PositiveOperator,
    partial_trace_matrix,
    validate_positive,
)

_DEFECT_TOL = 1e-10
_CHANNEL_TOL = 1e-10


class KrausOperation:
    """Quantum operation represented by a finite Kraus set.

    The defect I - sum V_i^* V_i must be positive to within 1e-10, otherwise
    :class:`NotContraction` is raised. ``is_channel`` tests whether the defect
    vanishes (trace preservation). No canonicalization of the Kraus set is
    performed: the operator count is exactly the count supplied, so the
    rank-class of an operation is representation-dependent.
    """

    __slots__ = ("kraus", "dim_in", "dim_out", "_stack", "_defect_eigs")

    def __init__(self, kraus):
        ops = [np.array(k, dtype=complex) for k in kraus]
        if not ops:
            raise BadDistribution("a Kraus set needs at least one operator")
        shape = ops[0].shape
        if len(shape) != 2:
            raise DimMismatch("Kraus operators must be matrices")
        for k in ops:
            if k.shape != shape:
                raise DimMismatch(f"inconsistent Kraus shapes {k.shape} vs {shape}")
        self.dim_out, self.dim_in = shape
        stack = np.stack(ops)
        gram = np.einsum("kca,kcb->ab", stack.conj(), stack)
        defect = np.eye(self.dim_in) - gram
        eigs = np.linalg.eigvalsh(0.5 * (defect + defect.conj().T))
        if eigs.min() < -_DEFECT_TOL:
            raise NotContraction(
                f"Kraus set increases trace: defect eigenvalue {eigs.min():.3e}"
            )
        for k in ops:
            k.setflags(write=False)
        self.kraus = tuple(ops)
        self._stack = stack
        self._defect_eigs = eigs

    @property
    def count(self) -> int:
        return len(self.kraus)

    @property
    def is_channel(self) -> bool:
        return float(np.max(np.abs(self._defect_eigs))) <= _CHANNEL_TOL

    @property
    def stack(self) -> np.ndarray:
        """All Kraus operators as one (count, dim_out, dim_in) array."""
        return self._stack

    def __repr__(self):
        kind = "channel" if self.is_channel else "operation"
        return f"KrausOperation({self.dim_in}->{self.dim_out}, {self.count} ops, {kind})"


class StinespringDilation:
    """Single contraction V into output (x) environment realizing the operation.

    ``matrix`` has shape (dim_out*dim_env, dim_in) with the composite row
    index ordered output-major, matching the tensor convention of
    ``operators.partial_trace``. For channels V is an isometry.
    """

    __slots__ = ("matrix", "dim_in", "dim_out", "dim_env")

    def __init__(self, matrix: np.ndarray, dim_out: int, dim_env: int):
        self.matrix = matrix
        self.dim_out = dim_out
        self.dim_env = dim_env
        self.dim_in = matrix.shape[1]
        matrix.setflags(write=False)

    def output_marginal(self, a: np.ndarray) -> np.ndarray:
        big = self.matrix @ a @ self.matrix.conj().T
        return partial_trace_matrix(big, (self.dim_out, self.dim_env), "A")

    def environment_marginal(self, a: np.ndarray) -> np.ndarray:
        big = self.matrix @ a @ self.matrix.conj().T
        return partial_trace_matrix(big, (self.dim_out, self.dim_env), "B")


def apply_matrix(phi: KrausOperation, a: np.ndarray) -> np.ndarray:
    """Raw-array channel application sum_i V_i A V_i^*; no validation."""
    return np.einsum("kab,bc,kdc->ad", phi._stack, a, phi._stack.conj())


def apply(phi: KrausOperation, a: PositiveOperator) -> PositiveOperator:
    """Apply the operation to a positive operator."""
    if a.dim != phi.dim_in:
        raise DimMismatch(f"state dim {a.dim} != operation input dim {phi.dim_in}")
    return PositiveOperator.from_matrix(apply_matrix(phi, a.matrix))


def dual_matrix_raw(stack: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.einsum("kca,cd,kdb->ab", stack.conj(), x, stack)


def dual_matrix(phi: KrausOperation, x: np.ndarray) -> np.ndarray:
    return dual_matrix_raw(phi._stack, x)


def dual(phi: KrausOperation):
    """Dual (Heisenberg-picture) map X -> sum_i V_i^* X V_i on observables.

    Satisfies Tr[phi(rho) X] = Tr[rho dual(phi)(X)]; for channels the dual is
    unital.
    """

    def dual_map(x: HermitianOperator) -> HermitianOperator:
        if x.dim != phi.dim_out:
            raise DimMismatch(f"observable dim {x.dim} != operation output dim {phi.dim_out}")
        return HermitianOperator(dual_matrix(phi, x.matrix), tol=np.inf)

    return dual_map


def gram_operator(phi: KrausOperation) -> np.ndarray:
    """The operator sum_i V_i^* V_i = dual(phi)(I), acting on the input space."""
    return dual_matrix(phi, np.eye(phi.dim_out, dtype=complex))


def stinespring(phi: KrausOperation) -> StinespringDilation:
    """Stack the Kraus set into the dilation V |x> = sum_i V_i|x> (x) |i>.

    The environment dimension equals the Kraus count.
    """
    env = phi.count
    v = phi._stack.transpose(1, 0, 2).reshape(phi.dim_out * env, phi.dim_in)
    return StinespringDilation(np.ascontiguousarray(v), phi.dim_out, env)


def complement(phi: KrausOperation) -> KrausOperation:
    """Environment-side operation obtained by tracing out the output.

    The k-th Kraus operator of the complement collects row k of every V_i:
    (W_k)[i, m] = (V_i)[k, m]. Its output dimension is the Kraus count of
    ``phi``. The convention is verified against the explicit matrix formula
    of :func:`environment_output` in the test suite rather than trusted.
    """
    ws = phi._stack.transpose(1, 0, 2)  # (dim_out, count, dim_in)
    return KrausOperation([ws[k] for k in range(phi.dim_out)])


def environment_output(phi: KrausOperation, a: np.ndarray) -> np.ndarray:
    """Direct environment marginal sum_ij Tr[V_i A V_j^*] |i><j|.

    Independent route to ``apply(complement(phi), A)``; kept separate so the
    two can cross-check each other.
    """
    # Tr[V_i A V_j^*] = sum_{c,d} (V_i)_{cd} A_{d e} conj(V_j)_{c e}
    return np.einsum("icd,de,jce->ij", phi._stack, a, phi._stack.conj())


def compose(psi: KrausOperation, phi: KrausOperation) -> KrausOperation:
    """Kraus set of psi after phi: all products W_j V_i."""
    if phi.dim_out != psi.dim_in:
        raise DimMismatch(
            f"cannot compose: inner dims {phi.dim_out} vs {psi.dim_in}"
        )
    return KrausOperation([w @ v for w in psi.kraus for v in phi.kraus])


def tensor_op(phi: KrausOperation, psi: KrausOperation) -> KrausOperation:
    """Tensor product operation with Kraus set {V_i (x) W_j}."""
    return KrausOperation([np.kron(v, w) for v in phi.kraus for w in psi.kraus])


def identity_channel(dim: int) -> KrausOperation:
    return KrausOperation([np.eye(dim, dtype=complex)])


def dephasing_channel(p: float) -> KrausOperation:
    """Qubit dephasing {sqrt(1-p) I, sqrt(p) Z}."""
    if not 0.0 <= p <= 1.0:
        raise BadDistribution(f"dephasing weight {p} outside [0, 1]")
    z = np.diag([1.0, -1.0]).astype(complex)
    return KrausOperation([np.sqrt(1.0 - p) * np.eye(2, dtype=complex), np.sqrt(p) * z])


def depolarizing_channel(p: float, dim: int = 2) -> KrausOperation:
    """rho -> (1-p) rho + p Tr(rho) I/dim, via discrete Weyl unitaries."""
    if not 0.0 <= p <= 1.0:
        raise BadDistribution(f"depolarizing weight {p} outside [0, 1]")
    omega = np.exp(2j * np.pi / dim)
    shift = np.roll(np.eye(dim, dtype=complex), 1, axis=0)
    clock = np.diag(omega ** np.arange(dim))
    kraus = []
    for a in range(dim):
        for b in range(dim):
            u = np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
            w = 1.0 - p + p / dim**2 if (a, b) == (0, 0) else p / dim**2
            kraus.append(np.sqrt(w) * u)
    return KrausOperation(kraus)


def depolarizing_pure_entropy_sup(p: float, dim: int = 2) -> float:
    """Output entropy of the depolarizing channel on any pure state.

    By unitary covariance this single value is the supremum over pure inputs.
    """
    from .entropy import eta

    return eta(1.0 - p + p / dim) + (dim - 1) * eta(p / dim)


def dephasing_pure_entropy_sup(p: float) -> float:
    """Supremum of the dephasing output entropy over pure inputs (at |+>)."""
    from .entropy import binary_h2

    return binary_h2(min(p, 1.0 - p))


def group_average_channel(
    group_unitaries,
    povm,
    sigma: PositiveOperator,
    atol: float = 1e-9,
) -> KrausOperation:
    """Measure-and-prepare map rho -> sum_g V_g sigma V_g^* Tr(rho M_g).

    ``group_unitaries[g]`` pairs with ``povm[g]``. Kraus factors are built
    from eigendecompositions of the prepared states and POVM elements; they
    come out rank-1 but no rank-1 representation is promised by the contract.
    Raises :class:`PovmIncomplete` when sum M_g deviates from the identity.
    """
    us = [np.asarray(u, dtype=complex) for u in group_unitaries]
    ms = [np.asarray(m, dtype=complex) for m in povm]
    if len(us) != len(ms):
        raise DimMismatch("one POVM element per group unitary is required")
    d_in = ms[0].shape[0]
    total = sum(ms)
    if float(np.max(np.abs(total - np.eye(d_in)))) > atol:
        raise PovmIncomplete("POVM elements do not sum to the identity")
    if not sigma.is_state:
        raise BadDistribution(f"sigma must be a state, trace {sigma.trace:.6g}")
    kraus = []
    for u, m in zip(us, ms):
        prepared = validate_positive(HermitianOperator(u @ sigma.matrix @ u.conj().T, tol=np.inf))
        m_op = validate_positive(HermitianOperator(m, tol=atol), tol_psd=atol)
        s_vals = prepared.eigenvalues
        s_vecs = prepared.spectrum().eigenvectors
        t_vals = m_op.eigenvalues
        t_vecs = m_op.spectrum().eigenvectors
        for a in range(s_vals.size):
            if s_vals[a] <= TOL_PSD:
                continue
            for b in range(t_vals.size):
                if t_vals[b] <= TOL_PSD:
                    continue
                factor = np.sqrt(s_vals[a] * t_vals[b]) * np.outer(
                    s_vecs[:, a], t_vecs[:, b].conj()
                )
                kraus.append(factor)
    return KrausOperation(kraus)


def uniform_average_state(group_unitaries, sigma: PositiveOperator) -> PositiveOperator:
    """Equal-weight average (1/|G|) sum_g V_g sigma V_g^* over the group."""
    us = [np.asarray(u, dtype=complex) for u in group_unitaries]
    acc = sum(u @ sigma.matrix @ u.conj().T for u in us) / len(us)
    return PositiveOperator.from_matrix(acc)


def random_phase_channel(
    phases,
    dim: int,
    grid=None,
    half_width: float = 1.0,
) -> KrausOperation:
    """Random-unitary channel mixing diagonal phase unitaries.

    ``phases`` is a list of (t_k, p_k) pairs with the p_k a probability
    distribution; each unitary is U_k = diag(exp(-i t_k x_m)) over the grid
    points x_m, defaulting to ``dim`` points evenly spaced on
    [-half_width, half_width].
    """
    ts = np.array([t for t, _ in phases], dtype=float)
    ps = np.array([p for _, p in phases], dtype=float)
    if ps.size == 0 or ps.min() < -1e-12 or abs(ps.sum() - 1.0) > 1e-9:
        raise BadDistribution("phase weights must be a probability distribution")
    xs = np.linspace(-half_width, half_width, dim) if grid is None else np.asarray(grid, dtype=float)
    if xs.size != dim:
        raise DimMismatch(f"grid size {xs.size} != dim {dim}")
    kraus = []
    for t, p in zip(ts, ps):
        if p <= 0.0:
            continue
        kraus.append(np.sqrt(p) * np.diag(np.exp(-1j * t * xs)))
    return KrausOperation(kraus)

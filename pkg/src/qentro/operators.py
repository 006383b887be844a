"""Dense complex linear algebra for operators on finite-dimensional spaces.

All matrices are numpy complex arrays. ``HermitianOperator`` symmetrizes its
input once the deviation is within tolerance, ``PositiveOperator`` additionally
clips rounding-level negative eigenvalues, and ``Spectrum`` carries a full
eigendecomposition with a deterministic ordering.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceFailure, DimMismatch, NotHermitian, NotPositive

# Max-entry Hermitian deviation absorbed by symmetrization.
TOL_HERM = 1e-10
# Eigenvalue clipping threshold for positivity; rounding from partial traces
# and channel applications accumulates at this scale.
TOL_PSD = 1e-10
# Eigenvalues closer than this are treated as degenerate for tie-breaking.
DEGENERACY_TOL = 1e-12


def _as_square_matrix(matrix) -> np.ndarray:
    m = np.array(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


class HermitianOperator:
    """Hermitian matrix, stored exactly symmetrized.

    Inputs whose max-entry deviation from Hermitian symmetry exceeds
    ``tol`` are rejected with :class:`NotHermitian`.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol: float = TOL_HERM):
        m = _as_square_matrix(matrix)
        if m.size:
            deviation = float(np.max(np.abs(m - m.conj().T)))
            if deviation > tol:
                raise NotHermitian(
                    f"Hermitian deviation {deviation:.3e} exceeds tolerance {tol:.1e}"
                )
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


class Spectrum:
    """Eigendecomposition with eigenvalues sorted non-increasing.

    ``eigenvectors`` holds orthonormal columns aligned with ``eigenvalues``.
    Within a degenerate group (eigenvalues equal to within
    ``DEGENERACY_TOL``) eigenvectors are ordered lexicographically by their
    absolute-value component vectors, which fixes a deterministic choice.
    """

    __slots__ = ("eigenvalues", "eigenvectors")

    def __init__(self, eigenvalues: np.ndarray, eigenvectors: np.ndarray):
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors
        eigenvalues.setflags(write=False)
        eigenvectors.setflags(write=False)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def __repr__(self):
        return f"Spectrum(eigenvalues={np.array2string(self.eigenvalues, precision=6)})"


def _tie_break_order(values_desc: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Permutation making degenerate eigenvector order deterministic."""
    order = np.arange(values_desc.size)
    start = 0
    while start < values_desc.size:
        stop = start + 1
        while stop < values_desc.size and values_desc[start] - values_desc[stop] <= DEGENERACY_TOL:
            stop += 1
        if stop - start > 1:
            group = order[start:stop]
            keys = sorted(group, key=lambda j: tuple(np.abs(vectors[:, j])))
            order[start:stop] = keys
        start = stop
    return order


def spectrum(op) -> Spectrum:
    """Eigendecomposition of a Hermitian (or positive) operator.

    Raises :class:`ConvergenceFailure` if the eigensolver does not converge;
    the failure is surfaced rather than silently degraded.
    """
    if isinstance(op, PositiveOperator):
        return op.spectrum()
    try:
        vals, vecs = np.linalg.eigh(op.matrix)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigensolver did not converge: {exc}") from exc
    vals = vals[::-1]
    vecs = vecs[:, ::-1]
    order = _tie_break_order(vals, vecs)
    return Spectrum(np.ascontiguousarray(vals[order]), np.ascontiguousarray(vecs[:, order]))


class PositiveOperator:
    """Positive semidefinite operator with cached trace and spectrum.

    Instances live in the cone of positive trace-class operators; predicates
    ``is_subnormalized`` and ``is_state`` test membership in the trace-ball
    and the state space. Construct via :func:`validate_positive` or the
    convenience constructors below.
    """

    __slots__ = ("base", "trace", "_spectrum")

    def __init__(self, base: HermitianOperator, trace: float, spec: Spectrum):
        self.base = base
        self.trace = trace
        self._spectrum = spec

    @property
    def matrix(self) -> np.ndarray:
        return self.base.matrix

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._spectrum.eigenvalues

    def spectrum(self) -> Spectrum:
        return self._spectrum

    @property
    def is_subnormalized(self) -> bool:
        return self.trace <= 1.0 + 1e-10

    @property
    def is_state(self) -> bool:
        return abs(self.trace - 1.0) <= 1e-10

    @classmethod
    def from_matrix(cls, matrix, tol_herm: float = TOL_HERM, tol_psd: float = TOL_PSD):
        return validate_positive(HermitianOperator(matrix, tol=tol_herm), tol_psd=tol_psd)

    @classmethod
    def pure(cls, vector):
        """Rank-1 operator |v><v| (not normalized unless the vector is)."""
        v = np.asarray(vector, dtype=complex).reshape(-1)
        return cls.from_matrix(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int):
        return cls.from_matrix(np.eye(dim) / dim)

    @classmethod
    def diagonal(cls, weights):
        return cls.from_matrix(np.diag(np.asarray(weights, dtype=float)))

    def __repr__(self):
        return f"PositiveOperator(dim={self.dim}, trace={self.trace:.6g})"


def validate_positive(op, tol_psd: float = TOL_PSD) -> PositiveOperator:
    """Validate positivity of a Hermitian operator and clip rounding noise.

    Eigenvalues in ``[-tol_psd, 0)`` are clipped to zero and the matrix is
    re-assembled from the clipped decomposition; any eigenvalue below
    ``-tol_psd`` raises :class:`NotPositive`.
    """
    if isinstance(op, np.ndarray):
        op = HermitianOperator(op)
    spec = spectrum(op)
    vals = spec.eigenvalues
    if vals.size and vals[-1] < -tol_psd:
        raise NotPositive(
            f"eigenvalue {vals[-1]:.6e} below -{tol_psd:.1e}"
        )
    clipped = np.where(vals < 0.0, 0.0, vals)
    rebuilt = Spectrum(clipped, spec.eigenvectors)
    base = HermitianOperator(rebuilt.reconstruct(), tol=np.inf)
    return PositiveOperator(base, float(clipped.sum()), rebuilt)


def tensor(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Kronecker product with row-major composite index i*dim_b + j.

    The ordering is the one assumed by :func:`partial_trace`; every module
    uses this convention.
    """
    return HermitianOperator(np.kron(a.matrix, b.matrix), tol=np.inf)


def partial_trace(op: PositiveOperator, dims: tuple[int, int], keep: str) -> PositiveOperator:
    """Trace out one tensor factor of a bipartite positive operator.

    ``dims = (dim_a, dim_b)`` with composite index ``i*dim_b + j``; ``keep``
    selects the surviving factor (``"A"`` or ``"B"``). The trace is preserved.
    """
    da, db = dims
    if da * db != op.dim:
        raise DimMismatch(f"dims {da}x{db} incompatible with operator dim {op.dim}")
    if keep not in ("A", "B"):
        raise ValueError("keep must be 'A' or 'B'")
    blocks = op.matrix.reshape(da, db, da, db)
    if keep == "A":
        reduced = np.einsum("ijkj->ik", blocks)
    else:
        reduced = np.einsum("ijil->jl", blocks)
    return PositiveOperator.from_matrix(reduced)


def partial_trace_matrix(matrix: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Raw-array partial trace used on hot paths; no validation."""
    da, db = dims
    blocks = matrix.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ijkj->ik", blocks)
    return np.einsum("ijil->jl", blocks)

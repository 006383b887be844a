"""Seeded random generators for states, operators and Kraus sets."""

from __future__ import annotations

import numpy as np

from .operators import HermitianOperator, PositiveOperator


def rng_for(seed, *branch) -> np.random.Generator:
    """Generator derived from a root seed plus branch indices.

    The same (seed, branch) pair always yields the same stream, which keeps
    parallel and serial restart schedules bit-identical.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, branch)]))


def random_complex(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = random_complex(rng, dim)
    return v / np.linalg.norm(v)


def random_pure_state(rng: np.random.Generator, dim: int) -> PositiveOperator:
    return PositiveOperator.pure(random_pure_vector(rng, dim))


def random_state(rng: np.random.Generator, dim: int, rank: int | None = None) -> PositiveOperator:
    """Random density operator; ``rank`` defaults to full rank."""
    r = dim if rank is None else rank
    g = random_complex(rng, dim, r)
    m = g @ g.conj().T
    return PositiveOperator.from_matrix(m / np.trace(m).real)


def random_positive(rng: np.random.Generator, dim: int, scale: float = 1.0) -> PositiveOperator:
    """Random positive operator with trace uniform in (0, scale]."""
    t = scale * rng.uniform(1e-3, 1.0)
    g = random_complex(rng, dim, dim)
    m = g @ g.conj().T
    return PositiveOperator.from_matrix(m * (t / np.trace(m).real))


def random_hermitian(rng: np.random.Generator, dim: int) -> HermitianOperator:
    g = random_complex(rng, dim, dim)
    return HermitianOperator(0.5 * (g + g.conj().T))


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, dim, dim))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Complex isometry with orthonormal columns (requires rows >= cols)."""
    q, r = np.linalg.qr(random_complex(rng, rows, cols))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_kraus_set(
    rng: np.random.Generator,
    dim_in: int,
    dim_out: int,
    count: int,
    trace_preserving: bool = True,
) -> list[np.ndarray]:
    """Kraus operators of a random channel, or of a strict operation.

    A Haar isometry from the input space into output x environment is split
    into blocks; for operations the isometry is contracted on the right by a
    random singular-value profile in (0, 1).
    """
    v = random_isometry(rng, dim_out * count, dim_in)
    if not trace_preserving:
        u = haar_unitary(rng, dim_in)
        s = rng.uniform(0.2, 0.95, size=dim_in)
        v = v @ (u * s) @ u.conj().T
    return [v[i * dim_out : (i + 1) * dim_out, :] for i in range(count)]

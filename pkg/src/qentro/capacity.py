"""Finite-ensemble Holevo capacity and Entanglement of Formation.

Both optimizers report one-sided semantics: the capacity search returns a
certified lower bound (the exact ensemble quantity of the best feasible
ensemble found) and the EoF search returns a certified upper bound (the
exact average marginal entropy of the best pure decomposition found). The
suprema/infima over all measures cannot be certified numerically, so the
bound direction is part of the contract.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import channels
from ._roof import extremize_decomposition, factor_from_positive
from .entropy import entropy_from_eigenvalues, is_infinite, relative_entropy
from .errors import (
    BadDistribution,
    DimMismatch,
    InfeasibleConstraint,
    ScaleExceeded,
    SupportDegenerate,
    VanishingOutput,
)
from .operators import TOL_PSD, HermitianOperator, PositiveOperator
from .sampling import random_pure_vector, rng_for

_LOG_FLOOR = 1e-14


@dataclass(frozen=True)
class Ensemble:
    """Finite list of (probability, state) pairs with a common dimension."""

    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise BadDistribution("an ensemble needs at least one part")
        weights = np.array([w for w, _ in self.parts], dtype=float)
        if weights.min() < -1e-12:
            raise BadDistribution(f"negative ensemble weight {weights.min():.3e}")
        if abs(weights.sum() - 1.0) > 1e-10:
            raise BadDistribution(f"ensemble weights sum to {weights.sum():.12g}")
        dims = {s.dim for _, s in self.parts}
        if len(dims) != 1:
            raise DimMismatch(f"ensemble states of mixed dimensions {sorted(dims)}")
        for _, s in self.parts:
            if not s.is_state:
                raise BadDistribution(f"ensemble member has trace {s.trace:.12g}")

    @property
    def dim(self) -> int:
        return self.parts[0][1].dim

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.parts], dtype=float)

    @property
    def states(self) -> list[PositiveOperator]:
        return [s for _, s in self.parts]

    def barycenter(self) -> PositiveOperator:
        acc = sum(w * s.matrix for w, s in self.parts)
        return PositiveOperator.from_matrix(acc)


@dataclass(frozen=True)
class ConstraintSet:
    """Average-state constraint for the capacity search.

    ``unconstrained`` places no restriction; ``mean_observable`` requires
    Tr(H rho_bar) <= h for a Hermitian observable; ``fixed_barycenter`` pins
    the ensemble average to a given state.
    """

    kind: str
    observable: HermitianOperator | None = None
    bound: float | None = None
    average: PositiveOperator | None = None

    @classmethod
    def unconstrained(cls) -> "ConstraintSet":
        return cls("unconstrained")

    @classmethod
    def mean_observable(cls, observable: HermitianOperator, bound: float) -> "ConstraintSet":
        lo = float(np.linalg.eigvalsh(observable.matrix).min())
        if bound < lo - 1e-12:
            raise InfeasibleConstraint(
                f"bound {bound:.12g} below the minimal eigenvalue {lo:.12g}"
            )
        return cls("mean_observable", observable=observable, bound=float(bound))

    @classmethod
    def fixed_barycenter(cls, average: PositiveOperator) -> "ConstraintSet":
        if not average.is_state:
            raise BadDistribution(f"barycenter must be a state, trace {average.trace:.12g}")
        return cls("fixed_barycenter", average=average)


def holevo_quantity(phi: channels.KrausOperation, ens: Ensemble) -> float:
    """chi = sum_i pi_i H(phi(rho_i) || phi(rho_bar)) for a finite ensemble."""
    if ens.dim != phi.dim_in:
        raise DimMismatch(f"ensemble dim {ens.dim} != operation input dim {phi.dim_in}")
    avg_out = channels.apply(phi, ens.barycenter())
    total = 0.0
    for w, s in ens.parts:
        if w <= 0.0:
            continue
        div = relative_entropy(channels.apply(phi, s), avg_out)
        if is_infinite(div):
            raise SupportDegenerate("an output escapes the support of the average output")
        total += w * div
    return total


# --- internal helpers on raw arrays -----------------------------------------


def _outputs(stack: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Channel outputs of pure states given as rows of ``vectors``."""
    imgs = np.einsum("kab,ib->ika", stack, vectors)
    return np.einsum("ika,ikb->iab", imgs, imgs.conj())


def _entropy_terms(outs: np.ndarray):
    vals, vecs = np.linalg.eigh(outs)
    vals = np.clip(vals, 0.0, None)
    traces = vals.sum(axis=1)
    logs = np.where(vals > TOL_PSD, np.log(np.maximum(vals, _LOG_FLOOR)), 0.0)
    self_terms = np.sum(vals * logs, axis=1)  # Tr[C ln C]
    return vals, vecs, traces, self_terms


def _divergences(outs, self_terms, traces, avg_mat):
    avg_vals, avg_vecs = np.linalg.eigh(avg_mat)
    avg_vals = np.clip(avg_vals, 0.0, None)
    support = avg_vals > TOL_PSD
    log_avg = (avg_vecs[:, support] * np.log(avg_vals[support])) @ avg_vecs[:, support].conj().T
    cross = np.real(np.einsum("iab,ba->i", outs, log_avg))
    return self_terms - cross + avg_vals.sum() - traces


def _feasible_weights(weights, energies, bound):
    """Blend weights toward the cheapest state until the mean constraint holds."""
    mean = float(weights @ energies)
    if mean <= bound:
        return weights
    j = int(np.argmin(energies))
    if energies[j] > bound + 1e-12:
        return None
    target = np.zeros_like(weights)
    target[j] = 1.0
    t = (mean - bound) / max(mean - energies[j], 1e-300)
    t = min(max(t, 0.0), 1.0)
    return (1.0 - t) * weights + t * target


def _blahut_weights(weights, outs, self_terms, traces, iters, energies=None, bound=None):
    for _ in range(iters):
        avg = np.einsum("i,iab->ab", weights, outs)
        divs = _divergences(outs, self_terms, traces, avg)
        new = weights * np.exp(divs - divs.max())
        new /= new.sum()
        if energies is not None:
            projected = _feasible_weights(new, energies, bound)
            if projected is None:
                return weights
            new = projected
        if float(np.max(np.abs(new - weights))) < 1e-13:
            weights = new
            break
        weights = new
    return weights


def _self_term_and_log(mat):
    """(Tr[C ln C], log of C on its support padded by the floor)."""
    vals, vecs = np.linalg.eigh(mat)
    vals = np.clip(vals, 0.0, None)
    logs = np.log(np.maximum(vals, _LOG_FLOOR))
    term = float(np.sum(np.where(vals > TOL_PSD, vals * logs, 0.0)))
    return term, (vecs * logs) @ vecs.conj().T


def _ascend_state(stack, psi, weight, rest_out, steps):
    """Ascend the ensemble quantity in one state, the others held fixed.

    With C = phi(psi psi^*) and the other members contributing ``rest_out``
    to the average output, the variable part of chi is
    weight * Tr[C ln C] - Tr[Cbar ln Cbar] for Cbar = rest_out + weight * C.
    The line search evaluates this exact objective, so the moving average is
    accounted for and states cannot collectively collapse.
    """

    def value_and_grad(v):
        out = _outputs(stack, v[None, :])[0]
        self_term, log_out = _self_term_and_log(out)
        avg = rest_out + weight * out
        avg_term, log_avg = _self_term_and_log(avg)
        val = weight * self_term - avg_term
        m = channels.dual_matrix_raw(stack, log_out - log_avg)
        grad = m @ v
        grad = grad - v * np.vdot(v, grad)
        return val, weight * grad

    value, grad = value_and_grad(psi)
    step = 1.0
    for _ in range(steps):
        norm = float(np.linalg.norm(grad))
        if norm < 1e-12:
            break
        direction = grad / norm
        improved = False
        trial = min(step * 2.0, 10.0)
        while trial > 1e-12:
            cand = psi + trial * direction
            cand /= np.linalg.norm(cand)
            cand_value, cand_grad = value_and_grad(cand)
            if cand_value > value + 1e-15:
                psi, value, grad, step = cand, cand_value, cand_grad, trial
                improved = True
                break
            trial *= 0.5
        if not improved:
            break
    return psi


@dataclass(frozen=True)
class HolevoSolution:
    value: float
    ensemble: Ensemble
    restarts: int
    bound_direction: str = "lower"


def holevo_capacity(
    phi: channels.KrausOperation,
    constraint: ConstraintSet | None = None,
    m: int | None = None,
    restarts: int = 20,
    tol: float = 1e-6,
    seed: int = 0,
    workers: int = 1,
    max_outer: int = 300,
) -> HolevoSolution:
    """Search the constrained Holevo quantity over pure-state ensembles.

    Alternates a multiplicative weight update (states fixed) with per-state
    projected gradient ascent against the fixed average output, projecting
    back into the constraint set after every stage. The returned value is
    the exact ensemble quantity of the best feasible ensemble found, hence a
    certified lower bound on the constrained supremum. ``m`` defaults to
    dim^2 ensemble members.
    """
    if phi.dim_in > 4:
        raise ScaleExceeded(f"input dim {phi.dim_in} beyond desk scale 4")
    constraint = constraint or ConstraintSet.unconstrained()
    if m is None:
        m = phi.dim_in**2
    if m < 1:
        raise BadDistribution(f"ensemble size m must be >= 1, got {m}")

    if constraint.kind == "fixed_barycenter":
        return _holevo_fixed_barycenter(phi, constraint.average, m, restarts, tol, seed, workers)

    stack = phi.stack
    energies_of = None
    bound = None
    if constraint.kind == "mean_observable":
        h_mat = constraint.observable.matrix
        bound = constraint.bound
        if h_mat.shape[0] != phi.dim_in:
            raise DimMismatch("constraint observable must act on the input space")
        energies_of = lambda vecs: np.real(np.einsum("ia,ab,ib->i", vecs.conj(), h_mat, vecs))
        h_vals, h_vecs = np.linalg.eigh(h_mat)
        if bound < h_vals[0] - 1e-12:
            raise InfeasibleConstraint(
                f"bound {bound:.12g} below minimal eigenvalue {h_vals[0]:.12g}"
            )
        ground = h_vecs[:, 0]

    def project(weights, vectors):
        if energies_of is None:
            return weights
        return _feasible_weights(weights, energies_of(vectors), bound)

    def run(index: int):
        rng = rng_for(seed, index)
        vectors = np.stack([random_pure_vector(rng, phi.dim_in) for _ in range(m)])
        if energies_of is not None:
            # Guarantee a feasible direction inside every restart.
            vectors[0] = ground.astype(complex)
        weights = np.full(m, 1.0 / m)
        best = -math.inf
        snapshot = None
        for _ in range(max_outer):
            outs = _outputs(stack, vectors)
            vals, vecs, traces, self_terms = _entropy_terms(outs)
            energies = energies_of(vectors) if energies_of is not None else None
            projected = project(weights, vectors)
            if projected is None:
                break
            weights = projected
            weights = _blahut_weights(
                weights, outs, self_terms, traces, 60, energies, bound
            )
            avg = np.einsum("i,iab->ab", weights, outs)
            for i in range(m):
                if weights[i] <= 1e-14:
                    continue
                rest = avg - weights[i] * outs[i]
                vectors[i] = _ascend_state(stack, vectors[i], weights[i], rest, steps=4)
                outs[i] = _outputs(stack, vectors[i][None, :])[0]
                avg = rest + weights[i] * outs[i]
            # state moves can drag the average out of the constraint set
            projected = project(weights, vectors)
            if projected is None:
                break
            weights = projected
            outs = _outputs(stack, vectors)
            vals, vecs, traces, self_terms = _entropy_terms(outs)
            divs = _divergences(outs, self_terms, traces, np.einsum("i,iab->ab", weights, outs))
            current = float(weights @ divs)
            stalled = current - best < tol * 1e-2
            if current > best:
                best = current
                snapshot = (vectors.copy(), weights.copy())
            if stalled:
                break
        if snapshot is None:
            return -math.inf, index, vectors.copy(), weights.copy()
        return best, index, snapshot[0], snapshot[1]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(i) for i in range(restarts)]
    best_value, _, vectors, weights = max(results, key=lambda t: (t[0], -t[1]))
    if not math.isfinite(best_value):
        raise InfeasibleConstraint("no feasible ensemble found within the restart budget")

    parts = tuple(
        (float(w), PositiveOperator.pure(v / np.linalg.norm(v)))
        for w, v in zip(weights, vectors)
        if w > 1e-12
    )
    scale = sum(w for w, _ in parts)
    ensemble = Ensemble(tuple((w / scale, s) for w, s in parts))
    value = holevo_quantity(phi, ensemble)
    return HolevoSolution(value, ensemble, restarts)


def _holevo_fixed_barycenter(phi, average, m, restarts, tol, seed, workers):
    g = factor_from_positive(average)
    r = g.shape[1]
    if m * 1 < r:
        m = r
    roof = extremize_decomposition(
        phi.stack, g, m, 1,
        maximize=False, restarts=restarts, tol=tol, seed=seed, workers=workers,
    )
    parts = []
    for block in roof.parts:
        w = float(np.trace(block).real)
        if w <= 1e-12:
            continue
        parts.append((w, PositiveOperator.from_matrix(block / w)))
    scale = sum(w for w, _ in parts)
    ensemble = Ensemble(tuple((w / scale, s) for w, s in parts))
    value = holevo_quantity(phi, ensemble)
    return HolevoSolution(value, ensemble, restarts)


@dataclass(frozen=True)
class OptimalityReport:
    """Per-member divergence check of the equal-distance property."""

    member_divergences: tuple
    value: float
    max_deviation: float
    flagged: tuple
    constraint_kind: str


def optimal_ensemble_report(
    phi: channels.KrausOperation,
    constraint: ConstraintSet | None,
    solution: HolevoSolution,
    tol: float = 1e-4,
) -> OptimalityReport:
    """Check that every positively weighted member sits at maximal distance.

    For an optimal ensemble each member satisfies
    H(phi(rho_i) || phi(rho_bar)) = value; members deviating beyond ``tol``
    are flagged.
    """
    constraint = constraint or ConstraintSet.unconstrained()
    ens = solution.ensemble
    avg_out = channels.apply(phi, ens.barycenter())
    divs = []
    flagged = []
    for idx, (w, s) in enumerate(ens.parts):
        if w <= 1e-12:
            continue
        d = relative_entropy(channels.apply(phi, s), avg_out)
        d = float(d) if not is_infinite(d) else math.inf
        divs.append(d)
        if abs(d - solution.value) > tol:
            flagged.append(idx)
    max_dev = max((abs(d - solution.value) for d in divs), default=0.0)
    return OptimalityReport(tuple(divs), solution.value, max_dev, tuple(flagged), constraint.kind)


def _marginal_stack(dim_a: int, dim_b: int) -> np.ndarray:
    """Kraus stack of the trace-out-B channel on a dim_a x dim_b system."""
    stack = np.zeros((dim_b, dim_a, dim_a * dim_b), dtype=complex)
    for b in range(dim_b):
        for a in range(dim_a):
            stack[b, a, a * dim_b + b] = 1.0
    return stack


def eof(
    omega: PositiveOperator,
    dims: tuple[int, int],
    m: int | None = None,
    restarts: int = 20,
    tol: float = 1e-6,
    seed: int = 0,
    workers: int = 1,
) -> float:
    """Entanglement of Formation upper bound by finite pure decompositions.

    Minimizes the average marginal entropy over decompositions of ``omega``
    into ``m`` pure parts (defaults to rank^2), parameterized by isometric
    mixing of the eigendecomposition purification. The result is the exact
    objective of the best decomposition found, hence a certified upper
    bound on the convex-roof value.
    """
    da, db = dims
    if da * db != omega.dim:
        raise DimMismatch(f"dims {da}x{db} incompatible with state dim {omega.dim}")
    if omega.dim > 16:
        raise ScaleExceeded(f"dim {omega.dim} beyond desk scale 16")
    if not omega.is_state:
        raise BadDistribution(f"EoF expects a state, trace {omega.trace:.12g}")
    g = factor_from_positive(omega)
    r = max(g.shape[1], 1)
    if m is None:
        m = r * r
    if m < r:
        raise BadDistribution(f"m = {m} cannot decompose rank {r}")
    if r == 0 or g.shape[1] == 0:
        return 0.0
    roof = extremize_decomposition(
        _marginal_stack(da, db), g, m, 1,
        maximize=False, restarts=restarts, tol=tol, seed=seed, workers=workers,
    )
    return max(roof.value, 0.0)


def eof_local_operation_probe(
    omega: PositiveOperator,
    dims: tuple[int, int],
    phi_a: channels.KrausOperation,
    psi_b: channels.KrausOperation,
    m: int | None = None,
    restarts: int = 20,
    tol: float = 1e-6,
    seed: int = 0,
) -> tuple[float, float, float]:
    """EoF before and after a pair of local operations, with renormalization.

    Applies phi_a (x) psi_b, renormalizes the output and recomputes the EoF
    bound; the output trace is returned so callers can build convergence
    sweeps over sequences of local operations.
    """
    da, db = dims
    if phi_a.dim_in != da or psi_b.dim_in != db:
        raise DimMismatch("local operations must match the factor dimensions")
    before = eof(omega, dims, m=m, restarts=restarts, tol=tol, seed=seed)
    joint = channels.tensor_op(phi_a, psi_b)
    out = channels.apply(joint, omega)
    if out.trace <= 1e-9:
        raise VanishingOutput(f"output trace {out.trace:.3e}")
    renorm = PositiveOperator.from_matrix(out.matrix / out.trace)
    after = eof(
        renorm, (phi_a.dim_out, psi_b.dim_out), m=m, restarts=restarts, tol=tol, seed=seed
    )
    return before, after, out.trace

"""Shared optimizer over rank-constrained convex decompositions.

A positive operator A = G G^* is split into m parts B_i = G W_i^* W_i G^*
where the stacked blocks W_i (each k x r) form an isometry W with
W^* W = I_r. Every decomposition of A into m parts of rank <= k arises this
way, so extremizing sum_i H(phi(B_i)) over the isometry manifold searches the
full decomposition space. Ascent uses projected gradients with a polar
retraction and backtracking; each restart draws its starting point from a
seed derived from (seed, restart index), so parallel and serial schedules
produce identical results.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .operators import TOL_PSD
from .sampling import random_complex, rng_for

# Eigenvalue floor inside log-gradients; keeps directional derivatives finite
# near rank-deficient outputs without disturbing the objective value.
_LOG_FLOOR = 1e-14


@dataclass
class RoofResult:
    value: float
    parts: list[np.ndarray]  # the unnormalized blocks B_i
    objective_history: int   # iterations used by the winning restart


def _qr_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, rows, cols))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _blocks_output(stack: np.ndarray, g: np.ndarray, w: np.ndarray, m: int, k: int):
    """Outputs C_i = phi(B_i) for every block, batched."""
    wi = w.reshape(m, k, -1)
    t = np.einsum("ab,ikb->iak", g, wi.conj())        # (m, d, k) factors of B_i
    p = np.einsum("nab,ibk->inak", stack, t)           # V_n T_i
    c = np.einsum("inak,inbk->iab", p, p.conj())       # sum_n (V_n T)(V_n T)^*
    return wi, c


def _entropies_and_grads(c: np.ndarray):
    """Entropy H(C_i) and gradient matrices -ln C_i + ln(Tr C_i) I per block."""
    vals, vecs = np.linalg.eigh(c)
    vals = np.clip(vals, 0.0, None)
    traces = vals.sum(axis=1)
    safe = np.maximum(vals, _LOG_FLOOR)
    log_vals = np.log(safe)
    ent = np.where(
        traces > TOL_PSD,
        -(np.where(vals > TOL_PSD, vals * log_vals, 0.0)).sum(axis=1)
        + traces * np.log(np.maximum(traces, _LOG_FLOOR)),
        0.0,
    )
    grad_eigs = -log_vals + np.log(np.maximum(traces, _LOG_FLOOR))[:, None]
    grad = np.einsum("iab,ib,icb->iac", vecs, grad_eigs, vecs.conj())
    grad[traces <= TOL_PSD] = 0.0
    return ent, grad


def _objective_and_gradient(stack, g, w, m, k, sign):
    wi, c = _blocks_output(stack, g, w, m, k)
    ent, grad_c = _entropies_and_grads(c)
    # D_i = G^* phi^*(grad_c_i) G, then dW_i = W_i D_i
    back = np.einsum("nca,icd,ndb->iab", stack.conj(), grad_c, stack)
    d = np.einsum("ca,icd,db->iab", g.conj(), back, g)
    grad_w = np.einsum("ika,iab->ikb", wi, d).reshape(w.shape)
    return sign * float(ent.sum()), sign * grad_w


def _polar(m: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(m, full_matrices=False)
    return u @ vh


def _ascend(stack, g, m, k, rng, iters, inner_tol, sign):
    r = g.shape[1]
    w = _qr_isometry(rng, m * k, r)
    value, grad = _objective_and_gradient(stack, g, w, m, k, sign)
    step = 1.0
    used = 0
    for it in range(iters):
        used = it + 1
        sym = w.conj().T @ grad
        tangent = grad - w @ (0.5 * (sym + sym.conj().T))
        slope = float(np.real(np.vdot(tangent, tangent)))
        if slope < 1e-18:
            break
        improved = False
        trial_step = min(step * 2.0, 1e3)
        while trial_step > 1e-14:
            cand = _polar(w + trial_step * tangent)
            cand_value, cand_grad = _objective_and_gradient(stack, g, cand, m, k, sign)
            if cand_value > value + 1e-15:
                improved = cand_value - value > inner_tol
                w, value, grad, step = cand, cand_value, cand_grad, trial_step
                break
            trial_step *= 0.5
        else:
            break
        if not improved:
            break
    return value, w, used


def extremize_decomposition(
    stack: np.ndarray,
    g: np.ndarray,
    m: int,
    k: int,
    *,
    maximize: bool,
    restarts: int = 20,
    iters: int = 400,
    tol: float = 1e-9,
    seed: int = 0,
    workers: int = 1,
) -> RoofResult:
    """Best decomposition objective sum_i H(phi(B_i)) over m rank<=k parts.

    ``stack`` holds the Kraus operators of phi as a (count, d_out, d_in)
    array and ``g`` is a d x r factor with A = G G^*. Requires m*k >= r so
    that isometries exist. Returns the extremal value with the optimizer's
    sign convention undone, together with the winning blocks B_i.
    """
    r = g.shape[1]
    if m * k < r:
        raise ValueError(f"m*k = {m * k} cannot decompose rank {r}")
    sign = 1.0 if maximize else -1.0

    def run(index: int):
        rng = rng_for(seed, index)
        value, w, used = _ascend(stack, g, m, k, rng, iters, tol * 1e-2, sign)
        return value, index, w, used

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(i) for i in range(restarts)]
    # Deterministic reduction: best value, ties broken by restart index.
    best_value, _, best_w, used = max(results, key=lambda t: (t[0], -t[1]))
    wi = best_w.reshape(m, k, r)
    t = np.einsum("ab,ikb->iak", g, wi.conj())
    parts = [t[i] @ t[i].conj().T for i in range(m)]
    return RoofResult(sign * best_value, parts, used)


def factor_from_positive(a) -> np.ndarray:
    """G with A = G G^*, columns spanning the numerical support of A."""
    spec = a.spectrum()
    keep = spec.eigenvalues > TOL_PSD
    return spec.eigenvectors[:, keep] * np.sqrt(spec.eigenvalues[keep])

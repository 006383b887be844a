"""Independent oracles used to freeze expected values.

Everything here deliberately avoids the library's own code paths: partial
traces by explicit index summation, entropies from scalar formulas, grid
searches over parameterizations. These are the other side of every
dual-route check.
"""

import numpy as np


def eta_scalar(x: float) -> float:
    return 0.0 if x <= 0.0 else -x * np.log(x)


def classical_entropy_scalar(weights) -> float:
    w = [x for x in weights if x > 0.0]
    return sum(eta_scalar(x) for x in w) - eta_scalar(sum(w))


def h2_scalar(x: float) -> float:
    return eta_scalar(x) + eta_scalar(1.0 - x)


def vn_entropy(mat: np.ndarray) -> float:
    """Entropy of a positive matrix straight from eigvalsh, no library code."""
    eigs = np.clip(np.linalg.eigvalsh(mat), 0.0, None)
    return classical_entropy_scalar(eigs)


def partial_trace_index_sum(mat: np.ndarray, da: int, db: int, keep: str) -> np.ndarray:
    """Partial trace by explicit loops over the composite index i*db + j."""
    if keep == "A":
        out = np.zeros((da, da), dtype=complex)
        for i in range(da):
            for k in range(da):
                out[i, k] = sum(mat[i * db + j, k * db + j] for j in range(db))
        return out
    out = np.zeros((db, db), dtype=complex)
    for j in range(db):
        for l in range(db):
            out[j, l] = sum(mat[i * db + j, i * db + l] for i in range(da))
    return out


def wootters_eof_nats(rho: np.ndarray) -> float:
    """Closed-form two-qubit entanglement of formation, in nats."""
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    flip = np.kron(sy, sy)
    r = rho @ flip @ rho.conj() @ flip
    eigs = np.sort(np.abs(np.linalg.eigvals(r)))[::-1]
    roots = np.sqrt(np.clip(eigs, 0.0, None))
    concurrence = max(0.0, roots[0] - roots[1] - roots[2] - roots[3])
    x = 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - concurrence**2)))
    return h2_scalar(x)


def bloch_state(theta: float, phi: float) -> np.ndarray:
    ket = np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)])
    return np.outer(ket, ket.conj())


def _batch_entropy(mats: np.ndarray) -> np.ndarray:
    eigs = np.clip(np.linalg.eigvalsh(mats), 0.0, None)
    totals = eigs.sum(axis=-1)
    safe = np.where(eigs > 1e-14, eigs, 1.0)
    ent = -(eigs * np.log(safe)).sum(axis=-1)
    safe_tot = np.where(totals > 1e-14, totals, 1.0)
    return ent + totals * np.log(safe_tot)


def bloch_grid_capacity(kraus: list, resolution_deg: float = 2.0) -> float:
    """Grid search over symmetric antipodal pure-state pairs on the sphere.

    For each grid direction the ensemble is {(1/2, psi), (1/2, psi_perp)};
    chi is evaluated directly from batched eigenvalues.
    """
    thetas = np.deg2rad(np.arange(0.0, 180.0 + 1e-9, resolution_deg))
    phis = np.deg2rad(np.arange(0.0, 360.0, resolution_deg))
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    tt = tt.ravel()
    pp = pp.ravel()
    kets_a = np.stack([np.cos(tt / 2.0), np.exp(1j * pp) * np.sin(tt / 2.0)], axis=1)
    kets_b = np.stack(
        [np.cos((np.pi - tt) / 2.0), np.exp(1j * (pp + np.pi)) * np.sin((np.pi - tt) / 2.0)],
        axis=1,
    )
    stack = np.stack(kraus)

    def outputs(kets):
        imgs = np.einsum("kab,ib->ika", stack, kets)
        return np.einsum("ika,ikb->iab", imgs, imgs.conj())

    out_a = outputs(kets_a)
    out_b = outputs(kets_b)
    avg = 0.5 * (out_a + out_b)
    chi = _batch_entropy(avg) - 0.5 * (_batch_entropy(out_a) + _batch_entropy(out_b))
    return float(chi.max())


def simplex_grid_max_weighted_entropy(pi, step: float = 1e-3) -> float:
    """Grid max of the entropy of {pi_i x_i} over the 2-point simplex."""
    assert len(pi) == 2
    xs = np.arange(0.0, 1.0 + step / 2, step)
    best = -np.inf
    for x in xs:
        val = classical_entropy_scalar([pi[0] * x, pi[1] * (1.0 - x)])
        best = max(best, val)
    return best


def relative_entropy_raw(a: np.ndarray, b: np.ndarray) -> float:
    """H(A||B) from raw eigendecompositions; assumes compatible supports."""
    av, avec = np.linalg.eigh(a)
    bv, bvec = np.linalg.eigh(b)
    av = np.clip(av, 0.0, None)
    bv = np.clip(bv, 0.0, None)
    term = sum(x * np.log(x) for x in av if x > 1e-14)
    cross = 0.0
    for j in range(bv.size):
        if bv[j] > 1e-14:
            w = float(np.real(bvec[:, j].conj() @ a @ bvec[:, j]))
            cross += w * np.log(bv[j])
    return term - cross + float(bv.sum()) - float(av.sum())


def _radius_over_weight_grid(mats, self_terms, w1, w2):
    w3 = 1.0 - w1 - w2
    keep = w3 >= -1e-12
    w1, w2, w3 = w1[keep], w2[keep], np.clip(w3[keep], 0.0, None)
    weights = np.stack([w1, w2, w3], axis=1)
    best = np.inf
    best_w = None
    for chunk in range(0, weights.shape[0], 65536):
        w = weights[chunk : chunk + 65536]
        mix = np.einsum("ni,iab->nab", w, mats)
        vals, vecs = np.linalg.eigh(mix)
        vals = np.clip(vals, 0.0, None)
        logs = np.where(vals > 1e-14, np.log(np.where(vals > 1e-14, vals, 1.0)), -1e9)
        log_mix = np.einsum("nab,nb,ncb->nac", vecs, logs, vecs.conj())
        cross = np.real(np.einsum("iab,nba->ni", mats, log_mix))
        radius = (self_terms[None, :] - cross).max(axis=1)
        idx = int(radius.argmin())
        if radius[idx] < best:
            best = float(radius[idx])
            best_w = w[idx]
    return best, best_w


def divergence_radius_grid(states: list, step: float = 1e-3) -> float:
    """min over mixture weights of max_i H(rho_i || mixture).

    Coarse grid at ``step`` over the 3-simplex followed by a local
    refinement pass at step/100 around the coarse argmin.
    """
    assert len(states) == 3
    mats = np.stack(states)
    self_terms = np.array(
        [sum(x * np.log(x) for x in np.clip(np.linalg.eigvalsh(m), 0, None) if x > 1e-14) for m in mats]
    )
    ws = np.arange(0.0, 1.0 + step / 2, step)
    g1, g2 = np.meshgrid(ws, ws, indexing="ij")
    best, best_w = _radius_over_weight_grid(mats, self_terms, g1.ravel(), g2.ravel())
    fine = np.arange(-1.5 * step, 1.5 * step + step / 200, step / 100)
    f1, f2 = np.meshgrid(best_w[0] + fine, best_w[1] + fine, indexing="ij")
    f1 = np.clip(f1.ravel(), 0.0, 1.0)
    f2 = np.clip(f2.ravel(), 0.0, 1.0)
    refined, _ = _radius_over_weight_grid(mats, self_terms, f1, f2)
    return min(best, refined)

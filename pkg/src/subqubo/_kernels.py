"""Hot inner loops shared by the tabu and annealing solvers.

Each kernel exists once as plain Python over numpy arrays and is JIT-compiled
with numba at import time. Setting the environment variable
``SUBQUBO_DISABLE_NUMBA=1`` (or numba being absent) selects the interpreted
numpy path instead; both paths execute the same source.

Kernels take no RNG: callers pre-draw every random number (proposal offsets,
log-uniform acceptance thresholds) with ``numpy.random.Generator`` so that a
run is reproducible regardless of which path executes. Initial field vectors
and energies are also computed by the caller, keeping BLAS out of the
kernels. All arithmetic is float64; exactness holds while energies stay
below 2**53, and public solvers re-evaluate final energies in exact integer
arithmetic anyway.
"""

import os

import numpy as np

_DISABLE = os.environ.get("SUBQUBO_DISABLE_NUMBA", "").strip().lower() in {
    "1", "true", "yes", "on",
}

if _DISABLE:
    njit = None
else:
    try:
        from numba import njit
    except ImportError:
        njit = None

USING_NUMBA = njit is not None


def _maybe_jit(fn):
    if USING_NUMBA:
        return njit(cache=True)(fn)
    return fn


def tabu_core_py(diag, w, x, s, e, tenure, max_iterations, stall_limit,
                 target, has_target, kick_period, n_kick, kick_u):
    """One-flip tabu search over a QUBO given as diagonal + symmetric weights.

    x, s and e describe the start state: x is the 0/1 assignment (float64),
    s[i] = diag[i] + sum_j w[i, j] * x[j] is the flip field, and e the energy
    of x without the constant offset. Returns the best assignment seen, its
    energy, iterations executed and the number of flip-gain evaluations.

    Move selection: lowest gain among non-tabu moves, ties broken by lowest
    index; a tabu move is admitted when it would improve the best energy
    (aspiration). If every move is tabu and none aspirates, the overall best
    move is taken so the search never deadlocks.

    Diversification: after kick_period successive non-improving moves the
    current state is kicked by flipping the n_kick variables with the
    smallest entries in the next row of kick_u (pre-drawn uniforms); kicked
    variables are made tabu. Kicks do not reset the stall counter that
    controls stopping, so stall_limit semantics are unchanged.
    """
    n = x.shape[0]
    tabu_until = np.full(n, np.int64(-1))
    best_x = x.copy()
    best_e = e
    stall = 0
    since_kick = 0
    kicks = 0
    evaluations = 0
    it = 0
    while it < max_iterations:
        if has_target and best_e <= target:
            break
        if since_kick >= kick_period and kicks < kick_u.shape[0]:
            order = np.argsort(kick_u[kicks])
            for idx in range(n_kick):
                i = order[idx]
                g = (1.0 - 2.0 * x[i]) * s[i]
                old = x[i]
                x[i] = 1.0 - old
                e = e + g
                s += w[:, i] * (1.0 - 2.0 * old)
                tabu_until[i] = it + tenure
            kicks += 1
            since_kick = 0
        gains = (1.0 - 2.0 * x) * s
        evaluations += n
        allowed = (tabu_until < it) | ((e + gains) < best_e)
        cand = gains.copy()
        cand[~allowed] = np.inf
        i = np.argmin(cand)
        if np.isinf(cand[i]):
            i = np.argmin(gains)
        old = x[i]
        x[i] = 1.0 - old
        e = e + gains[i]
        s += w[:, i] * (1.0 - 2.0 * old)
        tabu_until[i] = it + tenure
        it += 1
        if e < best_e:
            best_e = e
            best_x[:] = x
            stall = 0
            since_kick = 0
        else:
            stall += 1
            since_kick += 1
            if stall >= stall_limit:
                break
    return best_x, best_e, it, evaluations


def sa_core_py(j, s, local, e, betas, log_u):
    """Metropolis single-spin-flip sweeps over an Ising model.

    j is the dense symmetric coupler matrix (zero diagonal), s the ±1 start
    spins, local[i] = h[i] + sum_j j[i, j] * s[j], e the start energy without
    offset. betas[k] is the inverse temperature of sweep k; log_u[k, i] the
    pre-drawn log-uniform threshold for the update of spin i in sweep k.
    Spins are visited in index order within a sweep. Returns the best spins
    seen and their energy.
    """
    n = s.shape[0]
    nsweeps = betas.shape[0]
    best_s = s.copy()
    best_e = e
    for k in range(nsweeps):
        beta = betas[k]
        for i in range(n):
            de = -2.0 * s[i] * local[i]
            if de <= 0.0 or (-beta * de) > log_u[k, i]:
                s_new = -s[i]
                s[i] = s_new
                local += j[:, i] * (2.0 * s_new)
                e += de
                if e < best_e:
                    best_e = e
                    best_s[:] = s
    return best_s, best_e


def svmc_core_py(j, h, svals, betas, prop, log_u, sigma, cls_local, cls_e):
    """Spin-vector Monte Carlo: Metropolis updates of planar spin angles.

    Each spin carries an angle theta in [0, pi]; configuration energy at
    anneal fraction s is -(1-s) * sum(sin theta) + s * (h . cos theta +
    sum_{i<j} j_ij cos theta_i cos theta_j). Angles start at pi/2 (transverse
    ground state). prop[k, i] in [-1, 1) scales the proposal width
    pi*(1-s)+0.05; log_u holds acceptance thresholds.

    sigma is the projected ±1 assignment sign(cos theta) with zero mapped to
    +1 (the all-ones start), cls_local/cls_e its classical field vector and
    energy; both are maintained incrementally and the best projected state by
    classical energy is returned.
    """
    n = h.shape[0]
    nsweeps = svals.shape[0]
    theta = np.full(n, np.pi / 2.0)
    ct = np.zeros(n)
    st = np.ones(n)
    f = h.copy()
    best_sigma = sigma.copy()
    best_e = cls_e
    for k in range(nsweeps):
        sfrac = svals[k]
        a = 1.0 - sfrac
        b = sfrac
        beta = betas[k]
        width = np.pi * (1.0 - sfrac) + 0.05
        for i in range(n):
            t_new = theta[i] + width * prop[k, i]
            if t_new < 0.0:
                t_new = -t_new
            if t_new > np.pi:
                t_new = 2.0 * np.pi - t_new
            if t_new < 0.0:
                t_new = 0.0
            elif t_new > np.pi:
                t_new = np.pi
            ct_new = np.cos(t_new)
            st_new = np.sin(t_new)
            de = -a * (st_new - st[i]) + b * f[i] * (ct_new - ct[i])
            if de <= 0.0 or (-beta * de) > log_u[k, i]:
                dct = ct_new - ct[i]
                theta[i] = t_new
                ct[i] = ct_new
                st[i] = st_new
                f += j[:, i] * dct
                sg = 1.0 if ct_new >= 0.0 else -1.0
                if sg != sigma[i]:
                    de_cls = -2.0 * sigma[i] * cls_local[i]
                    sigma[i] = sg
                    cls_local += j[:, i] * (2.0 * sg)
                    cls_e += de_cls
                    if cls_e < best_e:
                        best_e = cls_e
                        best_sigma[:] = sigma
    return best_sigma, best_e


tabu_core = _maybe_jit(tabu_core_py)
sa_core = _maybe_jit(sa_core_py)
svmc_core = _maybe_jit(svmc_core_py)

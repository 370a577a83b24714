"""Hot numeric kernels over CSR adjacency arrays.

Every kernel exists in two flavours: a numba ``@njit`` build and a pure
numpy/python fallback.  The active flavour is picked once at import time
from the ``POLMON_NUMBA`` environment variable (``0``/``false`` forces the
fallback; anything else, or unset, uses numba when importable).  Both
flavours are kept importable under ``*_py`` / ``*_jit`` names so the
benchmark in ``benchmarks/bench_kernels.py`` can race them and check they
agree.

CSR layout convention used throughout:
  - ``indptr`` int64, length n+1; ``indices`` int64 sorted within each row
  - the matrix is a symmetric unweighted adjacency unless a ``weights``
    array is passed alongside
  - no diagonal entries; self-loop weight, where it exists (aggregated
    Louvain graphs), travels in a separate per-node array
"""

from __future__ import annotations

import os

import numpy as np


def _numba_wanted() -> bool:
    flag = os.environ.get("POLMON_NUMBA", "").strip().lower()
    if flag in ("0", "false", "no", "off"):
        return False
    return True


HAS_NUMBA = False
if _numba_wanted():
    try:
        from numba import njit as _njit

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAS_NUMBA = False


def backend() -> str:
    """Name of the active kernel backend: ``"numba"`` or ``"numpy"``."""
    return "numba" if HAS_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# adjacency matvec: out[i] = sum of x[j] over neighbours j of i
# ---------------------------------------------------------------------------


def adj_matvec_py(indptr, indices, x):
    out = np.zeros(len(indptr) - 1)
    if len(indices) == 0:
        return out
    counts = np.diff(indptr)
    nonempty = counts > 0
    # reduceat over the starts of non-empty rows: empty rows in between
    # contribute no entries, so each segment is exactly one row
    starts = indptr[:-1][nonempty]
    out[nonempty] = np.add.reduceat(x[indices], starts)
    return out


def _adj_matvec_loop(indptr, indices, x):
    n = len(indptr) - 1
    out = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            acc += x[indices[p]]
        out[i] = acc
    return out


# ---------------------------------------------------------------------------
# Friedkin-Johnsen fixed point: z_i = (s_i + sum_{j~i} z_j) / (1 + deg_i)
# ---------------------------------------------------------------------------


def _fj_fixed_point_loop(indptr, indices, s, tol, max_iter):
    """Jacobi iteration for (I+L) z = s.

    Returns (z, iterations, residual, converged).  The residual is the
    max-norm of (I+L) z - s for the returned iterate; one adjacency pass
    per sweep serves both the convergence test and the update.
    """
    n = len(indptr) - 1
    z = s.copy()
    res = 0.0
    for it in range(max_iter + 1):
        az = np.zeros(n)
        for i in range(n):
            acc = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                acc += z[indices[p]]
            az[i] = acc
        res = 0.0
        for i in range(n):
            deg = indptr[i + 1] - indptr[i]
            r = (1.0 + deg) * z[i] - az[i] - s[i]
            if r < 0.0:
                r = -r
            if r > res:
                res = r
        if res <= tol:
            return z, it, res, True
        if it == max_iter:
            break
        for i in range(n):
            deg = indptr[i + 1] - indptr[i]
            z[i] = (s[i] + az[i]) / (1.0 + deg)
    return z, max_iter, res, False


def fj_fixed_point_py(indptr, indices, s, tol, max_iter):
    n = len(indptr) - 1
    deg = np.diff(indptr).astype(np.float64)
    z = s.copy()
    res = 0.0
    for it in range(max_iter + 1):
        az = adj_matvec_py(indptr, indices, z)
        res = float(np.max(np.abs((1.0 + deg) * z - az - s))) if n else 0.0
        if res <= tol:
            return z, it, res, True
        if it == max_iter:
            break
        z = (s + az) / (1.0 + deg)
    return z, max_iter, res, False


# ---------------------------------------------------------------------------
# power iteration for the leading adjacency eigenpair
# ---------------------------------------------------------------------------


def _power_iteration_loop(indptr, indices, tol, max_iter):
    """Leading eigenpair of the adjacency matrix, deterministic start.

    Iterates on A + I (the unit shift keeps bipartite graphs, whose
    spectrum is symmetric, from oscillating between +/- lambda rays) but
    reports lambda and the residual for A itself.  The start vector is
    uniform positive, so the iterate stays nonnegative and converges to a
    Perron-oriented vector.  Returns (lam, u, iterations, residual,
    converged); convergence test is ||A u - lam u||_inf <= tol * max(1, lam).
    """
    n = len(indptr) - 1
    u = np.full(n, 1.0 / np.sqrt(n))
    res = 0.0
    lam = 0.0
    for it in range(max_iter + 1):
        au = np.zeros(n)
        for i in range(n):
            acc = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                acc += u[indices[p]]
            au[i] = acc
        lam = 0.0
        for i in range(n):
            lam += u[i] * au[i]
        res = 0.0
        for i in range(n):
            r = au[i] - lam * u[i]
            if r < 0.0:
                r = -r
            if r > res:
                res = r
        bound = tol if lam < 1.0 else tol * lam
        if res <= bound:
            return lam, u, it, res, True
        if it == max_iter:
            break
        norm = 0.0
        for i in range(n):
            y = au[i] + u[i]
            au[i] = y
            norm += y * y
        norm = np.sqrt(norm)
        for i in range(n):
            u[i] = au[i] / norm
    return lam, u, max_iter, res, False


def power_iteration_py(indptr, indices, tol, max_iter):
    n = len(indptr) - 1
    u = np.full(n, 1.0 / np.sqrt(n))
    res = 0.0
    lam = 0.0
    for it in range(max_iter + 1):
        au = adj_matvec_py(indptr, indices, u)
        lam = float(np.dot(u, au))
        res = float(np.max(np.abs(au - lam * u))) if n else 0.0
        if res <= tol * max(1.0, lam):
            return lam, u, it, res, True
        if it == max_iter:
            break
        y = au + u
        u = y / np.linalg.norm(y)
    return lam, u, max_iter, res, False


# ---------------------------------------------------------------------------
# NetShield greedy selection
# ---------------------------------------------------------------------------


def _netshield_greedy_loop(indptr, indices, lam, u, k):
    """Greedy shield-value maximization.

    Marginal score of candidate i given already-selected S:
        2 * lam * u_i^2 - 2 * u_i * sum_{j in S} A_ij u_j
    b tracks the inner sum per node; each pick costs O(n) plus the picked
    node's degree, so the whole selection is O(n k + m).  Ties go to the
    lowest node index (strict > comparison).
    """
    n = len(indptr) - 1
    b = np.zeros(n)
    picked = np.zeros(n, np.bool_)
    sel = np.empty(k, np.int64)
    marginal = np.empty(k, np.float64)
    for t in range(k):
        best = -1
        best_score = -np.inf
        for i in range(n):
            if picked[i]:
                continue
            score = 2.0 * lam * u[i] * u[i] - 2.0 * u[i] * b[i]
            if score > best_score:
                best_score = score
                best = i
        sel[t] = best
        marginal[t] = best_score
        picked[best] = True
        for p in range(indptr[best], indptr[best + 1]):
            b[indices[p]] += u[best]
    return sel, marginal


def netshield_greedy_py(indptr, indices, lam, u, k):
    n = len(indptr) - 1
    b = np.zeros(n)
    picked = np.zeros(n, bool)
    sel = np.empty(k, np.int64)
    marginal = np.empty(k, np.float64)
    for t in range(k):
        score = 2.0 * lam * u * u - 2.0 * u * b
        score[picked] = -np.inf
        best = int(np.argmax(score))  # first max = lowest index on ties
        sel[t] = best
        marginal[t] = score[best]
        picked[best] = True
        b[indices[indptr[best]:indptr[best + 1]]] += u[best]
    return sel, marginal


# ---------------------------------------------------------------------------
# Louvain local-move sweep
# ---------------------------------------------------------------------------


def _louvain_sweep_loop(indptr, indices, weights, k_arr, comm, comm_tot, m,
                        resolution, min_gain):
    """One pass of local moves in ascending node order; mutates comm/comm_tot.

    CSR must carry no diagonal entries (a node's self-loop weight cancels
    out of every gain difference, so it never enters here).  Gains are kept
    scaled by m: for node i and community c,
        g(c) = w(i->c) - resolution * tot(c) * k_i / (2m)
    and a move happens only when the best candidate beats staying put by
    more than min_gain * m (i.e. actual delta-Q > min_gain).  Candidate
    communities are scanned in first-touch order, which the sorted CSR
    makes deterministic.  Returns the number of moves.
    """
    n = len(indptr) - 1
    cw = np.zeros(n)
    touched = np.empty(n, np.int64)
    moves = 0
    for i in range(n):
        c_old = comm[i]
        ki = k_arr[i]
        comm_tot[c_old] -= ki
        nt = 0
        for p in range(indptr[i], indptr[i + 1]):
            c = comm[indices[p]]
            if cw[c] == 0.0:
                touched[nt] = c
                nt += 1
            cw[c] += weights[p]
        scale = ki / (2.0 * m)
        best_c = c_old
        best_g = cw[c_old] - resolution * comm_tot[c_old] * scale
        threshold = min_gain * m
        for t in range(nt):
            c = touched[t]
            if c == c_old:
                continue
            g = cw[c] - resolution * comm_tot[c] * scale
            if g > best_g + threshold:
                best_g = g
                best_c = c
        comm[i] = best_c
        comm_tot[best_c] += ki
        if best_c != c_old:
            moves += 1
        for t in range(nt):
            cw[touched[t]] = 0.0
    return moves


def louvain_sweep_py(indptr, indices, weights, k_arr, comm, comm_tot, m,
                     resolution, min_gain):
    return _louvain_sweep_loop(indptr, indices, weights, k_arr, comm,
                               comm_tot, m, resolution, min_gain)


# ---------------------------------------------------------------------------
# backend binding
# ---------------------------------------------------------------------------

if HAS_NUMBA:
    adj_matvec_jit = _njit(cache=True)(_adj_matvec_loop)
    fj_fixed_point_jit = _njit(cache=True)(_fj_fixed_point_loop)
    power_iteration_jit = _njit(cache=True)(_power_iteration_loop)
    netshield_greedy_jit = _njit(cache=True)(_netshield_greedy_loop)
    louvain_sweep_jit = _njit(cache=True)(_louvain_sweep_loop)

    adj_matvec = adj_matvec_jit
    fj_fixed_point = fj_fixed_point_jit
    power_iteration = power_iteration_jit
    netshield_greedy = netshield_greedy_jit
    louvain_sweep = louvain_sweep_jit
else:
    adj_matvec = adj_matvec_py
    fj_fixed_point = fj_fixed_point_py
    power_iteration = power_iteration_py
    netshield_greedy = netshield_greedy_py
    louvain_sweep = louvain_sweep_py

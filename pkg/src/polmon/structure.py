"""Influencer selection (NetShield) and community detection (Louvain).

NetShield greedily picks the k nodes maximizing the shield value

    Sv(S) = sum_{i in S} 2 lambda u_i^2 - sum_{i,j in S} A_ij u_i u_j

where (lambda, u) is the leading adjacency eigenpair; picking and score
updates run in O(n k + m), within the O(n k^2 + m) class.

Louvain is the standard two-phase modularity heuristic: local moves to the
best positive-gain neighbouring community, then graph aggregation, repeated
until no move gains more than 1e-12.  All randomization is removed: nodes
are visited in ascending dense-index order, so a given graph always yields
the same partition.  Modularity is Q = sum_c [e_c/m - (d_c/(2m))^2].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .graphkit import InteractionGraph
from .polarization import ConvergenceError
from .stance import Stance, StanceAssignment

_MIN_GAIN = 1e-12


@dataclass
class ShieldRanking:
    selected: list[str]
    shield_scores: list[float]
    lam: float
    eigvec: np.ndarray


@dataclass
class CommunityProfile:
    community_id: int
    size: int
    n_left: int = 0
    n_right: int = 0
    n_center: int = 0
    n_neutral: int = 0

    @property
    def lean(self) -> float:
        """Signed tilt, positive = Left-majority."""
        poles = self.n_left + self.n_right
        if poles == 0:
            return 0.0
        return (self.n_left - self.n_right) / poles


@dataclass
class CommunityPartition:
    assignment: dict[str, int]
    modularity: float
    per_community: list[CommunityProfile]

    @property
    def n_communities(self) -> int:
        return len({c for c in self.assignment.values()})


# ---------------------------------------------------------------------------
# leading eigenpair
# ---------------------------------------------------------------------------


def leading_eigenpair(g: InteractionGraph, tol: float = 1e-10,
                      max_iter: int = 100_000) -> tuple[float, np.ndarray]:
    """Leading adjacency eigenvalue and Perron-oriented unit eigenvector.

    Power iteration with deterministic uniform positive start; converged
    when ||A u - lambda u||_inf <= tol * max(1, lambda).
    """
    if g.n < 1:
        raise ValueError("graph must have at least one node")
    indptr, indices = g.csr
    lam, u, iters, residual, converged = _kernels.power_iteration(
        indptr, indices, tol, max_iter)
    if not converged:
        raise ConvergenceError(
            f"power iteration stalled at residual {residual:.3e} after "
            f"{iters} iterations (degenerate leading spectrum?)",
            residual, iters)
    return float(lam), u


def shield_value(g: InteractionGraph, subset: Sequence[str],
                 lam: float, u: np.ndarray) -> float:
    """Sv for an explicit subset; O(|S|^2) pairwise form, used by tests too."""
    idx = g.node_index
    chosen = [idx[s] for s in subset]
    edge_lookup = set(g.edges)
    total = sum(2.0 * lam * u[i] ** 2 for i in chosen)
    for a, i in enumerate(chosen):
        for j in chosen[a + 1:]:
            ui, uj = g.nodes[i], g.nodes[j]
            pair = (ui, uj) if ui < uj else (uj, ui)
            if pair in edge_lookup:
                total -= 2.0 * u[i] * u[j]  # A_ij and A_ji
    return float(total)


def netshield(g: InteractionGraph, k: int) -> ShieldRanking:
    """Greedy shield-value node selection; ties go to the ascending node id."""
    if k < 0 or k > g.n:
        raise ValueError(f"k must lie in [0, {g.n}], got {k}")
    if g.n == 0 or k == 0:
        lam, u = (0.0, np.zeros(g.n)) if g.n == 0 else leading_eigenpair(g)
        return ShieldRanking([], [], lam, u)
    lam, u = leading_eigenpair(g)
    indptr, indices = g.csr
    sel, marginal = _kernels.netshield_greedy(indptr, indices, lam, u, k)
    return ShieldRanking(selected=[g.nodes[i] for i in sel],
                         shield_scores=[float(x) for x in marginal],
                         lam=lam, eigvec=u)


# ---------------------------------------------------------------------------
# Louvain
# ---------------------------------------------------------------------------


def _louvain_level(indptr, indices, weights, k_arr, m, resolution):
    """Run sweeps to fixpoint on one level; returns (assignment, moved)."""
    n = len(indptr) - 1
    comm = np.arange(n, dtype=np.int64)
    comm_tot = k_arr.copy()
    moved_any = False
    while True:
        moves = _kernels.louvain_sweep(indptr, indices, weights, k_arr, comm,
                                       comm_tot, m, resolution, _MIN_GAIN)
        if moves == 0:
            break
        moved_any = True
    return comm, moved_any


def _aggregate(indptr, indices, weights, self_w, comm):
    """Collapse communities into supernodes; intra weight moves to self_w."""
    uniq, dense = np.unique(comm, return_inverse=True)
    nc = len(uniq)
    n = len(indptr) - 1
    rows = dense[np.repeat(np.arange(n), np.diff(indptr))]
    cols = dense[indices]
    intra = rows == cols
    new_self = np.bincount(rows[intra], weights=weights[intra],
                           minlength=nc) / 2.0
    new_self += np.bincount(dense, weights=self_w, minlength=nc)
    mat = sp.coo_matrix((weights[~intra], (rows[~intra], cols[~intra])),
                        shape=(nc, nc)).tocsr()
    mat.sum_duplicates()
    mat.sort_indices()
    return (mat.indptr.astype(np.int64), mat.indices.astype(np.int64),
            mat.data.astype(np.float64), new_self, dense)


def _assignment_modularity(indptr, indices, weights, self_w, comm,
                           resolution) -> float:
    k_arr = np.bincount(
        np.repeat(np.arange(len(indptr) - 1), np.diff(indptr)),
        weights=weights, minlength=len(indptr) - 1) + 2.0 * self_w
    m = weights.sum() / 2.0 + self_w.sum()
    if m == 0:
        return 0.0
    nc = int(comm.max()) + 1 if len(comm) else 0
    rows = np.repeat(np.arange(len(indptr) - 1), np.diff(indptr))
    intra = comm[rows] == comm[indices]
    e_c = np.bincount(comm[rows[intra]], weights=weights[intra],
                      minlength=nc) / 2.0
    e_c += np.bincount(comm, weights=self_w, minlength=nc)
    d_c = np.bincount(comm, weights=k_arr, minlength=nc)
    return float(np.sum(e_c / m - resolution * (d_c / (2.0 * m)) ** 2))


def louvain(g: InteractionGraph, resolution: float = 1.0) -> CommunityPartition:
    """Deterministic Louvain partition with recomputed modularity.

    An edgeless graph degenerates to singleton communities with Q = 0.
    Community ids are dense, numbered by first appearance in ascending
    node order.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one node")
    indptr0, indices0 = g.csr
    weights0 = np.ones(len(indices0), dtype=np.float64)
    self_w = np.zeros(g.n, dtype=np.float64)
    m = g.m
    node_comm = np.arange(g.n, dtype=np.int64)

    if m > 0:
        indptr, indices, weights = indptr0, indices0, weights0
        level_self = self_w
        while True:
            k_arr = np.bincount(
                np.repeat(np.arange(len(indptr) - 1), np.diff(indptr)),
                weights=weights, minlength=len(indptr) - 1) + 2.0 * level_self
            comm, moved = _louvain_level(indptr, indices, weights, k_arr,
                                         float(m), resolution)
            if not moved:
                break
            # dense[i] is the aggregated node id of level node i, so the
            # original-node map composes through it; every level with a move
            # strictly shrinks the graph, which bounds the loop
            indptr, indices, weights, level_self, dense = _aggregate(
                indptr, indices, weights, level_self, comm)
            node_comm = dense[node_comm]

    # renumber by first appearance in ascending node order
    remap: dict[int, int] = {}
    assignment: dict[str, int] = {}
    final = np.empty(g.n, dtype=np.int64)
    for i, uid in enumerate(g.nodes):
        c = int(node_comm[i])
        if c not in remap:
            remap[c] = len(remap)
        final[i] = remap[c]
        assignment[uid] = remap[c]
    q = _assignment_modularity(indptr0, indices0, weights0,
                               np.zeros(g.n), final, resolution)
    profiles = [CommunityProfile(community_id=c, size=int(count))
                for c, count in enumerate(np.bincount(final, minlength=len(remap)))]
    return CommunityPartition(assignment=assignment, modularity=q,
                              per_community=profiles)


def decompose_communities(partition: CommunityPartition,
                          stances: Mapping[str, StanceAssignment],
                          top_n: int = 10) -> list[CommunityProfile]:
    """Stance tallies and lean for the top_n largest communities.

    Users missing from the stance map count as Neutral.  Ordered by size
    descending, community id ascending on ties; the partition's own
    per_community list is refreshed with the tallies as a side effect.
    """
    by_id: dict[int, CommunityProfile] = {}
    for profile in partition.per_community:
        profile.n_left = profile.n_right = 0
        profile.n_center = profile.n_neutral = 0
        by_id[profile.community_id] = profile
    for uid, c in partition.assignment.items():
        profile = by_id[c]
        entry = stances.get(uid)
        stance = entry.stance if entry is not None else Stance.NEUTRAL
        if stance is Stance.LEFT:
            profile.n_left += 1
        elif stance is Stance.RIGHT:
            profile.n_right += 1
        elif stance is Stance.CENTER:
            profile.n_center += 1
        else:
            profile.n_neutral += 1
    ranked = sorted(partition.per_community,
                    key=lambda p: (-p.size, p.community_id))
    return ranked[:top_n]

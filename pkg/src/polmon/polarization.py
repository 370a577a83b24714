"""Friedkin-Johnsen equilibrium opinions and the polarization index.

Given innate opinions s (entries in [-1, 1]) on a simple graph with
combinatorial Laplacian L, the expressed-opinion equilibrium solves

    (I + L) z = s        equivalently    z_i = (s_i + sum_{j~i} z_j) / (1 + deg_i)

and the polarization index is pi = ||z||^2 / n, the mean squared
equilibrium opinion, which lives in [0, 1]: 0 for an unopinionated
population, 1 exactly when every connected component is internally
unanimous at +/-1.

Two solvers are provided.  DirectSolve factorizes the sparse SPD system;
FixedPoint runs the Jacobi iteration above and doubles as the independent
verification oracle for the direct path.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import _kernels
from .graphkit import InteractionGraph
from .stance import opinion_vector


class SolverMethod(Enum):
    DIRECT = "DirectSolve"
    FIXED_POINT = "FixedPoint"


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass
class SolverInfo:
    method: SolverMethod
    iterations: int
    residual: float


@dataclass
class PolarizationResult:
    pi: float
    z: np.ndarray
    solver: SolverInfo
    n: int
    m: int


def default_max_iter(n: int) -> int:
    # Jacobi contracts like deg/(1+deg) per sweep; generous cap so dense
    # graphs do not trip false non-convergence.
    return 10 * n + 1000


def _system(indptr: np.ndarray, indices: np.ndarray) -> sp.csc_matrix:
    n = len(indptr) - 1
    deg = np.diff(indptr)
    adj = sp.csr_matrix(
        (np.ones(len(indices)), indices, indptr), shape=(n, n))
    return (sp.diags(1.0 + deg) - adj).tocsc()


def fj_equilibrium(g: InteractionGraph, s: np.ndarray,
                   tol: float = 1e-10,
                   max_iter: int | None = None,
                   method: SolverMethod = SolverMethod.DIRECT
                   ) -> tuple[np.ndarray, SolverInfo]:
    """Solve (I + L) z = s on g; returns (z, solver info).

    The direct route cannot fail on valid input (I + L is symmetric
    positive definite); the fixed point raises ConvergenceError carrying
    the last residual if max_iter sweeps do not reach tol.
    """
    if len(s) != g.n:
        raise ValueError(f"opinion vector has length {len(s)}, graph has {g.n}")
    if g.n and np.max(np.abs(s)) > 1.0 + 1e-12:
        raise ValueError("innate opinions must lie in [-1, 1]")
    s = np.asarray(s, dtype=np.float64)
    indptr, indices = g.csr
    if max_iter is None:
        max_iter = default_max_iter(g.n)

    if method is SolverMethod.FIXED_POINT:
        z, iters, residual, converged = _kernels.fj_fixed_point(
            indptr, indices, s, tol, max_iter)
        if not converged:
            raise ConvergenceError(
                f"fixed point stalled at residual {residual:.3e} "
                f"after {iters} sweeps", residual, iters)
        return z, SolverInfo(SolverMethod.FIXED_POINT, iters, residual)

    if g.n == 0:
        return np.zeros(0), SolverInfo(SolverMethod.DIRECT, 0, 0.0)
    system = _system(indptr, indices)
    z = spla.spsolve(system, s)
    z = np.atleast_1d(z)
    residual = float(np.max(np.abs(system @ z - s)))
    return z, SolverInfo(SolverMethod.DIRECT, 1, residual)


def polarization_index(z: np.ndarray) -> float:
    """Mean squared equilibrium opinion; undefined (raises) on empty input."""
    if len(z) == 0:
        raise ValueError("polarization index is undefined on an empty graph")
    return float(np.dot(z, z) / len(z))


def compute_pi(g: InteractionGraph,
               stances: Mapping,
               method: SolverMethod = SolverMethod.DIRECT,
               tol: float = 1e-10,
               max_iter: int | None = None,
               include_isolated: bool = True) -> PolarizationResult:
    """opinion_vector -> fj_equilibrium -> polarization_index, composed.

    include_isolated=False drops degree-0 nodes (whose z would simply echo
    s) before solving.
    """
    work = g
    if not include_isolated:
        from .graphkit import remove_nodes
        isolated = {u for u in g.nodes if g.degree_of(u) == 0}
        work = remove_nodes(g, isolated)
    s = opinion_vector(work, stances)
    z, info = fj_equilibrium(work, s, tol=tol, max_iter=max_iter, method=method)
    return PolarizationResult(pi=polarization_index(z), z=z, solver=info,
                              n=work.n, m=work.m)

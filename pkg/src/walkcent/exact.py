"""Dense, ground-truth computations of walk-centrality quantities.

Everything here is exact up to dense linear algebra: Laplacian
pseudoinverse quadratic forms, spectral sums, hitting and detour times,
group walk centrality, and exact marginal gains.  These routines are the
oracles that the sketch-based estimators are tested against; they
deliberately favor clarity over scale and refuse to run above a dense
size cap.

Quantities
----------
For a connected weighted graph with stationary distribution
``pi_i = d_i / d``:

* walk centrality ``H_j = sum_i pi_i H_ij``, the expected hitting time of
  ``j`` from stationarity, equal to ``d (e_j - pi)^T L^+ (e_j - pi)``;
* Kemeny constant ``K = sum_j pi_j H_j``, independent of the start vertex;
* group walk centrality ``H(S) = pi_{-S}^T L_{-S}^{-1} d_{-S}``, the
  stationary expected hitting time of the set ``S``;
* group detour time ``D_ij(S)``, the expected time from ``i`` to ``j``
  constrained to touch ``S`` on the way;
* marginal gain ``Delta(u, S) = H(S) - H(S + u)``, available in closed
  form from two grounded solves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, ResourceLimitError, ValidationError
from .graph import (WeightedGraph, adjacency_csr, grounded_csr,
                    grounded_system, require_connected)

__all__ = [
    "DENSE_CAP",
    "CentralityReport",
    "HittingStructure",
    "GwcValue",
    "pseudoinverse_dense",
    "walk_centrality_exact",
    "walk_centrality_spectral",
    "hitting_times",
    "resistance_distance",
    "gwc_exact",
    "absorption_probabilities",
    "group_detour_time",
    "marginal_gain_exact",
]

DENSE_CAP = 5000


@dataclass(frozen=True)
class CentralityReport:
    """Per-vertex walk centrality together with the Kemeny constant.

    Attributes
    ----------
    walk_centrality : ndarray of float64, shape (n,)
        ``H_j`` for every vertex.
    kemeny : float
        ``K = sum_j pi_j H_j``.
    method : str
        One of ``'dense-pseudoinverse'``, ``'spectral'``, ``'sketch'``.
    """

    walk_centrality: np.ndarray
    kemeny: float
    method: str


@dataclass(frozen=True)
class HittingStructure:
    """Full pairwise hitting times and the fundamental-type matrix.

    Attributes
    ----------
    hitting : ndarray, shape (n, n)
        ``hitting[i, j]`` is the expected steps from ``i`` to first reach
        ``j``; the diagonal is zero.
    fundamental_star : ndarray, shape (n, n)
        ``F = (I - P + 1 pi^T)^{-1} diag(pi)^{-1}``, which satisfies
        ``H_ij = F_jj - F_ij``.
    """

    hitting: np.ndarray
    fundamental_star: np.ndarray


@dataclass(frozen=True)
class GwcValue:
    """Group walk centrality of one vertex set.

    Attributes
    ----------
    set : tuple of int
        The absorbing set, sorted.
    value : float
        ``H(S)``.
    """

    set: tuple
    value: float


def _check_cap(n: int, dense_cap: int, what: str) -> None:
    if n > dense_cap:
        raise ResourceLimitError(
            f"{what} requires dense {n} x {n} linear algebra, above "
            f"dense_cap={dense_cap}; use the sketch-based estimators "
            "for graphs this large")


def _laplacian_dense(graph: WeightedGraph) -> np.ndarray:
    lap = np.zeros((graph.n, graph.n), dtype=np.float64)
    lap[graph.edge_tail, graph.edge_head] = -graph.edge_weight
    lap += lap.T
    lap[np.diag_indices_from(lap)] = graph.degree
    return lap


def _grounded_dense(graph: WeightedGraph, absorbed) -> tuple:
    """Grounded system plus its dense matrix; shared by several routines."""
    system = grounded_system(graph, absorbed)
    dense = grounded_csr(system).toarray()
    return system, dense


def pseudoinverse_dense(graph: WeightedGraph, *,
                        dense_cap: int = DENSE_CAP) -> np.ndarray:
    """Moore-Penrose pseudoinverse ``L^+`` of the Laplacian.

    Computed as ``(L + J/n)^{-1} - J/n`` with ``J`` the all-ones matrix,
    which is exact for connected graphs and costs one SPD solve.
    """
    require_connected(graph, "pseudoinverse_dense")
    _check_cap(graph.n, dense_cap, "pseudoinverse_dense")
    n = graph.n
    if n == 1:
        return np.zeros((1, 1))
    shifted = _laplacian_dense(graph) + 1.0 / n
    pinv = scipy.linalg.solve(shifted, np.eye(n), assume_a="pos")
    pinv -= 1.0 / n
    return pinv


def walk_centrality_exact(graph: WeightedGraph, *,
                          dense_cap: int = DENSE_CAP) -> CentralityReport:
    """Exact walk centrality and Kemeny constant via ``L^+``.

    Uses ``H_j = d (e_j - pi)^T L^+ (e_j - pi)`` and ``K = sum pi_j H_j``.

    Examples
    --------
    P3 has ``H = (5/2, 1/2, 5/2)`` and ``K = 3/2``; on K3 every vertex
    has ``H_j = 4/3``.
    """
    require_connected(graph, "walk_centrality_exact")
    _check_cap(graph.n, dense_cap, "walk_centrality_exact")
    if graph.n == 1:
        return CentralityReport(np.zeros(1), 0.0, "dense-pseudoinverse")
    pinv = pseudoinverse_dense(graph, dense_cap=dense_cap)
    pi = graph.degree / graph.total_degree
    pinv_pi = pinv @ pi
    quad = float(pi @ pinv_pi)
    h = graph.total_degree * (np.diag(pinv) - 2.0 * pinv_pi + quad)
    kemeny = float(pi @ h)
    return CentralityReport(h, kemeny, "dense-pseudoinverse")


def walk_centrality_spectral(graph: WeightedGraph, *,
                             dense_cap: int = DENSE_CAP) -> CentralityReport:
    """Walk centrality through the normalized-Laplacian spectrum.

    With eigenpairs ``(sigma_k, psi_k)`` of ``D^{-1/2} L D^{-1/2}``,

        ``H_j = (d / d_j) sum_{k >= 2} psi_k[j]^2 / sigma_k``,
        ``K = sum_{k >= 2} 1 / sigma_k``.

    The single zero eigenvalue of a connected graph is identified as any
    value below ``1e-9 * n`` (the normalized spectrum lives in [0, 2], so
    the weight scale drops out); exactly one such mode must exist.
    """
    require_connected(graph, "walk_centrality_spectral")
    _check_cap(graph.n, dense_cap, "walk_centrality_spectral")
    n = graph.n
    if n == 1:
        return CentralityReport(np.zeros(1), 0.0, "spectral")
    inv_sqrt_d = 1.0 / np.sqrt(graph.degree)
    norm_lap = _laplacian_dense(graph) * inv_sqrt_d[:, None] * inv_sqrt_d
    vals, vecs = scipy.linalg.eigh(norm_lap)
    zero_tol = 1e-9 * n
    n_zero = int((vals < zero_tol).sum())
    if n_zero != 1:
        raise ConvergenceError(
            f"expected exactly one zero eigenvalue, found {n_zero} below "
            f"{zero_tol:.3e}")
    nz = vals[1:]
    psi = vecs[:, 1:]
    h = (graph.total_degree / graph.degree) * ((psi * psi) / nz).sum(axis=1)
    kemeny = float((1.0 / nz).sum())
    return CentralityReport(h, kemeny, "spectral")


def hitting_times(graph: WeightedGraph, *,
                  dense_cap: int = DENSE_CAP) -> HittingStructure:
    """All pairwise expected hitting times ``H_ij``.

    Solves ``(I - P + 1 pi^T) F = diag(pi)^{-1}`` once and reads off
    ``H_ij = F_jj - F_ij``.

    Examples
    --------
    P3 has hitting matrix ``[[0, 1, 4], [3, 0, 3], [4, 1, 0]]``.
    """
    require_connected(graph, "hitting_times")
    _check_cap(graph.n, dense_cap, "hitting_times")
    n = graph.n
    if graph.m == 0:
        raise ValidationError("hitting times require at least one edge")
    pi = graph.degree / graph.total_degree
    trans = adjacency_csr(graph).toarray() / graph.degree[:, None]
    core = np.eye(n) - trans + pi[None, :]
    fstar = scipy.linalg.solve(core, np.diag(1.0 / pi))
    hitting = np.diag(fstar)[None, :] - fstar
    np.fill_diagonal(hitting, 0.0)
    return HittingStructure(hitting, fstar)


def resistance_distance(graph: WeightedGraph, i: int, j: int, *,
                        dense_cap: int = DENSE_CAP) -> float:
    """Effective resistance ``R_ij = L^+_ii + L^+_jj - 2 L^+_ij``."""
    if not (0 <= i < graph.n and 0 <= j < graph.n):
        raise ValidationError(f"vertex pair ({i}, {j}) out of range")
    if i == j:
        return 0.0
    pinv = pseudoinverse_dense(graph, dense_cap=dense_cap)
    return float(pinv[i, i] + pinv[j, j] - 2.0 * pinv[i, j])


def gwc_exact(graph: WeightedGraph, absorbed, *,
              dense_cap: int = DENSE_CAP) -> GwcValue:
    """Group walk centrality ``H(S) = pi_{-S}^T L_{-S}^{-1} d_{-S}``.

    This is the expected time for a stationary-start walk to first reach
    the set ``S`` (starts inside ``S`` count as zero).

    Examples
    --------
    On P3, ``H({1}) = 1/2``, ``H({0}) = 5/2``, ``H({0, 1}) = 1/4``.
    """
    require_connected(graph, "gwc_exact")
    _check_cap(graph.n, dense_cap, "gwc_exact")
    system, dense = _grounded_dense(graph, absorbed)
    d_free = graph.degree[system.free]
    x = scipy.linalg.solve(dense, d_free, assume_a="pos")
    value = float(d_free @ x / graph.total_degree)
    return GwcValue(set=tuple(int(v) for v in system.absorbed), value=value)


def absorption_probabilities(graph: WeightedGraph, absorbed, *,
                             dense_cap: int = DENSE_CAP) -> np.ndarray:
    """Probability of first reaching each vertex of ``S``.

    Returns an ``(n, |S|)`` matrix ``Q`` whose columns follow sorted
    ``S``; ``Q[i, t]`` is the probability that a walk from ``i`` enters
    ``S`` at ``S[t]``.  Rows of vertices inside ``S`` are indicator rows.
    Row sums are 1 on a connected graph.
    """
    require_connected(graph, "absorption_probabilities")
    _check_cap(graph.n, dense_cap, "absorption_probabilities")
    system, dense = _grounded_dense(graph, absorbed)
    adj = adjacency_csr(graph)
    cross = adj[system.free, :][:, system.absorbed].toarray()
    probs = np.zeros((graph.n, system.absorbed.size))
    probs[system.free, :] = scipy.linalg.solve(dense, cross, assume_a="pos")
    probs[system.absorbed, np.arange(system.absorbed.size)] = 1.0
    return probs


def group_detour_time(graph: WeightedGraph, absorbed, i: int, j: int, *,
                      dense_cap: int = DENSE_CAP) -> float:
    """Expected time to walk from ``i`` to ``j`` while touching ``S``.

    ``D_ij(S) = H_{i,S} + sum_{s in S} Q[i, s] H_{s,j}`` where ``H_{i,S}``
    is the hitting time of the set and ``Q`` the absorption
    probabilities.  For ``i`` in ``S`` this reduces to ``H_ij``.

    Examples
    --------
    On P3, ``D_{0,2}({1}) = 4`` (one step to the center plus ``H_12 = 3``).
    """
    require_connected(graph, "group_detour_time")
    _check_cap(graph.n, dense_cap, "group_detour_time")
    if not (0 <= i < graph.n and 0 <= j < graph.n):
        raise ValidationError(f"vertex pair ({i}, {j}) out of range")
    system, dense = _grounded_dense(graph, absorbed)
    hit = hitting_times(graph, dense_cap=dense_cap).hitting
    probs = absorption_probabilities(graph, absorbed, dense_cap=dense_cap)
    pos = system.free_index[i]
    if pos >= 0:
        t = scipy.linalg.solve(dense, graph.degree[system.free],
                               assume_a="pos")
        reach = float(t[pos])
    else:
        reach = 0.0
    return reach + float(probs[i, :] @ hit[system.absorbed, j])


def marginal_gain_exact(graph: WeightedGraph, absorbed, u: int, *,
                        dense_cap: int = DENSE_CAP) -> float:
    """Exact decrease ``Delta(u, S) = H(S) - H(S + u)`` for ``u`` not in ``S``.

    Closed form from two grounded solves:

        ``Delta(u, S) = (e_u^T L_{-S}^{-1} d_{-S})^2
                        / (d * e_u^T L_{-S}^{-1} e_u)``.

    ``S`` must be nonempty; the identity has no meaning at ``S = {}``.

    Examples
    --------
    On P3 with ``S = {0}``: ``Delta(1) = 9/4`` and ``Delta(2) = 2``.
    """
    require_connected(graph, "marginal_gain_exact")
    _check_cap(graph.n, dense_cap, "marginal_gain_exact")
    system, dense = _grounded_dense(graph, absorbed)
    pos = system.free_index[u] if 0 <= u < graph.n else -1
    if pos < 0:
        raise ValidationError(
            f"vertex {u} must be a free vertex outside the absorbing set")
    factor = scipy.linalg.cho_factor(dense)
    x = scipy.linalg.cho_solve(factor, graph.degree[system.free])
    y = scipy.linalg.cho_solve(factor, np.eye(system.n_free)[:, pos])
    return float(x[pos] ** 2 / (graph.total_degree * y[pos]))

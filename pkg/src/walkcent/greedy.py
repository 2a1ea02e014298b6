"""Greedy and baseline solvers for the minimum group-walk-centrality set.

The optimization problem: choose ``k`` vertices ``S`` minimizing the group
walk centrality ``H(S)``.  The objective is monotone decreasing and
supermodular in ``S``, so the greedy algorithm that repeatedly removes the
largest marginal gain ``Delta(u, S) = H(S) - H(S + u)`` carries a
``(1 - (k/(k-1)) e^{-1})`` approximation guarantee on the centrality drop
``H({u*}) - H(S_k)``; its sketched variant loses an additive ``eps``.

Two greedy paths are provided: :func:`deter_min_gwc` evaluates every gain
exactly from one dense factorization of ``L_{-S}`` per step, and
:func:`approx_min_gwc` runs entirely on the sketch estimators, with a
fresh deterministic sub-seed per step.  :func:`brute_force_min_gwc` gives
the true optimum for small instances and :func:`baseline_select`
implements the usual comparison heuristics.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from . import _rng
from .errors import (ConvergenceError, ResourceLimitError, ValidationError)
from .exact import (DENSE_CAP, _laplacian_dense, gwc_exact,
                    walk_centrality_exact)
from .graph import WeightedGraph, adjacency_csr, require_connected
from .sketch import approx_delta, approx_gwc, approx_hk
from .solver import SolverOptions

__all__ = [
    "GreedyTrace",
    "OptimizerConfig",
    "deter_min_gwc",
    "approx_min_gwc",
    "brute_force_min_gwc",
    "baseline_select",
    "pagerank",
]

_BASELINES = ("top-degree", "top-pagerank", "top-absorb", "random")

# Tolerance for trace gwc_values on graphs above the dense cap.
_TRACE_DELTA = 1e-7


@dataclass(frozen=True)
class GreedyTrace:
    """Record of an incremental vertex selection.

    Attributes
    ----------
    selected : tuple of int
        Vertices in pick order; prefixes give the nested sets
        ``S_1 < S_2 < ... < S_k``.
    gains : tuple of float
        Realized gain ``H(S_{i-1}) - H(S_i)`` at each step, as measured
        by the selecting method (exact for the deterministic path,
        sketched for the approximate path).  The first entry is NaN:
        no gain is defined for the first pick.
    gwc_values : tuple of float
        ``H(S_i)`` after each step, exact when the dense cap allows and
        solver-approximated otherwise.
    method : str
        One of ``'deter'``, ``'approx'``, ``'top-degree'``,
        ``'top-pagerank'``, ``'top-absorb'``, ``'random'``.
    """

    selected: tuple
    gains: tuple
    gwc_values: tuple
    method: str


@dataclass(frozen=True)
class OptimizerConfig:
    """Configuration for :func:`approx_min_gwc`.

    Attributes
    ----------
    k : int
        Budget, ``1 <= k < n``.
    epsilon : float
        Error parameter in (0, 1) for the sketch estimators.
    seed : int
        Master seed; each greedy step derives its own stream.
    mode : {'practical', 'strict'}
        Tolerance mode passed through to the estimators.
    """

    k: int
    epsilon: float
    seed: int
    mode: str = "practical"


def _check_budget(graph: WeightedGraph, k: int) -> int:
    k = int(k)
    if not (1 <= k < graph.n):
        raise ValidationError(
            f"budget k={k} must satisfy 1 <= k < n={graph.n}")
    return k


def _trace_gwc(graph: WeightedGraph, chosen: list, dense_cap: int) -> float:
    if graph.n <= dense_cap:
        return gwc_exact(graph, chosen, dense_cap=dense_cap).value
    return approx_gwc(graph, chosen, _TRACE_DELTA)


def _gains_from_values(values: list) -> tuple:
    gains = [math.nan]
    for prev, cur in zip(values, values[1:]):
        gains.append(prev - cur)
    return tuple(gains)


def deter_min_gwc(graph: WeightedGraph, k: int, *,
                  dense_cap: int = DENSE_CAP) -> GreedyTrace:
    """Deterministic greedy MinGWC with exact gains.

    The first pick minimizes the walk centrality ``H_u``; every later
    step inverts ``L_{-S}`` once and evaluates the closed-form gain

        ``Delta(u, S) = (e_u^T L_{-S}^{-1} d_{-S})^2
                        / (d * (L_{-S}^{-1})_{uu})``

    for all remaining vertices at once, picking the argmax (ties toward
    the smallest vertex id).

    Examples
    --------
    On P3, ``k=1`` selects the center ``{1}``; ``k=2`` continues with
    vertex 0 on a symmetric tie.  On K4, ``k=3`` reaches ``H(S) = 1/4``.
    """
    require_connected(graph, "deter_min_gwc")
    k = _check_budget(graph, k)
    if graph.n > dense_cap:
        raise ResourceLimitError(
            f"deter_min_gwc needs dense factorizations (n={graph.n} > "
            f"dense_cap={dense_cap}); use approx_min_gwc instead")

    h = walk_centrality_exact(graph, dense_cap=dense_cap).walk_centrality
    chosen = [int(np.argmin(h))]
    gains = [math.nan]
    values = [_trace_gwc(graph, chosen, dense_cap)]

    lap = _laplacian_dense(graph) if k > 1 else None
    for _ in range(1, k):
        mask = np.ones(graph.n, dtype=bool)
        mask[chosen] = False
        free = np.flatnonzero(mask)
        inv = np.linalg.inv(lap[np.ix_(free, free)])
        x = inv @ graph.degree[free]
        step_gain = x ** 2 / (graph.total_degree * np.diag(inv))
        best = int(np.argmax(step_gain))
        chosen.append(int(free[best]))
        gains.append(float(step_gain[best]))
        values.append(_trace_gwc(graph, chosen, dense_cap))

    return GreedyTrace(selected=tuple(chosen), gains=tuple(gains),
                       gwc_values=tuple(values), method="deter")


def approx_min_gwc(graph: WeightedGraph, cfg: OptimizerConfig, *,
                   dense_cap: int = DENSE_CAP,
                   opts: SolverOptions | None = None) -> GreedyTrace:
    """Greedy MinGWC on the sketch estimators.

    Step 1 takes the argmin of the :func:`~walkcent.sketch.approx_hk`
    estimates; steps ``2..k`` take the argmax of the
    :func:`~walkcent.sketch.approx_delta` gains.  Step ``t`` draws its
    sketches from a sub-seed derived from ``cfg.seed`` and ``t``, so the
    whole trace is reproducible.  The centrality drop satisfies the
    greedy ratio ``(1 - (k/(k-1)) e^{-1} - eps)`` with high probability.

    Examples
    --------
    On P3 with ``k=2`` the selection almost always matches
    :func:`deter_min_gwc`; on K2 with ``k=1`` the symmetric tie resolves
    to vertex 0.
    """
    require_connected(graph, "approx_min_gwc")
    k = _check_budget(graph, cfg.k)
    if not (0.0 < cfg.epsilon < 1.0):
        raise ValidationError(
            f"epsilon must be in (0, 1), got {cfg.epsilon!r}")
    if cfg.mode not in ("strict", "practical"):
        raise ValidationError(f"unknown mode {cfg.mode!r}")
    base = replace(opts if opts is not None else SolverOptions(),
                   mode=cfg.mode)

    try:
        first = approx_hk(graph, cfg.epsilon, _rng.child_seed(cfg.seed, 0),
                          opts=base)
    except ConvergenceError as exc:
        raise ConvergenceError(f"approx_min_gwc step 1: {exc}",
                               report=exc.report) from exc
    chosen = [int(np.argmin(first.h_tilde))]
    gains = [math.nan]
    values = [_trace_gwc(graph, chosen, dense_cap)]

    for step in range(1, k):
        try:
            result = approx_delta(graph, chosen, cfg.epsilon,
                                  _rng.child_seed(cfg.seed, step), opts=base)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"approx_min_gwc step {step + 1}: {exc}",
                report=exc.report) from exc
        best_u, best_gain = None, -math.inf
        for u in sorted(result.gains):
            if result.gains[u] > best_gain:
                best_u, best_gain = u, result.gains[u]
        chosen.append(int(best_u))
        gains.append(float(best_gain))
        values.append(_trace_gwc(graph, chosen, dense_cap))

    return GreedyTrace(selected=tuple(chosen), gains=tuple(gains),
                       gwc_values=tuple(values), method="approx")


def brute_force_min_gwc(graph: WeightedGraph, k: int, *,
                        max_combinations: int = 2_000_000,
                        dense_cap: int = DENSE_CAP) -> tuple[tuple, float]:
    """Exhaustive MinGWC optimum over all ``(n choose k)`` subsets.

    Returns ``(S*, H(S*))`` with ties broken lexicographically.

    Examples
    --------
    On P3: ``k=1 -> ({1}, 1/2)`` and ``k=2 -> ({0, 1}, 1/4)``.
    """
    require_connected(graph, "brute_force_min_gwc")
    k = _check_budget(graph, k)
    total = math.comb(graph.n, k)
    if total > max_combinations:
        raise ResourceLimitError(
            f"brute force over {total} subsets exceeds the cap of "
            f"{max_combinations}")
    if graph.n > dense_cap:
        raise ResourceLimitError(
            f"brute_force_min_gwc needs dense solves (n={graph.n} > "
            f"dense_cap={dense_cap})")
    lap = _laplacian_dense(graph)
    mask = np.ones(graph.n, dtype=bool)
    best_set, best_value = None, math.inf
    for subset in itertools.combinations(range(graph.n), k):
        mask[list(subset)] = False
        free = np.flatnonzero(mask)
        mask[list(subset)] = True
        x = scipy.linalg.solve(lap[np.ix_(free, free)], graph.degree[free],
                               assume_a="pos")
        value = float(graph.degree[free] @ x / graph.total_degree)
        if value < best_value:
            best_set, best_value = subset, value
    return tuple(best_set), best_value


def pagerank(graph: WeightedGraph, damping: float = 0.85,
             tol: float = 1e-10, *, max_iterations: int = 10_000
             ) -> np.ndarray:
    """PageRank scores by power iteration on the weighted walk.

    Iterates ``p <- (1 - damping)/n + damping * P^T p`` until the 1-norm
    change drops to ``tol``.  Scores sum to 1; a regular graph is the
    uniform fixed point.
    """
    if not (0.0 < damping < 1.0):
        raise ValidationError(f"damping must be in (0, 1), got {damping!r}")
    if tol <= 0:
        raise ValidationError("tol must be positive")
    require_connected(graph, "pagerank")
    n = graph.n
    if graph.m == 0:
        return np.ones(n)
    trans_t = (adjacency_csr(graph)
               .multiply(1.0 / graph.degree[:, None]).T.tocsr())
    scores = np.full(n, 1.0 / n)
    for _ in range(max_iterations):
        new = (1.0 - damping) / n + damping * (trans_t @ scores)
        if np.abs(new - scores).sum() <= tol:
            return new
        scores = new
    raise ConvergenceError(
        f"pagerank did not reach tol={tol} in {max_iterations} iterations")


def baseline_select(graph: WeightedGraph, k: int, strategy: str,
                    seed=None, *, dense_cap: int = DENSE_CAP) -> GreedyTrace:
    """Baseline vertex selections for MinGWC comparisons.

    Strategies: ``'top-degree'`` (largest weighted degrees),
    ``'top-pagerank'`` (largest PageRank), ``'top-absorb'`` (smallest
    walk centrality), ``'random'`` (uniform without replacement, seeded).
    Non-random ties resolve toward the smaller vertex id.
    """
    require_connected(graph, "baseline_select")
    k = _check_budget(graph, k)
    if strategy not in _BASELINES:
        raise ValidationError(
            f"unknown strategy {strategy!r}; expected one of {_BASELINES}")

    ids = np.arange(graph.n)
    if strategy == "top-degree":
        order = np.lexsort((ids, -graph.degree))
    elif strategy == "top-pagerank":
        order = np.lexsort((ids, -pagerank(graph)))
    elif strategy == "top-absorb":
        if graph.n <= dense_cap:
            h = walk_centrality_exact(graph, dense_cap=dense_cap
                                      ).walk_centrality
        else:
            h = approx_hk(graph, 0.3,
                          seed if seed is not None else 0).h_tilde
        order = np.lexsort((ids, h))
    else:
        if seed is None:
            raise ValidationError("strategy 'random' requires a seed")
        rng = _rng.stream(seed, _rng.TAG_BASELINE)
        order = rng.choice(graph.n, size=k, replace=False)

    chosen: list = []
    values = []
    for v in order[:k]:
        chosen.append(int(v))
        values.append(_trace_gwc(graph, chosen, dense_cap))
    return GreedyTrace(selected=tuple(chosen),
                       gains=_gains_from_values(values),
                       gwc_values=tuple(values), method=strategy)

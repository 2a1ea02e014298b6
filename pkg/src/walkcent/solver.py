"""Iterative solver for Laplacian and grounded-Laplacian systems.

Both system classes are solved by preconditioned conjugate gradient (PCG)
with an optional Jacobi (diagonal) preconditioner.  The accuracy contract
is stated in the energy norm of the system matrix ``M``:

    ``|| x - M^+ b ||_M  <=  delta * || M^+ b ||_M``

The energy norm is not observable during iteration, so convergence is
monitored through the 2-norm residual ``r = b - M x`` with a conservative
conversion based on spectral bounds.  With ``lam_lo <= lambda_min+`` (the
smallest nonzero eigenvalue) and ``lam_hi >= lambda_max``:

    ``||x - M^+ b||_M^2 <= ||r||^2 / lam_lo``  and
    ``||M^+ b||_M^2    >= ||b||^2 / lam_hi``   (for b in the range of M),

so stopping at ``||r|| <= delta * ||b|| * sqrt(lam_lo / lam_hi)`` certifies
the contract.  The bounds used are

* Laplacian: ``lambda_2 >= 2 w_min (1 - cos(pi/n))`` (no connected graph
  beats the weighted path) and ``lambda_max <= n w_max`` (adding the
  missing edges of the complete graph only increases eigenvalues);
* grounded ``L_{-S}``: ``lambda_min >= w_min / n^2`` (the trace of the
  inverse is at most ``n^2 / w_min``) and ``lambda_max <= n w_max``
  (eigenvalue interlacing).

Requested tolerances below what float64 arithmetic can certify are
saturated at a small multiple of machine epsilon; ``SolveReport
.effective_delta`` always records the tolerance that was actually
certified, which may exceed the request in that saturated regime.

Batched right-hand sides are solved in lockstep: all columns share the
iteration loop, each column carries its own step sizes, and a column is
frozen the moment it converges, so results are identical to solving the
columns one at a time.  Memory scales with ``n`` times the batch width;
callers stream large batches in chunks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ValidationError
from .graph import (GroundedSystem, WeightedGraph, grounded_csr,
                    laplacian_csr, require_connected)

__all__ = [
    "SolverOptions",
    "SolveReport",
    "solve_laplacian",
    "solve_laplacian_many",
    "solve_grounded",
    "solve_grounded_many",
]

# Residual can stagnate near machine precision; never demand less than this
# multiple of ||b||.
_STAGNATION_FLOOR = 100.0 * np.finfo(np.float64).eps


@dataclass(frozen=True)
class SolverOptions:
    """Options for :func:`solve_laplacian` and :func:`solve_grounded`.

    Attributes
    ----------
    delta : float or None
        Relative energy-norm tolerance in (0, 1).  ``None`` is allowed
        only where an algorithm derives delta itself.
    max_iterations : int or None
        Iteration cap; ``None`` picks ``2 n + 1000``.
    mode : {'practical', 'strict'}
        Tolerance policy used by the approximation algorithms when they
        derive ``delta``: 'strict' uses the analysis formulas verbatim,
        'practical' (default) uses ``delta = eps / (10 n)`` floored at
        1e-10.  The solver itself treats both modes identically.
    preconditioner : {'jacobi', 'none'}
    """

    delta: float | None = None
    max_iterations: int | None = None
    mode: str = "practical"
    preconditioner: str = "jacobi"


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a single linear solve.

    Attributes
    ----------
    iterations : int
        PCG iterations performed for this right-hand side.
    residual_2norm : float
        Final ``||b - M x||_2``.
    converged : bool
        Whether the stopping threshold was met.
    effective_delta : float
        The relative energy-norm tolerance certified by the final
        residual through the conservative spectral conversion.
    """

    iterations: int
    residual_2norm: float
    converged: bool
    effective_delta: float


def _check_options(opts: SolverOptions) -> None:
    if opts.delta is None or not (0.0 < opts.delta < 1.0):
        raise ValidationError(f"delta must be in (0, 1), got {opts.delta!r}")
    if opts.max_iterations is not None and opts.max_iterations < 1:
        raise ValidationError("max_iterations must be >= 1")
    if opts.mode not in ("strict", "practical"):
        raise ValidationError(f"unknown mode {opts.mode!r}")
    if opts.preconditioner not in ("jacobi", "none"):
        raise ValidationError(
            f"unknown preconditioner {opts.preconditioner!r}")


def _laplacian_conversion(graph: WeightedGraph) -> float:
    """``sqrt(lambda_2_lower / lambda_max_upper)`` for the Laplacian."""
    lam_lo = 2.0 * graph.w_min * (1.0 - math.cos(math.pi / graph.n))
    lam_hi = graph.n * graph.w_max
    return math.sqrt(lam_lo / lam_hi)


def _grounded_conversion(system: GroundedSystem) -> float:
    """``sqrt(lambda_min_lower / lambda_max_upper)`` for ``L_{-S}``."""
    g = system.graph
    lam_lo = g.w_min / float(g.n) ** 2
    lam_hi = g.n * g.w_max
    return math.sqrt(lam_lo / lam_hi)


def _column_norms(x: np.ndarray) -> np.ndarray:
    return np.sqrt((x * x).sum(axis=0))


def _lockstep_pcg(apply_mat, diag_inv, B, thresholds, max_iter):
    """Conjugate gradient over the columns of ``B`` in lockstep.

    Each column is frozen (no further updates) once its residual norm
    drops to its threshold, then removed from the working block.  The
    per-column iteration is algebraically independent of the other
    columns, so a batch solve matches independent single-column solves
    up to summation rounding (numpy reduces a width-1 block in a
    different order than a wide one, so agreement is to ~1 ulp per
    operation rather than bitwise).  Identical inputs always reproduce
    identical outputs.

    Returns ``(X, iterations, residuals, converged)`` with per-column
    diagnostics.
    """
    n, k = B.shape
    X = np.zeros((n, k), dtype=np.float64)
    resid0 = _column_norms(B)
    iterations = np.zeros(k, dtype=np.int64)
    final_resid = resid0.copy()
    converged = resid0 <= thresholds

    live = np.flatnonzero(~converged)
    if live.size == 0:
        return X, iterations, final_resid, converged

    Xa = np.zeros((n, live.size), dtype=np.float64)
    Ra = B[:, live].copy()
    thr = thresholds[live]
    if diag_inv is None:
        Z = Ra.copy()
    else:
        Z = Ra * diag_inv[:, None]
    P = Z.copy()
    rho = (Ra * Z).sum(axis=0)

    for it in range(1, max_iter + 1):
        AP = apply_mat(P)
        pap = (P * AP).sum(axis=0)
        # On a PD (or restricted-PD) system pap > 0 unless p = 0; a
        # non-positive value means the column cannot progress.
        stuck = ~(pap > 0.0)
        alpha = np.where(stuck, 0.0, rho / np.where(stuck, 1.0, pap))
        Xa += alpha[None, :] * P
        Ra -= alpha[None, :] * AP
        res = _column_norms(Ra)

        done = (res <= thr) | stuck | ~np.isfinite(res)
        if done.any():
            idx = np.flatnonzero(done)
            cols = live[idx]
            X[:, cols] = Xa[:, idx]
            iterations[cols] = it
            final_resid[cols] = res[idx]
            converged[cols] = res[idx] <= thr[idx]
            keep = np.flatnonzero(~done)
            if keep.size == 0:
                return X, iterations, final_resid, converged
            live = live[keep]
            Xa = Xa[:, keep].copy()
            Ra = Ra[:, keep].copy()
            P = P[:, keep].copy()
            res = res[keep]
            rho = rho[keep]
            thr = thr[keep]

        if diag_inv is None:
            Z = Ra.copy()
        else:
            Z = Ra * diag_inv[:, None]
        rho_new = (Ra * Z).sum(axis=0)
        beta = rho_new / rho
        P = Z + beta[None, :] * P
        rho = rho_new

    # out of iterations: record state of the still-live columns
    X[:, live] = Xa
    iterations[live] = max_iter
    final_resid[live] = _column_norms(Ra)
    converged[live] = final_resid[live] <= thr
    return X, iterations, final_resid, converged


def _solve_block(apply_mat, diag_inv, B, conversion, opts, n):
    _check_options(opts)
    B = np.asarray(B, dtype=np.float64)
    if not np.isfinite(B).all():
        raise ValidationError("right-hand side contains non-finite values")
    norms = _column_norms(B)
    thresholds = np.maximum(opts.delta * conversion * norms,
                            _STAGNATION_FLOOR * norms)
    max_iter = opts.max_iterations
    if max_iter is None:
        max_iter = 2 * n + 1000
    X, iters, resid, conv = _lockstep_pcg(apply_mat, diag_inv, B,
                                          thresholds, max_iter)
    reports = []
    for j in range(B.shape[1]):
        eff = float(resid[j] / (conversion * norms[j])) if norms[j] > 0 else 0.0
        reports.append(SolveReport(
            iterations=int(iters[j]),
            residual_2norm=float(resid[j]),
            converged=bool(conv[j]),
            effective_delta=eff))
    return X, reports


def solve_laplacian_many(graph: WeightedGraph, B,
                         opts: SolverOptions) -> tuple[np.ndarray,
                                                       list[SolveReport]]:
    """Solve ``L x = b`` for every column ``b`` of ``B`` in lockstep.

    Same contract as :func:`solve_laplacian`, applied per column.

    Raises
    ------
    ValidationError
        On bad options, disconnected graph, wrong shapes, or a column not
        orthogonal to the all-ones vector (within ``1e-9`` relative).
    ConvergenceError
        If any column fails to converge; the error carries that column's
        :class:`SolveReport`.
    """
    require_connected(graph, "solve_laplacian")
    if graph.n < 2:
        raise ValidationError("Laplacian solves need at least 2 vertices")
    B = np.asarray(B, dtype=np.float64)
    if B.ndim != 2 or B.shape[0] != graph.n:
        raise ValidationError(
            f"B must have shape ({graph.n}, k), got {B.shape}")
    sums = B.sum(axis=0)
    scale = np.maximum(1.0, _column_norms(B))
    bad = np.abs(sums) > 1e-9 * scale
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise ValidationError(
            f"column {j} is not orthogonal to the all-ones vector "
            f"(sum = {sums[j]:.3e}); project it first")
    # exact internal projection removes the rounding-level component
    B = B - sums[None, :] / graph.n

    lap = laplacian_csr(graph)
    diag_inv = None
    if opts.preconditioner == "jacobi":
        diag_inv = 1.0 / graph.degree
    conversion = _laplacian_conversion(graph)
    X, reports = _solve_block(lambda P: lap @ P, diag_inv, B, conversion,
                              opts, graph.n)
    for j, rep in enumerate(reports):
        if not rep.converged:
            raise ConvergenceError(
                f"Laplacian solve failed for column {j}: residual "
                f"{rep.residual_2norm:.3e} after {rep.iterations} "
                "iterations", report=rep)
    X -= X.mean(axis=0)[None, :]
    return X, reports


def solve_laplacian(graph: WeightedGraph, b,
                    opts: SolverOptions) -> tuple[np.ndarray, SolveReport]:
    """Solve the Laplacian system ``L x = b`` with ``1^T b = 0``.

    Returns the representative solution with ``1^T x = 0`` (enforced by a
    final exact projection) and a :class:`SolveReport`.

    Examples
    --------
    On the two-vertex unit-weight graph, ``b = (1, -1)`` gives
    ``x = (1/2, -1/2)`` (the dense pseudoinverse ``L^+`` is
    ``[[1/4, -1/4], [-1/4, 1/4]]``, and ``L^+ b`` doubles its first
    column).  On the path graph P3, ``b = (1, 0, -1)`` is an eigenvector:
    ``x = (1, 0, -1)``.
    """
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 1:
        raise ValidationError("b must be a vector")
    X, reports = solve_laplacian_many(graph, b[:, None], opts)
    return X[:, 0], reports[0]


def solve_grounded_many(system: GroundedSystem, B,
                        opts: SolverOptions) -> tuple[np.ndarray,
                                                      list[SolveReport]]:
    """Solve ``L_{-S} x = b`` for every column of ``B`` in lockstep."""
    require_connected(system.graph, "solve_grounded")
    B = np.asarray(B, dtype=np.float64)
    nf = system.n_free
    if B.ndim != 2 or B.shape[0] != nf:
        raise ValidationError(f"B must have shape ({nf}, k), got {B.shape}")

    mat = grounded_csr(system)
    diag_inv = None
    if opts.preconditioner == "jacobi":
        diag_inv = 1.0 / system.graph.degree[system.free]
    conversion = _grounded_conversion(system)
    X, reports = _solve_block(lambda P: mat @ P, diag_inv, B, conversion,
                              opts, nf)
    for j, rep in enumerate(reports):
        if not rep.converged:
            raise ConvergenceError(
                f"grounded solve failed for column {j}: residual "
                f"{rep.residual_2norm:.3e} after {rep.iterations} "
                "iterations", report=rep)
    return X, reports


def solve_grounded(system: GroundedSystem, b,
                   opts: SolverOptions) -> tuple[np.ndarray, SolveReport]:
    """Solve the grounded system ``L_{-S} x = b``.

    ``b`` and ``x`` are indexed by ``system.free``.

    Examples
    --------
    On P3 with ``S = {0}``, ``b = d_{-S} = (2, 1)`` gives ``x = (3, 4)``,
    the expected hitting times to vertex 0 from vertices 1 and 2.
    """
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 1:
        raise ValidationError("b must be a vector")
    X, reports = solve_grounded_many(system, b[:, None], opts)
    return X[:, 0], reports[0]

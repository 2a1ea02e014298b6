"""Weighted undirected graphs and their Laplacian operators.

The central type is :class:`WeightedGraph`, an immutable container holding a
simple connected-or-not weighted graph in two synchronized layouts: a sorted
edge list (each edge stored once with ``tail < head``) and a CSR adjacency
structure (each edge stored in both directions, neighbors sorted per row).
All analysis routines in the package consume this type.

Conventions
-----------
* Vertices are ``0 .. n-1``.  External inputs with arbitrary labels are
  remapped at ingestion time and the original labels are kept in
  ``WeightedGraph.labels``.
* Weights are strictly positive and finite.  Unweighted input defaults
  every weight to 1.0.
* Self loops and duplicate edges are rejected; duplicates may instead be
  merged (weights summed) on request.
* The (weighted) degree of vertex ``i`` is ``d_i = sum_j w_ij`` and
  ``d = sum_i d_i`` is twice the total edge weight.  The random walk moves
  from ``i`` to ``j`` with probability ``w_ij / d_i`` and, on a connected
  graph, has stationary distribution ``pi_i = d_i / d``.
* The Laplacian is ``L = D - A`` with ``D = diag(d_1, ..., d_n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import ValidationError

__all__ = [
    "WeightedGraph",
    "StationaryDistribution",
    "GroundedSystem",
    "IncidenceDecomposition",
    "build_graph",
    "largest_connected_component",
    "stationary",
    "apply_laplacian",
    "grounded_system",
    "apply_grounded",
    "incidence_decomposition",
]


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable simple weighted undirected graph.

    Attributes
    ----------
    n : int
        Number of vertices.
    m : int
        Number of edges (each undirected edge counted once).
    edge_tail, edge_head : ndarray of int64, shape (m,)
        Endpoints with ``edge_tail[e] < edge_head[e]``, sorted
        lexicographically by (tail, head).
    edge_weight : ndarray of float64, shape (m,)
        Positive edge weights aligned with the edge arrays.
    indptr : ndarray of int64, shape (n + 1,)
    indices : ndarray of int64, shape (2 m,)
    adj_weight : ndarray of float64, shape (2 m,)
        CSR adjacency: the neighbors of ``i`` are
        ``indices[indptr[i]:indptr[i+1]]`` (sorted ascending) with matching
        weights in ``adj_weight``.
    degree : ndarray of float64, shape (n,)
        Weighted degrees ``d_i``.
    total_degree : float
        ``d = sum_i d_i``.
    w_min, w_max : float
        Extreme edge weights (0.0 when the graph has no edges).
    labels : tuple or None
        Original external vertex labels, ``labels[i]`` for vertex ``i``.
        ``None`` means vertices are identified by their indices.
    """

    n: int
    m: int
    edge_tail: np.ndarray
    edge_head: np.ndarray
    edge_weight: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    adj_weight: np.ndarray
    degree: np.ndarray
    total_degree: float
    w_min: float
    w_max: float
    labels: tuple | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for name in ("edge_tail", "edge_head", "edge_weight", "indptr",
                     "indices", "adj_weight", "degree"):
            getattr(self, name).setflags(write=False)

    def neighbors(self, i: int) -> np.ndarray:
        """Sorted neighbor indices of vertex ``i``."""
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def label_of(self, i: int):
        """External label of vertex ``i`` (the index itself by default)."""
        return self.labels[i] if self.labels is not None else i


@dataclass(frozen=True)
class StationaryDistribution:
    """Stationary distribution of the random walk on a connected graph.

    Attributes
    ----------
    pi : ndarray of float64, shape (n,)
        ``pi_i = d_i / d``; entries are positive and sum to 1.
    """

    pi: np.ndarray

    def __post_init__(self):
        self.pi.setflags(write=False)


@dataclass(frozen=True, eq=False)
class GroundedSystem:
    """A Laplacian with the rows/columns of an absorbing set removed.

    For a nonempty proper subset ``S`` of vertices, the grounded matrix
    ``L_{-S}`` is the principal submatrix of ``L`` on ``V \\ S``.  On a
    connected graph it is symmetric positive definite.

    Attributes
    ----------
    graph : WeightedGraph
    absorbed : ndarray of int64
        Sorted vertex indices of ``S``.
    free : ndarray of int64
        Sorted vertex indices of ``V \\ S``; row/column ``k`` of ``L_{-S}``
        corresponds to vertex ``free[k]``.
    free_index : ndarray of int64, shape (n,)
        Inverse map: position of each vertex within ``free``; ``-1`` for
        absorbed vertices.
    """

    graph: WeightedGraph
    absorbed: np.ndarray
    free: np.ndarray
    free_index: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for name in ("absorbed", "free", "free_index"):
            getattr(self, name).setflags(write=False)

    @property
    def n_free(self) -> int:
        return int(self.free.size)


@dataclass(frozen=True, eq=False)
class IncidenceDecomposition:
    """Split of a grounded Laplacian into interior edges and boundary mass.

    Writing ``F = V \\ S``, the grounded matrix factors as

        ``L_{-S} = B'^T W' B' + diag(z)``

    where ``B'`` is the signed incidence matrix of the edges with both
    endpoints in ``F`` (rows indexed by those interior edges, columns by
    ``F`` in the order of ``system.free``) and ``z_u`` collects the weight
    of edges joining ``u`` in ``F`` to the absorbed set.

    Attributes
    ----------
    system : GroundedSystem
    interior_tail, interior_head : ndarray of int64
        Endpoints of the interior edges in *original* vertex indices,
        ``tail < head``, lexicographic order.
    interior_weight : ndarray of float64
        Interior edge weights.
    boundary_mass : ndarray of float64, shape (n_free,)
        ``z_u`` for each free vertex, aligned with ``system.free``.
    """

    system: GroundedSystem
    interior_tail: np.ndarray
    interior_head: np.ndarray
    interior_weight: np.ndarray
    boundary_mass: np.ndarray

    def __post_init__(self):
        for name in ("interior_tail", "interior_head", "interior_weight",
                     "boundary_mass"):
            getattr(self, name).setflags(write=False)

    @property
    def interior_tail_free(self) -> np.ndarray:
        """Interior edge tails in free-index (row of ``B'``) coordinates."""
        return self.system.free_index[self.interior_tail]

    @property
    def interior_head_free(self) -> np.ndarray:
        """Interior edge heads in free-index coordinates."""
        return self.system.free_index[self.interior_head]


# ---------------------------------------------------------------------------
# construction


def _edges_to_arrays(edges) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Normalize edge input to (tail, head, weight) arrays, unvalidated."""
    if isinstance(edges, np.ndarray):
        arr = edges
        if arr.ndim != 2 or arr.shape[1] not in (2, 3):
            raise ValidationError(
                "edge array must have shape (m, 2) or (m, 3), got "
                f"{arr.shape}")
        tails = np.asarray(arr[:, 0])
        heads = np.asarray(arr[:, 1])
        if arr.shape[1] == 3:
            weights = np.asarray(arr[:, 2], dtype=np.float64)
        else:
            weights = np.ones(arr.shape[0], dtype=np.float64)
        return tails, heads, weights

    tails, heads, weights = [], [], []
    for pos, edge in enumerate(edges):
        edge = tuple(edge)
        if len(edge) == 2:
            u, v = edge
            w = 1.0
        elif len(edge) == 3:
            u, v, w = edge
        else:
            raise ValidationError(
                f"edge #{pos} has {len(edge)} fields, expected 2 or 3")
        tails.append(u)
        heads.append(v)
        weights.append(w)
    return (np.asarray(tails), np.asarray(heads),
            np.asarray(weights, dtype=np.float64))


def build_graph(edges,
                n: int | None = None,
                labels: Sequence | None = None,
                merge_duplicates: bool = False) -> WeightedGraph:
    """Build a :class:`WeightedGraph` from an edge list.

    Parameters
    ----------
    edges : iterable of (u, v) or (u, v, w), or ndarray of shape (m, 2|3)
        Vertex indices must be integers in ``[0, n)``.  Missing weights
        default to 1.0.
    n : int, optional
        Number of vertices.  Defaults to ``max(index) + 1``; when given it
        may exceed that (trailing isolated vertices are allowed and can be
        stripped later by :func:`largest_connected_component`).
    labels : sequence, optional
        External labels, one per vertex.
    merge_duplicates : bool
        When True, parallel edges are merged by summing their weights.
        When False (the default) a duplicate edge raises
        :class:`ValidationError`.

    Raises
    ------
    ValidationError
        On self loops, non-positive or non-finite weights, out-of-range or
        non-integral indices, unmerged duplicates, or a bad ``n``.
    """
    tails, heads, weights = _edges_to_arrays(edges)
    m_in = tails.shape[0]

    if m_in > 0:
        if not (np.issubdtype(tails.dtype, np.integer)
                and np.issubdtype(heads.dtype, np.integer)):
            ft = np.asarray(tails, dtype=np.float64)
            fh = np.asarray(heads, dtype=np.float64)
            if (ft != np.floor(ft)).any() or (fh != np.floor(fh)).any():
                raise ValidationError("vertex indices must be integers")
            tails, heads = ft.astype(np.int64), fh.astype(np.int64)
        else:
            tails = tails.astype(np.int64)
            heads = heads.astype(np.int64)
        if (tails < 0).any() or (heads < 0).any():
            raise ValidationError("vertex indices must be non-negative")
        if not np.isfinite(weights).all() or (weights <= 0).any():
            bad = int(np.flatnonzero(~np.isfinite(weights)
                                     | (weights <= 0))[0])
            raise ValidationError(
                f"edge #{bad} has non-positive or non-finite weight "
                f"{weights[bad]!r}")
        loops = tails == heads
        if loops.any():
            v = int(tails[np.flatnonzero(loops)[0]])
            raise ValidationError(f"self loop at vertex {v} is not allowed")
        max_id = int(max(tails.max(), heads.max()))
    else:
        tails = tails.astype(np.int64)
        heads = heads.astype(np.int64)
        max_id = -1

    if n is None:
        n = max_id + 1
    n = int(n)
    if n <= 0:
        raise ValidationError("graph must have at least one vertex")
    if max_id >= n:
        raise ValidationError(
            f"vertex index {max_id} out of range for n={n}")
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != n:
            raise ValidationError(
                f"got {len(labels)} labels for {n} vertices")

    # canonical orientation and ordering, then duplicate handling
    lo = np.minimum(tails, heads)
    hi = np.maximum(tails, heads)
    order = np.lexsort((hi, lo))
    lo, hi, weights = lo[order], hi[order], weights[order]
    if m_in > 1:
        dup = (lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])
        if dup.any():
            if not merge_duplicates:
                k = int(np.flatnonzero(dup)[0])
                raise ValidationError(
                    f"duplicate edge ({lo[k]}, {hi[k]}); pass "
                    "merge_duplicates=True to sum weights")
            first = np.concatenate(([True], ~dup))
            group = np.cumsum(first) - 1
            weights = np.bincount(group, weights=weights)
            lo, hi = lo[first], hi[first]
    m = lo.shape[0]

    # CSR adjacency with both directions; lexsort gives sorted rows
    rows = np.concatenate((lo, hi))
    cols = np.concatenate((hi, lo))
    ws = np.concatenate((weights, weights))
    perm = np.lexsort((cols, rows))
    indices = cols[perm]
    adj_weight = ws[perm]
    counts = np.bincount(rows, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])

    degree = np.zeros(n, dtype=np.float64)
    if m > 0:
        np.add.at(degree, lo, weights)
        np.add.at(degree, hi, weights)
        w_min = float(weights.min())
        w_max = float(weights.max())
    else:
        w_min = w_max = 0.0

    return WeightedGraph(
        n=n, m=int(m),
        edge_tail=lo, edge_head=hi, edge_weight=np.asarray(weights),
        indptr=indptr, indices=indices, adj_weight=adj_weight,
        degree=degree, total_degree=float(degree.sum()),
        w_min=w_min, w_max=w_max, labels=labels)


# ---------------------------------------------------------------------------
# cached sparse operators


def adjacency_csr(graph: WeightedGraph) -> sparse.csr_matrix:
    """Weighted adjacency matrix of ``graph`` as ``scipy.sparse.csr_matrix``."""
    mat = graph._cache.get("adj")
    if mat is None:
        mat = sparse.csr_matrix(
            (graph.adj_weight, graph.indices, graph.indptr),
            shape=(graph.n, graph.n))
        graph._cache["adj"] = mat
    return mat


def laplacian_csr(graph: WeightedGraph) -> sparse.csr_matrix:
    """Laplacian ``L = D - A`` as a sparse CSR matrix."""
    mat = graph._cache.get("lap")
    if mat is None:
        adj = adjacency_csr(graph)
        mat = (sparse.diags(graph.degree) - adj).tocsr()
        graph._cache["lap"] = mat
    return mat


def incidence_transpose_csr(graph: WeightedGraph) -> sparse.csr_matrix:
    """Transposed signed incidence matrix ``B^T`` (n x m) as CSR.

    Column ``e`` holds ``+1`` at ``edge_tail[e]`` and ``-1`` at
    ``edge_head[e]``, so ``L = B^T diag(w) B``.
    """
    mat = graph._cache.get("bt")
    if mat is None:
        m = graph.m
        rows = np.concatenate((graph.edge_tail, graph.edge_head))
        cols = np.tile(np.arange(m, dtype=np.int64), 2)
        vals = np.concatenate((np.ones(m), -np.ones(m)))
        mat = sparse.csr_matrix((vals, (rows, cols)), shape=(graph.n, m))
        graph._cache["bt"] = mat
    return mat


def _component_labels(graph: WeightedGraph) -> tuple[int, np.ndarray]:
    got = graph._cache.get("components")
    if got is None:
        if graph.m == 0:
            count = graph.n
            labels = np.arange(graph.n)
        else:
            count, labels = csgraph.connected_components(
                adjacency_csr(graph), directed=False)
        got = (int(count), labels)
        graph._cache["components"] = got
    return got


def is_connected(graph: WeightedGraph) -> bool:
    """True when the graph has exactly one connected component."""
    return _component_labels(graph)[0] == 1


def require_connected(graph: WeightedGraph, what: str) -> None:
    """Raise :class:`ValidationError` unless ``graph`` is connected."""
    if not is_connected(graph):
        raise ValidationError(
            f"{what} requires a connected graph; run "
            "largest_connected_component first")


# ---------------------------------------------------------------------------
# operations


def largest_connected_component(
        graph: WeightedGraph) -> tuple[WeightedGraph, np.ndarray]:
    """Restrict ``graph`` to its largest connected component.

    Ties between equal-sized components are broken toward the component
    containing the smallest original vertex index.  Labels are carried
    over (the original index becomes the label when no labels were set).

    Returns
    -------
    (sub, mapping)
        ``sub`` is the component as a new graph with vertices renumbered
        ``0 .. n'-1`` preserving relative order; ``mapping`` has length
        ``graph.n`` and maps old indices to new ones, ``-1`` for vertices
        outside the component.
    """
    count, comp = _component_labels(graph)
    if count == 1:
        mapping = np.arange(graph.n, dtype=np.int64)
        return graph, mapping

    sizes = np.bincount(comp, minlength=count)
    best = sizes.max()
    # first occurrence of each component label is its smallest vertex
    _, first = np.unique(comp, return_index=True)
    candidates = np.flatnonzero(sizes == best)
    chosen = candidates[np.argmin(first[candidates])]

    keep = np.flatnonzero(comp == chosen)
    mapping = np.full(graph.n, -1, dtype=np.int64)
    mapping[keep] = np.arange(keep.size, dtype=np.int64)

    sel = mapping[graph.edge_tail] >= 0
    new_edges = np.column_stack((
        mapping[graph.edge_tail[sel]].astype(np.float64),
        mapping[graph.edge_head[sel]].astype(np.float64),
        graph.edge_weight[sel]))
    if graph.labels is not None:
        new_labels = tuple(graph.labels[i] for i in keep)
    else:
        new_labels = tuple(int(i) for i in keep)
    sub = build_graph(new_edges, n=keep.size, labels=new_labels)
    return sub, mapping


def stationary(graph: WeightedGraph) -> StationaryDistribution:
    """Stationary distribution ``pi_i = d_i / d`` of the random walk.

    Raises
    ------
    ValidationError
        If the graph is disconnected or has no edges.
    """
    if graph.m == 0:
        raise ValidationError(
            "stationary distribution requires at least one edge")
    require_connected(graph, "stationary distribution")
    return StationaryDistribution(pi=graph.degree / graph.total_degree)


def apply_laplacian(graph: WeightedGraph, x: np.ndarray) -> np.ndarray:
    """Matrix-vector product ``L x`` (also accepts a stack of columns)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != graph.n:
        raise ValidationError(
            f"vector has length {x.shape[0]}, expected {graph.n}")
    if x.ndim == 1:
        return graph.degree * x - adjacency_csr(graph) @ x
    return graph.degree[:, None] * x - adjacency_csr(graph) @ x


def grounded_system(graph: WeightedGraph, absorbed) -> GroundedSystem:
    """Grounded system for the absorbing set ``S = absorbed``.

    Raises
    ------
    ValidationError
        If ``S`` is empty, not a proper subset of the vertices, contains
        duplicates, or contains out-of-range indices.
    """
    absorbed = np.asarray(sorted(set(int(v) for v in absorbed)),
                          dtype=np.int64)
    if absorbed.size == 0:
        raise ValidationError("the absorbing set must be nonempty")
    if absorbed[0] < 0 or absorbed[-1] >= graph.n:
        raise ValidationError(
            f"absorbing set contains out-of-range vertex "
            f"{int(absorbed[0] if absorbed[0] < 0 else absorbed[-1])}")
    if absorbed.size >= graph.n:
        raise ValidationError(
            "the absorbing set must be a proper subset of the vertices")
    free_index = np.full(graph.n, -1, dtype=np.int64)
    mask = np.ones(graph.n, dtype=bool)
    mask[absorbed] = False
    free = np.flatnonzero(mask).astype(np.int64)
    free_index[free] = np.arange(free.size, dtype=np.int64)
    return GroundedSystem(graph=graph, absorbed=absorbed, free=free,
                          free_index=free_index)


def grounded_csr(system: GroundedSystem) -> sparse.csr_matrix:
    """The grounded matrix ``L_{-S}`` as a sparse CSR matrix."""
    mat = system._cache.get("mat")
    if mat is None:
        lap = laplacian_csr(system.graph)
        mat = lap[system.free, :][:, system.free].tocsr()
        system._cache["mat"] = mat
    return mat


def apply_grounded(system: GroundedSystem, x: np.ndarray) -> np.ndarray:
    """Matrix-vector product ``L_{-S} x`` on free-vertex vectors."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != system.n_free:
        raise ValidationError(
            f"vector has length {x.shape[0]}, expected {system.n_free}")
    return grounded_csr(system) @ x


def incidence_decomposition(system: GroundedSystem) -> IncidenceDecomposition:
    """Decompose ``L_{-S}`` as ``B'^T W' B' + diag(z)``.

    The interior edges (both endpoints free) define ``B'`` and ``W'``; the
    boundary mass ``z_u`` sums the weights of edges from free ``u`` into
    the absorbing set.
    """
    g = system.graph
    ft = system.free_index[g.edge_tail]
    fh = system.free_index[g.edge_head]
    interior = (ft >= 0) & (fh >= 0)
    crossing_t = (ft >= 0) & (fh < 0)  # tail free, head absorbed
    crossing_h = (ft < 0) & (fh >= 0)

    nf = system.n_free
    cross = np.concatenate([ft[crossing_t], fh[crossing_h]])
    cross_w = np.concatenate([g.edge_weight[crossing_t],
                              g.edge_weight[crossing_h]])
    if cross.size:
        z = np.bincount(cross, weights=cross_w, minlength=nf)
    else:  # bincount yields int64 for empty weights
        z = np.zeros(nf, dtype=np.float64)
    return IncidenceDecomposition(
        system=system,
        interior_tail=g.edge_tail[interior].copy(),
        interior_head=g.edge_head[interior].copy(),
        interior_weight=g.edge_weight[interior].copy(),
        boundary_mass=z)

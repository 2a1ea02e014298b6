"""Deterministic model-graph generators with closed-form Kemeny constants.

Four self-similar families serve as ground-truth oracles: their Kemeny
constants are known in closed form, so an engine value can be checked
end to end against exact rational arithmetic.

Families and vertex layouts (all unit weights, all deterministic):

* ``pseudofractal`` F_g: starts from a triangle; each iteration adds, for
  every existing edge, one new vertex joined to both endpoints.  New
  vertices are numbered in the edge order of the previous generation.
  ``n = (3^{g+1} + 3)/2``, ``m = 3^{g+1}``.
* ``koch`` M_g: starts from a triangle; each iteration adds, for every
  existing triangle and each of its three corners, two new vertices that
  form a new triangle with that corner.  Triangles spawn in creation
  order.  ``n = 2*4^g + 1``, ``m = 3*4^g``.
* ``cayley`` C_{b,g}: a central vertex (generation 0) sprouts ``b``
  children; every later generation attaches ``b - 1`` children to each
  periphery vertex, numbered level by level.
  ``n = (b (b-1)^g - 2)/(b - 2)``, a tree.
* ``hanoi`` H_g: vertices are the label tuples ``{1,2,3}^g``, numbered by
  lexicographic rank; ``u ~ v`` iff for some position ``h`` the labels
  agree before ``h``, differ at ``h``, and each tail after ``h`` is the
  constant equal to the other vertex's label at ``h``.
* ``extended-hanoi`` He_g (``g >= 2``): four copies of H_{g-1}, the three
  corner vertices of each copy wired across copies so that contracting
  each copy yields K4; the result is 3-regular with ``n = 4*3^{g-1}``
  and ``m = 2*3^g``.  Copy ``c`` occupies the index block
  ``[c*3^{g-1}, (c+1)*3^{g-1})``.

Closed forms are evaluated in exact rational arithmetic
(:func:`closed_form_kemeny_exact`) and converted to float once
(:func:`closed_form_kemeny`), so they stay exact far beyond 64-bit range.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ResourceLimitError, ValidationError
from .graph import WeightedGraph, build_graph

__all__ = [
    "MAX_VERTICES",
    "ModelSpec",
    "pseudofractal",
    "koch",
    "cayley_tree",
    "hanoi",
    "extended_hanoi",
    "generate_model",
    "closed_form_kemeny",
    "closed_form_kemeny_exact",
]

MAX_VERTICES = 5_000_000

_FAMILIES = ("pseudofractal", "koch", "cayley", "hanoi", "extended-hanoi")


@dataclass(frozen=True)
class ModelSpec:
    """Identifies one model graph.

    Attributes
    ----------
    family : str
        One of ``'pseudofractal'``, ``'koch'``, ``'cayley'``, ``'hanoi'``,
        ``'extended-hanoi'``.
    generation : int
    b : int
        Branching number, used by the cayley family only (must be >= 3).
    """

    family: str
    generation: int
    b: int = 3


def _check_budget(n: int, max_vertices: int, family: str) -> None:
    if n > max_vertices:
        raise ResourceLimitError(
            f"{family} generation would create {n} vertices, above the "
            f"budget of {max_vertices}")


def _check_generation(g: int, minimum: int, family: str) -> int:
    g = int(g)
    if g < minimum:
        raise ValidationError(
            f"{family} requires generation >= {minimum}, got {g}")
    return g


def pseudofractal(g: int, *, max_vertices: int = MAX_VERTICES
                  ) -> WeightedGraph:
    """Pseudofractal scale-free graph F_g.

    ``(3^{g+1} + 3)/2`` vertices and ``3^{g+1}`` edges; F_0 is a triangle.
    """
    g = _check_generation(g, 0, "pseudofractal")
    _check_budget((3 ** (g + 1) + 3) // 2, max_vertices, "pseudofractal")
    tails = np.array([0, 0, 1], dtype=np.int64)
    heads = np.array([1, 2, 2], dtype=np.int64)
    n = 3
    for _ in range(g):
        m = tails.size
        new = n + np.arange(m, dtype=np.int64)
        tails = np.concatenate((tails, tails, heads))
        heads = np.concatenate((heads, new, new))
        n += m
    return build_graph(np.column_stack((tails, heads)), n=n)


def koch(g: int, *, max_vertices: int = MAX_VERTICES) -> WeightedGraph:
    """Koch network M_g.

    ``2*4^g + 1`` vertices and ``3*4^g`` edges; M_0 is a triangle.  Every
    triangle present in M_{g-1} (original and spawned alike) sprouts, at
    each of its three corners, a fresh triangle.
    """
    g = _check_generation(g, 0, "koch")
    _check_budget(2 * 4 ** g + 1, max_vertices, "koch")
    tails = np.array([0, 0, 1], dtype=np.int64)
    heads = np.array([1, 2, 2], dtype=np.int64)
    tris = np.array([[0, 1, 2]], dtype=np.int64)
    n = 3
    for _ in range(g):
        t = tris.shape[0]
        # corner ordering: triangle-major, corner-minor, two vertices each
        corners = tris.reshape(-1)                      # (3t,)
        first = n + 2 * np.arange(3 * t, dtype=np.int64)
        second = first + 1
        tails = np.concatenate((tails, corners, corners, first))
        heads = np.concatenate((heads, first, second, second))
        tris = np.vstack((tris,
                          np.column_stack((corners, first, second))))
        n += 6 * t
    return build_graph(np.column_stack((tails, heads)), n=n)


def cayley_tree(b: int, g: int, *, max_vertices: int = MAX_VERTICES
                ) -> WeightedGraph:
    """Cayley tree C_{b,g}: full ``b``-ary-style tree, numbered by level."""
    b = int(b)
    if b < 3:
        raise ValidationError(f"cayley requires b >= 3, got {b}")
    g = _check_generation(g, 0, "cayley")
    n_total = (b * (b - 1) ** g - 2) // (b - 2)
    _check_budget(n_total, max_vertices, "cayley")
    tails_parts, heads_parts = [], []
    level = np.array([0], dtype=np.int64)
    n = 1
    for depth in range(g):
        children_per = b if depth == 0 else b - 1
        new = n + np.arange(level.size * children_per, dtype=np.int64)
        tails_parts.append(np.repeat(level, children_per))
        heads_parts.append(new)
        level = new
        n += new.size
    if n == 1:
        return build_graph(np.empty((0, 2), dtype=np.int64), n=1)
    edges = np.column_stack((np.concatenate(tails_parts),
                             np.concatenate(heads_parts)))
    return build_graph(edges, n=n)


def hanoi(g: int, *, max_vertices: int = MAX_VERTICES) -> WeightedGraph:
    """Hanoi graph H_g on the ``3^g`` label tuples ``{1,2,3}^g``.

    Vertex index = lexicographic rank of its label tuple.  The edge rule:
    labels equal before position ``h``, different at ``h``, and the tail
    of each vertex is constantly the other's ``h``-label.
    """
    g = _check_generation(g, 1, "hanoi")
    _check_budget(3 ** g, max_vertices, "hanoi")
    tails_parts, heads_parts = [], []
    for h in range(1, g + 1):
        stride = 3 ** (g - h + 1)
        tail_len = 3 ** (g - h)
        rep = (tail_len - 1) // 2  # rank of a constant-1 tail block
        prefix = np.arange(3 ** (h - 1), dtype=np.int64) * stride
        for a, b in ((1, 2), (1, 3), (2, 3)):
            u = prefix + (a - 1) * tail_len + (b - 1) * rep
            v = prefix + (b - 1) * tail_len + (a - 1) * rep
            tails_parts.append(u)
            heads_parts.append(v)
    edges = np.column_stack((np.concatenate(tails_parts),
                             np.concatenate(heads_parts)))
    return build_graph(edges, n=3 ** g)


def extended_hanoi(g: int, *, max_vertices: int = MAX_VERTICES
                   ) -> WeightedGraph:
    """3-regular extension He_g of the Hanoi graph (``g >= 2``).

    Four copies of H_{g-1}; for each label ``t`` the two degree-2 corner
    vertices ``(t,...,t)`` of a matched pair of copies are joined, the
    three matchings forming the edge set of K4 on the copies.
    """
    g = _check_generation(g, 2, "extended-hanoi")
    base = 3 ** (g - 1)
    _check_budget(4 * base, max_vertices, "extended-hanoi")
    core = hanoi(g - 1, max_vertices=max_vertices)
    offsets = np.arange(4, dtype=np.int64) * base
    tails = (core.edge_tail[None, :] + offsets[:, None]).reshape(-1)
    heads = (core.edge_head[None, :] + offsets[:, None]).reshape(-1)
    # the corner (t,..,t) has lexicographic rank (t-1)*(3^{g-1}-1)/2
    corner = {t: (t - 1) * (base - 1) // 2 for t in (1, 2, 3)}
    matchings = {1: ((0, 1), (2, 3)), 2: ((0, 2), (1, 3)),
                 3: ((0, 3), (1, 2))}
    cross_t, cross_h = [], []
    for t in (1, 2, 3):
        for ca, cb in matchings[t]:
            cross_t.append(ca * base + corner[t])
            cross_h.append(cb * base + corner[t])
    tails = np.concatenate((tails, np.array(cross_t, dtype=np.int64)))
    heads = np.concatenate((heads, np.array(cross_h, dtype=np.int64)))
    return build_graph(np.column_stack((tails, heads)), n=4 * base)


def generate_model(spec: ModelSpec, *,
                   max_vertices: int = MAX_VERTICES) -> WeightedGraph:
    """Build the graph described by ``spec``."""
    if spec.family == "pseudofractal":
        return pseudofractal(spec.generation, max_vertices=max_vertices)
    if spec.family == "koch":
        return koch(spec.generation, max_vertices=max_vertices)
    if spec.family == "cayley":
        return cayley_tree(spec.b, spec.generation,
                           max_vertices=max_vertices)
    if spec.family == "hanoi":
        return hanoi(spec.generation, max_vertices=max_vertices)
    if spec.family == "extended-hanoi":
        return extended_hanoi(spec.generation, max_vertices=max_vertices)
    raise ValidationError(
        f"unknown family {spec.family!r}; expected one of {_FAMILIES}")


def closed_form_kemeny_exact(spec: ModelSpec) -> Fraction:
    """Published closed-form Kemeny constant as an exact rational.

    Supported: pseudofractal (g >= 0), koch (g >= 0), cayley with b = 3
    (g >= 0; the g = 0 graph is a single vertex, whose Kemeny constant is
    0 by the empty spectral sum), extended-hanoi (g >= 2).  The plain
    hanoi family has no published closed form.
    """
    g = int(spec.generation)
    if spec.family == "pseudofractal":
        if g < 0:
            raise ValidationError("generation must be >= 0")
        return (Fraction(5, 2) * 3 ** g - Fraction(5, 3) * 2 ** g
                + Fraction(1, 2))
    if spec.family == "koch":
        if g < 0:
            raise ValidationError("generation must be >= 0")
        return Fraction(1 + 2 * g) * 4 ** g + Fraction(1, 3)
    if spec.family == "cayley":
        if spec.b != 3:
            raise ValidationError(
                "closed form is published for b = 3 only")
        if g < 0:
            raise ValidationError("generation must be >= 0")
        if g == 0:
            return Fraction(0)
        numer = 3 * g * 4 ** (g + 1) - 13 * 2 ** (2 * g + 1) + 35 * 2 ** g - 9
        return Fraction(numer, 2 * (2 ** g - 1))
    if spec.family == "extended-hanoi":
        if g < 2:
            raise ValidationError(
                "extended-hanoi closed form is defined for g >= 2")
        numer = 32 * 5 ** g * 3 ** (g - 1) - 64 * 3 ** (2 * g - 2) - 2 * 3 ** g
        return Fraction(numer, 10 * (3 ** g + 3 ** (g - 1) - 1))
    if spec.family == "hanoi":
        raise ValidationError("hanoi has no published closed form")
    raise ValidationError(
        f"unknown family {spec.family!r}; expected one of {_FAMILIES}")


def closed_form_kemeny(spec: ModelSpec) -> float:
    """Published closed-form Kemeny constant as a float.

    Examples
    --------
    pseudofractal g=0 -> 4/3; koch g=1 -> 37/3; cayley b=3 g=1 -> 5/2.
    """
    return float(closed_form_kemeny_exact(spec))

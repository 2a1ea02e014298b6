"""Edge-list file ingestion and emission.

Reads the plain text edge-list dialect used by the common network
repositories: one edge per line, whitespace-separated fields, ``%`` or
``#`` comment lines, optional third weight column, and either zero- or
one-based vertex ids (auto-detected by default: a file is treated as
one-based iff the smallest id is 1 and 0 never appears).  Files with
non-integer vertex tokens are accepted too; tokens become external labels
in first-appearance order.

The writer emits the canonical form - zero-based internal ids, one edge
per line with ``tail < head`` in lexicographic order - so that
generate/write/parse round-trips reproduce the graph exactly.
"""

from __future__ import annotations

import contextlib
import os
import sys
from dataclasses import dataclass

from .errors import ValidationError
from .graph import WeightedGraph, build_graph

__all__ = [
    "EdgeListFormat",
    "parse_edge_list",
    "write_edge_list",
    "open_output",
]


@dataclass(frozen=True)
class EdgeListFormat:
    """Dialect of an edge-list file.

    Attributes
    ----------
    delimiter : str or None
        Field separator; ``None`` means any whitespace run.
    comment_prefixes : tuple of str
        Lines starting with any of these are skipped.
    indexing : {'auto', 'zero', 'one'}
        Vertex-id convention for integer-labeled files.  ``'auto'``
        infers one-based iff the minimum observed id is 1 and 0 never
        appears.
    weighted : bool
        When True, a third column is read as the edge weight (missing
        weights default to 1.0); when False any extra columns are
        ignored.
    """

    delimiter: str | None = None
    comment_prefixes: tuple = ("%", "#")
    indexing: str = "auto"
    weighted: bool = False


def _tokenize(path: str, fmt: EdgeListFormat):
    """Yield (line_number, tokens) for every payload line."""
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read edge list {path!r}: {exc}")
    with handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith(fmt.comment_prefixes):
                continue
            yield lineno, line.split(fmt.delimiter)


def parse_edge_list(path: str, fmt: EdgeListFormat = EdgeListFormat(), *,
                    merge_duplicates: bool = False) -> WeightedGraph:
    """Parse an edge-list file into a validated :class:`WeightedGraph`.

    Raises
    ------
    ValidationError
        On unreadable files, malformed lines (reported with their line
        number), indexing violations, or anything
        :func:`~walkcent.graph.build_graph` rejects.
    """
    if fmt.indexing not in ("auto", "zero", "one"):
        raise ValidationError(f"unknown indexing mode {fmt.indexing!r}")

    raw_u, raw_v, weights = [], [], []
    numeric = True
    for lineno, tokens in _tokenize(path, fmt):
        if len(tokens) < 2:
            raise ValidationError(
                f"{path}:{lineno}: expected at least 2 fields, got "
                f"{len(tokens)}")
        u_tok, v_tok = tokens[0], tokens[1]
        if numeric:
            try:
                int(u_tok), int(v_tok)
            except ValueError:
                numeric = False
        weight = 1.0
        if fmt.weighted and len(tokens) >= 3:
            try:
                weight = float(tokens[2])
            except ValueError:
                raise ValidationError(
                    f"{path}:{lineno}: bad weight field {tokens[2]!r}")
        raw_u.append(u_tok)
        raw_v.append(v_tok)
        weights.append(weight)

    if not raw_u:
        raise ValidationError(f"{path}: no edges found")

    if numeric:
        ids_u = [int(t) for t in raw_u]
        ids_v = [int(t) for t in raw_v]
        low = min(min(ids_u), min(ids_v))
        if fmt.indexing == "one" or (fmt.indexing == "auto" and low == 1):
            if low < 1:
                raise ValidationError(
                    f"{path}: file declared one-based but contains vertex "
                    f"id {low}")
            n = max(max(ids_u), max(ids_v))
            edges = [(u - 1, v - 1, w)
                     for u, v, w in zip(ids_u, ids_v, weights)]
            labels = tuple(range(1, n + 1))
            return build_graph(edges, n=n, labels=labels,
                               merge_duplicates=merge_duplicates)
        if low < 0:
            raise ValidationError(
                f"{path}: negative vertex id {low}")
        edges = list(zip(ids_u, ids_v, weights))
        return build_graph(edges, merge_duplicates=merge_duplicates)

    # label mode: assign indices by first appearance
    index: dict = {}
    edges = []
    for u_tok, v_tok, w in zip(raw_u, raw_v, weights):
        iu = index.setdefault(u_tok, len(index))
        iv = index.setdefault(v_tok, len(index))
        edges.append((iu, iv, w))
    labels = tuple(index.keys())
    return build_graph(edges, n=len(index), labels=labels,
                       merge_duplicates=merge_duplicates)


def open_output(path: str):
    """Context manager for a text output target; ``'-'`` means stdout."""
    if path == "-":
        return contextlib.nullcontext(sys.stdout)
    directory = os.path.dirname(os.path.abspath(path))
    if directory and not os.path.isdir(directory):
        raise ValidationError(f"output directory does not exist: "
                              f"{directory!r}")
    return open(path, "w", encoding="utf-8")


def write_edge_list(graph: WeightedGraph, path: str, *,
                    header: bool = True) -> None:
    """Write ``graph`` in canonical form (zero-based, sorted, ``%`` header).

    Weights are included only when some weight differs from 1, formatted
    with full round-trip precision.
    """
    weighted = bool((graph.edge_weight != 1.0).any()) if graph.m else False
    with open_output(path) as out:
        if header:
            out.write(f"% walkcent edge list: {graph.n} vertices, "
                      f"{graph.m} edges\n")
        for e in range(graph.m):
            if weighted:
                out.write(f"{graph.edge_tail[e]} {graph.edge_head[e]} "
                          f"{float(graph.edge_weight[e])!r}\n")
            else:
                out.write(f"{graph.edge_tail[e]} {graph.edge_head[e]}\n")

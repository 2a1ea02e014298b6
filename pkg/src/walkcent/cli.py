"""Command-line interface.

Subcommands bind the engines together over edge-list files or generated
model graphs:

* ``centrality`` - per-vertex walk centrality and the Kemeny constant
  (``--method exact|spectral|approx``);
* ``kemeny`` - the Kemeny constant alone;
* ``gwc`` - group walk centrality of ``--set`` (exact or approx);
* ``mingwc`` - greedy/brute/baseline MinGWC selection for ``--k``;
* ``generate`` - emit a model graph as an edge list;
* ``oracle`` - Monte Carlo estimates (hitting time or group centrality);
* ``detour`` - group detour time ``D_ij(S)``.

Every command reads either ``--graph FILE`` or a generated model
(``--family``/``--g``); by default the graph is restricted to its largest
connected component (``--no-lcc`` disables this).  Vertex arguments refer
to the labels of the input file (or generator indices), and survive LCC
renumbering.  The single source-of-truth output is a JSON run report on
stdout (or ``--out``); ``--csv`` writes a tabular projection of
per-vertex or per-step results.  Randomized commands take ``--seed``; a
missing seed is generated and printed so every run stays reproducible.

Exit codes: 0 success, 2 usage, 3 invalid input, 4 numerical failure,
5 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import csv as _csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .edgelist import (EdgeListFormat, open_output, parse_edge_list,
                       write_edge_list)
from .errors import (ConvergenceError, ResourceLimitError, TruncationError,
                     ValidationError)
from .exact import (DENSE_CAP, group_detour_time, gwc_exact,
                    walk_centrality_exact, walk_centrality_spectral)
from .graph import WeightedGraph, largest_connected_component
from .greedy import (OptimizerConfig, approx_min_gwc, baseline_select,
                     brute_force_min_gwc, deter_min_gwc)
from .models import MAX_VERTICES, ModelSpec, generate_model
from .simulate import estimate_gwc, simulate_hitting
from .sketch import approx_gwc, approx_hk
from .solver import SolverOptions

__all__ = ["RunReport", "run_command", "main"]

_FAMILIES = ("pseudofractal", "koch", "cayley", "hanoi", "extended-hanoi")
_MINGWC_METHODS = ("deter", "approx", "brute", "baseline:top-degree",
                   "baseline:top-pagerank", "baseline:top-absorb",
                   "baseline:random")


@dataclass(frozen=True)
class RunReport:
    """Self-describing record of one CLI invocation.

    Attributes
    ----------
    command : list of str
        The argv that produced this report.
    graph : dict or None
        Vertex/edge counts before and after LCC extraction.
    phases : dict
        Wall-clock seconds per phase (ingest, lcc, compute, ...).
    results : dict
        Command-specific payload.
    seeds : dict
        Every RNG seed that influenced the results.
    mode : str
        Tolerance mode in effect.
    version : str
    """

    command: list
    graph: dict | None
    phases: dict
    results: dict
    seeds: dict
    mode: str
    version: str = __version__

    def to_dict(self) -> dict:
        return _sanitize({
            "command": self.command,
            "graph": self.graph,
            "phases": self.phases,
            "results": self.results,
            "seeds": self.seeds,
            "mode": self.mode,
            "version": self.version,
        })

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)


def _sanitize(obj):
    """Make a structure JSON-safe: numpy -> python, NaN/inf -> None."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_sanitize(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        val = float(obj)
        return val if math.isfinite(val) else None
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@contextlib.contextmanager
def _phase(phases: dict, name: str):
    start = time.perf_counter()
    try:
        yield
    finally:
        phases[name] = round(time.perf_counter() - start, 6)


@contextlib.contextmanager
def _thread_limit(threads):
    if threads is None:
        yield
        return
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        print("warning: threadpoolctl unavailable, --threads ignored",
              file=sys.stderr)
        yield
        return
    with threadpool_limits(limits=threads):
        yield


# ---------------------------------------------------------------------------
# argument surface


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walkcent",
        description="Random-walk hitting-time centrality toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser, graph_source=True):
        if graph_source:
            p.add_argument("--graph", help="edge-list file to analyze")
            p.add_argument("--family", choices=_FAMILIES,
                           help="generated model family (instead of --graph)")
            p.add_argument("--g", type=int, help="model generation")
            p.add_argument("--b", type=int, default=3,
                           help="cayley branching (default 3)")
            p.add_argument("--weighted", action="store_true",
                           help="read a third column as edge weight")
            p.add_argument("--indexing", choices=("auto", "zero", "one"),
                           default="auto")
            p.add_argument("--merge-duplicates", action="store_true",
                           help="sum weights of duplicate edges")
            p.add_argument("--no-lcc", action="store_true",
                           help="do not restrict to the largest component")
        p.add_argument("--out", default="-",
                       help="JSON report target (default stdout)")
        p.add_argument("--csv", help="CSV projection of tabular results")
        p.add_argument("--seed", type=int, help="RNG seed")
        p.add_argument("--mode", choices=("practical", "strict"),
                       default="practical", help="tolerance mode")
        p.add_argument("--threads", type=int,
                       help="cap BLAS/solver thread pools")
        p.add_argument("--dense-cap", type=int, default=DENSE_CAP,
                       help="maximum n for dense exact computations")
        p.add_argument("--max-vertices", type=int, default=MAX_VERTICES,
                       help="generation budget")

    p = sub.add_parser("centrality",
                       help="walk centrality of every vertex")
    common(p)
    p.add_argument("--method", choices=("exact", "spectral", "approx"),
                   default="exact")
    p.add_argument("--epsilon", type=float, default=0.3)

    p = sub.add_parser("kemeny", help="Kemeny constant")
    common(p)
    p.add_argument("--method", choices=("exact", "spectral", "approx"),
                   default="exact")
    p.add_argument("--epsilon", type=float, default=0.3)

    p = sub.add_parser("gwc", help="group walk centrality of a set")
    common(p)
    p.add_argument("--set", required=True,
                   help="comma-separated vertex labels")
    p.add_argument("--method", choices=("exact", "approx"), default="exact")
    p.add_argument("--delta", type=float, default=1e-7,
                   help="solver tolerance for --method approx")

    p = sub.add_parser("mingwc", help="select k vertices minimizing GWC")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=_MINGWC_METHODS, default="deter")
    p.add_argument("--epsilon", type=float, default=0.3)

    p = sub.add_parser("generate", help="emit a model graph edge list")
    common(p, graph_source=False)
    p.add_argument("--family", choices=_FAMILIES, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--edges-out", default="-",
                   help="edge-list target (default stdout)")

    p = sub.add_parser("oracle", help="Monte Carlo estimates")
    common(p)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--set", help="estimate H(S) for this set")
    p.add_argument("--start", help="hitting-time start vertex")
    p.add_argument("--target", help="comma-separated target vertices")
    p.add_argument("--max-steps", type=int)

    p = sub.add_parser("detour", help="group detour time D_ij(S)")
    common(p)
    p.add_argument("--set", required=True)
    p.add_argument("--i", required=True, help="start vertex label")
    p.add_argument("--j", required=True, help="destination vertex label")

    return parser


# ---------------------------------------------------------------------------
# graph loading and vertex resolution


def _load_graph(args, phases: dict) -> tuple[WeightedGraph, dict]:
    if args.graph is not None:
        with _phase(phases, "ingest"):
            fmt = EdgeListFormat(indexing=args.indexing,
                                 weighted=args.weighted)
            graph = parse_edge_list(args.graph, fmt,
                                    merge_duplicates=args.merge_duplicates)
        source = {"path": args.graph}
    else:
        with _phase(phases, "ingest"):
            spec = ModelSpec(family=args.family, generation=args.g,
                             b=args.b)
            graph = generate_model(spec, max_vertices=args.max_vertices)
        source = {"family": args.family, "generation": args.g}
        if args.family == "cayley":
            source["b"] = args.b

    info = {"source": source, "n_input": graph.n, "m_input": graph.m,
            "lcc_applied": not args.no_lcc}
    if not args.no_lcc:
        with _phase(phases, "lcc"):
            graph, _ = largest_connected_component(graph)
    info["n"] = graph.n
    info["m"] = graph.m
    return graph, info


def _resolve_vertices(graph: WeightedGraph, tokens) -> list[int]:
    """Map user-facing labels to internal indices."""
    if graph.labels is None:
        index = None
    else:
        index = {label: i for i, label in enumerate(graph.labels)}
    out = []
    for token in tokens:
        token = str(token).strip()
        if index is None:
            try:
                v = int(token)
            except ValueError:
                raise ValidationError(f"vertex {token!r} is not an integer "
                                      "index")
            if not (0 <= v < graph.n):
                raise ValidationError(f"vertex {v} out of range [0, "
                                      f"{graph.n})")
        else:
            if token in index:
                v = index[token]
            else:
                try:
                    as_int = int(token)
                except ValueError:
                    as_int = None
                if as_int is not None and as_int in index:
                    v = index[as_int]
                else:
                    raise ValidationError(
                        f"vertex {token!r} is not in the graph (absent "
                        "from the input or outside the largest component)")
        out.append(int(v))
    return out


def _split_set(arg: str) -> list[str]:
    tokens = [t.strip() for t in str(arg).split(",") if t.strip()]
    if not tokens:
        raise ValidationError("empty vertex set argument")
    return tokens


def _labels(graph: WeightedGraph, vertices) -> list:
    return [graph.label_of(int(v)) for v in vertices]


def _ensure_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = int.from_bytes(os.urandom(8), "big")
    print(f"seed (generated): {seed}", file=sys.stderr)
    return seed


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (results, seeds, csv_table)


def _cmd_centrality(args, graph, phases, kemeny_only=False):
    seeds = {}
    with _phase(phases, "compute"):
        if args.method == "exact":
            rep = walk_centrality_exact(graph, dense_cap=args.dense_cap)
            h, kemeny, method = rep.walk_centrality, rep.kemeny, rep.method
            extra = {}
        elif args.method == "spectral":
            rep = walk_centrality_spectral(graph, dense_cap=args.dense_cap)
            h, kemeny, method = rep.walk_centrality, rep.kemeny, rep.method
            extra = {}
        else:
            seeds["seed"] = _ensure_seed(args)
            res = approx_hk(graph, args.epsilon, seeds["seed"],
                            opts=SolverOptions(mode=args.mode))
            h, kemeny, method = res.h_tilde, res.kemeny_tilde, "sketch"
            meta = res.sketch_meta
            extra = {"epsilon": meta.epsilon, "sketch_rows": meta.rows,
                     "delta_used": meta.delta_used,
                     "solver_iterations_max": meta.solver.iterations_max}
    results = {"method": method, "kemeny": kemeny, **extra}
    csv_table = None
    if not kemeny_only:
        labels = _labels(graph, range(graph.n))
        results["vertices"] = labels
        results["walk_centrality"] = list(map(float, h))
        csv_table = (["vertex", "label", "walk_centrality"],
                     [[i, labels[i], float(h[i])] for i in range(graph.n)])
    else:
        csv_table = (["kemeny", "method"], [[kemeny, method]])
    return results, seeds, csv_table


def _cmd_gwc(args, graph, phases):
    vertices = _resolve_vertices(graph, _split_set(args.set))
    with _phase(phases, "compute"):
        if args.method == "exact":
            value = gwc_exact(graph, vertices,
                              dense_cap=args.dense_cap).value
        else:
            value = approx_gwc(graph, vertices, args.delta,
                               opts=SolverOptions(mode=args.mode))
    results = {"set": _labels(graph, sorted(vertices)),
               "method": args.method, "value": value}
    if args.method == "approx":
        results["delta"] = args.delta
    return results, {}, (["value", "method"], [[value, args.method]])


def _cmd_mingwc(args, graph, phases):
    seeds = {}
    method = args.method
    with _phase(phases, "compute"):
        if method == "deter":
            trace = deter_min_gwc(graph, args.k, dense_cap=args.dense_cap)
        elif method == "approx":
            seeds["seed"] = _ensure_seed(args)
            cfg = OptimizerConfig(k=args.k, epsilon=args.epsilon,
                                  seed=seeds["seed"], mode=args.mode)
            trace = approx_min_gwc(graph, cfg, dense_cap=args.dense_cap)
        elif method == "brute":
            subset, value = brute_force_min_gwc(graph, args.k,
                                                dense_cap=args.dense_cap)
            results = {"method": "brute",
                       "selected": _labels(graph, subset),
                       "value": value, "k": args.k}
            return results, seeds, (["vertex", "label"],
                                    [[v, graph.label_of(v)]
                                     for v in subset])
        else:
            strategy = method.split(":", 1)[1]
            if strategy == "random":
                seeds["seed"] = _ensure_seed(args)
            trace = baseline_select(graph, args.k, strategy,
                                    seed=seeds.get("seed"),
                                    dense_cap=args.dense_cap)
    results = {"method": trace.method, "k": args.k,
               "selected": _labels(graph, trace.selected),
               "gains": list(trace.gains),
               "gwc_values": list(trace.gwc_values),
               "value": trace.gwc_values[-1]}
    if method == "approx":
        results["epsilon"] = args.epsilon
    rows = [[step + 1, v, graph.label_of(v), trace.gains[step],
             trace.gwc_values[step]]
            for step, v in enumerate(trace.selected)]
    return results, seeds, (["step", "vertex", "label", "gain", "gwc"],
                            rows)


def _cmd_generate(args, phases):
    with _phase(phases, "generate"):
        spec = ModelSpec(family=args.family, generation=args.g, b=args.b)
        graph = generate_model(spec, max_vertices=args.max_vertices)
    with _phase(phases, "write"):
        write_edge_list(graph, args.edges_out)
    results = {"family": args.family, "generation": args.g,
               "n": graph.n, "m": graph.m, "edges_out": args.edges_out}
    if args.family == "cayley":
        results["b"] = args.b
    info = {"source": {"family": args.family, "generation": args.g},
            "n": graph.n, "m": graph.m, "n_input": graph.n,
            "m_input": graph.m, "lcc_applied": False}
    return results, {}, None, info


def _cmd_oracle(args, graph, phases):
    seeds = {"seed": _ensure_seed(args)}
    if args.set is not None and (args.start is not None
                                 or args.target is not None):
        raise ValidationError("pass either --set or --start/--target, "
                              "not both")
    with _phase(phases, "compute"):
        if args.set is not None:
            vertices = _resolve_vertices(graph, _split_set(args.set))
            est = estimate_gwc(graph, vertices, args.trials,
                               seed=seeds["seed"], max_steps=args.max_steps)
            results = {"kind": "gwc",
                       "set": _labels(graph, sorted(vertices))}
        elif args.start is not None and args.target is not None:
            start = _resolve_vertices(graph, [args.start])[0]
            targets = _resolve_vertices(graph, _split_set(args.target))
            est = simulate_hitting(graph, start, targets, args.trials,
                                   max_steps=args.max_steps,
                                   seed=seeds["seed"])
            results = {"kind": "hitting", "start": graph.label_of(start),
                       "targets": _labels(graph, sorted(targets))}
        else:
            raise ValidationError("oracle needs --set, or --start and "
                                  "--target")
    results.update({"mean": est.mean, "stderr": est.stderr,
                    "trials": est.trials})
    return results, seeds, (["mean", "stderr", "trials"],
                            [[est.mean, est.stderr, est.trials]])


def _cmd_detour(args, graph, phases):
    vertices = _resolve_vertices(graph, _split_set(args.set))
    i = _resolve_vertices(graph, [args.i])[0]
    j = _resolve_vertices(graph, [args.j])[0]
    with _phase(phases, "compute"):
        value = group_detour_time(graph, vertices, i, j,
                                  dense_cap=args.dense_cap)
    results = {"set": _labels(graph, sorted(vertices)),
               "i": graph.label_of(i), "j": graph.label_of(j),
               "value": value}
    return results, {}, (["value"], [[value]])


# ---------------------------------------------------------------------------
# driver


def run_command(argv) -> RunReport:
    """Execute one CLI invocation and return (and emit) its report.

    Raises the library's error types on failure; :func:`main` translates
    them to exit codes.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    phases: dict = {}

    with _thread_limit(args.threads):
        if args.subcommand == "generate":
            results, seeds, csv_table, info = _cmd_generate(args, phases)
        else:
            if (args.graph is None) == (args.family is None):
                parser.error("exactly one of --graph or --family is "
                             "required")
            if args.family is not None and args.g is None:
                parser.error("--family requires --g")
            graph, info = _load_graph(args, phases)
            if args.subcommand == "centrality":
                results, seeds, csv_table = _cmd_centrality(args, graph,
                                                            phases)
            elif args.subcommand == "kemeny":
                results, seeds, csv_table = _cmd_centrality(
                    args, graph, phases, kemeny_only=True)
            elif args.subcommand == "gwc":
                results, seeds, csv_table = _cmd_gwc(args, graph, phases)
            elif args.subcommand == "mingwc":
                results, seeds, csv_table = _cmd_mingwc(args, graph, phases)
            elif args.subcommand == "oracle":
                results, seeds, csv_table = _cmd_oracle(args, graph, phases)
            elif args.subcommand == "detour":
                results, seeds, csv_table = _cmd_detour(args, graph, phases)
            else:  # pragma: no cover - argparse enforces choices
                raise ValidationError(f"unknown subcommand "
                                      f"{args.subcommand!r}")

    report = RunReport(command=list(argv), graph=info, phases=phases,
                       results=results, seeds=seeds, mode=args.mode)

    suppress_stdout_report = (args.subcommand == "generate"
                              and args.edges_out == "-" and args.out == "-")
    if not suppress_stdout_report:
        with open_output(args.out) as handle:
            handle.write(report.to_json() + "\n")
    if args.csv and csv_table is not None:
        header, rows = csv_table
        with open_output(args.csv) as handle:
            writer = _csv.writer(handle)
            writer.writerow(header)
            writer.writerows(_sanitize(rows))
    return report


def main(argv=None) -> int:
    """Console entry point; maps library errors to exit codes."""
    if argv is None:
        argv = sys.argv[1:]
    try:
        run_command(argv)
    except SystemExit as exc:  # argparse usage errors / --help
        code = exc.code
        return code if isinstance(code, int) else 2
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConvergenceError, TruncationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 5
    return 0

"""``trex`` command line: build, query, verify, gen, bench.

Exit codes: 0 success, 1 bad input or usage, 2 disconnected input, 3 exact
solver limit exceeded, 4 corrupt container, 5 query error, 6 verification
mismatch.
"""
from __future__ import annotations

import argparse
import csv
import statistics
import sys
import time
from pathlib import Path
from typing import Sequence

from . import container
from .errors import (
    ContainerError,
    Disconnected,
    NotANeighbour,
    OutOfRange,
    ParseError,
    TooLarge,
    TooManyTrees,
    TrexError,
)
from .generators import (
    clique_plus_star,
    configuration_model,
    copy_model,
    path_double_star,
    planted_x3c,
    random_connected_digraph,
    random_degree_sequence,
)
from .graph import Digraph, UGraph, format_edgelist, read_edgelist
from .minetrex import extract
from .oracle import NaiveTrex, sweep, twin_sweep
from .pipeline import compress, exact_solver
from .rng import SplitMix64

EXIT_INPUT, EXIT_DISCONNECTED, EXIT_LIMIT, EXIT_CONTAINER, EXIT_QUERY, EXIT_MISMATCH = 1, 2, 3, 4, 5, 6
FULL_SWEEP_LIMIT = 400


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Fail(EXIT_INPUT, message)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(round(value, 6)) if value != int(value) else str(int(value))
    return str(value)


def _load_graph(path: str, undirected: bool) -> Digraph | UGraph:
    try:
        return read_edgelist(path, undirected=undirected)
    except ParseError as exc:
        raise _Fail(EXIT_INPUT, f"parse error in {path}: {exc}") from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise _Fail(EXIT_INPUT, f"cannot read {path}: {exc}") from exc


def _read_container(path: str):
    try:
        return container.read(path)
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"cannot read {path}: {exc}") from exc
    except ContainerError as exc:
        raise _Fail(EXIT_CONTAINER, f"corrupt container {path}: {exc}") from exc


def _compress(g, twins: bool, exact: bool, exact_limit: int | None):
    try:
        return compress(g, twins=twins, solve=exact_solver(exact_limit) if exact else None)
    except Disconnected as exc:
        raise _Fail(EXIT_DISCONNECTED, f"input is disconnected: {exc.components} components") from exc
    except (TooManyTrees, TooLarge) as exc:
        raise _Fail(EXIT_LIMIT, f"exact solver limit exceeded: {exc}") from exc


# --- build -------------------------------------------------------------------------


def cmd_build(args) -> int:
    g = _load_graph(args.input, args.undirected)
    c = _compress(g, args.twins, args.exact, args.exact_limit)
    container.write(args.output, c.core, c.twins)
    if args.emit_mapping:
        lines = [f"{old} {new}" for old, new in enumerate(c.mapping) if old]
        Path(args.emit_mapping).write_text("\n".join(lines) + "\n")
    for key, value in c.report_rows():
        print(f"{key}\t{_fmt(value)}")
    return 0


# --- query -------------------------------------------------------------------------


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise _Fail(EXIT_INPUT, f"--op {args.op} needs --{name}")


def cmd_query(args) -> int:
    core, twins = _read_container(args.container)
    x = twins or core
    op = args.op
    try:
        _need(args, "v")
        v = args.v
        if op == "outdeg":
            result = x.outdegree(v)
        elif op == "indeg":
            result = x.indegree(v)
        elif op == "adj":
            _need(args, "w")
            result = int(x.adjacent(v, args.w))
        elif op in ("nout", "nin"):
            _need(args, "i")
            result = (x.n_out if op == "nout" else x.n_in)(v, args.i)
        elif op in ("noutrank", "ninrank"):
            _need(args, "w")
            result = (x.n_out_rank if op == "noutrank" else x.n_in_rank)(v, args.w)
        else:
            nxt = x.n_out_next if op == "next-out" else x.n_in_next
            result = nxt(v, args.w)
            result = "none" if result is None else result
    except (OutOfRange, NotANeighbour) as exc:
        raise _Fail(EXIT_QUERY, str(exc)) from exc
    print(result)
    return 0


# --- verify ------------------------------------------------------------------------


def _read_mapping(path: str, N: int) -> tuple[int, ...]:
    f = [0] * (N + 1)
    try:
        lines = Path(path).read_text().split("\n")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Fail(EXIT_INPUT, f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        parts = line.split()
        if not parts:
            continue
        try:
            old, new = map(int, parts)
        except ValueError:
            raise _Fail(EXIT_INPUT, f"{path}:{lineno}: expected 'old new'") from None
        if not (1 <= old <= N and 1 <= new <= N) or f[old]:
            raise _Fail(EXIT_INPUT, f"{path}:{lineno}: entry out of range or repeated")
        f[old] = new
    if sorted(f[1:]) != list(range(1, N + 1)):
        raise _Fail(EXIT_INPUT, f"{path}: not a permutation of 1..{N}")
    return tuple(f)


def _sample_pairs(n: int, seed: int = 0) -> list[tuple[int, int]] | None:
    if n <= FULL_SWEEP_LIMIT:
        return None
    rng = SplitMix64(seed)
    return [(rng.randint(1, n), rng.randint(1, n)) for _ in range(FULL_SWEEP_LIMIT * FULL_SWEEP_LIMIT)]


def verify(core, twins, g, mapping: tuple[int, ...] | None) -> list[str]:
    """Compare a decoded container with ``g`` and sweep every query; return mismatches."""
    N = twins.N if twins else core.n
    if g.n != N:
        return [f"vertex count: container has {N}, edge list has {g.n}"]
    if mapping is None:
        try:
            mapping = compress(g, twins=twins is not None).mapping
        except TrexError as exc:
            return [f"cannot rebuild the mapping: {exc}"]
    arcs = {(mapping[u], mapping[v]) for u, v in g.edges}
    decoded = set((twins or core).decode().edges)
    if core.undirected:
        arcs = {frozenset(e) for e in arcs}
        decoded = {frozenset(e) for e in decoded}
    if arcs != decoded:
        return [f"edge sets differ: {len(arcs - decoded)} missing, {len(decoded - arcs)} extra"]
    tree = core.tree_edges()
    local = Digraph(core.n, tree + core.residual_edges(), validate=False)
    t = extract(local, range(len(tree)), root=1)
    if list(t.relabel[1:]) != list(range(1, core.n + 1)):
        return ["stored tree is not in canonical level order"]
    bad = sweep(core, NaiveTrex(local, t, core.undirected), _sample_pairs(core.n))
    if twins is not None:
        twins.mapping = mapping
        bad += twin_sweep(twins, g, _sample_pairs(N, 1))
    return bad


def cmd_verify(args) -> int:
    core, twins = _read_container(args.container)
    g = _load_graph(args.against, core.undirected)
    N = twins.N if twins else core.n
    mapping = _read_mapping(args.mapping, N) if args.mapping and g.n == N else None
    bad = verify(core, twins, g, mapping)
    if bad:
        raise _Fail(EXIT_MISMATCH, f"verification failed ({len(bad)} mismatches), first: {bad[0]}")
    print("ok")
    return 0


# --- gen ---------------------------------------------------------------------------


def generate(family: str, args) -> Digraph:
    if family == "pds":
        return path_double_star(args.k)
    if family == "cliquestar":
        return clique_plus_star(args.k)
    if family == "x3c":
        return planted_x3c(args.n, args.seed)[0]
    if family == "config":
        m = args.m if args.m is not None else 5 * args.n
        d_in = random_degree_sequence(args.n, m, args.seed, args.exponent, min_degree=args.min_degree)
        d_out = random_degree_sequence(args.n, m, args.seed + 1, args.exponent, min_degree=args.min_degree)
        return configuration_model(d_in, d_out, args.seed)
    g0 = random_connected_digraph(args.n0, args.m0 if args.m0 is not None else 2 * args.n0, args.seed)
    return copy_model(g0, args.steps, args.seed)


def cmd_gen(args) -> int:
    try:
        g = generate(args.family, args)
    except (TrexError, ValueError) as exc:
        raise _Fail(EXIT_INPUT, f"cannot generate {args.family}: {exc}") from exc
    text = format_edgelist(g)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# --- bench -------------------------------------------------------------------------

BENCH_COLUMNS = ("family", "n", "m", "h_before", "h_after", "bits_total", "build_ms", "query_ns_p50")


def size_args(size: int, seed: int) -> argparse.Namespace:
    return argparse.Namespace(k=size, n=size, m=None, seed=seed, exponent=None, min_degree=0,
                              n0=max(2, size // 100), m0=None, steps=size)


def query_p50_ns(x, count: int = 2000, seed: int = 0) -> float:
    """Median wall time of a mixed n_out / n_in / adjacent workload, one call per timing."""
    rng = SplitMix64(seed)
    n = x.N if hasattr(x, "N") else x.n
    samples = []
    clock = time.perf_counter_ns
    for _ in range(count):
        v = rng.randint(1, n)
        op = rng.below(3)
        if op == 2:
            w = rng.randint(1, n)
            t0 = clock()
            x.adjacent(v, w)
        else:
            deg = x.outdegree(v) if op == 0 else x.indegree(v)
            if not deg:
                continue
            i = rng.randint(1, deg)
            fn = x.n_out if op == 0 else x.n_in
            t0 = clock()
            fn(v, i)
        samples.append(clock() - t0)
    return statistics.median(samples) if samples else 0.0


def bench_rows(family: str, sizes: Sequence[int], trials: int, seed: int = 0, queries: int = 2000):
    for size in sizes:
        for trial in range(trials):
            g = generate(family, size_args(size, seed + trial))
            t0 = time.perf_counter()
            c = compress(g)
            build_ms = (time.perf_counter() - t0) * 1e3
            yield {
                "family": family,
                "n": g.n,
                "m": g.m,
                "h_before": round(c.savings.h_before, 3),
                "h_after": round(c.savings.h_after, 3),
                "bits_total": c.space_report().total_bits,
                "build_ms": round(build_ms, 3),
                "query_ns_p50": round(query_p50_ns(c.core, queries, seed + trial)),
            }


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        raise _Fail(EXIT_INPUT, f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
    writer = csv.DictWriter(sys.stdout, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    try:
        for row in bench_rows(args.family, sizes, args.trials, args.seed, args.queries):
            writer.writerow(row)
            sys.stdout.flush()
    except (TrexError, ValueError) as exc:
        raise _Fail(EXIT_INPUT, f"benchmark failed: {exc}") from exc
    return 0


# --- entry -------------------------------------------------------------------------

FAMILIES = ("pds", "cliquestar", "x3c", "config", "copy")
QUERY_OPS = ("outdeg", "indeg", "adj", "nout", "nin", "noutrank", "ninrank", "next-out", "next-in")


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="trex", description="Tree-extraction graph compression.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="compress an edge list into a container")
    b.add_argument("input")
    b.add_argument("output")
    b.add_argument("--undirected", action="store_true")
    b.add_argument("--twins", action="store_true", help="contract twin classes first")
    b.add_argument("--emit-mapping", metavar="PATH", help="write 'old new' id pairs")
    b.add_argument("--exact", action="store_true", help="exhaustive tree search instead of greedy")
    b.add_argument("--exact-limit", type=int, metavar="N",
                   help="cap on spanning trees (directed) or edges (undirected) for --exact")
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer one navigational query")
    q.add_argument("container")
    q.add_argument("--op", required=True, choices=QUERY_OPS)
    q.add_argument("--v", type=int)
    q.add_argument("--w", type=int)
    q.add_argument("--i", type=int)
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="check a container against its source edge list")
    v.add_argument("container")
    v.add_argument("--against", required=True, metavar="EDGELIST")
    v.add_argument("--mapping", metavar="PATH", help="mapping written by build --emit-mapping")
    v.set_defaults(func=cmd_verify)

    gen = sub.add_parser("gen", help="emit a generated graph as an edge list")
    gen.add_argument("--family", required=True, choices=FAMILIES)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--k", type=int, default=10, help="size for pds and cliquestar")
    gen.add_argument("--n", type=int, default=10, help="vertices (config) or triples (x3c)")
    gen.add_argument("--m", type=int, help="edges for config (default 5n)")
    gen.add_argument("--exponent", type=float, help="power-law exponent for config degrees")
    gen.add_argument("--min-degree", type=int, default=0)
    gen.add_argument("--n0", type=int, default=5, help="copy-model seed vertices")
    gen.add_argument("--m0", type=int, help="copy-model seed edges (default 2*n0)")
    gen.add_argument("--steps", type=int, default=100, help="copy-model duplication steps")
    gen.add_argument("--output", "-o")
    gen.set_defaults(func=cmd_gen)

    be = sub.add_parser("bench", help="CSV benchmark over a family and sizes")
    be.add_argument("--family", required=True, choices=FAMILIES)
    be.add_argument("--sizes", required=True, help="comma-separated size parameters")
    be.add_argument("--trials", type=int, default=1)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--queries", type=int, default=2000)
    be.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        return args.func(args)
    except _Fail as exc:
        print(f"trex: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

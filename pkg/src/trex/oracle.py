"""Plain adjacency-list reference for the succinct query layer.

The oracle is built from the input graph and the tree extraction only, so
it shares no code path with the compressed structure it checks.
"""
from __future__ import annotations

from typing import Iterable

from .errors import NotANeighbour, OutOfRange
from .graph import Digraph, UGraph
from .minetrex import TreeExtraction
from .twin import twin_classes


class NaiveTrex:
    """Explicit neighbour lists in the same fixed order as :class:`TrexGraph`."""

    def __init__(self, g: Digraph, t: TreeExtraction, undirected: bool = False):
        n = g.n
        new = t.relabel
        self.n = n
        self.m = g.m
        self.undirected = undirected
        self.parent = [0] * (n + 1)
        self.children: list[list[int]] = [[] for _ in range(n + 1)]
        tree_arcs: set[tuple[int, int]] = set()
        for old in range(1, n + 1):
            p = t.parent[old]
            if p:
                self.parent[new[old]] = new[p]
                u, v = g.edges[t.parent_edge[old]]
                tree_arcs.add((new[u], new[v]))
        for v in range(2, n + 1):
            self.children[self.parent[v]].append(v)
        res_out: list[list[int]] = [[] for _ in range(n + 1)]
        res_in: list[list[int]] = [[] for _ in range(n + 1)]
        self.arcs: set[tuple[int, int]] = set(tree_arcs)
        for i, (u, v) in enumerate(g.edges):
            if i in t.tree:
                continue
            a, b = new[u], new[v]
            res_out[a].append(b)
            res_in[b].append(a)
            self.arcs.add((a, b))
        self.out: list[list[int]] = [[] for _ in range(n + 1)]
        self.inn: list[list[int]] = [[] for _ in range(n + 1)]
        for v in range(1, n + 1):
            p = self.parent[v]
            kids = self.children[v]
            if undirected:
                nb = ([p] if p else []) + kids + sorted(res_out[v]) + sorted(res_in[v])
                self.out[v] = self.inn[v] = nb
                continue
            self.out[v] = (
                ([p] if p and (v, p) in tree_arcs else [])
                + [c for c in kids if (v, c) in tree_arcs]
                + sorted(res_out[v])
            )
            self.inn[v] = (
                ([p] if p and (p, v) in tree_arcs else [])
                + [c for c in kids if (c, v) in tree_arcs]
                + sorted(res_in[v])
            )

    def outdegree(self, v: int) -> int:
        return len(self.out[v])

    def indegree(self, v: int) -> int:
        return len(self.inn[v])

    def adjacent(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs or (v, u) in self.arcs

    def has_edge(self, u: int, v: int) -> bool:
        if self.undirected:
            return self.adjacent(u, v)
        return (u, v) in self.arcs

    def n_out(self, v: int, i: int) -> int:
        return self.out[v][i - 1]

    def n_in(self, v: int, i: int) -> int:
        return self.inn[v][i - 1]

    def n_out_rank(self, v: int, w: int) -> int:
        return self.out[v].index(w) + 1

    def n_in_rank(self, v: int, w: int) -> int:
        return self.inn[v].index(w) + 1

    def edges(self) -> set[tuple[int, int]]:
        return set(self.arcs)


def sweep(x, oracle: NaiveTrex, pairs: Iterable[tuple[int, int]] | None = None) -> list[str]:
    """Compare every query of ``x`` with ``oracle``; return mismatch descriptions."""
    bad: list[str] = []
    n = oracle.n

    def check(name, got, want):
        if got != want:
            bad.append(f"{name}: got {got!r}, expected {want!r}")

    if x.n != n or x.m != oracle.m:
        return [f"size: got ({x.n}, {x.m}), expected ({n}, {oracle.m})"]
    for v in range(1, n + 1):
        check(f"outdegree({v})", x.outdegree(v), oracle.outdegree(v))
        check(f"indegree({v})", x.indegree(v), oracle.indegree(v))
        outs = oracle.out[v]
        ins = oracle.inn[v]
        for i, w in enumerate(outs, 1):
            check(f"n_out({v},{i})", x.n_out(v, i), w)
            check(f"n_out_rank({v},{w})", x.n_out_rank(v, w), i)
        for i, w in enumerate(ins, 1):
            check(f"n_in({v},{i})", x.n_in(v, i), w)
            check(f"n_in_rank({v},{w})", x.n_in_rank(v, w), i)
        for name, fn, deg in (("n_out", x.n_out, len(outs)), ("n_in", x.n_in, len(ins))):
            try:
                fn(v, deg + 1)
                bad.append(f"{name}({v},{deg + 1}) did not raise")
            except OutOfRange:
                pass
    if pairs is None:
        pairs = ((u, v) for u in range(1, n + 1) for v in range(1, n + 1))
    for u, v in pairs:
        check(f"adjacent({u},{v})", x.adjacent(u, v), oracle.adjacent(u, v))
        check(f"has_edge({u},{v})", x.has_edge(u, v), oracle.has_edge(u, v))
        if not oracle.has_edge(u, v):
            try:
                x.n_out_rank(u, v)
                bad.append(f"n_out_rank({u},{v}) did not raise")
            except NotANeighbour:
                pass
    decoded = set(x.decode().edges)
    expected = oracle.edges()
    if x.undirected:
        decoded = {frozenset(e) for e in decoded}
        expected = {frozenset(e) for e in expected}
    check("decode", decoded, expected)
    return bad


def twin_sweep(ti, g, pairs: Iterable[tuple[int, int]] | None = None) -> list[str]:
    """Check a :class:`TwinIndex` against the original graph ``g`` through its id mapping."""
    bad: list[str] = []
    f = ti.mapping
    N = g.n
    undirected = isinstance(g, UGraph)
    arcs = {(f[u], f[v]) for u, v in g.edges}
    if undirected:
        arcs |= {(v, u) for u, v in arcs}
    outs: list[set[int]] = [set() for _ in range(N + 1)]
    ins: list[set[int]] = [set() for _ in range(N + 1)]
    for u, v in arcs:
        outs[u].add(v)
        ins[v].add(u)

    def check(name, got, want):
        if got != want:
            bad.append(f"{name}: got {got!r}, expected {want!r}")

    for cls in twin_classes(g):
        ids = sorted(f[v] for v in cls)
        r = ids[0]
        check(f"members({r})", ti.members(r), ids)
        for v in ids:
            check(f"rep({v})", ti.rep(v), r)
    for v in range(1, N + 1):
        for name, want, deg, at, walk in (
            ("out", outs[v], ti.outdegree, ti.n_out, ti.out_neighbours),
            ("in", ins[v], ti.indegree, ti.n_in, ti.in_neighbours),
        ):
            check(f"{name}degree({v})", deg(v), len(want))
            seq = walk(v)
            check(f"{name}_set({v})", set(seq), want)
            check(f"{name}_at({v})", [at(v, i) for i in range(1, len(seq) + 1)], seq)
            rank = ti.n_out_rank if name == "out" else ti.n_in_rank
            check(f"{name}_rank({v})", [rank(v, w) for w in seq], list(range(1, len(seq) + 1)))
            try:
                at(v, len(seq) + 1)
                bad.append(f"n_{name}({v},{len(seq) + 1}) did not raise")
            except OutOfRange:
                pass
            reps = [ti.rep(w) for w in seq]
            grouped = [r for i, r in enumerate(reps) if i == 0 or reps[i - 1] != r]
            check(f"{name}_grouping({v})", len(grouped), len(set(reps)))
    if pairs is None:
        pairs = ((u, v) for u in range(1, N + 1) for v in range(1, N + 1))
    for u, v in pairs:
        check(f"adjacent({u},{v})", ti.adjacent(u, v), (u, v) in arcs or (v, u) in arcs)
        check(f"has_edge({u},{v})", ti.has_edge(u, v), (u, v) in arcs)
        if (u, v) not in arcs:
            try:
                ti.n_out_rank(u, v)
                bad.append(f"n_out_rank({u},{v}) did not raise")
            except NotANeighbour:
                pass
    decoded = set(ti.decode().edges)
    if undirected:
        check("decode", {frozenset(e) for e in decoded}, {frozenset(e) for e in arcs})
    else:
        check("decode", decoded, arcs)
    return bad

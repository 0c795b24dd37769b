"""Choosing the spanning tree to extract.

The greedy solver computes a minimum spanning tree under edge cost
``d_target`` (the target's indegree).  Minimising the linear surrogate
``sum lg d_target`` puts the residual indegree entropy within
``(n - 1) / ln 2`` bits of the optimum.  Exhaustive solvers for small
graphs serve as oracles.
"""
from __future__ import annotations

import heapq
import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BadExtraction, Disconnected, NotSpanning, TooLarge, TooManyTrees, ZeroEdges
from .graph import (
    DegreeSequence,
    Digraph,
    Edge,
    UGraph,
    _DSU,
    count_components,
    entropy_total,
    indegree_sequence,
    is_spanning_tree,
    residual_entropy,
)
from .rng import SplitMix64

LN2 = math.log(2)


@dataclass(frozen=True)
class TreeExtraction:
    """A rooted, ordered spanning tree and the level-order ids it induces.

    ``children``, ``parent`` and ``relabel`` are indexed by original vertex
    id (index 0 unused); ``order[new] = old`` inverts ``relabel``.
    """

    tree: frozenset[int]
    root: int
    children: tuple[tuple[int, ...], ...]
    parent: tuple[int, ...]
    parent_edge: tuple[int, ...]
    relabel: tuple[int, ...]
    order: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.relabel) - 1

    def tree_edges(self, g: Digraph) -> list[Edge]:
        return [g.edges[i] for i in sorted(self.tree)]

    def degrees_level_order(self) -> list[int]:
        return [len(self.children[self.order[v]]) for v in range(1, self.n + 1)]


def extract(g: Digraph | UGraph, tree: Iterable[int], root: int | None = None) -> TreeExtraction:
    """Root ``tree`` (default: smallest vertex), order children by original id and relabel in BFS order."""
    tree = frozenset(tree)
    if not is_spanning_tree(g, tree):
        raise NotSpanning("edge set is not a spanning tree of the graph")
    n = g.n
    root = 1 if root is None else root
    if not 1 <= root <= n:
        raise NotSpanning(f"root {root} outside 1..{n}")
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
    for e in tree:
        u, v = g.edges[e]
        adj[u].append((v, e))
        adj[v].append((u, e))
    parent = [0] * (n + 1)
    parent_edge = [-1] * (n + 1)
    children: list[tuple[int, ...]] = [()] * (n + 1)
    relabel = [0] * (n + 1)
    order = [0]
    seen = [False] * (n + 1)
    seen[root] = True
    queue = deque([root])
    while queue:
        v = queue.popleft()
        order.append(v)
        relabel[v] = len(order) - 1
        kids = []
        for w, e in sorted(adj[v]):
            if not seen[w]:
                seen[w] = True
                parent[w] = v
                parent_edge[w] = e
                kids.append(w)
                queue.append(w)
        children[v] = tuple(kids)
    return TreeExtraction(tree, root, tuple(children), tuple(parent), tuple(parent_edge), tuple(relabel), tuple(order))


@dataclass(frozen=True)
class Orientation:
    """One directed version of each undirected edge, in input order."""

    edges: tuple[Edge, ...]

    def digraph(self, n: int) -> Digraph:
        return Digraph(n, self.edges, validate=False)


@dataclass(frozen=True)
class SavingsReport:
    h_before: float
    h_after: float
    linear_weight: float
    sandwich_low: float
    sandwich_high: float
    bound_error_budget: float

    def rows(self) -> list[tuple[str, float]]:
        return [
            ("h_before", self.h_before),
            ("h_after", self.h_after),
            ("linear_weight", self.linear_weight),
            ("sandwich_low", self.sandwich_low),
            ("sandwich_high", self.sandwich_high),
            ("bound_error_budget", self.bound_error_budget),
        ]


# --- greedy ---------------------------------------------------------------------


def _require_connected(g: Digraph | UGraph) -> None:
    if g.n == 0:
        raise Disconnected(0, "graph has no vertices")
    comps = count_components(g)
    if comps != 1:
        raise Disconnected(comps)


def _prim(n: int, edges: Sequence[Edge], cost: Sequence[int]) -> list[int]:
    """Minimum spanning tree under the total order ``(cost, source, target)``.

    Candidate edges sit in integer-cost buckets; each bucket is a heap keyed
    by ``(source, target)`` so ties resolve deterministically.  With a total
    order the minimum tree is unique, so the start vertex does not matter.
    """
    incident: list[list[int]] = [[] for _ in range(n + 1)]
    for i, (u, v) in enumerate(edges):
        incident[u].append(i)
        incident[v].append(i)
    in_tree = [False] * (n + 1)
    buckets: dict[int, list[tuple[int, int, int]]] = {}
    active: list[int] = []

    def grow(v: int) -> None:
        in_tree[v] = True
        for i in incident[v]:
            u, w = edges[i]
            if in_tree[u] and in_tree[w]:
                continue
            c = cost[i]
            bucket = buckets.get(c)
            if bucket is None:
                bucket = buckets[c] = []
                heapq.heappush(active, c)
            heapq.heappush(bucket, (u, w, i))

    chosen: list[int] = []
    grow(1)
    while len(chosen) < n - 1 and active:
        c = active[0]
        bucket = buckets[c]
        u, w, i = heapq.heappop(bucket)
        if not bucket:
            heapq.heappop(active)
            del buckets[c]
        if in_tree[u] and in_tree[w]:
            continue
        chosen.append(i)
        grow(w if in_tree[u] else u)
    return chosen


def greedy_tree(g: Digraph) -> TreeExtraction:
    """Spanning tree minimising ``sum lg d_target`` (cost = target indegree)."""
    _require_connected(g)
    d = indegree_sequence(g).d
    cost = [d[v - 1] for _, v in g.edges]
    return extract(g, _prim(g.n, g.edges, cost))


def orient_toward_larger(g: UGraph) -> Orientation:
    """Point each edge at its endpoint of larger degree (ties: larger id)."""
    deg = g.degrees()
    out = []
    for u, v in g.edges:
        if (deg[u], u) > (deg[v], v):
            u, v = v, u
        out.append((u, v))
    return Orientation(tuple(out))


def greedy_undirected(g: UGraph) -> tuple[Orientation, TreeExtraction]:
    """Orient toward larger degree, then extract the tree minimising ``sum lg deg(target)``.

    Viewing every undirected edge as a pair of opposite arcs, the cheaper arc
    of each pair (toward the smaller-degree end) always belongs to a linear
    minimiser, so the residual keeps the arc toward the larger-degree end.
    """
    _require_connected(g)
    orient = orient_toward_larger(g)
    deg = g.degrees()
    cost = [deg[v] for _, v in orient.edges]
    dg = orient.digraph(g.n)
    return orient, extract(dg, _prim(g.n, dg.edges, cost))


# --- exhaustive -----------------------------------------------------------------


def spanning_trees(n: int, edges: Sequence[Edge]) -> Iterator[frozenset[int]]:
    """All spanning trees (ignoring orientation) by include/exclude branching.

    An edge is included when it joins two components and excluded only if
    the remaining edges can still connect the graph, so no branch dies.
    """
    m = len(edges)
    if n <= 1:
        yield frozenset()
        return

    def can_finish(parent: list[int], start: int) -> bool:
        dsu = _DSU(0)
        dsu.parent = parent.copy()
        comps = len({dsu.find(v) for v in range(1, n + 1)})
        for u, v in edges[start:]:
            if dsu.union(u, v):
                comps -= 1
                if comps == 1:
                    return True
        return comps == 1

    chosen: list[int] = []

    def walk(i: int, parent: list[int], size: int) -> Iterator[frozenset[int]]:
        if size == n - 1:
            yield frozenset(chosen)
            return
        if i == m:
            return
        u, v = edges[i]
        dsu = _DSU(0)
        dsu.parent = parent.copy()
        if dsu.union(u, v):
            chosen.append(i)
            yield from walk(i + 1, dsu.parent, size + 1)
            chosen.pop()
        if can_finish(parent, i + 1):
            yield from walk(i + 1, parent, size)

    start = _DSU(n).parent
    if can_finish(start, 0):
        yield from walk(0, start, 0)


def exact_minetrex(g: Digraph, limit: int = 10**7) -> tuple[TreeExtraction, float]:
    """Exhaustive optimum of the residual indegree entropy over all spanning trees."""
    _require_connected(g)
    best_tree: frozenset[int] | None = None
    best = math.inf
    for count, tree in enumerate(spanning_trees(g.n, g.edges), 1):
        if count > limit:
            raise TooManyTrees(f"more than {limit} spanning trees")
        h = residual_entropy(g, tree)
        if h < best - 1e-12:
            best, best_tree = h, tree
    assert best_tree is not None
    return extract(g, best_tree), best


def exact_u_minetrex(g: UGraph, limit: int = 14) -> tuple[Orientation, TreeExtraction, float]:
    """Exhaustive optimum over orientations of the residual and spanning trees; ``limit`` caps m."""
    _require_connected(g)
    if g.m > limit:
        raise TooLarge(f"{g.m} edges exceed the exhaustive limit of {limit}")
    default = orient_toward_larger(g).edges
    best = math.inf
    best_choice: tuple[frozenset[int], tuple[Edge, ...]] | None = None
    for tree in spanning_trees(g.n, g.edges):
        rest = [i for i in range(g.m) if i not in tree]
        for flips in itertools.product((False, True), repeat=len(rest)):
            d = [0] * (g.n + 1)
            for i, flip in zip(rest, flips):
                u, v = g.edges[i]
                d[u if flip else v] += 1
            h = entropy_total(d)
            if h < best - 1e-12:
                edges = list(default)
                for i, flip in zip(rest, flips):
                    u, v = g.edges[i]
                    edges[i] = (v, u) if flip else (u, v)
                best, best_choice = h, (tree, tuple(edges))
    assert best_choice is not None
    tree, edges = best_choice
    orient = Orientation(edges)
    return orient, extract(orient.digraph(g.n), tree), best


def random_spanning_tree(g: Digraph | UGraph, rng: SplitMix64) -> frozenset[int]:
    """Uniform spanning tree (parallel arcs count separately) via Wilson's algorithm."""
    _require_connected(g)
    n = g.n
    incident: list[list[int]] = [[] for _ in range(n + 1)]
    for i, (u, v) in enumerate(g.edges):
        incident[u].append(i)
        incident[v].append(i)
    in_tree = [False] * (n + 1)
    nxt = [-1] * (n + 1)
    in_tree[1] = True
    for start in range(2, n + 1):
        v = start
        while not in_tree[v]:
            e = rng.choice(incident[v])
            nxt[v] = e
            a, b = g.edges[e]
            v = b if a == v else a
        v = start
        while not in_tree[v]:
            in_tree[v] = True
            a, b = g.edges[nxt[v]]
            v = b if a == v else a
    return frozenset(nxt[v] for v in range(2, n + 1))


# --- bounds -----------------------------------------------------------------------


def _counts(d: DegreeSequence | Sequence[int]) -> tuple[int, ...]:
    return d.d if isinstance(d, DegreeSequence) else tuple(int(x) for x in d)


def opt_lin(d: DegreeSequence | Sequence[int], x: Sequence[int]) -> float:
    d = _counts(d)
    return sum(xi * math.log2(di) for di, xi in zip(d, x) if xi)


def opt_ent(d: DegreeSequence | Sequence[int], x: Sequence[int]) -> float:
    d = _counts(d)
    return entropy_total([di - xi for di, xi in zip(d, x)])


def sandwich_bounds(d: DegreeSequence | Sequence[int], x: Sequence[int], k: int) -> tuple[float, float]:
    """``low = (m-k) lg(m-k) - sum d lg d + sum x lg d`` and ``high = low + k / ln 2``."""
    d = _counts(d)
    x = tuple(int(v) for v in x)
    m = sum(d)
    if len(x) != len(d):
        raise BadExtraction("extraction vector length differs from the degree sequence")
    if any(not 0 <= xi <= di for di, xi in zip(d, x)):
        raise BadExtraction("every x_i must satisfy 0 <= x_i <= d_i")
    if sum(x) != k or k > m:
        raise BadExtraction(f"extraction sums to {sum(x)}, expected k = {k} <= m = {m}")
    rest = m - k
    low = (rest * math.log2(rest) if rest else 0.0) - sum(di * math.log2(di) for di in d if di) + opt_lin(d, x)
    return low, low + k / LN2


def _tree_targets(g: Digraph, t: TreeExtraction) -> list[int]:
    if len(t.tree) != max(g.n - 1, 0) or not is_spanning_tree(g, t.tree):
        raise NotSpanning("extraction does not span the graph")
    return [g.edges[i][1] for i in t.tree]


def linear_weight(g: Digraph, t: TreeExtraction) -> float:
    """``sum over tree edges of lg(m / d_target)``."""
    d = indegree_sequence(g).d
    lgm = math.log2(g.m) if g.m else 0.0
    return sum(lgm - math.log2(d[j - 1]) for j in _tree_targets(g, t))


def prelp_residual(g: Digraph, t: TreeExtraction) -> float:
    """Linear prediction ``H(G) - sum_T lg(m / d_j)`` of the residual entropy."""
    return entropy_total(indegree_sequence(g)) - linear_weight(g, t)


def savings_bound_many_nonzero(g: Digraph) -> tuple[float, float]:
    """``(alpha, H - (n / 2 alpha) rate + 2n / ln 2)`` with ``alpha = n / #nonzero indegrees``."""
    _require_connected(g)
    d = indegree_sequence(g).d
    nonzero = sum(1 for x in d if x)
    if nonzero == 0:
        raise ZeroEdges("no vertex has nonzero indegree")
    alpha = g.n / nonzero
    h = entropy_total(d)
    rate = h / g.m
    return alpha, h - g.n / (2 * alpha) * rate + 2 * g.n / LN2


def savings_report(g: Digraph, t: TreeExtraction) -> SavingsReport:
    d = indegree_sequence(g)
    x = [0] * g.n
    for j in _tree_targets(g, t):
        x[j - 1] += 1
    k = len(t.tree)
    low, high = sandwich_bounds(d, x, k)
    return SavingsReport(
        h_before=entropy_total(d),
        h_after=residual_entropy(g, t.tree),
        linear_weight=linear_weight(g, t),
        sandwich_low=low,
        sandwich_high=high,
        bound_error_budget=k / LN2,
    )

"""Seeded graph families for tests, benchmarks and bound demonstrations.

All randomness comes from :class:`trex.rng.SplitMix64`, so a seed and the
parameters fix the output exactly.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InfeasibleSequence
from .graph import DegreeSequence, Digraph, UGraph, weak_components
from .rng import SplitMix64


def directed_path(n: int) -> Digraph:
    return Digraph(n, ((i, i + 1) for i in range(1, n)))


def path_double_star(k: int) -> Digraph:
    """Path ``a_1 .. a_k b_1 .. b_k`` with ribs ``a_i -> x``, ``b_i -> y`` and ``x -> y``.

    Vertices: ``a_i = i``, ``b_i = k + i``, ``x = 2k + 1``, ``y = 2k + 2``;
    ``4k`` edges.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    x, y = 2 * k + 1, 2 * k + 2
    edges = [(i, i + 1) for i in range(1, 2 * k)]
    edges += [(i, x) for i in range(1, k + 1)]
    edges += [(k + i, y) for i in range(1, k + 1)]
    edges.append((x, y))
    return Digraph(2 * k + 2, edges)


def path_double_star_trees(k: int) -> tuple[frozenset[int], frozenset[int]]:
    """Edge indices of the good tree (path plus ``a_1 -> x -> y``) and the bad tree (all ribs)."""
    path = list(range(2 * k - 1))
    a_rib = 2 * k - 1
    b_ribs = list(range(3 * k - 1, 4 * k - 1))
    xy = 4 * k - 1
    good = frozenset(path + [a_rib, xy])
    bad = frozenset(list(range(2 * k - 1, 3 * k - 1)) + b_ribs + [xy])
    return good, bad


def clique_plus_star(k: int) -> Digraph:
    """All ordered pairs on ``1..k``, centre ``k + 1`` fed by vertex 1 and ``k^2`` leaves."""
    if k < 2:
        raise ValueError("k must be at least 2")
    centre = k + 1
    edges = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1) if i != j]
    edges.append((1, centre))
    edges += [(centre + i, centre) for i in range(1, k * k + 1)]
    return Digraph(k + 1 + k * k, edges)


@dataclass(frozen=True)
class X3CInstance:
    graph: Digraph
    planted_opt: float
    sets: tuple[tuple[int, int, int], ...]
    planted: tuple[int, ...]
    set_vertex: tuple[int, ...]
    element_vertex: tuple[int, ...]


def planted_x3c_instance(n: int, seed: int = 0) -> X3CInstance:
    """Three random partitions of ``3n`` elements into triples, the first one planted.

    Layout: a complete binary tree in heap order whose ``3n`` leaves are the
    set vertices (internal nodes ``1..3n-1``, sets ``3n..6n-1``), elements
    ``6n..9n-1``; every element points at the three sets containing it.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = SplitMix64(seed)
    universe = list(range(3 * n))
    sets: list[tuple[int, int, int]] = []
    for _ in range(3):
        perm = universe.copy()
        rng.shuffle(perm)
        sets += [tuple(sorted(perm[3 * i : 3 * i + 3])) for i in range(n)]
    order = list(range(3 * n))
    rng.shuffle(order)
    leaves = 3 * n
    set_vertex = [0] * (3 * n)
    for pos, s in enumerate(order):
        set_vertex[s] = leaves + pos
    element_vertex = [2 * leaves + e for e in universe]
    edges = [(i, c) for i in range(1, leaves) for c in (2 * i, 2 * i + 1)]
    by_vertex = sorted(range(3 * n), key=lambda s: set_vertex[s])
    for s in by_vertex:
        for e in sets[s]:
            edges.append((element_vertex[e], set_vertex[s]))
    g = Digraph(3 * leaves - 1, edges)
    m_res = 6 * n
    return X3CInstance(
        graph=g,
        planted_opt=m_res * math.log2(m_res / 3),
        sets=tuple(sets),
        planted=tuple(range(n)),
        set_vertex=tuple(set_vertex),
        element_vertex=tuple(element_vertex),
    )


def planted_x3c(n: int, seed: int = 0) -> tuple[Digraph, float]:
    inst = planted_x3c_instance(n, seed)
    return inst.graph, inst.planted_opt


def random_degree_sequence(n: int, m: int, seed: int = 0, exponent: float | None = None,
                           min_degree: int = 0) -> DegreeSequence:
    """``n`` counts summing to ``m``, each at most ``n - 1``.

    Every vertex starts with ``min_degree``; the rest is handed out one unit
    at a time with probability proportional to a weight, ``i^(-1/(exponent-1))``
    for a power law or uniform when ``exponent`` is None.
    """
    if n < 1 or m < n * min_degree or m > n * (n - 1):
        raise InfeasibleSequence(f"cannot place {m} edges on {n} vertices")
    rng = SplitMix64(seed)
    if exponent is None:
        weights = [1.0] * n
    else:
        if exponent <= 1:
            raise ValueError("power-law exponent must exceed 1")
        weights = [(i + 1) ** (-1.0 / (exponent - 1)) for i in range(n)]
    d = [min_degree] * n
    cum = []
    acc = 0.0
    for w in weights:
        acc += w
        cum.append(acc)
    left = m - n * min_degree
    while left:
        i = bisect.bisect_right(cum, rng.random() * acc)
        i = min(i, n - 1)
        if d[i] < n - 1:
            d[i] += 1
            left -= 1
    order = list(range(n))
    rng.shuffle(order)
    return DegreeSequence(d[i] for i in order)


def configuration_model(d_in: DegreeSequence | Sequence[int], d_out: DegreeSequence | Sequence[int],
                        seed: int = 0, retries: int = 100) -> Digraph:
    """Directed stub matching; bad pairs are rewired or erased, then components are linked.

    A self-loop or repeated pair is repaired by swapping targets with a random
    accepted edge (at most ``retries`` attempts); otherwise it is dropped.  If
    the result is disconnected, one extra edge per surplus component chains
    the components together, so degrees can deviate slightly.
    """
    din = list(d_in)
    dout = list(d_out)
    n = len(din)
    if len(dout) != n:
        raise InfeasibleSequence("in- and out-degree sequences differ in length")
    if sum(din) != sum(dout):
        raise InfeasibleSequence(f"degree sums differ: {sum(din)} != {sum(dout)}")
    if any(x < 0 or x > n - 1 for x in din + dout):
        raise InfeasibleSequence("every degree must lie in 0..n-1")
    rng = SplitMix64(seed)
    tails = [v for v in range(1, n + 1) for _ in range(dout[v - 1])]
    heads = [v for v in range(1, n + 1) for _ in range(din[v - 1])]
    rng.shuffle(heads)
    edges: list[tuple[int, int]] = []
    present: set[tuple[int, int]] = set()
    bad: list[tuple[int, int]] = []
    for u, v in zip(tails, heads):
        if u == v or (u, v) in present:
            bad.append((u, v))
        else:
            present.add((u, v))
            edges.append((u, v))
    for u, v in bad:
        for _ in range(retries if edges else 0):
            i = rng.below(len(edges))
            a, b = edges[i]
            if u != b and a != v and (u, b) not in present and (a, v) not in present:
                present.discard((a, b))
                edges[i] = (u, b)
                present.add((u, b))
                edges.append((a, v))
                present.add((a, v))
                break
    g = Digraph(n, edges, validate=False)
    comp = weak_components(g)
    ncomp = max(comp[1:]) if n else 0
    if ncomp > 1:
        members: list[list[int]] = [[] for _ in range(ncomp + 1)]
        for v in range(1, n + 1):
            members[comp[v]].append(v)
        picks = [rng.choice(members[c]) for c in range(1, ncomp + 1)]
        edges += [(picks[i], picks[i + 1]) for i in range(ncomp - 1)]
    return Digraph(n, edges)


def copy_model(g0: Digraph, steps: int, seed: int = 0, *, with_ancestry: bool = False):
    """Duplicate a uniformly chosen vertex ``steps`` times.

    The copy receives the original's out- and in-neighbours but no edge to the
    original itself.  With ``with_ancestry`` also return, per vertex, the seed
    vertex it descends from.
    """
    rng = SplitMix64(seed)
    outs = [set(x) for x in g0.out_neighbours()]
    ins = [set(x) for x in g0.in_neighbours()]
    ancestor = list(range(g0.n + 1))
    edges = list(g0.edges)
    n = g0.n
    for _ in range(steps):
        v = rng.randint(1, n)
        n += 1
        w = n
        outs.append(set(outs[v]))
        ins.append(set(ins[v]))
        ancestor.append(ancestor[v])
        for x in sorted(outs[v]):
            edges.append((w, x))
            ins[x].add(w)
        for x in sorted(ins[v]):
            edges.append((x, w))
            outs[x].add(w)
    g = Digraph(n, edges)
    return (g, tuple(ancestor)) if with_ancestry else g


def random_connected_digraph(n: int, m: int, seed: int = 0) -> Digraph:
    """Random spanning tree with random orientations plus ``m - n + 1`` random extra arcs."""
    if n < 1 or m < n - 1 or m > n * (n - 1):
        raise InfeasibleSequence(f"no simple connected digraph with n={n}, m={m}")
    rng = SplitMix64(seed)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges: list[tuple[int, int]] = []
    present: set[tuple[int, int]] = set()
    for i in range(1, n):
        u, v = order[i], order[rng.below(i)]
        e = (u, v) if rng.below(2) else (v, u)
        edges.append(e)
        present.add(e)
    dense = m > n * (n - 1) // 2
    if dense:
        pool = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v and (u, v) not in present]
        edges += rng.sample(pool, m - len(edges))
    else:
        while len(edges) < m:
            u, v = rng.randint(1, n), rng.randint(1, n)
            if u != v and (u, v) not in present:
                present.add((u, v))
                edges.append((u, v))
    return Digraph(n, edges)


def random_connected_ugraph(n: int, m: int, seed: int = 0) -> UGraph:
    if n < 1 or m < n - 1 or m > n * (n - 1) // 2:
        raise InfeasibleSequence(f"no simple connected graph with n={n}, m={m}")
    rng = SplitMix64(seed)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    present: set[tuple[int, int]] = set()
    edges = []
    for i in range(1, n):
        u, v = order[i], order[rng.below(i)]
        present.add((min(u, v), max(u, v)))
        edges.append((u, v))
    pool = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if (u, v) not in present]
    edges += rng.sample(pool, m - len(edges))
    return UGraph(n, edges)


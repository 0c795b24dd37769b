"""Twin reduction on top of the TREX structure.

Vertices with identical neighbourhoods (both out and in for digraphs; the
open neighbourhood for undirected graphs) form a twin class.  Each class
is contracted to its smallest-id member; the reduced graph is compressed
with TREX and the class sizes are recorded in a bitvector ``B`` holding,
per reduced vertex, a 1 followed by one 0 per extra twin.

Full ids: representatives keep their reduced labels ``1..n``; twins get
``n+1..N`` consecutively, class by class in representative order.
"""
from __future__ import annotations

import hashlib
from collections import defaultdict

import numpy as np

from .errors import NotANeighbour, OutOfRange, ReducedDisconnected
from .graph import Digraph, UGraph, count_components
from .minetrex import greedy_tree, greedy_undirected
from .succinct.bitvec import BitVec, CompressedBitVec
from .trexds import TrexGraph, lg_binom


def _key(*parts: list[int]) -> bytes:
    h = hashlib.blake2b(digest_size=16)
    for p in parts:
        h.update(np.asarray(p, dtype="<i8").tobytes())
        h.update(b"|")
    return h.digest()


def twin_classes(g: Digraph | UGraph) -> list[list[int]]:
    """Twin classes as sorted id lists, ordered by smallest member."""
    if isinstance(g, UGraph):
        nbrs = [sorted(x) for x in g.neighbours()]
        sig = lambda v: (nbrs[v],)  # noqa: E731
    else:
        outs = [sorted(x) for x in g.out_neighbours()]
        ins = [sorted(x) for x in g.in_neighbours()]
        sig = lambda v: (outs[v], ins[v])  # noqa: E731
    buckets: dict[bytes, list[list[int]]] = defaultdict(list)
    for v in range(1, g.n + 1):
        s = sig(v)
        groups = buckets[_key(*s)]
        for grp in groups:
            if sig(grp[0]) == s:
                grp.append(v)
                break
        else:
            groups.append([v])
    classes = [grp for groups in buckets.values() for grp in groups]
    classes.sort(key=lambda c: c[0])
    return classes


def twin_reduce(g: Digraph | UGraph) -> tuple[Digraph | UGraph, list[list[int]]]:
    """Quotient graph on class indices ``1..len(classes)`` and the classes themselves."""
    undirected = isinstance(g, UGraph)
    classes = twin_classes(g)
    n = len(classes)
    pre = [0] * (g.n + 1)
    for j, members in enumerate(classes, 1):
        for v in members:
            pre[v] = j
    seen: set[tuple[int, int]] = set()
    red_edges = []
    for u, v in g.edges:
        e = (pre[u], pre[v])
        if undirected:
            e = (min(e), max(e))
        if e not in seen:
            seen.add(e)
            red_edges.append(e)
    g0 = UGraph(n, red_edges, validate=False) if undirected else Digraph(n, red_edges, validate=False)
    comps = count_components(g0)
    if comps != 1:
        raise ReducedDisconnected(comps, f"twin-reduced graph has {comps} components")
    return g0, classes


def copy_model_info(n0: int, steps: int) -> float:
    """``lg C(steps + n0 - 1, n0 - 1)``: bits to name a copy-model class-size vector."""
    if n0 < 1:
        raise ValueError("seed needs at least one vertex")
    return lg_binom(steps + n0 - 1, n0 - 1)


class TwinIndex:
    """Full-graph queries answered through the reduced graph and ``B``."""

    __slots__ = ("N", "n", "core", "b", "mapping", "undirected", "_B")

    def __init__(self, N: int, core: TrexGraph, b, mapping: tuple[int, ...] | None = None):
        self.N = N
        self.n = core.n
        self.core = core
        self.b = b
        self.mapping = mapping
        self.undirected = core.undirected
        self._B = b.core

    @classmethod
    def build(cls, g: Digraph | UGraph) -> "TwinIndex":
        """Reduce, compress the reduced graph greedily, and index the classes."""
        g0, classes = twin_reduce(g)
        if isinstance(g0, UGraph):
            orient, t0 = greedy_undirected(g0)
            core = TrexGraph.build(orient.digraph(g0.n), t0, undirected=True)
        else:
            core = TrexGraph.build(g0, greedy_tree(g0))
        return cls.assemble(g.n, classes, core)

    @classmethod
    def assemble(cls, N: int, classes: list[list[int]], core: TrexGraph) -> "TwinIndex":
        """Index built from :func:`twin_reduce` classes and a core compressed from the reduced graph."""
        n = len(classes)
        by_label = [None] * (n + 1)
        for j, members in enumerate(classes, 1):
            by_label[core.mapping[j]] = members
        mapping = [0] * (N + 1)
        bits = np.zeros(N, dtype=np.uint8)
        pos = 0
        nxt = n + 1
        for label in range(1, n + 1):
            members = by_label[label]
            bits[pos] = 1
            pos += len(members)
            mapping[members[0]] = label
            for v in members[1:]:
                mapping[v] = nxt
                nxt += 1
        return cls(N, core, BitVec(bits), tuple(mapping))

    # --- class arithmetic ------------------------------------------------------------

    def _check(self, v: int) -> None:
        if not 1 <= v <= self.N:
            raise OutOfRange(f"vertex {v} outside 1..{self.N}")

    def _check_reduced(self, v0: int) -> None:
        if not 1 <= v0 <= self.n:
            raise OutOfRange(f"reduced vertex {v0} outside 1..{self.n}")

    def rep(self, v: int) -> int:
        """Reduced label of ``v``'s class: ``rank1(B, select0(B, v - n))`` for twins."""
        self._check(v)
        if v <= self.n:
            return v
        B = self._B
        return B.rank1(B.select0(v - self.n) + 1)

    def class_size(self, v0: int) -> int:
        self._check_reduced(v0)
        B = self._B
        start = B.select1(v0)
        end = B.select1(v0 + 1) if v0 < self.n else self.N
        return end - start

    def twins_of(self, v0: int) -> range:
        """Ids of the twins of representative ``v0`` (excluding ``v0``)."""
        size = self.class_size(v0)
        first = self.n + self._B.select1(v0) + 1 - v0 + 1
        return range(first, first + size - 1)

    def members(self, v0: int) -> list[int]:
        return [v0, *self.twins_of(v0)]

    def _member(self, v0: int, i: int) -> int:
        """The ``i``-th member (1-based) of class ``v0``, representative first."""
        if i == 1:
            return v0
        return self.n + self._B.select1(v0) + 1 - v0 + i - 1

    def _next_member(self, w: int) -> int | None:
        w0 = self.rep(w)
        twins = self.twins_of(w0)
        if w == w0:
            return twins.start if len(twins) else None
        return w + 1 if w + 1 < twins.stop else None

    # --- queries ---------------------------------------------------------------------

    def adjacent(self, u: int, v: int) -> bool:
        return self.core.adjacent(self.rep(u), self.rep(v))

    def has_edge(self, u: int, v: int) -> bool:
        return self.core.has_edge(self.rep(u), self.rep(v))

    def _weighted_degree(self, r: int, deg: int, pick) -> int:
        return sum(self.class_size(pick(r, k)) for k in range(1, deg + 1))

    def outdegree(self, v: int) -> int:
        r = self.rep(v)
        return self._weighted_degree(r, self.core.outdegree(r), self.core.n_out)

    def indegree(self, v: int) -> int:
        r = self.rep(v)
        return self._weighted_degree(r, self.core.indegree(r), self.core.n_in)

    def _at(self, v: int, i: int, deg: int, pick) -> int:
        r = self.rep(v)
        if i >= 1:
            for k in range(1, deg(r) + 1):
                j = pick(r, k)
                size = self.class_size(j)
                if i <= size:
                    return self._member(j, i)
                i -= size
        raise OutOfRange(f"vertex {v} has fewer than the requested neighbours")

    def n_out(self, v: int, i: int) -> int:
        """``i``-th out-neighbour in class-grouped order (linear in the reduced degree)."""
        return self._at(v, i, self.core.outdegree, self.core.n_out)

    def n_in(self, v: int, i: int) -> int:
        return self._at(v, i, self.core.indegree, self.core.n_in)

    def _rank(self, v: int, w: int, rank, pick) -> int:
        r, w0 = self.rep(v), self.rep(w)
        k = rank(r, w0)
        before = sum(self.class_size(pick(r, j)) for j in range(1, k))
        return before + (1 if w == w0 else w - self.twins_of(w0).start + 2)

    def n_out_rank(self, v: int, w: int) -> int:
        """Position of ``w`` in ``v``'s out-neighbour order; raises NotANeighbour otherwise."""
        return self._rank(v, w, self.core.n_out_rank, self.core.n_out)

    def n_in_rank(self, v: int, w: int) -> int:
        return self._rank(v, w, self.core.n_in_rank, self.core.n_in)

    def _next(self, v: int, w: int | None, deg, pick, rank, edge) -> int | None:
        r = self.rep(v)
        if w is None:
            return pick(r, 1) if deg(r) else None
        w0 = self.rep(w)
        if not edge(r, w0):
            raise NotANeighbour(f"{w} is not a neighbour of {v}")
        nxt = self._next_member(w)
        if nxt is not None:
            return nxt
        k = rank(r, w0)
        return pick(r, k + 1) if k < deg(r) else None

    def n_out_next(self, v: int, w: int | None = None) -> int | None:
        """Out-neighbour after ``w`` (the first one when ``w`` is None); None at the end."""
        c = self.core
        return self._next(v, w, c.outdegree, c.n_out, c.n_out_rank, c.has_edge)

    def n_in_next(self, v: int, w: int | None = None) -> int | None:
        c = self.core
        return self._next(v, w, c.indegree, c.n_in, c.n_in_rank, lambda a, b: c.has_edge(b, a))

    def out_neighbours(self, v: int) -> list[int]:
        out = []
        w = self.n_out_next(v)
        while w is not None:
            out.append(w)
            w = self.n_out_next(v, w)
        return out

    def in_neighbours(self, v: int) -> list[int]:
        out = []
        w = self.n_in_next(v)
        while w is not None:
            out.append(w)
            w = self.n_in_next(v, w)
        return out

    # --- whole-graph views -----------------------------------------------------------

    def class_sizes(self) -> list[int]:
        ones = np.flatnonzero(self.b.to_array())
        return np.diff(np.append(ones, self.N)).tolist()

    def decode(self) -> Digraph | UGraph:
        """Expanded graph in full ids: every reduced edge becomes a class cross product."""
        sizes = self.class_sizes()
        members = [[]] + [self.members(j) if sizes[j - 1] > 1 else [j] for j in range(1, self.n + 1)]
        edges = [(x, y) for a, b in self.core.decode().edges for x in members[a] for y in members[b]]
        cls = UGraph if self.undirected else Digraph
        return cls(self.N, edges, validate=False)

    def stored_b(self) -> CompressedBitVec:
        """``B`` without its forced leading 1, as written to containers."""
        return CompressedBitVec(self.b.to_array()[1:])

    def b_information_bits(self) -> float:
        return lg_binom(self.N - 1, self.n - 1)

    def space_report(self):
        rep = self.core.space_report()
        stored = self.stored_b()
        rep.components["twin"] = stored.space()
        rep.targets["twin"] = self.b_information_bits()
        return rep

    @classmethod
    def from_stored(cls, N: int, core: TrexGraph, stored: CompressedBitVec) -> "TwinIndex":
        bits = np.concatenate([[1], stored.to_array()]).astype(np.uint8)
        return cls(N, core, BitVec(bits))

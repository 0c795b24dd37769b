"""Succinct representation of a graph as an extracted tree plus a residual.

After relabelling the vertices in the tree's level order, the graph is
stored as four pieces:

``louds``  the tree topology (2n + 1 bits);
``dbits``  ``D[v] = 1`` iff the tree edge between ``v`` and its parent points
           at ``v`` (``D[1] = 0``; absent in undirected mode);
``starts`` ``S'``: for every vertex a 1 followed by one 0 per residual
           out-edge (``m + 1`` bits, ``n`` ones);
``adj``    ``A'``: residual out-neighbourhoods concatenated in source order,
           each sorted, in a wavelet tree over ``1..n``.

Neighbour order is fixed: the parent (when that edge qualifies), then the
qualifying children left to right, then residual neighbours.  All vertex
arguments are new (level-order) labels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContainerError, Disconnected, NotANeighbour, NotSpanning, OutOfRange
from .graph import Digraph, UGraph, count_components, is_spanning_tree
from .minetrex import TreeExtraction, greedy_undirected
from .succinct.bitvec import BitVec, CompressedBitVec
from .succinct.louds import LoudsTree
from .succinct.wavelet import WaveletTree


def lg_binom(a: int, b: int) -> float:
    if b < 0 or b > a:
        return 0.0
    return (math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)) / math.log(2)


@dataclass(frozen=True)
class SpaceReport:
    """Payload and directory bits per component, with analytic payload targets."""

    components: dict[str, tuple[int, int]]
    targets: dict[str, float]
    extra: dict[str, float] = field(default_factory=dict)

    @property
    def payload_bits(self) -> int:
        return sum(p for p, _ in self.components.values())

    @property
    def overhead_bits(self) -> int:
        return sum(o for _, o in self.components.values())

    @property
    def total_bits(self) -> int:
        return self.payload_bits + self.overhead_bits

    def rows(self) -> list[tuple[str, float]]:
        out: list[tuple[str, float]] = []
        for name, (payload, overhead) in self.components.items():
            out.append((f"{name}_payload_bits", payload))
            out.append((f"{name}_overhead_bits", overhead))
            if name in self.targets:
                out.append((f"{name}_target_bits", self.targets[name]))
        out.extend(self.extra.items())
        out.append(("payload_bits", self.payload_bits))
        out.append(("overhead_bits", self.overhead_bits))
        out.append(("bits_total", self.total_bits))
        return out


class TrexGraph:
    __slots__ = (
        "n", "m", "undirected", "louds", "dbits", "starts", "adj", "mapping",
        "_L", "_D", "_S", "_A", "_slen", "_mres",
    )

    def __init__(self, n: int, m: int, louds: LoudsTree, dbits: BitVec | None,
                 starts: CompressedBitVec, adj: WaveletTree, mapping: tuple[int, ...] | None = None):
        self.n = n
        self.m = m
        self.undirected = dbits is None
        self.louds = louds
        self.dbits = dbits
        self.starts = starts
        self.adj = adj
        self.mapping = mapping
        self._L = louds.bits.core
        self._D = dbits.core if dbits is not None else None
        self._S = starts.core
        self._A = adj.core
        self._slen = starts.n
        self._mres = adj.length

    # --- construction -----------------------------------------------------------

    @classmethod
    def build(cls, g: Digraph, t: TreeExtraction, undirected: bool = False) -> "TrexGraph":
        """Compress ``g`` around ``t``; in undirected mode tree directions are dropped."""
        if g.n == 0:
            raise NotSpanning("empty graph")
        if not is_spanning_tree(g, t.tree):
            comps = count_components(g)
            if comps > 1:
                raise Disconnected(comps)
            raise NotSpanning("extraction does not span the graph")
        n = g.n
        new = t.relabel
        louds = LoudsTree(t.degrees_level_order())
        dbits = None
        if not undirected:
            d = np.zeros(n, dtype=np.uint8)
            for old in range(1, n + 1):
                e = t.parent_edge[old]
                if e >= 0 and g.edges[e][1] == old:
                    d[new[old] - 1] = 1
            dbits = BitVec(d)
        tree = t.tree
        res = sorted((new[u], new[v]) for i, (u, v) in enumerate(g.edges) if i not in tree)
        outdeg = np.zeros(n, dtype=np.int64)
        for u, _ in res:
            outdeg[u - 1] += 1
        s = np.zeros(n + len(res), dtype=np.uint8)
        ones_at = np.arange(n) + np.concatenate([[0], np.cumsum(outdeg)[:-1]])
        s[ones_at] = 1
        starts = CompressedBitVec(s)
        adj = WaveletTree([v for _, v in res], n)
        return cls(n, g.m, louds, dbits, starts, adj, mapping=tuple(new))

    @classmethod
    def build_undirected(cls, g: UGraph) -> "TrexGraph":
        orient, t = greedy_undirected(g)
        return cls.build(orient.digraph(g.n), t, undirected=True)

    # --- primitive helpers (1-based semantics over the 0-based cores) ----------

    def _check(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise OutOfRange(f"vertex {v} outside 1..{self.n}")

    def _sel1_s(self, k: int) -> int:
        return self._S.select1(k) + 1 if k <= self.n else self._slen + 1

    def _block(self, v: int) -> tuple[int, int]:
        """``(s, r)``: residual out-neighbours of ``v`` are ``A'[s+1..s+r]``."""
        a = self._S.select1(v) + 1
        b = self._sel1_s(v + 1)
        return a - v, b - a - 1

    def _children(self, v: int) -> tuple[int, int]:
        L = self._L
        s = L.select0(v) + 1
        first = s + 1 - v
        return first, first + L.select0(v + 1) - s - 1

    def _parent(self, v: int) -> int:
        p = self._L.select1(v) + 1
        return p - self._L.rank1(p)

    def _d(self, v: int) -> int:
        return self._D.access(v - 1)

    def _a_count(self, c: int, lo: int, hi: int) -> int:
        """Occurrences of ``c`` in ``A'[lo+1..hi]``."""
        return self._A.range_count(c - 1, lo, hi)

    def _source_of(self, y: int) -> int:
        """Vertex whose residual block holds ``A'[y]``."""
        z = self._S.select0(y) + 1
        return self._S.rank1(z)

    # --- degrees ------------------------------------------------------------------

    def _tree_out(self, v: int) -> int:
        c1, ck = self._children(v)
        D = self._D
        up = 1 if v != 1 and not self._d(v) else 0
        return up + D.rank1(ck) - D.rank1(c1 - 1)

    def _tree_in(self, v: int) -> int:
        c1, ck = self._children(v)
        D = self._D
        up = 1 if v != 1 and self._d(v) else 0
        return up + (ck - c1 + 1) - (D.rank1(ck) - D.rank1(c1 - 1))

    def _tree_degree(self, v: int) -> int:
        c1, ck = self._children(v)
        return (1 if v != 1 else 0) + ck - c1 + 1

    def _res_out(self, v: int) -> int:
        return self._sel1_s(v + 1) - self._sel1_s(v) - 1

    def _res_in(self, v: int) -> int:
        return self._A.rank(v - 1, self._mres)

    def degree(self, v: int) -> int:
        """Total degree (in + out; for undirected storage, the number of neighbours)."""
        self._check(v)
        return self._tree_degree(v) + self._res_out(v) + self._res_in(v)

    def outdegree(self, v: int) -> int:
        self._check(v)
        if self.undirected:
            return self.degree(v)
        return self._tree_out(v) + self._res_out(v)

    def indegree(self, v: int) -> int:
        self._check(v)
        if self.undirected:
            return self.degree(v)
        return self._tree_in(v) + self._res_in(v)

    # --- adjacency ---------------------------------------------------------------

    def _residual_edge(self, u: int, v: int) -> bool:
        s, r = self._block(u)
        return self._a_count(v, s, s + r) > 0

    def adjacent(self, u: int, v: int) -> bool:
        """Whether an edge joins ``u`` and ``v`` in either direction."""
        self._check(u)
        self._check(v)
        if u == v:
            return False
        if (v != 1 and self._parent(v) == u) or (u != 1 and self._parent(u) == v):
            return True
        return self._residual_edge(u, v) or self._residual_edge(v, u)

    def has_edge(self, u: int, v: int) -> bool:
        """Whether the directed edge ``u -> v`` is stored."""
        self._check(u)
        self._check(v)
        if self.undirected:
            return self.adjacent(u, v)
        if u == v:
            return False
        if v != 1 and self._parent(v) == u and self._d(v):
            return True
        if u != 1 and self._parent(u) == v and not self._d(u):
            return True
        return self._residual_edge(u, v)

    # --- i-th neighbour -------------------------------------------------------------

    def _neighbour(self, v: int, i: int) -> int:
        if i >= 1 and v != 1:
            if i == 1:
                return self._parent(v)
            i -= 1
        c1, ck = self._children(v)
        if i <= ck - c1 + 1:
            return c1 + i - 1
        i -= ck - c1 + 1
        s, r = self._block(v)
        if i <= r:
            return self._A.access(s + i - 1) + 1
        i -= r
        y = self._A.select(v - 1, i) + 1
        return self._source_of(y)

    def n_out(self, v: int, i: int) -> int:
        """The ``i``-th out-neighbour of ``v``."""
        deg = self.outdegree(v)
        if not 1 <= i <= deg:
            raise OutOfRange(f"vertex {v} has out-degree {deg}, asked for neighbour {i}")
        if self.undirected:
            return self._neighbour(v, i)
        if v != 1 and not self._d(v):
            if i == 1:
                return self._parent(v)
            i -= 1
        c1, ck = self._children(v)
        D = self._D
        before = D.rank1(c1 - 1)
        nc = D.rank1(ck) - before
        if i <= nc:
            return D.select1(before + i) + 1
        s, _ = self._block(v)
        return self._A.access(s + i - nc - 1) + 1

    def n_in(self, v: int, i: int) -> int:
        """The ``i``-th in-neighbour of ``v``."""
        deg = self.indegree(v)
        if not 1 <= i <= deg:
            raise OutOfRange(f"vertex {v} has in-degree {deg}, asked for neighbour {i}")
        if self.undirected:
            return self._neighbour(v, i)
        if v != 1 and self._d(v):
            if i == 1:
                return self._parent(v)
            i -= 1
        c1, ck = self._children(v)
        D = self._D
        before = (c1 - 1) - D.rank1(c1 - 1)
        nc = (ck - c1 + 1) - (D.rank1(ck) - D.rank1(c1 - 1))
        if i <= nc:
            return D.select0(before + i) + 1
        y = self._A.select(v - 1, i - nc) + 1
        return self._source_of(y)

    # --- neighbour rank -----------------------------------------------------------------

    def _neighbour_rank(self, v: int, w: int) -> int:
        base = 0
        if v != 1:
            if self._parent(v) == w:
                return 1
            base = 1
        if w != 1 and self._parent(w) == v:
            c1, _ = self._children(v)
            return base + w - c1 + 1
        base += self._tree_degree(v) - (1 if v != 1 else 0)
        s, r = self._block(v)
        if self._a_count(w, s, s + r):
            A = self._A
            q = A.rank(w - 1, s)
            return base + A.select(w - 1, q + 1) + 1 - s
        base += r
        sw, rw = self._block(w)
        if self._a_count(v, sw, sw + rw):
            return base + self._A.rank(v - 1, sw) + 1
        raise NotANeighbour(f"{w} is not a neighbour of {v}")

    def n_out_rank(self, v: int, w: int) -> int:
        """Index ``i`` with ``n_out(v, i) == w``."""
        self._check(v)
        self._check(w)
        if self.undirected:
            return self._neighbour_rank(v, w)
        up = v != 1 and not self._d(v)
        if up and self._parent(v) == w:
            return 1
        c1, ck = self._children(v)
        D = self._D
        if w != 1 and c1 <= w <= ck and self._d(w):
            return int(up) + D.rank1(w) - D.rank1(c1 - 1)
        s, r = self._block(v)
        if not self._a_count(w, s, s + r):
            raise NotANeighbour(f"{w} is not an out-neighbour of {v}")
        A = self._A
        q = A.rank(w - 1, s)
        j = A.select(w - 1, q + 1) + 1 - s
        return int(up) + D.rank1(ck) - D.rank1(c1 - 1) + j

    def n_in_rank(self, v: int, w: int) -> int:
        """Index ``i`` with ``n_in(v, i) == w``."""
        self._check(v)
        self._check(w)
        if self.undirected:
            return self._neighbour_rank(v, w)
        up = v != 1 and self._d(v)
        if up and self._parent(v) == w:
            return 1
        c1, ck = self._children(v)
        D = self._D
        if w != 1 and c1 <= w <= ck and not self._d(w):
            return int(up) + (w - D.rank1(w)) - ((c1 - 1) - D.rank1(c1 - 1))
        sw, rw = self._block(w)
        if not self._a_count(v, sw, sw + rw):
            raise NotANeighbour(f"{w} is not an in-neighbour of {v}")
        nc = (ck - c1 + 1) - (D.rank1(ck) - D.rank1(c1 - 1))
        return int(up) + nc + self._A.rank(v - 1, sw) + 1

    # --- iteration and decoding ------------------------------------------------------

    def n_out_next(self, v: int, w: int | None = None) -> int | None:
        """Out-neighbour following ``w`` (the first when ``w`` is None); None after the last."""
        k = 0 if w is None else self.n_out_rank(v, w)
        return self.n_out(v, k + 1) if k < self.outdegree(v) else None

    def n_in_next(self, v: int, w: int | None = None) -> int | None:
        k = 0 if w is None else self.n_in_rank(v, w)
        return self.n_in(v, k + 1) if k < self.indegree(v) else None

    def out_neighbours(self, v: int) -> list[int]:
        return [self.n_out(v, i) for i in range(1, self.outdegree(v) + 1)]

    def in_neighbours(self, v: int) -> list[int]:
        return [self.n_in(v, i) for i in range(1, self.indegree(v) + 1)]

    def parents(self) -> np.ndarray:
        """Tree parent of every vertex (index 0 and the root hold 0)."""
        deg = np.diff(np.flatnonzero(self.louds.bits.to_array() == 0)) - 1
        par = np.zeros(self.n + 1, dtype=np.int64)
        par[2:] = np.repeat(np.arange(1, self.n + 1), deg)
        return par

    def residual_edges(self) -> list[tuple[int, int]]:
        s = self.starts.to_array()
        src = np.cumsum(s)[s == 0]
        targets = self.adj.to_list()
        return list(zip(src.tolist(), targets))

    def tree_edges(self) -> list[tuple[int, int]]:
        par = self.parents()
        d = self.dbits.to_array() if self.dbits is not None else np.ones(self.n, dtype=np.uint8)
        return [(int(par[v]), v) if d[v - 1] else (v, int(par[v])) for v in range(2, self.n + 1)]

    def decode(self) -> Digraph:
        """The stored graph in new labels (tree edges first, then residual by source)."""
        return Digraph(self.n, self.tree_edges() + self.residual_edges(), validate=False)

    def decode_undirected(self) -> UGraph:
        return UGraph(self.n, self.tree_edges() + self.residual_edges(), validate=False)

    # --- accounting ------------------------------------------------------------------

    def space_report(self) -> SpaceReport:
        comps = {"louds": self.louds.space()}
        if self.dbits is not None:
            comps["dbits"] = self.dbits.space()
        comps["starts"] = self.starts.space()
        comps["adj"] = self.adj.space()
        targets = {
            "louds": 2.0 * self.n,
            "starts": lg_binom(self.m + 1, self.n),
            "adj": self.adj.h0_bits(),
        }
        if self.dbits is not None:
            targets["dbits"] = float(self.n)
        return SpaceReport(comps, targets)

    # --- serialisation ---------------------------------------------------------------

    def sections(self) -> list[tuple[bytes, bytes]]:
        out = []
        for tag, part in ((b"LOUD", self.louds), (b"DBIT", self.dbits), (b"SPRT", self.starts), (b"WVLT", self.adj)):
            if part is None:
                continue
            buf = bytearray()
            part.dump(buf)
            out.append((tag, bytes(buf)))
        return out

    @classmethod
    def from_sections(cls, n: int, m: int, undirected: bool, sections: dict[bytes, bytes]) -> "TrexGraph":
        def take(tag, loader):
            if tag not in sections:
                raise ContainerError(f"missing section {tag.decode()}")
            buf = sections[tag]
            obj, end = loader(buf, 0)
            if end != len(buf):
                raise ContainerError(f"section {tag.decode()} has trailing bytes")
            return obj

        louds = take(b"LOUD", LoudsTree.load)
        if louds.n != n:
            raise ContainerError("tree size disagrees with the header")
        dbits = None
        if not undirected:
            dbits = take(b"DBIT", BitVec.load)
            if dbits.n != n or (n and dbits.access(1)):
                raise ContainerError("direction bits malformed")
        elif b"DBIT" in sections:
            raise ContainerError("undirected container carries direction bits")
        starts = take(b"SPRT", CompressedBitVec.load)
        if starts.n != m + 1 or starts.ones != n or (n and not starts.access(1)):
            raise ContainerError("start bitvector disagrees with the header")
        adj = take(b"WVLT", WaveletTree.load)
        if adj.sigma != max(n, 1) or adj.length != m - n + 1:
            raise ContainerError("adjacency sequence disagrees with the header")
        obj = cls(n, m, louds, dbits, starts, adj)
        obj._validate_residual()
        return obj

    def _validate_residual(self) -> None:
        tree = set(self.tree_edges())
        if self.undirected:
            tree |= {(v, u) for u, v in tree}
        prev_src, prev_tgt = 0, 0
        for u, v in self.residual_edges():
            if u == v:
                raise ContainerError("self-loop in residual")
            if (u, v) in tree:
                raise ContainerError("residual edge duplicates a tree edge")
            if u == prev_src and v <= prev_tgt:
                raise ContainerError("residual neighbourhood not strictly increasing")
            prev_src, prev_tgt = u, v

"""Graph values, degree sequences and indegree-entropy arithmetic.

Vertices are 1-based (``1..n``).  Edge sets are collections of 0-based
indices into a graph's ``edges`` tuple.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .errors import (
    BadEdgeIndex,
    InvalidGraph,
    ParseError,
    SumMismatch,
    ZeroEdges,
)

Edge = tuple[int, int]
EdgeSet = frozenset[int]


def _check_edges(n: int, edges: Sequence[Edge], directed: bool) -> None:
    if n < 0:
        raise InvalidGraph(f"negative vertex count {n}")
    seen: set[Edge] = set()
    for u, v in edges:
        if not (1 <= u <= n and 1 <= v <= n):
            raise InvalidGraph(f"edge ({u}, {v}) has an endpoint outside 1..{n}")
        if u == v:
            raise InvalidGraph(f"self-loop at vertex {u}")
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            raise InvalidGraph(f"duplicate edge ({u}, {v})")
        seen.add(key)


@dataclass(frozen=True)
class Digraph:
    """Simple directed graph on vertices ``1..n`` with an ordered edge list."""

    n: int
    edges: tuple[Edge, ...]

    def __init__(self, n: int, edges: Iterable[Edge], *, validate: bool = True):
        edges = tuple((int(u), int(v)) for u, v in edges)
        if validate:
            _check_edges(n, edges, directed=True)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_neighbours(self) -> list[list[int]]:
        """Per-vertex out-neighbour lists, index 0 unused."""
        out: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            out[u].append(v)
        return out

    def in_neighbours(self) -> list[list[int]]:
        inn: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            inn[v].append(u)
        return inn

    def relabel(self, mapping: Sequence[int]) -> "Digraph":
        """Apply ``mapping[old] -> new`` (index 0 unused) to every edge."""
        return Digraph(self.n, ((mapping[u], mapping[v]) for u, v in self.edges), validate=False)

    def edge_set(self) -> set[Edge]:
        return set(self.edges)


@dataclass(frozen=True)
class UGraph:
    """Simple undirected graph; each edge is stored once as given."""

    n: int
    edges: tuple[Edge, ...]

    def __init__(self, n: int, edges: Iterable[Edge], *, validate: bool = True):
        edges = tuple((int(u), int(v)) for u, v in edges)
        if validate:
            _check_edges(n, edges, directed=False)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * (self.n + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbours(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return nb


@dataclass(frozen=True)
class DegreeSequence:
    """Indegree counts; ``d[i]`` belongs to vertex ``i + 1``."""

    d: tuple[int, ...]

    def __init__(self, d: Iterable[int]):
        d = tuple(int(x) for x in d)
        if any(x < 0 for x in d):
            raise ValueError("degrees must be non-negative")
        object.__setattr__(self, "d", d)

    @property
    def m(self) -> int:
        return sum(self.d)

    def __len__(self) -> int:
        return len(self.d)

    def __iter__(self):
        return iter(self.d)


# --- degree sequences and entropy -------------------------------------------------


def indegree_sequence(g: Digraph) -> DegreeSequence:
    d = [0] * g.n
    for _, v in g.edges:
        d[v - 1] += 1
    return DegreeSequence(d)


def entropy_total(d: DegreeSequence | Sequence[int]) -> float:
    """Indegree entropy ``sum d_v lg(m / d_v)`` in bits (0 for m = 0)."""
    counts = d.d if isinstance(d, DegreeSequence) else d
    m = sum(counts)
    if m == 0:
        return 0.0
    lgm = math.log2(m)
    return sum(x * (lgm - math.log2(x)) for x in counts if x > 0)


def entropy_rate(g: Digraph) -> float:
    """Bits per edge of the indegree distribution."""
    if g.m == 0:
        raise ZeroEdges("entropy rate undefined for a graph without edges")
    return entropy_total(indegree_sequence(g)) / g.m


def residual_entropy(g: Digraph, f: Iterable[int]) -> float:
    """``entropy_total(indeg(g - f))`` without materialising ``g - f``."""
    d = [0] * (g.n + 1)
    for _, v in g.edges:
        d[v] += 1
    for i in f:
        d[g.edges[i][1]] -= 1
    return entropy_total(d)


def dominates(x: DegreeSequence | Sequence[int], y: DegreeSequence | Sequence[int]) -> bool:
    """Majorisation: sorted-descending prefix sums of x never fall below y's."""
    xs = sorted(x, reverse=True)
    ys = sorted(y, reverse=True)
    if sum(xs) != sum(ys):
        raise SumMismatch(f"sums differ: {sum(xs)} != {sum(ys)}")
    width = max(len(xs), len(ys))
    xs += [0] * (width - len(xs))
    ys += [0] * (width - len(ys))
    px = py = 0
    for a, b in zip(xs, ys):
        px += a
        py += b
        if px < py:
            return False
    return True


def simple_bound_holds(d: int, x: int) -> bool:
    """``(d - x)(lg d - lg(d - x)) <= x / ln 2`` for ``0 <= x <= d``."""
    if x == d:
        return True
    lhs = (d - x) * (math.log2(d) - math.log2(d - x))
    return lhs <= x / math.log(2) + 1e-12


# --- structural helpers -----------------------------------------------------------


def remove_edges(g: Digraph, f: Iterable[int]) -> Digraph:
    drop = set(f)
    for i in drop:
        if not 0 <= i < g.m:
            raise BadEdgeIndex(f"edge index {i} outside 0..{g.m - 1}")
    return Digraph(g.n, (e for i, e in enumerate(g.edges) if i not in drop), validate=False)


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n + 1))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def is_spanning_tree(g: Digraph | UGraph, f: Iterable[int]) -> bool:
    idx = set(f)
    if len(idx) != max(g.n - 1, 0):
        return False
    dsu = _DSU(g.n)
    for i in idx:
        if not 0 <= i < g.m:
            return False
        u, v = g.edges[i]
        if not dsu.union(u, v):
            return False
    return True


def weak_components(g: Digraph | UGraph) -> list[int]:
    """Component id (1-based, by smallest member) for each vertex; index 0 unused."""
    dsu = _DSU(g.n)
    for u, v in g.edges:
        dsu.union(u, v)
    comp = [0] * (g.n + 1)
    ids: dict[int, int] = {}
    for v in range(1, g.n + 1):
        r = dsu.find(v)
        if r not in ids:
            ids[r] = len(ids) + 1
        comp[v] = ids[r]
    return comp


def count_components(g: Digraph | UGraph) -> int:
    if g.n == 0:
        return 0
    return max(weak_components(g)[1:])


def is_weakly_connected(g: Digraph | UGraph) -> bool:
    return g.n <= 1 or count_components(g) == 1


# --- text edge-list format --------------------------------------------------------


def _data_lines(stream: Iterable[str]):
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def parse_edgelist(stream: Iterable[str], *, undirected: bool = False) -> Digraph | UGraph:
    """Read ``n m`` followed by ``m`` lines ``u v``; ``#`` starts a comment line."""
    lines = _data_lines(stream)
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise ParseError("empty input: expected header 'n m'") from None
    if len(head) != 2:
        raise ParseError(f"line {lineno}: header must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(f"line {lineno}: header must contain two integers") from None
    edges = []
    for lineno, parts in lines:
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'u v'")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(f"line {lineno}: endpoints must be integers") from None
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    cls = UGraph if undirected else Digraph
    try:
        return cls(n, edges)
    except InvalidGraph as exc:
        raise ParseError(str(exc)) from None


def read_edgelist(path: str, *, undirected: bool = False) -> Digraph | UGraph:
    with open(path, encoding="ascii") as fh:
        return parse_edgelist(fh, undirected=undirected)


def write_edgelist(g: Digraph | UGraph, out: TextIO) -> None:
    out.write(f"{g.n} {g.m}\n")
    out.writelines(f"{u} {v}\n" for u, v in g.edges)


def format_edgelist(g: Digraph | UGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"

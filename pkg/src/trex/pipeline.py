"""End-to-end compression: optional twin reduction, tree choice, succinct assembly."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .graph import Digraph, UGraph
from .minetrex import (
    SavingsReport,
    TreeExtraction,
    exact_minetrex,
    exact_u_minetrex,
    greedy_tree,
    greedy_undirected,
    savings_report,
)
from .trexds import SpaceReport, TrexGraph
from .twin import TwinIndex, twin_reduce

Solver = Callable[[Digraph | UGraph], tuple[Digraph, TreeExtraction]]


def solve_greedy(g: Digraph | UGraph) -> tuple[Digraph, TreeExtraction]:
    """Oriented graph plus greedy tree, for either graph kind."""
    if isinstance(g, UGraph):
        orient, t = greedy_undirected(g)
        return orient.digraph(g.n), t
    return g, greedy_tree(g)


def exact_solver(limit: int | None = None) -> Solver:
    """Exhaustive solver; ``limit`` caps spanning trees (directed) or edges (undirected)."""

    def solve(g: Digraph | UGraph) -> tuple[Digraph, TreeExtraction]:
        if isinstance(g, UGraph):
            orient, t, _ = exact_u_minetrex(g) if limit is None else exact_u_minetrex(g, limit)
            return orient.digraph(g.n), t
        t, _ = exact_minetrex(g) if limit is None else exact_minetrex(g, limit)
        return g, t

    return solve


@dataclass
class Compressed:
    core: TrexGraph
    twins: TwinIndex | None
    savings: SavingsReport
    mapping: tuple[int, ...]

    @property
    def undirected(self) -> bool:
        return self.core.undirected

    @property
    def N(self) -> int:
        return self.twins.N if self.twins else self.core.n

    def space_report(self) -> SpaceReport:
        return self.twins.space_report() if self.twins else self.core.space_report()

    def report_rows(self) -> list[tuple[str, float]]:
        rows: list[tuple[str, float]] = [("n", self.core.n), ("m", self.core.m), ("N", self.N)]
        return rows + self.savings.rows() + self.space_report().rows()


def compress(g: Digraph | UGraph, twins: bool = False, solve: Solver | None = None) -> Compressed:
    """Compress ``g``; raises :class:`Disconnected` or the solver's limit errors."""
    solve = solve or solve_greedy
    undirected = isinstance(g, UGraph)
    if twins:
        g0, classes = twin_reduce(g)
        dg, t = solve(g0)
        core = TrexGraph.build(dg, t, undirected=undirected)
        ti = TwinIndex.assemble(g.n, classes, core)
        return Compressed(core, ti, savings_report(dg, t), ti.mapping)
    dg, t = solve(g)
    core = TrexGraph.build(dg, t, undirected=undirected)
    return Compressed(core, None, savings_report(dg, t), core.mapping)

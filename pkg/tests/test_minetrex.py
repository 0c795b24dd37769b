import itertools
import math
import random
from collections import Counter

import numpy as np
import pytest

from trex.errors import BadExtraction, Disconnected, NotSpanning, TooLarge, TooManyTrees
from trex.generators import (
    clique_plus_star,
    path_double_star,
    path_double_star_trees,
    random_connected_digraph,
    random_connected_ugraph,
)
from trex.graph import Digraph, UGraph, entropy_total, indegree_sequence, is_spanning_tree, residual_entropy
from trex.minetrex import (
    LN2,
    exact_minetrex,
    exact_u_minetrex,
    extract,
    greedy_tree,
    greedy_undirected,
    linear_weight,
    opt_ent,
    orient_toward_larger,
    prelp_residual,
    random_spanning_tree,
    sandwich_bounds,
    savings_bound_many_nonzero,
    savings_report,
    spanning_trees,
)
from trex.rng import SplitMix64


def kirchhoff(n, edges):
    lap = np.zeros((n, n))
    for u, v in edges:
        lap[u - 1, u - 1] += 1
        lap[v - 1, v - 1] += 1
        lap[u - 1, v - 1] -= 1
        lap[v - 1, u - 1] -= 1
    return round(np.linalg.det(lap[1:, 1:])) if n > 1 else 1


def subset_trees(g):
    return {frozenset(s) for s in itertools.combinations(range(g.m), g.n - 1) if is_spanning_tree(g, s)}


def tree_cost(g, tree):
    d = indegree_sequence(g).d
    return sum(math.log2(d[g.edges[i][1] - 1]) for i in tree)


def small_digraphs(count, seed, nmax=6):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(2, nmax)
        m = rng.randint(n - 1, min(2 * n, n * (n - 1)))
        yield random_connected_digraph(n, m, rng.randint(0, 2**32))


def test_spanning_tree_enumeration_matches_matrix_tree_theorem():
    for g in small_digraphs(60, 1, nmax=7):
        trees = list(spanning_trees(g.n, g.edges))
        assert len(trees) == len(set(trees)) == kirchhoff(g.n, g.edges)


def test_spanning_tree_enumeration_matches_subset_filter():
    for g in small_digraphs(40, 2, nmax=5):
        assert set(spanning_trees(g.n, g.edges)) == subset_trees(g)


def test_exact_matches_subset_oracle_on_four_vertices():
    for g in small_digraphs(40, 3, nmax=4):
        best = min(residual_entropy(g, t) for t in subset_trees(g))
        _, h = exact_minetrex(g)
        assert h == pytest.approx(best, abs=1e-12)


def test_exact_examples():
    path = Digraph(3, [(1, 2), (3, 2)])
    t, h = exact_minetrex(path)
    assert t.tree == frozenset({0, 1}) and h == 0
    tri = Digraph(3, [(1, 2), (2, 3), (3, 1)])
    assert exact_minetrex(tri)[1] == 0
    with pytest.raises(TooManyTrees):
        exact_minetrex(clique_plus_star(4), limit=5)
    with pytest.raises(Disconnected):
        exact_minetrex(Digraph(3, [(1, 2)]))


def test_greedy_minimises_linear_cost():
    for g in small_digraphs(150, 4):
        t = greedy_tree(g)
        best = min(tree_cost(g, s) for s in spanning_trees(g.n, g.edges))
        assert tree_cost(g, t.tree) == pytest.approx(best, abs=1e-9)


def test_greedy_additive_guarantee():
    for g in small_digraphs(100, 5):
        _, h_opt = exact_minetrex(g)
        assert residual_entropy(g, greedy_tree(g).tree) <= h_opt + (g.n - 1) / LN2 + 1e-6


def test_greedy_on_tree_takes_everything():
    g = Digraph(5, [(2, 1), (1, 3), (4, 3), (3, 5)])
    t = greedy_tree(g)
    assert t.tree == frozenset(range(4)) and residual_entropy(g, t.tree) == 0


def test_greedy_path_double_star_against_good_tree():
    for k in (2, 5, 20, 100):
        g = path_double_star(k)
        good, _ = path_double_star_trees(k)
        assert residual_entropy(g, greedy_tree(g).tree) <= residual_entropy(g, good) + (g.n - 1) / LN2


def test_greedy_is_deterministic_and_rejects_disconnected():
    g = random_connected_digraph(50, 150, seed=9)
    assert greedy_tree(g) == greedy_tree(g)
    with pytest.raises(Disconnected) as err:
        greedy_tree(Digraph(5, [(1, 2), (3, 4)]))
    assert err.value.components == 3


def test_greedy_tie_break_prefers_smaller_source():
    # (2,3) and (1,3) both cost d_3 = 2; the smaller source wins
    g = Digraph(3, [(2, 3), (1, 3), (1, 2)])
    assert greedy_tree(g).tree == frozenset({1, 2})


def test_extract_layout():
    g = Digraph(5, [(3, 1), (1, 2), (5, 3), (3, 4)])
    t = extract(g, range(4))
    assert t.root == 1
    assert t.children[1] == (2, 3) and t.children[3] == (4, 5)
    assert t.order == (0, 1, 2, 3, 4, 5)
    t2 = extract(g, range(4), root=3)
    assert t2.order[1] == 3 and t2.children[3] == (1, 4, 5)
    assert t2.relabel[2] == 5
    with pytest.raises(NotSpanning):
        extract(g, [0, 1])
    with pytest.raises(NotSpanning):
        extract(g, range(4), root=9)


# --- undirected ------------------------------------------------------------------


def test_orientation_points_at_larger_degree():
    g = UGraph(4, [(1, 2), (2, 3), (2, 4), (3, 4)])
    assert orient_toward_larger(g).edges == ((1, 2), (3, 2), (4, 2), (3, 4))


def test_undirected_examples():
    orient, t = greedy_undirected(UGraph(2, [(1, 2)]))
    assert t.tree == frozenset({0})
    star = UGraph(6, [(1, i) for i in range(2, 7)])
    orient, t = greedy_undirected(star)
    assert all(v == 1 for _, v in orient.edges)
    assert residual_entropy(orient.digraph(6), t.tree) == 0


def test_undirected_guarantee():
    rng = random.Random(6)
    for _ in range(60):
        n = rng.randint(2, 5)
        m = rng.randint(n - 1, min(8, n * (n - 1) // 2))
        g = random_connected_ugraph(n, m, rng.randint(0, 2**32))
        orient, t = greedy_undirected(g)
        h = residual_entropy(orient.digraph(n), t.tree)
        _, _, h_opt = exact_u_minetrex(g)
        assert h <= h_opt + (g.m + g.n - 1) / LN2 + 1e-6


def brute_u(g):
    best = math.inf
    for tree in subset_trees(g):
        rest = [g.edges[i] for i in range(g.m) if i not in tree]
        for flips in itertools.product((0, 1), repeat=len(rest)):
            d = [0] * (g.n + 1)
            for (u, v), f in zip(rest, flips):
                d[u if f else v] += 1
            best = min(best, entropy_total(d))
    return best


def test_exact_u_matches_double_loop():
    rng = random.Random(8)
    for _ in range(25):
        n = rng.randint(2, 5)
        g = random_connected_ugraph(n, rng.randint(n - 1, min(7, n * (n - 1) // 2)), rng.randint(0, 2**32))
        orient, t, h = exact_u_minetrex(g)
        assert h == pytest.approx(brute_u(g), abs=1e-12)
        assert residual_entropy(orient.digraph(n), t.tree) == pytest.approx(h, abs=1e-12)


def test_exact_u_limit():
    with pytest.raises(TooLarge):
        exact_u_minetrex(random_connected_ugraph(8, 15, 0))


# --- bounds ------------------------------------------------------------------------


def test_sandwich_examples():
    d = [3, 1, 0, 2]
    low, high = sandwich_bounds(d, [0, 0, 0, 0], 0)
    assert low == pytest.approx(entropy_total(d)) and high == low
    low, high = sandwich_bounds(d, d, 6)
    assert opt_ent(d, d) == 0 and low <= 0 <= high
    with pytest.raises(BadExtraction):
        sandwich_bounds(d, [4, 0, 0, 0], 4)
    with pytest.raises(BadExtraction):
        sandwich_bounds(d, [1, 0, 0, 0], 2)


def test_sandwich_random():
    rng = random.Random(10)
    for _ in range(500):
        d = [rng.randint(0, 9) for _ in range(rng.randint(1, 8))]
        x = [rng.randint(0, di) for di in d]
        low, high = sandwich_bounds(d, x, sum(x))
        assert low - 1e-9 <= opt_ent(d, x) <= high + 1e-9


def test_prelp_examples():
    tree = Digraph(4, [(1, 2), (3, 2), (2, 4)])
    t = greedy_tree(tree)
    assert prelp_residual(tree, t) == pytest.approx(0, abs=1e-12)
    g = clique_plus_star(5)
    t = greedy_tree(g)
    assert abs(prelp_residual(g, t) - residual_entropy(g, t.tree)) <= 2 * g.n / LN2


def test_prelp_random_trees():
    rng = SplitMix64(12)
    for g in small_digraphs(50, 12, nmax=30):
        for tree in (greedy_tree(g), extract(g, random_spanning_tree(g, rng))):
            assert abs(prelp_residual(g, tree) - residual_entropy(g, tree.tree)) <= 2 * g.n / LN2 + 1e-6


def test_many_nonzero_examples():
    cycle = Digraph(5, [(i, i % 5 + 1) for i in range(1, 6)])
    alpha, bound = savings_bound_many_nonzero(cycle)
    h = entropy_total(indegree_sequence(cycle))
    assert alpha == 1 and bound == pytest.approx(h - 2.5 * h / 5 + 10 / LN2)
    star = Digraph(5, [(i, 1) for i in range(2, 6)])
    alpha, bound = savings_bound_many_nonzero(star)
    assert alpha == 5 and residual_entropy(star, greedy_tree(star).tree) <= bound


def test_savings_report_consistency():
    g = random_connected_digraph(40, 120, seed=2)
    t = greedy_tree(g)
    r = savings_report(g, t)
    assert r.h_before == pytest.approx(entropy_total(indegree_sequence(g)))
    assert r.h_after == pytest.approx(residual_entropy(g, t.tree))
    assert r.sandwich_low - 1e-9 <= r.h_after <= r.sandwich_high + 1e-9
    assert r.linear_weight == pytest.approx(linear_weight(g, t))
    assert [k for k, _ in r.rows()] == ["h_before", "h_after", "linear_weight", "sandwich_low",
                                        "sandwich_high", "bound_error_budget"]


def test_random_spanning_tree_is_uniform_on_k4():
    k4 = Digraph(4, [(u, v) for u in range(1, 5) for v in range(u + 1, 5)])
    rng = SplitMix64(0)
    counts = Counter(random_spanning_tree(k4, rng) for _ in range(16_000))
    assert len(counts) == 16
    expected = 1000
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 37.7  # 99.9% quantile, 15 degrees of freedom

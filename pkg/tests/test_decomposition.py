import itertools
import random

import pytest

from mapfkit import (
    ExpansionMode,
    Graph,
    TreeDecomposition,
    build_expansion,
    greedy_decomposition,
    lift_decomposition,
    validate_decomposition,
)
from corpusutil import random_graph


def brute_force_treewidth(g: Graph) -> int:
    """Minimum over all elimination orders of the max clique created; equals
    the true treewidth and serves as an independent oracle for small n."""
    best = g.n
    for order in itertools.permutations(range(g.n)):
        adj = [set(g.neighbors(v)) for v in range(g.n)]
        width = 0
        for v in order:
            width = max(width, len(adj[v]))
            nbrs = list(adj[v])
            for i, a in enumerate(nbrs):
                adj[a].discard(v)
                for b in nbrs[i + 1:]:
                    adj[a].add(b)
                    adj[b].add(a)
            adj[v] = set()
        best = min(best, width)
    return best


class TestGreedyDecomposition:
    def test_tree_width_one(self):
        tree = Graph(6, [(0, 1), (1, 2), (1, 3), (3, 4), (0, 5)])
        td = greedy_decomposition(tree)
        assert validate_decomposition(td, tree) == []
        assert td.width == 1

    def test_clique_width(self):
        k4 = Graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
        td = greedy_decomposition(k4)
        assert validate_decomposition(td, k4) == []
        assert td.width == 3

    def test_cycle_width_matches_brute_force(self):
        c5 = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        assert brute_force_treewidth(c5) == 2
        td = greedy_decomposition(c5)
        assert validate_decomposition(td, c5) == []
        assert td.width == 2

    def test_random_graphs_validate_and_dominate_brute_force(self):
        rng = random.Random(17)
        for _ in range(25):
            g = random_graph(rng, rng.randint(1, 7), rng.uniform(0.2, 0.8))
            td = greedy_decomposition(g)
            assert validate_decomposition(td, g) == []
            assert td.width >= brute_force_treewidth(g)

    def test_disconnected_graph(self):
        g = Graph(5, [(0, 1), (2, 3)])
        td = greedy_decomposition(g)
        assert validate_decomposition(td, g) == []


class TestValidator:
    def test_catches_uncovered_edge(self):
        g = Graph(3, [(0, 1), (1, 2)])
        td = TreeDecomposition((-1, 0), (frozenset({0, 1}), frozenset({2})))
        problems = validate_decomposition(td, g)
        assert any("edge" in p for p in problems)

    def test_catches_disconnected_occurrences(self):
        g = Graph(3, [(0, 1), (1, 2)])
        td = TreeDecomposition(
            (-1, 0, 1),
            (frozenset({0, 1}), frozenset({2, 1}), frozenset({0})),
        )
        problems = validate_decomposition(td, g)
        assert any("not connected" in p for p in problems)


class TestLift:
    def test_p3_swap_width_bound(self):
        g = Graph(3, [(0, 1), (1, 2)])
        td = TreeDecomposition((-1, 0), (frozenset({0, 1}), frozenset({1, 2})))
        lifted = lift_decomposition(td, g, 2, ExpansionMode.SWAP)
        teg = build_expansion(g, 2, ExpansionMode.SWAP)
        assert validate_decomposition(lifted, teg.as_undirected_graph()) == []
        assert lifted.width <= 3 * 2 - 1

    def test_p3_swapfree_bag_bound(self):
        g = Graph(3, [(0, 1), (1, 2)])
        td = TreeDecomposition((-1, 0), (frozenset({0, 1}), frozenset({1, 2})))
        lifted = lift_decomposition(td, g, 2, ExpansionMode.SWAP_FREE)
        teg = build_expansion(g, 2, ExpansionMode.SWAP_FREE)
        assert validate_decomposition(lifted, teg.as_undirected_graph()) == []
        assert all(len(bag) <= 5 * 2 + 2 for bag in lifted.bags)

    def test_single_vertex_waiting_chain(self):
        g = Graph(1, [])
        td = greedy_decomposition(g)
        for mode in ExpansionMode:
            lifted = lift_decomposition(td, g, 4, mode)
            teg = build_expansion(g, 4, mode)
            assert validate_decomposition(lifted, teg.as_undirected_graph()) == []

    def test_invalid_input_rejected(self):
        g = Graph(3, [(0, 1), (1, 2)])
        bad = TreeDecomposition((-1,), (frozenset({0, 1}),))
        with pytest.raises(ValueError):
            lift_decomposition(bad, g, 1, ExpansionMode.SWAP)

    def test_random_lifts_validate_with_bag_bounds(self):
        rng = random.Random(23)
        for _ in range(15):
            n = rng.randint(1, 10)
            g = random_graph(rng, n, rng.uniform(0.15, 0.5))
            td = greedy_decomposition(g)
            for l in (0, 1, 3):
                for mode in ExpansionMode:
                    lifted = lift_decomposition(td, g, l, mode)
                    teg = build_expansion(g, l, mode)
                    assert validate_decomposition(lifted, teg.as_undirected_graph()) == []
                    if mode is ExpansionMode.SWAP:
                        for orig, bag in zip(td.bags, lifted.bags):
                            assert len(bag) <= (l + 1) * len(orig)
                    else:
                        for x, bag in enumerate(lifted.bags):
                            # edge-leaf bags answer to their host's input bag
                            host = x if x < len(td.bags) else lifted.parent[x]
                            b = len(td.bags[host])
                            assert len(bag) <= (2 * l + 1) * b + l

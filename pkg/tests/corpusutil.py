"""Seeded random objects shared by the test modules."""

from __future__ import annotations

import random

from mapfkit import Graph, Instance, SwapPolicy


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return Graph(n, edges)


def random_connected_graph(rng: random.Random, n: int, extra_p: float = 0.2) -> Graph:
    """Random spanning tree plus extra edges."""
    edges = set()
    for v in range(1, n):
        edges.add((rng.randrange(v), v))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra_p:
                edges.add((u, v))
    return Graph(n, sorted(edges))


def random_instance(rng: random.Random, n_max: int = 8, k_max: int = 3,
                    l_max: int = 6) -> Instance:
    n = rng.randint(2, n_max)
    g = random_graph(rng, n, rng.uniform(0.2, 0.8))
    k = rng.randint(1, min(k_max, n))
    starts = rng.sample(range(n), k)
    targets = rng.sample(range(n), k)
    policy = rng.choice((SwapPolicy.ALLOWED, SwapPolicy.FORBIDDEN))
    makespan = rng.randint(0, l_max)
    return Instance(g, tuple(starts), tuple(targets), makespan, policy)


def planted_cover_instance(rng: random.Random, n_max: int = 40, cover_max: int = 4,
                           k_max: int = 3, l_max: int = 5) -> Instance:
    """Graph whose edges all touch a small planted cover set."""
    c = rng.randint(1, cover_max)
    n = rng.randint(max(c + 2, 6), n_max)
    edges = set()
    for u in range(c):
        for v in range(u + 1, c):
            if rng.random() < 0.5:
                edges.add((u, v))
    for v in range(c, n):
        hood = rng.sample(range(c), rng.randint(0, c))
        for u in hood:
            edges.add((u, v))
    g = Graph(n, sorted(edges))
    k = rng.randint(1, k_max)
    starts = rng.sample(range(n), k)
    targets = rng.sample(range(n), k)
    policy = rng.choice((SwapPolicy.ALLOWED, SwapPolicy.FORBIDDEN))
    makespan = rng.randint(1, l_max)
    return Instance(g, tuple(starts), tuple(targets), makespan, policy)


def star_like_hub_instance(rng: random.Random, k_max: int = 4) -> Instance:
    """Connected graph with a guaranteed hub of degree >= 5 * diameter * k.

    A big star core keeps the diameter at 2 while appendage leaves host the
    agents' endpoints.
    """
    k = rng.randint(1, k_max)
    leaves = 5 * 2 * k + rng.randint(2 * k + 4, 30)
    n = 1 + leaves
    edges = [(0, v) for v in range(1, n)]
    # sprinkle leaf-to-leaf edges; diameter stays 2 and degrees stay small
    for _ in range(rng.randint(0, leaves // 4)):
        u, v = rng.sample(range(1, n), 2)
        key = (min(u, v), max(u, v))
        if key not in edges:
            edges.append(key)
    g = Graph(n, sorted(set(edges)))
    starts = rng.sample(range(1, n), k)
    targets = rng.sample(range(1, n), k)
    return Instance(g, tuple(starts), tuple(targets), 0, SwapPolicy.FORBIDDEN)


def random_tree(rng: random.Random, n: int) -> Graph:
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    return Graph(n, edges)


def random_dag(rng: random.Random, n: int, p: float = 0.35):
    arcs = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return arcs

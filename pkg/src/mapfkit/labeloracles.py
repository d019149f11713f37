"""Independent brute-force deciders used to label generated instances.

These deliberately share no code with the main solvers so that the
generator-vs-solver cross checks are meaningful: satisfiability by
assignment enumeration, disjoint directed paths and bounded edge-disjoint
paths by backtracking over explicit path sets, and tree token swapping by
BFS over permutations.
"""

from __future__ import annotations

from collections import deque

from .graphs import Graph


def sat_brute_force(num_vars: int, clauses) -> bool:
    """Enumerate all assignments; intended for num_vars <= 20."""
    if num_vars > 20:
        raise ValueError("brute-force SAT limited to 20 variables")
    for mask in range(1 << num_vars):
        ok = True
        for clause in clauses:
            sat = False
            for lit in clause:
                var = abs(lit) - 1
                value = (mask >> var) & 1
                if (lit > 0) == bool(value):
                    sat = True
                    break
            if not sat:
                ok = False
                break
        if ok:
            return True
    return False


def dag_disjoint_paths(n: int, arcs, pairs) -> bool:
    """Pairwise vertex-disjoint directed s_i -> t_i paths via backtracking.

    Note: any directed paths, not only shortest ones; the layered MAPF
    encoding makes every monotone embedding the same length, so this is the
    property the generated instance actually tests.
    """
    if n > 12:
        raise ValueError("brute-force disjoint paths limited to 12 vertices")
    out: list[list[int]] = [[] for _ in range(n)]
    for u, v in arcs:
        out[u].append(v)
    for nb in out:
        nb.sort()

    pairs = list(pairs)

    def route(idx: int, used: set[int]) -> bool:
        if idx == len(pairs):
            return True
        s, t = pairs[idx]
        if s in used or t in used:
            return False

        def extend(v: int, on_path: set[int]) -> bool:
            if v == t:
                return route(idx + 1, used | on_path)
            for w in out[v]:
                if w in used or w in on_path:
                    continue
                if extend(w, on_path | {w}):
                    return True
            return False

        return extend(s, {s})

    return route(0, set())


def all_bounded_st_paths(g: Graph, s: int, t: int, max_len: int) -> list[tuple[tuple[int, int], ...]]:
    """All simple s-t paths of at most max_len edges, as sorted edge tuples."""
    results = []

    def walk(v: int, visited: set[int], edges: list[tuple[int, int]]):
        if v == t:
            results.append(tuple(sorted(edges)))
            return
        if len(edges) == max_len:
            return
        for w in g.neighbors(v):
            if w in visited:
                continue
            key = (v, w) if v < w else (w, v)
            walk(w, visited | {w}, edges + [key])

    walk(s, {s}, [])
    return results


def beup_brute_force(g: Graph, s: int, t: int, k: int, d: int) -> bool:
    """k pairwise edge-disjoint s-t paths of length <= d, by backtracking
    over the explicit path list; intended for graphs with <= 8 edges."""
    if g.m > 8:
        raise ValueError("brute-force BEUP limited to 8 edges")
    paths = all_bounded_st_paths(g, s, t, d)

    def pick(need: int, start: int, used_edges: frozenset) -> bool:
        if need == 0:
            return True
        for i in range(start, len(paths)):
            edges = paths[i]
            if any(e in used_edges for e in edges):
                continue
            if pick(need - 1, i + 1, used_edges | frozenset(edges)):
                return True
        return False

    return pick(k, 0, frozenset())


def tree_token_swap_min_makespan(tree: Graph, perm, cap: int = 64) -> int | None:
    """Minimum number of turns to realize `perm` on a fully occupied tree
    when each turn applies a set of pairwise disjoint edge swaps.

    BFS over permutations; intended for trees with <= 6 vertices.  Returns
    None if `cap` turns are not enough.
    """
    n = tree.n
    if n > 6:
        raise ValueError("token-swap oracle limited to 6-vertex trees")
    # states are vertex-indexed (which agent sits where); agent a starts at
    # vertex a and wants perm[a], so the goal row is the inverse permutation
    start = tuple(range(n))
    goal_row = [0] * n
    for a in range(n):
        goal_row[perm[a]] = a
    goal = tuple(goal_row)
    if start == goal:
        return 0
    edges = tree.edges()

    def successors(state):
        out = []

        def choose(idx: int, busy: set[int], current: tuple[int, ...]):
            if idx == len(edges):
                if current != state:
                    out.append(current)
                return
            choose(idx + 1, busy, current)
            u, v = edges[idx]
            if u not in busy and v not in busy:
                swapped = list(current)
                swapped[u], swapped[v] = swapped[v], swapped[u]
                choose(idx + 1, busy | {u, v}, tuple(swapped))

        choose(0, set(), state)
        return out

    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        state, turns = frontier.popleft()
        if turns >= cap:
            return None
        for nxt in successors(state):
            if nxt in seen:
                continue
            if nxt == goal:
                return turns + 1
            seen.add(nxt)
            frontier.append((nxt, turns + 1))
    return None

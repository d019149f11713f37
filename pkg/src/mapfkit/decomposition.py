"""Tree decompositions: validation, a greedy heuristic, and lifting to
time-expanded graphs.

Lifting replaces each bag vertex by all of its time copies; in swap-free mode
every edge additionally gets a dedicated leaf bag holding the odd-layer edge
copies, which keeps bag sizes within (2l+1)*b + l.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expansion import ExpansionMode, TimeExpandedGraph
from .graphs import Graph


@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted tree of bags; parent[root] == -1."""

    parent: tuple[int, ...]
    bags: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "parent", tuple(self.parent))
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        if len(self.parent) != len(self.bags):
            raise ValueError("parent and bag arrays must align")

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def tree_edges(self) -> list[tuple[int, int]]:
        return [(p, x) for x, p in enumerate(self.parent) if p >= 0]


def validate_decomposition(td: TreeDecomposition, g: Graph) -> list[str]:
    """Decomposition-invariant violations against g; empty list means valid."""
    violations = []
    nodes = len(td.bags)
    if nodes == 0:
        if g.n > 0:
            violations.append("no bags but graph has vertices")
        return violations
    roots = [x for x, p in enumerate(td.parent) if p == -1]
    if len(roots) != 1:
        violations.append(f"expected exactly one root, found {len(roots)}")
        return violations
    # parent pointers must form a tree (no cycles, all reach the root)
    for x in range(nodes):
        seen = set()
        cur = x
        while cur != -1:
            if cur in seen:
                violations.append(f"cycle in tree at node {cur}")
                return violations
            seen.add(cur)
            p = td.parent[cur]
            if p != -1 and not (0 <= p < nodes):
                violations.append(f"node {cur} has out-of-range parent {p}")
                return violations
            cur = p
    occurrences: dict[int, list[int]] = {}
    for x, bag in enumerate(td.bags):
        for v in bag:
            if not (0 <= v < g.n):
                violations.append(f"bag {x} contains out-of-range vertex {v}")
                return violations
            occurrences.setdefault(v, []).append(x)
    for v in range(g.n):
        if v not in occurrences:
            violations.append(f"vertex {v} appears in no bag")
    for u, v in g.edges():
        if not any(u in bag and v in bag for bag in td.bags):
            violations.append(f"edge ({u}, {v}) not covered by any bag")
    # connectivity: the bags containing v induce a connected subtree
    children: dict[int, list[int]] = {}
    for x, p in enumerate(td.parent):
        if p >= 0:
            children.setdefault(p, []).append(x)
    for v, occ in occurrences.items():
        occ_set = set(occ)
        reached = {occ[0]}
        frontier = [occ[0]]
        while frontier:
            x = frontier.pop()
            for nb in children.get(x, []) + ([td.parent[x]] if td.parent[x] >= 0 else []):
                if nb in occ_set and nb not in reached:
                    reached.add(nb)
                    frontier.append(nb)
        if reached != occ_set:
            violations.append(f"occurrences of vertex {v} are not connected")
    return violations


def greedy_decomposition(g: Graph) -> TreeDecomposition:
    """Min-degree elimination decomposition; width >= tw(g), no optimality
    claim.  Deterministic: ties broken by smallest vertex id."""
    n = g.n
    if n == 0:
        return TreeDecomposition((), ())
    adj = [set(g.neighbors(v)) for v in range(n)]
    alive = set(range(n))
    elim_pos = [0] * n
    elim_neighbors: list[frozenset[int]] = [frozenset()] * n
    order = []
    for step in range(n):
        v = min(alive, key=lambda u: (len(adj[u]), u))
        nbrs = frozenset(adj[v])
        elim_neighbors[v] = nbrs
        elim_pos[v] = step
        order.append(v)
        alive.remove(v)
        nb_list = sorted(nbrs)
        for i, a in enumerate(nb_list):
            adj[a].discard(v)
            for b in nb_list[i + 1:]:
                adj[a].add(b)
                adj[b].add(a)
    # bag for elimination step i holds v and its elimination neighborhood;
    # parent = bag of the earliest-later-eliminated neighbor
    bag_of_step = []
    parent = []
    for step, v in enumerate(order):
        bag_of_step.append(frozenset({v} | elim_neighbors[v]))
        if elim_neighbors[v]:
            nxt = min(elim_pos[u] for u in elim_neighbors[v])
            parent.append(nxt)
        elif step < n - 1:
            parent.append(n - 1)
        else:
            parent.append(-1)
    return TreeDecomposition(tuple(parent), tuple(bag_of_step))


def lift_decomposition(
    td: TreeDecomposition,
    g: Graph,
    makespan: int,
    mode: ExpansionMode,
) -> TreeDecomposition:
    """Lift a decomposition of g to one of build_expansion(g, makespan, mode).

    Swap mode multiplies every bag by the l+1 vertex copies.  Swap-free mode
    first attaches a dedicated leaf per edge and adds every odd-layer copy of
    that edge to the leaf's bag.
    """
    problems = validate_decomposition(td, g)
    if problems:
        raise ValueError(f"invalid input decomposition: {problems[0]}")
    teg = TimeExpandedGraph(g, makespan, mode)
    n = g.n
    if mode is ExpansionMode.SWAP:
        copies = makespan + 1
        bags = tuple(
            frozenset(i * n + v for v in bag for i in range(copies))
            for bag in td.bags
        )
        return TreeDecomposition(td.parent, bags)
    copies = 2 * makespan + 1
    parent = list(td.parent)
    lifted = [
        set(i * n + v for v in bag for i in range(copies))
        for bag in td.bags
    ]
    for j, (u, v) in enumerate(g.edges()):
        host = next(x for x, bag in enumerate(td.bags) if u in bag and v in bag)
        leaf_bag = set(lifted[host])
        leaf_bag.update(teg.edge_node(j, turn) for turn in range(1, makespan + 1))
        parent.append(host)
        lifted.append(leaf_bag)
    return TreeDecomposition(tuple(parent), tuple(frozenset(b) for b in lifted))

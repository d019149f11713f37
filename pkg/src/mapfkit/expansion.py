"""Time-expanded graphs and the disjoint-paths <-> schedule correspondence.

The swap expansion has one copy of every vertex per layer 0..l and, per turn,
a waiting arc per vertex plus two crossing arcs per edge.  The swap-free
expansion doubles the layers and threads every move through a per-edge node
in the odd layers, so two agents traversing one edge in opposite directions
during the same turn necessarily collide there.
"""

from __future__ import annotations

from enum import Enum

from .graphs import Graph
from .instance import Instance, Schedule, SwapPolicy


class ExpansionMode(Enum):
    SWAP = "swap"
    SWAP_FREE = "swapfree"

    @staticmethod
    def from_policy(policy: SwapPolicy) -> "ExpansionMode":
        return ExpansionMode.SWAP if policy is SwapPolicy.ALLOWED else ExpansionMode.SWAP_FREE


class PathConflictError(ValueError):
    """Raised when per-agent paths are not disjoint or not arc-connected."""


class TimeExpandedGraph:
    """Layered DAG over (vertex, layer) copies plus per-edge odd-layer nodes.

    Node ids are deterministic: VertexCopy(v, i) -> i*n + v; edge copies are
    appended after all vertex copies in edge order, turn-major.
    """

    __slots__ = ("graph", "makespan", "mode", "layers", "node_count",
                 "successors", "predecessors", "_arc_count")

    def __init__(self, graph: Graph, makespan: int, mode: ExpansionMode):
        if makespan < 0:
            raise ValueError("makespan must be non-negative")
        self.graph = graph
        self.makespan = makespan
        self.mode = mode
        n, m, l = graph.n, graph.m, makespan
        self.layers = l + 1 if mode is ExpansionMode.SWAP else 2 * l + 1
        vertex_nodes = self.layers * n
        edge_nodes = 0 if mode is ExpansionMode.SWAP else l * m
        self.node_count = vertex_nodes + edge_nodes
        succ = [[] for _ in range(self.node_count)]
        arcs = 0
        if mode is ExpansionMode.SWAP:
            for i in range(1, self.layers):
                below = (i - 1) * n
                here = i * n
                for v in range(n):
                    succ[below + v].append(here + v)
                for u, v in graph.edges():
                    succ[below + u].append(here + v)
                    succ[below + v].append(here + u)
                arcs += n + 2 * m
        else:
            for i in range(1, self.layers):
                below = (i - 1) * n
                here = i * n
                for v in range(n):
                    succ[below + v].append(here + v)
                arcs += n
            for turn in range(1, l + 1):
                even_below = (2 * turn - 2) * n
                even_above = (2 * turn) * n
                base = vertex_nodes + (turn - 1) * m
                for j, (u, v) in enumerate(graph.edges()):
                    e = base + j
                    succ[even_below + u].append(e)
                    succ[even_below + v].append(e)
                    succ[e].append(even_above + u)
                    succ[e].append(even_above + v)
                arcs += 4 * m
        self.successors = tuple(tuple(sorted(s)) for s in succ)
        pred = [[] for _ in range(self.node_count)]
        for u in range(self.node_count):
            for v in self.successors[u]:
                pred[v].append(u)
        self.predecessors = tuple(tuple(sorted(p)) for p in pred)
        self._arc_count = arcs

    @property
    def arc_count(self) -> int:
        return self._arc_count

    def vertex_node(self, v: int, layer: int) -> int:
        return layer * self.graph.n + v

    def edge_node(self, edge_idx: int, turn: int) -> int:
        """Node for edge copy e_{2*turn-1}; only defined in swap-free mode."""
        if self.mode is not ExpansionMode.SWAP_FREE:
            raise ValueError("edge nodes only exist in swap-free mode")
        return self.layers * self.graph.n + (turn - 1) * self.graph.m + edge_idx

    def is_vertex_node(self, node: int) -> bool:
        return node < self.layers * self.graph.n

    def node_layer(self, node: int) -> int:
        n = self.graph.n
        if node < self.layers * n:
            return node // n
        turn = (node - self.layers * n) // self.graph.m + 1
        return 2 * turn - 1

    def decode_vertex(self, node: int) -> tuple[int, int]:
        """(vertex, layer) for a vertex-copy node."""
        n = self.graph.n
        return node % n, node // n

    def decode_edge(self, node: int) -> tuple[int, int]:
        """(edge index, turn) for an edge-copy node."""
        off = node - self.layers * self.graph.n
        return off % self.graph.m, off // self.graph.m + 1

    def as_undirected_graph(self) -> Graph:
        """Underlying undirected graph (arcs forgotten), e.g. for tree
        decompositions of the expansion."""
        edges = []
        for u in range(self.node_count):
            edges.extend((u, v) for v in self.successors[u])
        return Graph(self.node_count, edges)


def build_expansion(g: Graph, makespan: int, mode: ExpansionMode) -> TimeExpandedGraph:
    return TimeExpandedGraph(g, makespan, mode)


def terminal_pairs(inst: Instance) -> list[tuple[int, int]]:
    """(source, sink) node per agent: start copy in layer 0, target copy in
    the last layer of the policy's expansion."""
    mode = ExpansionMode.from_policy(inst.policy)
    n = inst.graph.n
    last = inst.makespan if mode is ExpansionMode.SWAP else 2 * inst.makespan
    return [
        (inst.starts[a], last * n + inst.targets[a])
        for a in range(inst.k)
    ]


def paths_to_schedule(teg: TimeExpandedGraph, paths) -> Schedule:
    """Project pairwise node-disjoint source->sink paths onto a schedule.

    Raises PathConflictError naming the first node clash or broken arc.
    """
    paths = [list(p) for p in paths]
    used: dict[int, int] = {}
    for agent, path in enumerate(paths):
        if len(path) != teg.layers:
            raise PathConflictError(
                f"agent {agent}: path visits {len(path)} layers, expected {teg.layers}"
            )
        for node in path:
            if node in used:
                raise PathConflictError(
                    f"agents {used[node]} and {agent} both use node {node}"
                )
            used[node] = agent
        for pos in range(len(path) - 1):
            if path[pos + 1] not in teg.successors[path[pos]]:
                raise PathConflictError(
                    f"agent {agent}: no arc {path[pos]} -> {path[pos + 1]}"
                )
    rows = []
    if teg.mode is ExpansionMode.SWAP:
        reads = range(1, teg.layers)
    else:
        reads = range(2, teg.layers, 2)
    for layer in reads:
        row = []
        for path in paths:
            node = path[layer]
            if not teg.is_vertex_node(node):
                raise PathConflictError(f"edge copy {node} found in even layer {layer}")
            row.append(teg.decode_vertex(node)[0])
        rows.append(tuple(row))
    return Schedule(tuple(rows))


def schedule_to_paths(inst: Instance, sched: Schedule, teg: TimeExpandedGraph | None = None) -> list[list[int]]:
    """Canonical embedding of a verified schedule as disjoint expansion paths.

    In swap-free mode a move u->v at turn i runs through the edge copy of
    {u, v} at layer 2i-1 and a wait through the vertex copy.  Inverse of
    paths_to_schedule on its image.
    """
    from .instance import verify_schedule

    if not verify_schedule(inst, sched):
        raise ValueError("schedule does not verify against the instance")
    if teg is None:
        teg = build_expansion(inst.graph, inst.makespan, ExpansionMode.from_policy(inst.policy))
    edge_index = inst.graph.edge_index()
    paths = []
    for a in range(inst.k):
        walk = sched.agent_walk(inst, a)
        if teg.mode is ExpansionMode.SWAP:
            path = [teg.vertex_node(walk[i], i) for i in range(len(walk))]
        else:
            path = [teg.vertex_node(walk[0], 0)]
            for turn in range(1, len(walk)):
                u, v = walk[turn - 1], walk[turn]
                if u == v:
                    path.append(teg.vertex_node(v, 2 * turn - 1))
                else:
                    key = (u, v) if u < v else (v, u)
                    path.append(teg.edge_node(edge_index[key], turn))
                path.append(teg.vertex_node(v, 2 * turn))
        paths.append(path)
    return paths

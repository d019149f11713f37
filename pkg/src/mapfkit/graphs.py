"""Undirected simple graphs on dense integer vertex ids."""

from __future__ import annotations

from collections import deque


class Graph:
    """Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.

    Construction rejects self-loops, duplicate edges and out-of-range
    endpoints, so every live Graph satisfies the model invariants.
    """

    __slots__ = ("n", "_adj", "_edges", "_edge_index")

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        adj = [[] for _ in range(n)]
        seen = set()
        canon = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            canon.append(key)
            adj[u].append(v)
            adj[v].append(u)
        canon.sort()
        self._edges = tuple(canon)
        self._adj = tuple(tuple(sorted(nb)) for nb in adj)
        self._edge_index = None

    @property
    def m(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as (u, v) pairs with u < v, sorted."""
        return self._edges

    def edge_index(self) -> dict[tuple[int, int], int]:
        """Position of each canonical edge inside edges(); built lazily."""
        if self._edge_index is None:
            self._edge_index = {e: i for i, e in enumerate(self._edges)}
        return self._edge_index

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self.edge_index()

    def bfs_distances(self, source: int) -> list[int | None]:
        """Hop distances from source; None marks unreachable vertices."""
        dist: list[int | None] = [None] * self.n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u]
            for w in self._adj[u]:
                if dist[w] is None:
                    dist[w] = du + 1
                    queue.append(w)
        return dist

    def bfs_parents(self, source: int) -> list[int | None]:
        """BFS tree parents (first discoverer, neighbors scanned in id order)."""
        parent: list[int | None] = [None] * self.n
        seen = [False] * self.n
        seen[source] = True
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = u
                    queue.append(w)
        return parent

    def shortest_path(self, source: int, target: int) -> list[int] | None:
        """One shortest path as a vertex list, or None if disconnected."""
        if source == target:
            return [source]
        parent = self.bfs_parents(source)
        if target != source and parent[target] is None:
            return None
        path = [target]
        while path[-1] != source:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def connected_components(self) -> list[list[int]]:
        """Components as sorted vertex lists, ordered by smallest member."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        queue.append(w)
            comp.sort()
            comps.append(comp)
        return comps

    def diameter(self) -> int:
        """Max finite eccentricity over all vertices (per-component diameter)."""
        best = 0
        for v in range(self.n):
            for d in self.bfs_distances(v):
                if d is not None and d > best:
                    best = d
        return best

    def induced_subgraph(self, vertices) -> tuple["Graph", list[int]]:
        """Induced subgraph on the given vertices.

        Returns (subgraph, mapping) where mapping[new_id] = old_id; new ids
        follow the sorted order of the kept vertices.
        """
        kept = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(kept)}
        edges = [
            (pos[u], pos[v])
            for u, v in self._edges
            if u in pos and v in pos
        ]
        return Graph(len(kept), edges), kept

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self._edges == other._edges
        )

    def __hash__(self):
        return hash((self.n, self._edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

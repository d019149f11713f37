"""Hardness constructions turned into deterministic instance generators.

Each generator builds a MAPF instance from a source combinatorial object
(3CNF formula, DAG with terminal pairs, tree permutation, or bounded
edge-disjoint path query), records which vertex ranges realize which gadget,
and labels the instance yes/no via an independent brute-force decider when
the source is small enough.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .graphs import Graph
from .instance import Instance, SwapPolicy, validate_instance
from . import labeloracles

EXPECTED_YES = "yes"
EXPECTED_NO = "no"
EXPECTED_UNKNOWN = "unknown"


class FormulaError(ValueError):
    pass


class SourceError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    """3CNF formula; literals are signed 1-based variable ids."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 1:
            raise FormulaError("formula needs at least one variable")
        for idx, clause in enumerate(self.clauses):
            if len(clause) != 3:
                raise FormulaError(f"clause {idx} must have exactly 3 literals")
            for lit in clause:
                if lit == 0 or not (1 <= abs(lit) <= self.num_vars):
                    raise FormulaError(f"clause {idx}: literal {lit} out of range")


@dataclass(frozen=True)
class Digraph:
    """Simple directed graph on vertices 0..n-1."""

    n: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(tuple(a) for a in self.arcs))
        seen = set()
        for u, v in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise SourceError(f"arc ({u}, {v}) out of range")
            if u == v:
                raise SourceError(f"self-arc at {u}")
            if (u, v) in seen:
                raise SourceError(f"duplicate arc ({u}, {v})")
            seen.add((u, v))

    def topological_order(self) -> list[int]:
        """Kahn's algorithm, smallest-id-first; raises on a cycle."""
        indeg = [0] * self.n
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            out[u].append(v)
            indeg[v] += 1
        heap = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for w in out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        if len(order) != self.n:
            raise SourceError("input digraph is cyclic")
        return order

    def max_total_degree(self) -> int:
        deg = [0] * self.n
        for u, v in self.arcs:
            deg[u] += 1
            deg[v] += 1
        return max(deg, default=0)


@dataclass(frozen=True)
class GeneratedInstance:
    instance: Instance
    source: str
    gadget_map: dict[str, tuple[int, int]] = field(default_factory=dict)
    expected: str = EXPECTED_UNKNOWN


class _Builder:
    """Accumulates contiguous vertex blocks, edges and agents."""

    def __init__(self):
        self.count = 0
        self.ranges: dict[str, tuple[int, int]] = {}
        self.edges: set[tuple[int, int]] = set()
        self.starts: list[int] = []
        self.targets: list[int] = []

    def block(self, name: str, size: int) -> int:
        base = self.count
        self.count += size
        if size > 0:
            self.ranges[name] = (base, base + size - 1)
        return base

    def edge(self, u: int, v: int) -> None:
        if u == v:
            raise AssertionError(f"gadget self-loop at {u}")
        self.edges.add((u, v) if u < v else (v, u))

    def agent(self, start: int, target: int) -> None:
        self.starts.append(start)
        self.targets.append(target)

    def finish(self, makespan: int, policy: SwapPolicy, source: str,
               expected: str) -> GeneratedInstance:
        inst = Instance(
            graph=Graph(self.count, sorted(self.edges)),
            starts=tuple(self.starts),
            targets=tuple(self.targets),
            makespan=makespan,
            policy=policy,
        )
        problems = validate_instance(inst)
        if problems:
            raise AssertionError(f"generator produced invalid instance: {problems[0]}")
        return GeneratedInstance(inst, source, dict(self.ranges), expected)


def _occurrence_counts(phi: CnfFormula) -> dict[int, int]:
    """m(x): the number of clauses that contain x (in either sign)."""
    counts = {x: 0 for x in range(1, phi.num_vars + 1)}
    for clause in phi.clauses:
        for x in sorted({abs(lit) for lit in clause}):
            counts[x] += 1
    return counts


def _check_formula_pre(phi: CnfFormula) -> dict[int, int]:
    counts = _occurrence_counts(phi)
    missing = [x for x, c in counts.items() if c == 0]
    if missing:
        raise FormulaError(f"variable {missing[0]} occurs in no clause")
    for idx, clause in enumerate(phi.clauses):
        vars_pos = {abs(l) for l in clause if l > 0}
        vars_neg = {abs(l) for l in clause if l < 0}
        both = vars_pos & vars_neg
        if both:
            raise FormulaError(
                f"clause {idx} contains complementary literals of variable {both.pop()}; "
                "the gadget construction assumes a clause never contains both signs"
            )
    return counts


def _sat_label(phi: CnfFormula) -> str:
    if phi.num_vars > 20:
        return EXPECTED_UNKNOWN
    return EXPECTED_YES if labeloracles.sat_brute_force(phi.num_vars, phi.clauses) else EXPECTED_NO


def from_3sat_swaps(phi: CnfFormula) -> GeneratedInstance:
    """Makespan-3, swaps-allowed instance: one cyclically linked chain of
    6-cycles per variable (consecutive cycles share their 4/6 vertex), one
    16-vertex clause gadget per clause, two connector edges per clause
    occurrence anchored at the occurrence's 1-vertex (positive literal) or
    3-vertex (negative literal)."""
    counts = _check_formula_pre(phi)
    b = _Builder()

    var_base = {}
    for x in range(1, phi.num_vars + 1):
        var_base[x] = b.block(f"var.{x}", 5 * counts[x])

    def var_vertex(x: int, i: int, p: int) -> int:
        # occurrence i is 1-based; p in {1,2,3,5}; p=4 is the shared vertex c_i
        base = var_base[x] + 5 * (i - 1)
        if p == 4:
            return base + 4
        if p == 6:  # v_{i,6} is the previous occurrence's shared vertex
            prev = i - 1 if i > 1 else counts[x]
            return var_base[x] + 5 * (prev - 1) + 4
        return base + {1: 0, 2: 1, 3: 2, 5: 3}[p]

    for x in range(1, phi.num_vars + 1):
        for i in range(1, counts[x] + 1):
            cyc = [var_vertex(x, i, p) for p in (1, 2, 3, 4, 5, 6)]
            for a in range(6):
                bgn, end = cyc[a], cyc[(a + 1) % 6]
                if bgn != end:
                    b.edge(bgn, end)

    clause_base = []
    for j in range(len(phi.clauses)):
        clause_base.append(b.block(f"clause.{j}", 16))

    def clause_vertex(j: int, slot: int, p: int) -> int:
        return clause_base[j] + 5 * slot + (p - 1)

    def clause_t(j: int) -> int:
        return clause_base[j] + 15

    for j in range(len(phi.clauses)):
        for slot in range(3):
            for p in range(1, 5):
                b.edge(clause_vertex(j, slot, p), clause_vertex(j, slot, p + 1))
        b.edge(clause_vertex(j, 0, 2), clause_vertex(j, 1, 2))
        b.edge(clause_vertex(j, 0, 2), clause_vertex(j, 2, 2))
        b.edge(clause_vertex(j, 1, 2), clause_t(j))
        b.edge(clause_t(j), clause_vertex(j, 2, 2))

    occ_used = {x: 0 for x in counts}
    for j, clause in enumerate(phi.clauses):
        connected: set[int] = set()
        for slot, lit in enumerate(clause):
            x = abs(lit)
            if x in connected:
                continue
            connected.add(x)
            occ_used[x] += 1
            i = occ_used[x]
            anchor = var_vertex(x, i, 1 if lit > 0 else 3)
            b.edge(anchor, clause_vertex(j, slot, 1))
            b.edge(anchor, clause_vertex(j, slot, 5))

    for j in range(len(phi.clauses)):
        for slot in range(3):
            b.agent(clause_vertex(j, slot, 1), clause_vertex(j, slot, 4))
        b.agent(clause_vertex(j, 0, 2), clause_t(j))
    for x in range(1, phi.num_vars + 1):
        for i in range(1, counts[x] + 1):
            b.agent(var_vertex(x, i, 2), var_vertex(x, i, 5))

    source = f"3sat-swaps vars={phi.num_vars} clauses={list(phi.clauses)}"
    return b.finish(3, SwapPolicy.ALLOWED, source, _sat_label(phi))


def from_3sat_noswaps(phi: CnfFormula) -> GeneratedInstance:
    """Makespan-2, swap-free instance: per occurrence a twin-pentagon gadget
    (two 5-cycles joined through a shared w vertex, consecutive occurrences
    sharing their 5-vertices), a 9-vertex clause gadget, and connectors at
    the u-side (positive literal) or v-side (negative literal) 2-vertex."""
    counts = _check_formula_pre(phi)
    b = _Builder()

    var_base = {}
    for x in range(1, phi.num_vars + 1):
        var_base[x] = b.block(f"var.{x}", 10 * counts[x])

    def vv(x: int, i: int, p: int) -> int:
        base = var_base[x] + 10 * (i - 1)
        if p == 5:
            return base + 9
        return base + (p - 1)

    def uu(x: int, i: int, p: int) -> int:
        base = var_base[x] + 10 * (i - 1)
        if p == 5:  # u_{i,5} is the previous occurrence's shared vertex
            prev = i - 1 if i > 1 else counts[x]
            return var_base[x] + 10 * (prev - 1) + 9
        return base + 4 + (p - 1)

    def ww(x: int, i: int) -> int:
        return var_base[x] + 10 * (i - 1) + 8

    for x in range(1, phi.num_vars + 1):
        for i in range(1, counts[x] + 1):
            b.edge(vv(x, i, 1), vv(x, i, 2))
            b.edge(vv(x, i, 2), vv(x, i, 3))
            b.edge(vv(x, i, 3), vv(x, i, 4))
            b.edge(vv(x, i, 4), vv(x, i, 5))
            b.edge(vv(x, i, 5), vv(x, i, 2))
            b.edge(uu(x, i, 1), uu(x, i, 2))
            b.edge(uu(x, i, 2), uu(x, i, 3))
            b.edge(uu(x, i, 3), uu(x, i, 4))
            b.edge(uu(x, i, 4), uu(x, i, 5))
            b.edge(uu(x, i, 5), uu(x, i, 2))
            b.edge(ww(x, i), vv(x, i, 1))
            b.edge(ww(x, i), vv(x, i, 3))
            b.edge(ww(x, i), uu(x, i, 1))
            b.edge(ww(x, i), uu(x, i, 3))

    clause_base = []
    for j in range(len(phi.clauses)):
        clause_base.append(b.block(f"clause.{j}", 9))

    def cv(j: int, slot: int, p: int) -> int:
        return clause_base[j] + 3 * slot + (p - 1)

    for j in range(len(phi.clauses)):
        for slot in range(3):
            b.edge(cv(j, slot, 1), cv(j, slot, 2))
            b.edge(cv(j, slot, 2), cv(j, slot, 3))
        b.edge(cv(j, 0, 2), cv(j, 1, 2))
        b.edge(cv(j, 1, 2), cv(j, 2, 2))
        b.edge(cv(j, 0, 2), cv(j, 2, 2))

    occ_used = {x: 0 for x in counts}
    for j, clause in enumerate(phi.clauses):
        connected: set[int] = set()
        for slot, lit in enumerate(clause):
            x = abs(lit)
            if x in connected:
                continue
            connected.add(x)
            occ_used[x] += 1
            i = occ_used[x]
            anchor = uu(x, i, 2) if lit > 0 else vv(x, i, 2)
            b.edge(anchor, cv(j, slot, 1))
            b.edge(anchor, cv(j, slot, 3))

    for j in range(len(phi.clauses)):
        for slot in range(3):
            b.agent(cv(j, slot, 1), cv(j, slot, 3))
        b.agent(cv(j, 0, 2), cv(j, 1, 2))
    for x in range(1, phi.num_vars + 1):
        for i in range(1, counts[x] + 1):
            b.agent(vv(x, i, 1), vv(x, i, 3))
            b.agent(uu(x, i, 1), uu(x, i, 3))
            b.agent(vv(x, i, 4), vv(x, i, 2))
            b.agent(uu(x, i, 4), uu(x, i, 2))

    source = f"3sat-noswaps vars={phi.num_vars} clauses={list(phi.clauses)}"
    return b.finish(2, SwapPolicy.FORBIDDEN, source, _sat_label(phi))


def from_disjoint_shortest_paths(dag: Digraph, pairs) -> GeneratedInstance:
    """Layered undirected instance from a DAG and terminal pairs: one column
    per topological position (plus fresh terminal columns), binary trees
    splitting vertices of degree >= 4, and every column-skipping edge
    subdivided so that all start->target paths have one vertex per column."""
    pairs = [tuple(p) for p in pairs]
    order = dag.topological_order()
    endpoints = [v for p in pairs for v in p]
    for v in endpoints:
        if not (0 <= v < dag.n):
            raise SourceError(f"terminal {v} out of range")
    if len(set(endpoints)) != len(endpoints):
        raise SourceError("terminal pairs must use pairwise distinct vertices")
    k = len(pairs)

    deg0 = [0] * dag.n
    for u, v in dag.arcs:
        deg0[u] += 1
        deg0[v] += 1
    for s, t in pairs:
        deg0[s] += 1
        deg0[t] += 1
    needs_tree = [deg0[v] >= 4 for v in range(dag.n)]
    # ceil(log2(D+1)) + 1 == D.bit_length() + 1 for D >= 1
    height = max(dag.max_total_degree(), 1).bit_length() + 1 \
        if any(needs_tree) else 0
    tree_size = (1 << height) - 1 if height else 0
    leaf_first = (1 << (height - 1)) - 1 if height else 0

    b = _Builder()
    orig_base = b.block("originals", dag.n)
    s_base = b.block("terminals.s", k)
    t_base = b.block("terminals.t", k)

    # column layout: l_0, then per topological position the optional incoming
    # tree (leaves first), the vertex, the optional outgoing tree
    column: dict[int, int] = {}
    col = 0
    for i in range(k):
        column[s_base + i] = 0
    col = 1
    tree1_base: dict[int, int] = {}
    tree2_base: dict[int, int] = {}
    for v in order:
        if needs_tree[v]:
            tree1_base[v] = b.block(f"tree1.{v}", tree_size)
            for idx in range(tree_size):
                depth = (idx + 1).bit_length() - 1
                column[tree1_base[v] + idx] = col + (height - 1 - depth)
            col += height
        column[orig_base + v] = col
        col += 1
        if needs_tree[v]:
            tree2_base[v] = b.block(f"tree2.{v}", tree_size)
            for idx in range(tree_size):
                depth = (idx + 1).bit_length() - 1
                column[tree2_base[v] + idx] = col + depth
            col += height
    for i in range(k):
        column[t_base + i] = col
    makespan = col

    edges: list[list[int]] = []
    for u, v in sorted(dag.arcs):
        edges.append([orig_base + u, orig_base + v])
    for i, (s, t) in enumerate(pairs):
        edges.append([s_base + i, orig_base + s])
        edges.append([orig_base + t, t_base + i])

    for v in order:
        if not needs_tree[v]:
            continue
        me = orig_base + v
        incident = [e for e in edges if me in e]
        incident.sort(key=lambda e: (column[e[0] if e[1] == me else e[1]],
                                     e[0] if e[1] == me else e[1]))
        next_leaf = {1: 0, 2: 0}
        for e in incident:
            other = e[0] if e[1] == me else e[1]
            side = 1 if column[other] < column[me] else 2
            base = tree1_base[v] if side == 1 else tree2_base[v]
            leaf = base + leaf_first + next_leaf[side]
            next_leaf[side] += 1
            e[0 if e[0] == me else 1] = leaf
        for base in (tree1_base[v], tree2_base[v]):
            for idx in range(tree_size):
                for child in (2 * idx + 1, 2 * idx + 2):
                    if child < tree_size:
                        edges.append([base + idx, base + child])
        edges.append([tree1_base[v], me])
        edges.append([me, tree2_base[v]])

    final_edges: list[tuple[int, int]] = []
    subdiv_needed = sum(
        abs(column[e[0]] - column[e[1]]) - 1 for e in edges
    )
    subdiv_base = b.block("subdivisions", subdiv_needed)
    next_subdiv = subdiv_base
    for e in edges:
        a, c = sorted(e, key=lambda x: column[x])
        gap = column[c] - column[a]
        if gap == 0:
            raise AssertionError("edge inside a single column")
        prev = a
        for step in range(1, gap):
            mid = next_subdiv
            column[mid] = column[a] + step
            next_subdiv += 1
            final_edges.append((prev, mid))
            prev = mid
        final_edges.append((prev, c))

    b.edges.update((u, v) if u < v else (v, u) for u, v in final_edges)
    for i in range(k):
        b.agent(s_base + i, t_base + i)

    if dag.n <= 12:
        expected = EXPECTED_YES if labeloracles.dag_disjoint_paths(
            dag.n, dag.arcs, pairs) else EXPECTED_NO
    else:
        expected = EXPECTED_UNKNOWN
    source = f"dsp n={dag.n} arcs={sorted(dag.arcs)} pairs={pairs}"
    return b.finish(makespan, SwapPolicy.ALLOWED, source, expected)


def from_token_swapping_tree(tree: Graph, perm, lspan: int) -> GeneratedInstance:
    """Swap-free tree instance simulating swap-allowed token routing: parent
    to children fan-outs become complete binary trees, and every auxiliary
    vertex carries lane paths whose agents block it except once per block of
    m = h + 2 turns."""
    if sorted(perm) != list(range(tree.n)):
        raise SourceError("perm must be a permutation of all vertices")
    if lspan < 1:
        raise SourceError("target makespan for the swap instance must be >= 1")
    comps = tree.connected_components()
    if len(comps) != 1 or tree.m != tree.n - 1:
        raise SourceError("input graph must be a tree")

    # ceil(log2(max_degree)) + 1, rounded up to even
    h = (max(tree.max_degree(), 1) - 1).bit_length() + 1
    if h % 2:
        h += 1
    # adjacent tree vertices end up at distance h+1, and a swap-free crossing
    # between them costs that plus a two-move sidestep, so blocks need h+3
    m = h + 3

    parents = tree.bfs_parents(0)
    children: dict[int, list[int]] = {v: [] for v in range(tree.n)}
    for v in range(tree.n):
        if parents[v] is not None:
            children[parents[v]].append(v)
    for v in children:
        children[v].sort()

    b = _Builder()
    orig_base = b.block("originals", tree.n)
    tree_size = (1 << h) - 1
    leaf_first = (1 << (h - 1)) - 1
    aux_base: dict[int, int] = {}
    aux_ids: list[int] = []
    for v in range(tree.n):
        if not children[v]:
            continue
        base = b.block(f"aux.{v}", tree_size)
        aux_base[v] = base
        aux_ids.extend(base + idx for idx in range(tree_size))
        b.edge(orig_base + v, base)  # v -- root
        for idx in range(tree_size):
            for child in (2 * idx + 1, 2 * idx + 2):
                if child < tree_size:
                    b.edge(base + idx, base + child)
        for slot, child in enumerate(children[v]):
            b.edge(orig_base + child, base + leaf_first + slot)

    s_paths: dict[int, int] = {}
    t_paths: dict[int, int] = {}
    for u in aux_ids:
        s_len = lspan * m
        s_base = b.block(f"spath.{u}", s_len)
        s_paths[u] = s_base
        for q in range(s_len - 1):
            b.edge(s_base + q, s_base + q + 1)
        b.edge(s_base + s_len - 1, u)
        t_len = (lspan - 1) * m
        if t_len:
            t_base = b.block(f"tpath.{u}", t_len)
            t_paths[u] = t_base
            for q in range(t_len - 1):
                b.edge(t_base + q, t_base + q + 1)
            b.edge(u, t_base)

    for a in range(tree.n):
        b.agent(orig_base + a, orig_base + perm[a])
    for u in aux_ids:
        for i in range(1, lspan + 1):
            start = s_paths[u] + (i - 1) * m
            if i == 1:
                target = u
            else:
                target = t_paths[u] + (i - 1) * m - 1
            b.agent(start, target)

    if tree.n <= 6:
        best = labeloracles.tree_token_swap_min_makespan(tree, perm, cap=lspan)
        expected = EXPECTED_YES if best is not None else EXPECTED_NO
    else:
        expected = EXPECTED_UNKNOWN
    source = f"tokenswap n={tree.n} edges={list(tree.edges())} perm={list(perm)} lspan={lspan}"
    return b.finish(lspan * m, SwapPolicy.FORBIDDEN, source, expected)


def from_beup(g: Graph, s: int, t: int, k: int, d: int) -> GeneratedInstance:
    """Cliquewidth-construction instance: every edge subdivided and carrying
    a 4d-3 path whose 2d-2 agents free the midpoint during at most one turn;
    every original vertex replaced by k independent twins."""
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise SourceError("s and t must be vertices of the graph")
    if s == t:
        raise SourceError("s and t must differ")
    if k < 1:
        raise SourceError("k must be at least 1")
    if d < 2:
        raise SourceError("d must be at least 2")

    b = _Builder()
    twin_base = b.block("twins", g.n * k)

    def twin(v: int, j: int) -> int:
        return twin_base + v * k + j

    path_base: dict[tuple[int, int], int] = {}
    for u, v in g.edges():
        base = b.block(f"edgepath.{u}.{v}", 4 * d - 3)
        path_base[(u, v)] = base
        for i in range(4 * d - 4):
            b.edge(base + i, base + i + 1)
        middle = base + 2 * d - 2
        for j in range(k):
            b.edge(twin(u, j), middle)
            b.edge(twin(v, j), middle)

    for j in range(k):
        b.agent(twin(s, j), twin(t, j))
    for (u, v) in g.edges():
        base = path_base[(u, v)]
        for i in range(1, 2 * d - 1):
            b.agent(base + i - 1, base + 2 * d + i - 2)

    if g.m <= 8:
        expected = EXPECTED_YES if labeloracles.beup_brute_force(g, s, t, k, d) \
            else EXPECTED_NO
    else:
        expected = EXPECTED_UNKNOWN
    source = f"beup n={g.n} edges={list(g.edges())} s={s} t={t} k={k} d={d}"
    return b.finish(2 * d, SwapPolicy.ALLOWED, source, expected)

"""Exact MAPF solvers.

solve_joint_bfs is the trusted desk-scale oracle: breadth-first search over
injective agent->vertex configurations.  solve_time_expanded searches for
pairwise node-disjoint source->sink paths in the time-expanded graph,
agent-at-a-time with node reservations and forward/backward reachability
pruning.  solve_makespan2_swaps handles the polynomial l=2-with-swaps case by
bipartite matching on middle vertices.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, replace
from enum import Enum

from .expansion import (
    ExpansionMode,
    build_expansion,
    paths_to_schedule,
    terminal_pairs,
)
from .instance import (
    Instance,
    Schedule,
    SwapPolicy,
    UNREACHABLE,
    makespan_lower_bound,
    validate_instance,
    verify_schedule,
)

DEFAULT_NODE_BUDGET = 50_000_000


class SolveStatus(Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    ABORTED = "aborted"


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    schedule: Schedule | None
    nodes_expanded: int
    elapsed: float

    @property
    def is_feasible(self) -> bool:
        return self.status is SolveStatus.FEASIBLE


class _Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, amount: int = 1) -> bool:
        """True while within budget."""
        self.used += amount
        return self.used <= self.limit


def _require_valid(inst: Instance) -> None:
    problems = validate_instance(inst)
    if problems:
        raise ValueError(f"invalid instance: {problems[0]}")


def solve_joint_bfs(inst: Instance, limit: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    """BFS over the k-agent configuration space, depth-limited to the
    makespan; shortest solutions are padded with waits.

    Deterministic: successors are enumerated in agent order, candidate
    vertices in sorted order.
    """
    _require_valid(inst)
    start_time = time.perf_counter()
    g, k, horizon = inst.graph, inst.k, inst.makespan
    lb = makespan_lower_bound(inst)
    if lb is UNREACHABLE or lb > horizon:
        return SolveResult(SolveStatus.INFEASIBLE, None, 0,
                           time.perf_counter() - start_time)
    start = tuple(inst.starts)
    target = tuple(inst.targets)
    forbid_swaps = inst.policy is SwapPolicy.FORBIDDEN
    moves = [tuple(sorted((v,) + g.neighbors(v))) for v in range(g.n)]

    budget = _Budget(limit)
    visited = {start}
    parent: dict[tuple[int, ...], tuple[int, ...]] = {}
    frontier = deque([(start, 0)])
    found = start == target
    found_depth = 0
    while frontier and not found:
        config, depth = frontier.popleft()
        if not budget.spend():
            return SolveResult(SolveStatus.ABORTED, None, budget.used,
                               time.perf_counter() - start_time)
        if depth == horizon:
            continue
        # build successors agent by agent with incremental conflict checks
        partial: list[list[int]] = [[]]
        for a in range(k):
            grown = []
            prev_a = config[a]
            for chosen in partial:
                for v in moves[prev_a]:
                    if v in chosen:
                        continue
                    if forbid_swaps and v != prev_a:
                        swap = False
                        for b, vb in enumerate(chosen):
                            if v == config[b] and vb == prev_a:
                                swap = True
                                break
                        if swap:
                            continue
                    grown.append(chosen + [v])
            partial = grown
            if not partial:
                break
        for nxt_list in partial:
            nxt = tuple(nxt_list)
            if nxt in visited:
                continue
            visited.add(nxt)
            parent[nxt] = config
            if nxt == target:
                found = True
                found_depth = depth + 1
                break
            frontier.append((nxt, depth + 1))
    elapsed = time.perf_counter() - start_time
    if not found:
        return SolveResult(SolveStatus.INFEASIBLE, None, budget.used, elapsed)
    rows = []
    cfg = target
    for _ in range(found_depth):
        rows.append(cfg)
        cfg = parent[cfg]
    rows.reverse()
    rows.extend([target] * (horizon - found_depth))
    schedule = Schedule(tuple(rows))
    assert verify_schedule(inst, schedule)
    return SolveResult(SolveStatus.FEASIBLE, schedule, budget.used, elapsed)


def _reachable_sets(teg, source: int, sink: int) -> bytearray | None:
    """Bitmap of nodes lying on some source->sink path (forward AND backward
    reachable); None when the sink cannot be reached at all."""
    size = teg.node_count
    forward = bytearray(size)
    forward[source] = 1
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in teg.successors[u]:
                if not forward[v]:
                    forward[v] = 1
                    nxt.append(v)
        frontier = nxt
    if not forward[sink]:
        return None
    admissible = bytearray(size)
    admissible[sink] = 1
    frontier = [sink]
    while frontier:
        nxt = []
        for v in frontier:
            for u in teg.predecessors[v]:
                if forward[u] and not admissible[u]:
                    admissible[u] = 1
                    nxt.append(u)
        frontier = nxt
    return admissible


def solve_time_expanded(inst: Instance, limit: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    """Exact disjoint-paths search over the policy's time-expanded graph.

    Agents are ordered fewest-admissible-layer-1-nodes first (ties by id);
    each agent's path is grown depth-first over admissible, unreserved nodes.
    Agrees with solve_joint_bfs on feasibility.
    """
    _require_valid(inst)
    start_time = time.perf_counter()
    teg = build_expansion(inst.graph, inst.makespan,
                          ExpansionMode.from_policy(inst.policy))
    pairs = terminal_pairs(inst)
    admissible = []
    for source, sink in pairs:
        adm = _reachable_sets(teg, source, sink)
        if adm is None:
            return SolveResult(SolveStatus.INFEASIBLE, None, 0,
                               time.perf_counter() - start_time)
        admissible.append(adm)

    succ = teg.successors
    reserved = bytearray(teg.node_count)
    paths: dict[int, list[int]] = {}
    budget = _Budget(limit)
    path_count_cap = 1 << 30

    def remaining_path_count(agent: int) -> int:
        """Source->sink paths through admissible, unreserved nodes (capped)."""
        adm = admissible[agent]
        source, sink = pairs[agent]
        if reserved[source]:
            return 0
        counts: dict[int, int] = {source: 1}
        for _ in range(teg.layers - 1):
            nxt: dict[int, int] = {}
            for u, c in counts.items():
                for v in succ[u]:
                    if adm[v] and not reserved[v]:
                        nxt[v] = min(nxt.get(v, 0) + c, path_count_cap)
            if not nxt:
                return 0
            counts = nxt
        return counts.get(sink, 0)

    class _OutOfBudget(Exception):
        pass

    def place(unplaced: tuple[int, ...]) -> bool:
        if not unplaced:
            return True
        # unit propagation over the current reservations: an agent with no
        # remaining path fails the branch, a single-path agent is placed
        # immediately; otherwise agents go in id order
        agent = None
        for a in unplaced:
            count = remaining_path_count(a)
            if count == 0:
                return False
            if count == 1 and agent is None:
                agent = a
        if agent is None:
            agent = unplaced[0]
        rest = tuple(a for a in unplaced if a != agent)
        source, _sink = pairs[agent]
        adm = admissible[agent]
        if not budget.spend():
            raise _OutOfBudget
        path = [source]
        iters = [iter(succ[source])]
        reserved[source] = 1
        if teg.layers == 1:
            paths[agent] = list(path)
            if place(rest):
                return True
            del paths[agent]
            reserved[source] = 0
            return False
        while path:
            nxt = next(iters[-1], None)
            if nxt is None:
                reserved[path.pop()] = 0
                iters.pop()
                continue
            if not adm[nxt] or reserved[nxt]:
                continue
            if not budget.spend():
                # unwind this agent's partial path before propagating
                for node in path:
                    reserved[node] = 0
                raise _OutOfBudget
            path.append(nxt)
            iters.append(iter(succ[nxt]))
            reserved[nxt] = 1
            if len(path) == teg.layers:
                paths[agent] = list(path)
                if place(rest):
                    return True
                del paths[agent]
                reserved[path.pop()] = 0
                iters.pop()
        return False

    try:
        ok = place(tuple(range(inst.k)))
    except _OutOfBudget:
        return SolveResult(SolveStatus.ABORTED, None, budget.used,
                           time.perf_counter() - start_time)
    elapsed = time.perf_counter() - start_time
    if not ok:
        return SolveResult(SolveStatus.INFEASIBLE, None, budget.used, elapsed)
    schedule = paths_to_schedule(teg, [paths[a] for a in range(inst.k)])
    assert verify_schedule(inst, schedule)
    return SolveResult(SolveStatus.FEASIBLE, schedule, budget.used, elapsed)


def _max_bipartite_matching(candidates: list[tuple[int, ...]]) -> list[int | None]:
    """Kuhn's augmenting-path matching from agents to vertices; deterministic
    given the candidate ordering.  Returns per-agent matched vertex."""
    match_of_vertex: dict[int, int] = {}
    match_of_agent: list[int | None] = [None] * len(candidates)

    def try_augment(agent: int, banned: set[int]) -> bool:
        for v in candidates[agent]:
            if v in banned:
                continue
            banned.add(v)
            holder = match_of_vertex.get(v)
            if holder is None or try_augment(holder, banned):
                match_of_vertex[v] = agent
                match_of_agent[agent] = v
                return True
        return False

    for a in range(len(candidates)):
        try_augment(a, set())
    return match_of_agent


def solve_makespan2_swaps(inst: Instance) -> SolveResult:
    """Polynomial makespan-2 case with swaps allowed: feasible iff the
    agents-to-middle-vertices bipartite graph (middles = closed neighborhoods
    of start and target intersected) has a perfect matching on agents."""
    if inst.makespan != 2 or inst.policy is not SwapPolicy.ALLOWED:
        raise ValueError("wrong makespan/policy: need makespan 2 and swaps allowed")
    _require_valid(inst)
    start_time = time.perf_counter()
    g = inst.graph
    candidates = []
    for a in range(inst.k):
        s, t = inst.starts[a], inst.targets[a]
        closed_s = {s} | set(g.neighbors(s))
        closed_t = {t} | set(g.neighbors(t))
        candidates.append(tuple(sorted(closed_s & closed_t)))
    matched = _max_bipartite_matching(candidates)
    elapsed = time.perf_counter() - start_time
    if any(v is None for v in matched):
        return SolveResult(SolveStatus.INFEASIBLE, None, inst.k, elapsed)
    schedule = Schedule((tuple(matched), tuple(inst.targets)))
    assert verify_schedule(inst, schedule)
    return SolveResult(SolveStatus.FEASIBLE, schedule, inst.k, elapsed)


@dataclass(frozen=True)
class OptimalMakespanResult:
    status: SolveStatus            # FEASIBLE / INFEASIBLE (up to bound) / ABORTED
    makespan: int | None
    schedule: Schedule | None
    searched_up_to: int
    nodes_expanded: int


def optimal_makespan(inst: Instance, l_max: int,
                     limit: int = DEFAULT_NODE_BUDGET) -> OptimalMakespanResult:
    """Smallest feasible makespan <= l_max via repeated decision solves; the
    instance's own makespan field is ignored.  l=2 with swaps is routed
    through the matching solver."""
    _require_valid(inst)
    if l_max < 0:
        raise ValueError("l_max must be non-negative")
    lb = makespan_lower_bound(inst)
    total_nodes = 0
    if lb is UNREACHABLE or lb > l_max:
        return OptimalMakespanResult(SolveStatus.INFEASIBLE, None, None, l_max, 0)
    for l in range(int(lb), l_max + 1):
        candidate = replace(inst, makespan=l)
        if l == 2 and inst.policy is SwapPolicy.ALLOWED:
            result = solve_makespan2_swaps(candidate)
        else:
            result = solve_time_expanded(candidate, limit)
        total_nodes += result.nodes_expanded
        if result.status is SolveStatus.ABORTED:
            return OptimalMakespanResult(SolveStatus.ABORTED, None, None, l, total_nodes)
        if result.is_feasible:
            return OptimalMakespanResult(SolveStatus.FEASIBLE, l, result.schedule,
                                         l, total_nodes)
    return OptimalMakespanResult(SolveStatus.INFEASIBLE, None, None, l_max, total_nodes)

"""Constructive swap-free routing through a high-degree hub.

All agents are staged one per turn (ordered by tree distance of their starts
to the hub) into private leaves freshly attached next to the hub, then
released to their targets by the time-reversed mirror procedure.  Departure
staggering keeps the hub distances of en-route agents pairwise distinct, so
the two phases are collision- and swap-free by construction.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, replace

from .graphs import Graph
from .instance import (
    Instance,
    Schedule,
    SwapPolicy,
    UNREACHABLE,
    makespan_lower_bound,
    validate_instance,
    verify_schedule,
)
from .solvers import SolveResult, SolveStatus


class NoHubError(ValueError):
    """No vertex of degree >= 5*d*k exists; callers fall back to the
    time-expanded solver."""


@dataclass(frozen=True)
class HubPlan:
    """One connected component's staging plan plus invariant diagnostics."""

    hub: int
    tree_vertices: tuple[int, ...]
    agents: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]          # per-turn positions of `agents`
    phase_one_turns: int
    # per phase-one turn: hub distances of strictly en-route agents
    phase_one_distances: tuple[tuple[int, ...], ...]


def _component_plan(g: Graph, comp: list[int], agents: list[int],
                    starts, targets, k_total: int) -> HubPlan:
    comp_set = set(comp)
    ecc = {}
    for v in comp:
        dists = g.bfs_distances(v)
        ecc[v] = max(dists[u] for u in comp)
    d = max(ecc.values())
    k = len(agents)
    if d == 0:
        # single-vertex component: agents are already home
        return HubPlan(comp[0], (comp[0],), tuple(agents), (), 0, ())
    threshold = 5 * d * k
    hub = next((v for v in comp if g.degree(v) >= threshold), None)
    if hub is None:
        raise NoHubError(f"no hub of degree >= 5dk (5*{d}*{k}={threshold})")

    # H: union of one shortest start->target path per agent
    h_vertices: set[int] = set()
    h_edges: set[tuple[int, int]] = set()

    def add_path(path: list[int]) -> None:
        h_vertices.update(path)
        for i in range(len(path) - 1):
            u, v = path[i], path[i + 1]
            h_edges.add((u, v) if u < v else (v, u))

    for a in agents:
        add_path(g.shortest_path(starts[a], targets[a]))
    # connect later components of H to the first by shortest paths
    sub_edges = {e for e in h_edges}
    adj: dict[int, list[int]] = {v: [] for v in h_vertices}
    for u, v in sub_edges:
        adj[u].append(v)
        adj[v].append(u)
    comps: list[list[int]] = []
    seen: set[int] = set()
    for v in sorted(h_vertices):
        if v in seen:
            continue
        comp_h = [v]
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp_h.append(w)
                    stack.append(w)
        comps.append(sorted(comp_h))
    first = set(comps[0])
    for later in comps[1:]:
        path = _multi_source_path(g, first, set(later))
        add_path(path)
    # attach the hub if it is not already in H
    if hub not in h_vertices:
        path = _multi_source_path(g, {hub}, h_vertices)
        add_path(path)
    # k fresh hub neighbors outside H
    frees = [w for w in g.neighbors(hub) if w not in h_vertices]
    if len(frees) < k:
        raise NoHubError(
            f"hub {hub} has only {len(frees)} free neighbors, need {k}"
        )
    leaves = frees[:k]
    for w in leaves:
        h_vertices.add(w)
        h_edges.add((hub, w) if hub < w else (w, hub))

    # spanning tree of H', rooted at the hub (BFS, sorted neighbors)
    tree_adj: dict[int, list[int]] = {v: [] for v in h_vertices}
    for u, v in sorted(h_edges):
        tree_adj[u].append(v)
        tree_adj[v].append(u)
    parent: dict[int, int | None] = {hub: None}
    depth = {hub: 0}
    queue = deque([hub])
    while queue:
        u = queue.popleft()
        for w in sorted(tree_adj[u]):
            if w not in parent:
                parent[w] = u
                depth[w] = depth[u] + 1
                queue.append(w)

    leaf_of = {agents[i]: leaves[i] for i in range(k)}

    def staged_trips(anchor_of: dict[int, int]):
        """Full route per agent (anchor -> hub -> leaf) plus departure turns;
        agents depart in ascending tree-distance order, one per turn."""
        order = sorted(agents, key=lambda a: (depth[anchor_of[a]], a))
        routes = {}
        departs = {}
        for slot, a in enumerate(order, start=1):
            up = _tree_path_to_root_dict(parent, anchor_of[a])
            routes[a] = up + [leaf_of[a]]
            departs[a] = slot
        return routes, departs

    def simulate(routes, departs):
        total = max(departs[a] + len(routes[a]) - 2 for a in agents) if agents else 0
        rows = []
        for turn in range(1, total + 1):
            row = []
            for a in agents:
                step = turn - departs[a] + 1
                step = min(max(step, 0), len(routes[a]) - 1)
                row.append(routes[a][step])
            rows.append(tuple(row))
        return rows, total

    anchor_starts = {a: starts[a] for a in agents}
    routes1, departs1 = staged_trips(anchor_starts)
    rows1, tau1 = simulate(routes1, departs1)
    distances1 = []
    for turn in range(1, tau1 + 1):
        en_route = []
        for a in agents:
            step = turn - departs1[a] + 1
            if 1 <= step <= len(routes1[a]) - 2:
                en_route.append(depth[routes1[a][step]])
        distances1.append(tuple(sorted(en_route)))

    anchor_targets = {a: targets[a] for a in agents}
    routes2, departs2 = staged_trips(anchor_targets)
    rows2, tau2 = simulate(routes2, departs2)
    # phase two is the time reversal: leaves -> targets
    mirrored = []
    for q in range(1, tau2 + 1):
        virtual = tau2 - q
        if virtual == 0:
            mirrored.append(tuple(targets[a] for a in agents))
        else:
            mirrored.append(rows2[virtual - 1])
    rows = tuple(rows1 + mirrored)
    return HubPlan(hub, tuple(sorted(h_vertices)), tuple(agents), rows,
                   tau1, tuple(distances1))


def _tree_path_to_root_dict(parent: dict[int, int | None], v: int) -> list[int]:
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path


def _multi_source_path(g: Graph, sources: set[int], goals: set[int]) -> list[int]:
    """Shortest path from any source to any goal vertex (BFS, id order)."""
    parent: dict[int, int | None] = {s: None for s in sorted(sources)}
    queue = deque(sorted(sources))
    while queue:
        u = queue.popleft()
        if u in goals:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            path.reverse()
            return path
        for w in g.neighbors(u):
            if w not in parent:
                parent[w] = u
                queue.append(w)
    raise ValueError("goal set unreachable from sources")


def hub_route(inst: Instance) -> SolveResult:
    """Swap-free constructive schedule of makespan <= 2*(k + |V(T)|) per
    component; requires every target reachable and a qualifying hub."""
    result, _plans = hub_route_with_plan(inst)
    return result


def hub_route_with_plan(inst: Instance) -> tuple[SolveResult, list[HubPlan]]:
    problems = validate_instance(inst)
    if problems:
        raise ValueError(f"invalid instance: {problems[0]}")
    if makespan_lower_bound(inst) is UNREACHABLE:
        raise ValueError("hub routing requires every target to be reachable")
    start_time = time.perf_counter()
    g = inst.graph
    plans = []
    for comp in g.connected_components():
        comp_agents = [a for a in range(inst.k) if inst.starts[a] in comp]
        if not comp_agents:
            continue
        plans.append(_component_plan(g, comp, comp_agents,
                                     inst.starts, inst.targets, inst.k))
    total = max((len(p.rows) for p in plans), default=0)
    rows = []
    for turn in range(total):
        row = list(inst.targets)
        for plan in plans:
            source = plan.rows[turn] if turn < len(plan.rows) else None
            for i, a in enumerate(plan.agents):
                row[a] = source[i] if source is not None else inst.targets[a]
        rows.append(tuple(row))
    schedule = Schedule(tuple(rows))
    routed = replace(inst, makespan=total, policy=SwapPolicy.FORBIDDEN)
    assert verify_schedule(routed, schedule)
    elapsed = time.perf_counter() - start_time
    result = SolveResult(SolveStatus.FEASIBLE, schedule, 0, elapsed)
    return result, plans

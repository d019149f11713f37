"""MAPF instances, schedules and the feasibility semantics both solvers trust.

An instance places k agents (dense ids 0..k-1) on a graph; a schedule is the
sequence of per-turn position rows s_1..s_l (s_0 is the start row).  All types
are immutable and safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .graphs import Graph

UNREACHABLE = math.inf


class SwapPolicy(Enum):
    ALLOWED = "allowed"
    FORBIDDEN = "forbidden"


@dataclass(frozen=True)
class Instance:
    graph: Graph
    starts: tuple[int, ...]
    targets: tuple[int, ...]
    makespan: int
    policy: SwapPolicy

    def __post_init__(self):
        object.__setattr__(self, "starts", tuple(self.starts))
        object.__setattr__(self, "targets", tuple(self.targets))
        if len(self.starts) != len(self.targets):
            raise ValueError("starts and targets must have the same length")
        if self.makespan < 0:
            raise ValueError("makespan must be non-negative")

    @property
    def k(self) -> int:
        return len(self.starts)


@dataclass(frozen=True)
class Schedule:
    """Position rows s_1..s_l; row i is a tuple indexed by agent id."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))

    def __len__(self) -> int:
        return len(self.rows)

    def agent_walk(self, inst: Instance, agent: int) -> list[int]:
        """The agent's full position sequence s_0..s_l."""
        return [inst.starts[agent]] + [row[agent] for row in self.rows]


def validate_instance(inst: Instance) -> list[str]:
    """Instance invariant violations as data; empty list means valid."""
    violations = []
    n = inst.graph.n
    seen: dict[int, int] = {}
    for a, v in enumerate(inst.starts):
        if not (0 <= v < n):
            violations.append(f"start of agent {a} is out-of-range vertex {v}")
        elif v in seen:
            violations.append(
                f"agents {seen[v]} and {a} share start vertex {v}"
            )
        else:
            seen[v] = a
    seen = {}
    for a, v in enumerate(inst.targets):
        if not (0 <= v < n):
            violations.append(f"target of agent {a} is out-of-range vertex {v}")
        elif v in seen:
            violations.append(
                f"agents {seen[v]} and {a} share target vertex {v}"
            )
        else:
            seen[v] = a
    return violations


def step_is_feasible(g: Graph, prev, nxt, policy: SwapPolicy) -> bool:
    """One-turn move check: injectivity, adjacency-or-wait, and no swap
    under SwapPolicy.FORBIDDEN.  prev is assumed injective."""
    occupied = set()
    for a, v in enumerate(nxt):
        if not (0 <= v < g.n) or v in occupied:
            return False
        occupied.add(v)
        u = prev[a]
        if v != u and v not in g.neighbors(u):
            return False
    if policy is SwapPolicy.FORBIDDEN:
        k = len(nxt)
        for a in range(k):
            if nxt[a] == prev[a]:
                continue
            for b in range(a + 1, k):
                if nxt[a] == prev[b] and nxt[b] == prev[a]:
                    return False
    return True


def schedule_violations(inst: Instance, sched: Schedule) -> list[str]:
    """First-violation diagnostics for a schedule; empty list means it passes.

    Raises ValueError on a length mismatch, which is a contract error rather
    than an infeasibility.
    """
    if len(sched) != inst.makespan:
        raise ValueError("schedule length != makespan")
    violations = []
    prev = inst.starts
    for i, row in enumerate(sched.rows, start=1):
        if len(row) != inst.k:
            violations.append(f"turn {i}: row has {len(row)} entries, expected {inst.k}")
            return violations
        occupied: dict[int, int] = {}
        for a, v in enumerate(row):
            if not (0 <= v < inst.graph.n):
                violations.append(f"turn {i}: agent {a} at out-of-range vertex {v}")
                return violations
            if v in occupied:
                violations.append(
                    f"turn {i}: agents {occupied[v]} and {a} collide at vertex {v}"
                )
                return violations
            occupied[v] = a
            u = prev[a]
            if v != u and v not in inst.graph.neighbors(u):
                violations.append(
                    f"turn {i}: agent {a} jumps from {u} to non-neighbor {v}"
                )
                return violations
        if inst.policy is SwapPolicy.FORBIDDEN:
            for a in range(inst.k):
                if row[a] == prev[a]:
                    continue
                for b in range(a + 1, inst.k):
                    if row[a] == prev[b] and row[b] == prev[a]:
                        violations.append(
                            f"turn {i}: agents {a} and {b} swap across edge "
                            f"({prev[a]}, {prev[b]})"
                        )
                        return violations
        prev = row
    for a in range(inst.k):
        if prev[a] != inst.targets[a]:
            violations.append(
                f"agent {a} ends at {prev[a]}, target is {inst.targets[a]}"
            )
            return violations
    return violations


def verify_schedule(inst: Instance, sched: Schedule) -> bool:
    """True iff every step is feasible under the instance policy and the
    final row equals the target map."""
    return not schedule_violations(inst, sched)


def makespan_lower_bound(inst: Instance):
    """Max over agents of graph distance start->target; UNREACHABLE (inf) if
    some target cannot be reached at all."""
    bound = 0
    for a in range(inst.k):
        dist = inst.graph.bfs_distances(inst.starts[a])[inst.targets[a]]
        if dist is None:
            return UNREACHABLE
        bound = max(bound, dist)
    return bound

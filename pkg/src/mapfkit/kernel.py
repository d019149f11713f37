"""Vertex-cover based kernelization.

Vertices outside a minimum cover with identical neighborhoods are twins and
interchangeable for agents: a class keeps all terminal vertices plus k
fillers (or everything, when it has at most 3k members).  The kernel is the
induced subgraph on the cover plus the kept representatives and is feasible
iff the original instance is.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph
from .instance import Instance, Schedule, verify_schedule


class CoverBudgetExceeded(ValueError):
    pass


def _cover_of_size(g: Graph, size: int) -> list[int] | None:
    """Bounded search tree: branch on the endpoints of the first uncovered
    edge.  Returns a cover of at most `size` vertices or None."""
    edges = g.edges()

    def search(chosen: set[int], budget: int) -> list[int] | None:
        for u, v in edges:
            if u in chosen or v in chosen:
                continue
            if budget == 0:
                return None
            for pick in (u, v):
                chosen.add(pick)
                result = search(chosen, budget - 1)
                if result is not None:
                    return result
                chosen.remove(pick)
            return None
        return sorted(chosen)

    return search(set(), size)


def compute_vertex_cover(g: Graph, budget: int) -> tuple[int, ...] | None:
    """Exact minimum vertex cover, or None when every cover within `budget`
    fails.  Deterministic: edges scanned in sorted order, u before v."""
    for size in range(budget + 1):
        cover = _cover_of_size(g, size)
        if cover is not None:
            return tuple(cover)
    return None


@dataclass(frozen=True)
class TwinClass:
    neighborhood: tuple[int, ...]
    members: tuple[int, ...]
    representatives: tuple[int, ...]


@dataclass(frozen=True)
class KernelOutput:
    kernel: Instance
    vertex_map: tuple[int, ...]      # kernel vertex id -> original vertex id
    cover: tuple[int, ...]
    classes: tuple[TwinClass, ...]

    def size_bound(self, k: int) -> int:
        return len(self.cover) + (2 ** len(self.cover)) * 3 * k


def kernelize(inst: Instance, cover_budget: int = 18) -> KernelOutput:
    """Shrink the instance to the cover plus per-class representatives.

    A class with more than 3k members keeps its terminal vertices plus
    exactly k non-terminal fillers (smallest ids, for reproducibility).
    """
    g, k = inst.graph, inst.k
    cover = compute_vertex_cover(g, cover_budget)
    if cover is None:
        raise CoverBudgetExceeded(
            f"no vertex cover within budget {cover_budget}"
        )
    cover_set = set(cover)
    terminals = set(inst.starts) | set(inst.targets)
    groups: dict[tuple[int, ...], list[int]] = {}
    for v in range(g.n):
        if v in cover_set:
            continue
        groups.setdefault(tuple(g.neighbors(v)), []).append(v)
    classes = []
    kept = set(cover)
    for hood in sorted(groups):
        members = sorted(groups[hood])
        if len(members) <= 3 * k:
            reps = members
        else:
            reps = [v for v in members if v in terminals]
            fillers = [v for v in members if v not in terminals][:k]
            reps = sorted(reps + fillers)
        kept.update(reps)
        classes.append(TwinClass(hood, tuple(members), tuple(reps)))
    subgraph, vertex_map = g.induced_subgraph(kept)
    back = {orig: new for new, orig in enumerate(vertex_map)}
    kernel = Instance(
        graph=subgraph,
        starts=tuple(back[v] for v in inst.starts),
        targets=tuple(back[v] for v in inst.targets),
        makespan=inst.makespan,
        policy=inst.policy,
    )
    return KernelOutput(kernel, tuple(vertex_map), tuple(cover), tuple(classes))


def lift_kernel_schedule(kout: KernelOutput, sched: Schedule) -> Schedule:
    """Re-index a kernel schedule through vertex_map; the result verifies on
    the original instance because the kernel is an induced subgraph."""
    if not verify_schedule(kout.kernel, sched):
        raise ValueError("schedule does not verify on the kernel instance")
    vmap = kout.vertex_map
    return Schedule(tuple(tuple(vmap[v] for v in row) for row in sched.rows))

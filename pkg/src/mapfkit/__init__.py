"""Exact multiagent path finding: solvers, kernelization, hub routing and
reduction-based instance generators."""

from .graphs import Graph
from .instance import (
    Instance,
    Schedule,
    SwapPolicy,
    UNREACHABLE,
    makespan_lower_bound,
    schedule_violations,
    step_is_feasible,
    validate_instance,
    verify_schedule,
)
from .expansion import (
    ExpansionMode,
    PathConflictError,
    TimeExpandedGraph,
    build_expansion,
    paths_to_schedule,
    schedule_to_paths,
    terminal_pairs,
)
from .decomposition import (
    TreeDecomposition,
    greedy_decomposition,
    lift_decomposition,
    validate_decomposition,
)
from .solvers import (
    OptimalMakespanResult,
    SolveResult,
    SolveStatus,
    optimal_makespan,
    solve_joint_bfs,
    solve_makespan2_swaps,
    solve_time_expanded,
)
from .kernel import (
    CoverBudgetExceeded,
    KernelOutput,
    TwinClass,
    compute_vertex_cover,
    kernelize,
    lift_kernel_schedule,
)
from .hubroute import HubPlan, NoHubError, hub_route, hub_route_with_plan
from .reductions import (
    CnfFormula,
    Digraph,
    FormulaError,
    GeneratedInstance,
    SourceError,
    from_3sat_noswaps,
    from_3sat_swaps,
    from_beup,
    from_disjoint_shortest_paths,
    from_token_swapping_tree,
)

__all__ = [name for name in dir() if not name.startswith("_")]

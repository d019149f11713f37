import random

import pytest

from mapfkit import (
    ExpansionMode,
    Graph,
    Instance,
    PathConflictError,
    Schedule,
    SwapPolicy,
    build_expansion,
    paths_to_schedule,
    schedule_to_paths,
    terminal_pairs,
    verify_schedule,
)
from corpusutil import random_graph, random_instance
from mapfkit.solvers import solve_joint_bfs


def claw():
    # 4 vertices: center 1 joined to 0, 2, 3
    return Graph(4, [(0, 1), (1, 2), (1, 3)])


class TestCounts:
    def test_claw_swap_mode_matches_figure(self):
        teg = build_expansion(claw(), 3, ExpansionMode.SWAP)
        assert teg.node_count == 16
        assert teg.arc_count == 30  # 3 * (4 + 2*3)

    def test_claw_swapfree_counts(self):
        # (2l+1)n + l*m = 7*4 + 3*3 = 37 and 2ln + 4lm = 24 + 36 = 60
        teg = build_expansion(claw(), 3, ExpansionMode.SWAP_FREE)
        assert teg.node_count == 37
        assert teg.arc_count == 60
        assert sum(len(s) for s in teg.successors) == 60

    def test_zero_makespan_single_layer(self):
        g = random_graph(random.Random(5), 9, 0.4)
        teg = build_expansion(g, 0, ExpansionMode.SWAP)
        assert teg.node_count == g.n
        assert teg.arc_count == 0

    def test_count_formulas_on_random_graphs(self):
        rng = random.Random(99)
        for _ in range(25):
            n = rng.randint(1, 20)
            g = random_graph(rng, n, rng.uniform(0.1, 0.7))
            for l in range(0, 5):
                swap = build_expansion(g, l, ExpansionMode.SWAP)
                assert swap.node_count == (l + 1) * n
                assert swap.arc_count == l * (n + 2 * g.m)
                free = build_expansion(g, l, ExpansionMode.SWAP_FREE)
                assert free.node_count == (2 * l + 1) * n + l * g.m
                assert free.arc_count == 2 * l * n + 4 * l * g.m

    def test_arcs_cross_exactly_one_layer(self):
        g = claw()
        for mode in ExpansionMode:
            teg = build_expansion(g, 3, mode)
            for u in range(teg.node_count):
                for v in teg.successors[u]:
                    assert teg.node_layer(v) == teg.node_layer(u) + 1


class TestTerminalPairs:
    def test_swap_mode_layers(self):
        inst = Instance(claw(), (0,), (2,), 2, SwapPolicy.ALLOWED)
        teg = build_expansion(claw(), 2, ExpansionMode.SWAP)
        (src, snk), = terminal_pairs(inst)
        assert teg.decode_vertex(src) == (0, 0)
        assert teg.decode_vertex(snk) == (2, 2)

    def test_swapfree_sinks_in_last_layer(self):
        inst = Instance(claw(), (0, 2), (2, 0), 3, SwapPolicy.FORBIDDEN)
        teg = build_expansion(claw(), 3, ExpansionMode.SWAP_FREE)
        for _, snk in terminal_pairs(inst):
            assert teg.node_layer(snk) == 6

    def test_no_agents(self):
        inst = Instance(claw(), (), (), 2, SwapPolicy.ALLOWED)
        assert terminal_pairs(inst) == []


class TestPathsToSchedule:
    def test_single_agent_path(self):
        teg = build_expansion(claw(), 2, ExpansionMode.SWAP)
        path = [teg.vertex_node(0, 0), teg.vertex_node(1, 1), teg.vertex_node(2, 2)]
        sched = paths_to_schedule(teg, [path])
        assert sched.rows == ((1,), (2,))

    def test_k2_swap_crossing(self):
        g = Graph(2, [(0, 1)])
        teg = build_expansion(g, 1, ExpansionMode.SWAP)
        paths = [
            [teg.vertex_node(0, 0), teg.vertex_node(1, 1)],
            [teg.vertex_node(1, 0), teg.vertex_node(0, 1)],
        ]
        sched = paths_to_schedule(teg, paths)
        inst = Instance(g, (0, 1), (1, 0), 1, SwapPolicy.ALLOWED)
        assert verify_schedule(inst, sched)

    def test_swapfree_crossing_needs_shared_edge_node(self):
        # both directions of one edge route through the same edge copy, so
        # disjoint crossing paths cannot exist; build the collision directly
        g = Graph(2, [(0, 1)])
        teg = build_expansion(g, 1, ExpansionMode.SWAP_FREE)
        e = teg.edge_node(0, 1)
        paths = [
            [teg.vertex_node(0, 0), e, teg.vertex_node(1, 2)],
            [teg.vertex_node(1, 0), e, teg.vertex_node(0, 2)],
        ]
        with pytest.raises(PathConflictError):
            paths_to_schedule(teg, paths)

    def test_broken_arc_reported(self):
        teg = build_expansion(claw(), 1, ExpansionMode.SWAP)
        path = [teg.vertex_node(0, 0), teg.vertex_node(2, 1)]  # 0-2 not an edge
        with pytest.raises(PathConflictError):
            paths_to_schedule(teg, [path])


class TestScheduleToPaths:
    def test_swapfree_rotation_uses_edge_nodes(self):
        g = Graph(3, [(0, 1), (1, 2)])
        inst = Instance(g, (0, 1), (1, 2), 1, SwapPolicy.FORBIDDEN)
        sched = Schedule(((1, 2),))
        teg = build_expansion(g, 1, ExpansionMode.SWAP_FREE)
        paths = schedule_to_paths(inst, sched, teg)
        assert paths[0][1] == teg.edge_node(0, 1)
        assert paths[1][1] == teg.edge_node(1, 1)
        assert len(set(paths[0]) & set(paths[1])) == 0

    def test_wait_routes_through_vertex_copy(self):
        g = Graph(2, [(0, 1)])
        inst = Instance(g, (0,), (0,), 1, SwapPolicy.FORBIDDEN)
        teg = build_expansion(g, 1, ExpansionMode.SWAP_FREE)
        paths = schedule_to_paths(inst, Schedule(((0,),)), teg)
        assert paths[0] == [teg.vertex_node(0, 0), teg.vertex_node(0, 1),
                            teg.vertex_node(0, 2)]

    def test_infeasible_schedule_rejected(self):
        g = Graph(2, [(0, 1)])
        inst = Instance(g, (0, 1), (1, 0), 1, SwapPolicy.FORBIDDEN)
        with pytest.raises(ValueError):
            schedule_to_paths(inst, Schedule(((1, 0),)))

    def test_round_trip_identity_on_verified_schedules(self):
        rng = random.Random(42)
        done = 0
        while done < 60:
            inst = random_instance(rng, n_max=7, k_max=3, l_max=5)
            result = solve_joint_bfs(inst)
            if not result.is_feasible:
                continue
            done += 1
            mode = (ExpansionMode.SWAP if inst.policy is SwapPolicy.ALLOWED
                    else ExpansionMode.SWAP_FREE)
            teg = build_expansion(inst.graph, inst.makespan, mode)
            paths = schedule_to_paths(inst, result.schedule, teg)
            seen = set()
            for path in paths:
                assert len(path) == teg.layers
                assert not (set(path) & seen)
                seen.update(path)
            assert paths_to_schedule(teg, paths) == result.schedule

import random

import pytest

from mapfkit import (
    Graph,
    Instance,
    Schedule,
    SwapPolicy,
    UNREACHABLE,
    makespan_lower_bound,
    step_is_feasible,
    validate_instance,
    verify_schedule,
)
from corpusutil import random_instance


def k2():
    return Graph(2, [(0, 1)])


def p3():
    return Graph(3, [(0, 1), (1, 2)])


class TestGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 0)])

    def test_rejects_duplicate_edge(self):
        with pytest.raises(ValueError):
            Graph(3, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 2)])

    def test_adjacency_symmetric_and_sorted(self):
        g = Graph(4, [(2, 1), (0, 1), (3, 1)])
        assert g.neighbors(1) == (0, 2, 3)
        assert g.m == 3
        assert sum(g.degree(v) for v in range(4)) == 2 * g.m


class TestValidateInstance:
    def test_minimal_valid(self):
        inst = Instance(k2(), (0,), (1,), 1, SwapPolicy.ALLOWED)
        assert validate_instance(inst) == []

    def test_shared_start_reported(self):
        inst = Instance(p3(), (0, 0), (1, 2), 1, SwapPolicy.ALLOWED)
        problems = validate_instance(inst)
        assert len(problems) == 1
        assert "start" in problems[0] and "0" in problems[0]

    def test_out_of_range_target(self):
        inst = Instance(p3(), (0,), (5,), 1, SwapPolicy.ALLOWED)
        problems = validate_instance(inst)
        assert problems and "out-of-range" in problems[0]


class TestStepFeasibility:
    def test_swap_allowed_on_k2(self):
        assert step_is_feasible(k2(), (0, 1), (1, 0), SwapPolicy.ALLOWED)

    def test_swap_forbidden_on_k2(self):
        assert not step_is_feasible(k2(), (0, 1), (1, 0), SwapPolicy.FORBIDDEN)

    def test_rotation_along_path_is_not_a_swap(self):
        assert step_is_feasible(p3(), (0, 1), (1, 2), SwapPolicy.FORBIDDEN)

    def test_vertex_conflict(self):
        assert not step_is_feasible(p3(), (0, 2), (1, 1), SwapPolicy.ALLOWED)

    def test_jump_rejected(self):
        assert not step_is_feasible(p3(), (0,), (2,), SwapPolicy.ALLOWED)

    def test_waiting_always_legal(self):
        rng = random.Random(7)
        for _ in range(50):
            inst = random_instance(rng)
            pos = tuple(inst.starts)
            assert step_is_feasible(inst.graph, pos, pos, inst.policy)


class TestVerifySchedule:
    def test_k2_exchange_swaps_allowed(self):
        inst = Instance(k2(), (0, 1), (1, 0), 1, SwapPolicy.ALLOWED)
        assert verify_schedule(inst, Schedule(((1, 0),)))

    def test_k2_exchange_swaps_forbidden(self):
        inst = Instance(k2(), (0, 1), (1, 0), 1, SwapPolicy.FORBIDDEN)
        assert not verify_schedule(inst, Schedule(((1, 0),)))

    def test_shortest_path_walk(self):
        inst = Instance(p3(), (0,), (2,), 2, SwapPolicy.ALLOWED)
        assert verify_schedule(inst, Schedule(((1,), (2,))))

    def test_length_mismatch_raises(self):
        inst = Instance(p3(), (0,), (2,), 2, SwapPolicy.ALLOWED)
        with pytest.raises(ValueError):
            verify_schedule(inst, Schedule(((1,),)))

    def test_makespan_zero(self):
        inst = Instance(p3(), (1,), (1,), 0, SwapPolicy.ALLOWED)
        assert verify_schedule(inst, Schedule(()))
        inst2 = Instance(p3(), (1,), (2,), 0, SwapPolicy.ALLOWED)
        assert not verify_schedule(inst2, Schedule(()))

    def test_policy_monotonicity(self):
        # anything accepted without swaps is accepted with swaps
        rng = random.Random(11)
        checked = 0
        for _ in range(300):
            inst = random_instance(rng, n_max=6, k_max=3, l_max=4)
            strict = Instance(inst.graph, inst.starts, inst.targets,
                              inst.makespan, SwapPolicy.FORBIDDEN)
            loose = Instance(inst.graph, inst.starts, inst.targets,
                             inst.makespan, SwapPolicy.ALLOWED)
            rows = []
            pos = list(inst.starts)
            ok = True
            for _ in range(inst.makespan):
                nxt = []
                used = set()
                for a, v in enumerate(pos):
                    options = [v] + list(inst.graph.neighbors(v))
                    rng.shuffle(options)
                    choice = next((w for w in options if w not in used), None)
                    if choice is None:
                        ok = False
                        break
                    used.add(choice)
                    nxt.append(choice)
                if not ok:
                    break
                rows.append(tuple(nxt))
                pos = nxt
            if not ok:
                continue
            sched = Schedule(tuple(rows))
            target_ok = tuple(pos) == strict.targets
            if target_ok and verify_schedule(strict, sched):
                assert verify_schedule(loose, sched)
                checked += 1
        assert checked > 0

    def test_each_agent_walk_bounded(self):
        inst = Instance(p3(), (0,), (2,), 2, SwapPolicy.ALLOWED)
        sched = Schedule(((1,), (2,)))
        walk = sched.agent_walk(inst, 0)
        assert len(walk) == inst.makespan + 1
        for a, b in zip(walk, walk[1:]):
            assert a == b or b in inst.graph.neighbors(a)


class TestLowerBound:
    def test_p3_distance(self):
        inst = Instance(p3(), (0,), (2,), 5, SwapPolicy.ALLOWED)
        assert makespan_lower_bound(inst) == 2

    def test_identity_zero(self):
        inst = Instance(p3(), (0, 1), (0, 1), 3, SwapPolicy.ALLOWED)
        assert makespan_lower_bound(inst) == 0

    def test_unreachable_marker(self):
        g = Graph(4, [(0, 1), (2, 3)])
        inst = Instance(g, (0,), (3,), 5, SwapPolicy.ALLOWED)
        assert makespan_lower_bound(inst) is UNREACHABLE

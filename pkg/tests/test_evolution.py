from __future__ import annotations

import json
import math

import pytest

from qgraph.errors import NoLegalMove
from qgraph.evolution import (MovePolicy, RunConfig, RunLog, are_isomorphic,
                              candidates, detect_cycle, run, step)
from qgraph.experiments import (exp1_config, get_config, grid_graph,
                                path_graph)
from qgraph.goals import (MaximizeLambda1, MinimizeDistance, TargetSpectrum,
                          goal_to_dict)
from qgraph.graph import Edge, MetricGraph, normalize

PI2 = math.pi ** 2


def path3() -> MetricGraph:
    return normalize(path_graph(3))


def triangle() -> MetricGraph:
    return normalize(MetricGraph(3, tuple(Edge(i, (i + 1) % 3, 1 / 3) for i in range(3))))


class TestCandidates:
    def test_path3_pendant_and_between(self):
        cands = candidates(path3(), MovePolicy())
        # 3 pendant moves plus 3 vertex pairs
        assert len(cands) == 6
        for c in cands:
            assert abs(c.total_length() - 1.0) <= 1e-12
            assert c.num_edges == 3

    def test_new_edge_raw_length_is_one_over_parent_edges(self):
        cands = candidates(path3(), MovePolicy(add_between=False))
        child = cands[0]
        # raw lengths (1/2, 1/2, 1/2) renormalize to thirds
        assert all(abs(float(e.length) - 1 / 3) < 1e-12 for e in child.edges)

    def test_triangle_deletions_break_cycle(self):
        cands = candidates(triangle(), MovePolicy(delete_edge=True), mode="delete")
        assert len(cands) == 3
        for c in cands:
            assert c.num_edges == 2
            assert c.num_vertices == 3
            assert sorted(c.degrees()) == [1, 1, 2]

    def test_trees_only_restricts_to_pendants(self):
        cands = candidates(path3(), MovePolicy(trees_only=True))
        assert len(cands) == 3
        for c in cands:
            assert c.num_edges == c.num_vertices - 1

    def test_no_parallel_policy_skips_adjacent_pairs(self):
        cands = candidates(path3(), MovePolicy(add_pendant=False, allow_parallel=False))
        assert len(cands) == 1  # only the non-adjacent pair (0, 2)

    def test_deleting_pendant_edge_drops_vertex(self):
        g = normalize(MetricGraph(4, (Edge(0, 1, 1 / 3), Edge(1, 2, 1 / 3), Edge(1, 3, 1 / 3))))
        cands = candidates(g, MovePolicy(delete_edge=True), mode="delete")
        assert all(c.num_vertices == 3 for c in cands)

    def test_no_legal_move(self):
        g = normalize(MetricGraph(2, (Edge(0, 1, 1.0),)))
        with pytest.raises(NoLegalMove):
            candidates(g, MovePolicy(add_pendant=True, add_between=True, delete_edge=True),
                       mode="delete")

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            MovePolicy(add_pendant=False, add_between=False, delete_edge=True)
        with pytest.raises(ValueError):
            MovePolicy(new_edge_length="median")


class TestStep:
    def test_path_target_extends_path(self):
        goal = MinimizeDistance(TargetSpectrum((0.0, PI2, 4 * PI2)))
        st = step(path3(), goal, MovePolicy())
        g = st.chosen
        assert g.num_vertices == 4
        assert sorted(g.degrees()) == [1, 1, 2, 2]
        assert st.chosen_score == min(s for s in st.candidate_scores if s is not None)
        assert st.candidate_scores[st.chosen_index] == st.chosen_score

    def test_tie_break_takes_first(self):
        goal = MinimizeDistance(TargetSpectrum((0.0, PI2, 4 * PI2)))
        st = step(path3(), goal, MovePolicy())
        best = st.chosen_score
        firsts = [i for i, s in enumerate(st.candidate_scores) if s == best]
        assert st.chosen_index == firsts[0]

    def test_delete_mode_removes_edge(self):
        st = step(triangle(), MaximizeLambda1(),
                  MovePolicy(delete_edge=True, alternate=True), mode="delete")
        assert st.chosen.num_edges == 2

    def test_k_prefix_has_nonzero_roots(self):
        st = step(path3(), MaximizeLambda1(), MovePolicy())
        assert len(st.k_prefix) >= 4
        assert all(k > 0 for k in st.k_prefix)


class TestRun:
    def test_determinism_byte_identical(self):
        config = exp1_config()
        a, b = run(config), run(config)
        assert a.canonical_bytes() == b.canonical_bytes()
        seq_a = [json.dumps(s.to_dict()["chosen"], sort_keys=True) for s in a.steps]
        seq_b = [json.dumps(s.to_dict()["chosen"], sort_keys=True) for s in b.steps]
        assert seq_a == seq_b

    def test_conservation(self):
        log = run(get_config("exp2"))
        for s in log.steps:
            assert abs(s.chosen.total_length() - 1.0) <= 1e-12
            assert s.chosen.is_connected()

    def test_tree_closure(self):
        log = run(get_config("exp5"))
        for s in log.steps:
            assert s.chosen.num_edges == s.chosen.num_vertices - 1

    def test_per_step_optimality(self):
        goal = MinimizeDistance(TargetSpectrum((0.0, PI2, 4 * PI2)))
        config = RunConfig(initial_graph=path_graph(3), goal=goal, steps=3)
        log = run(config)
        for s in log.steps:
            assert all(s.chosen_score <= v for v in s.candidate_scores if v is not None)

    def test_steps_validation(self):
        with pytest.raises(ValueError):
            RunConfig(initial_graph=path_graph(3), goal=MaximizeLambda1(), steps=0)

    def test_argmin_shift_invariance(self):
        # The recorded selection equals the argmin and is stable under
        # shifting or positively scaling every score.
        st = step(path3(), MaximizeLambda1(), MovePolicy())
        scores = [s for s in st.candidate_scores]
        valid = [(i, s) for i, s in enumerate(scores) if s is not None]
        for transform in (lambda x: x + 17.0, lambda x: 3.0 * x):
            best = min(valid, key=lambda p: transform(p[1]))[0]
            assert best == st.chosen_index


class TestRunConfigJson:
    def test_round_trip(self):
        config = get_config("fig9")
        data = config.to_dict()
        back = RunConfig.from_dict(json.loads(json.dumps(data)))
        assert back.steps == config.steps
        assert back.policy == config.policy
        assert goal_to_dict(back.goal) == goal_to_dict(config.goal)
        assert back.initial_graph == normalize(config.initial_graph)

    def test_missing_fields(self):
        with pytest.raises(ValueError):
            RunConfig.from_dict({"goal": {"type": "max_lambda1"}})


class TestLog:
    def test_jsonl_shape(self):
        log = run(RunConfig(initial_graph=path_graph(3), goal=MaximizeLambda1(), steps=2))
        lines = log.to_jsonl().strip().split("\n")
        assert len(lines) == 3
        assert "config" in json.loads(lines[0])
        step1 = json.loads(lines[1])
        assert step1["step"] == 0
        assert "wall_ms" in step1
        canon = json.loads(log.canonical_bytes().decode().strip().split("\n")[1])
        assert "wall_ms" not in canon


class TestIsomorphism:
    def test_relabeled_graphs_match(self):
        g1 = triangle()
        g2 = MetricGraph(3, (Edge(2, 1, 1 / 3), Edge(0, 2, 1 / 3), Edge(1, 0, 1 / 3)))
        assert are_isomorphic(g1, normalize(g2))

    def test_different_lengths_do_not_match(self):
        g1 = normalize(MetricGraph(3, (Edge(0, 1, 1 / 4), Edge(1, 2, 3 / 4))))
        g2 = normalize(MetricGraph(3, (Edge(0, 1, 1 / 3), Edge(1, 2, 2 / 3))))
        assert not are_isomorphic(g1, g2)

    def test_parallel_edge_counts_matter(self):
        g1 = MetricGraph(2, (Edge(0, 1, 0.5), Edge(0, 1, 0.5)))
        g2 = MetricGraph(3, (Edge(0, 1, 0.5), Edge(1, 2, 0.5)))
        assert not are_isomorphic(g1, g2)

    def test_star_vs_path(self):
        star = normalize(MetricGraph(4, (Edge(0, 1, 1 / 3), Edge(0, 2, 1 / 3), Edge(0, 3, 1 / 3))))
        path = normalize(MetricGraph(4, (Edge(0, 1, 1 / 3), Edge(1, 2, 1 / 3), Edge(2, 3, 1 / 3))))
        assert not are_isomorphic(star, path)


class TestDetectCycle:
    def test_growing_run_has_no_cycle(self):
        log = run(RunConfig(initial_graph=path_graph(3), goal=MaximizeLambda1(), steps=4))
        assert detect_cycle(log) is None

    def test_alternating_fixture_cycles(self):
        config = RunConfig(
            initial_graph=grid_graph(2, 3), goal=MaximizeLambda1(),
            policy=MovePolicy(add_pendant=True, add_between=True, delete_edge=True,
                              alternate=True, alternate_order=("delete", "add")),
            steps=8)
        log = run(config)
        found = detect_cycle(log)
        assert found is not None
        start, period = found
        assert period == 2
        assert are_isomorphic(log.steps[start].chosen, log.steps[start + period].chosen)

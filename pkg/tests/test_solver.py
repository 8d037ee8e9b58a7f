import random

import pytest

from dfvs.cover import CoverProblem
from dfvs.digraph import DirectedGraph, is_acyclic
from dfvs.oracle import minimum_dfvs_size, minimum_hitting_set
from dfvs.random_instances import random_digraph, random_strongly_connected
from dfvs.solver import (
    Deadline,
    IlpModel,
    ModelError,
    SolverConfig,
    build_model,
    export_lp,
    lazy_loop,
    max_edge_disjoint_cycles,
    parse_lp,
    run_pipeline,
    solve_cover_exact,
    solve_dfvs,
)

from gadgets import bidirected, directed_cycle


def triangle_model() -> IlpModel:
    p = CoverProblem()
    for u, v in [(1, 2), (2, 3), (1, 3)]:
        p.add_edge(u, v)
    return build_model(p)


class TestModel:
    def test_triangle_shape(self):
        m = triangle_model()
        assert m.variables == (1, 2, 3)
        assert len(m.constraints) == 3

    def test_no_sets_no_constraints(self):
        p = CoverProblem()
        p.add_vertex(4)
        m = build_model(p)
        assert m.constraints == ()
        assert solve_cover_exact(m).size == 0

    def test_one_big_set(self):
        p = CoverProblem()
        p.add_big_set({1, 2, 3})
        m = build_model(p)
        assert len(m.constraints) == 1
        assert solve_cover_exact(m).size == 1

    def test_empty_constraint_rejected(self):
        with pytest.raises(ModelError):
            solve_cover_exact(IlpModel((1,), (frozenset(),)))


class TestBranchAndBound:
    def test_triangle_optimum_two(self):
        sol = solve_cover_exact(triangle_model())
        assert sol.size == 2 and sol.optimal and sol.lower_bound == 2

    def test_disjoint_edges_need_one_each(self):
        p = CoverProblem()
        for i in range(10):
            p.add_edge(2 * i + 1, 2 * i + 2)
        sol = solve_cover_exact(build_model(p))
        assert sol.size == 10

    def test_empty_model(self):
        sol = solve_cover_exact(IlpModel((), ()))
        assert sol.size == 0 and sol.optimal

    def test_matches_hitting_oracle(self):
        rng = random.Random(64)
        for _ in range(120):
            n = rng.randint(2, 10)
            constraints = []
            for _ in range(rng.randint(1, 12)):
                size = rng.randint(2, min(4, n))
                constraints.append(frozenset(rng.sample(range(1, n + 1), size)))
            model = IlpModel(
                tuple(range(1, n + 1)),
                tuple(sorted(set(constraints), key=lambda c: (len(c), sorted(c)))),
            )
            sol = solve_cover_exact(model)
            assert sol.optimal
            assert sol.size == len(minimum_hitting_set(constraints))
            for c in constraints:
                assert c & sol.vertices

    def test_timeout_returns_incumbent_with_bound(self):
        rng = random.Random(65)
        constraints = [
            frozenset(rng.sample(range(1, 40), 3)) for _ in range(200)
        ]
        model = IlpModel(
            tuple(range(1, 40)),
            tuple(sorted(set(constraints), key=lambda c: (len(c), sorted(c)))),
        )
        deadline = Deadline(0.0)
        sol = solve_cover_exact(model, None, deadline)
        assert not sol.optimal
        assert sol.lower_bound <= sol.size
        for c in constraints:
            assert c & sol.vertices


class TestDisjointCycles:
    def test_single_triangle(self):
        assert max_edge_disjoint_cycles(directed_cycle([1, 2, 3])) == {(1, 2, 3)}

    def test_two_triangles_sharing_a_vertex(self):
        g = DirectedGraph.from_arcs(
            arcs=[(1, 2), (2, 3), (3, 1), (1, 4), (4, 5), (5, 1)]
        )
        assert max_edge_disjoint_cycles(g) == {(1, 2, 3), (1, 4, 5)}

    def test_acyclic_graph(self):
        g = DirectedGraph.from_arcs(arcs=[(1, 2), (2, 3)])
        assert max_edge_disjoint_cycles(g) == set()

    def test_removed_vertices_respected_and_family_disjoint(self):
        rng = random.Random(66)
        for _ in range(60):
            g = random_strongly_connected(rng.randint(3, 9), 0.3, rng)
            removed = set(rng.sample(sorted(g.vertex_set()), rng.randint(0, 2)))
            family = max_edge_disjoint_cycles(g, removed)
            used: set[tuple[int, int]] = set()
            for cycle in family:
                assert not set(cycle) & removed
                for i, v in enumerate(cycle):
                    arc = (v, cycle[(i + 1) % len(cycle)])
                    assert g.has_arc(*arc)
                    assert arc not in used
                    used.add(arc)
            assert is_acyclic(g.without(removed | {v for c in family for v in c}))


class TestLazyLoop:
    def _attached(self, g: DirectedGraph) -> CoverProblem:
        p = CoverProblem()
        p.attach_graph(g)
        return p

    def test_single_triangle_one_iteration(self):
        outcome = lazy_loop(self._attached(directed_cycle([1, 2, 3])), SolverConfig())
        assert outcome.solution.size == 1
        assert outcome.iterations == 1

    def test_requires_graph(self):
        with pytest.raises(ValueError):
            lazy_loop(CoverProblem(), SolverConfig())

    def test_added_constraints_are_real_cycles(self):
        rng = random.Random(67)
        for _ in range(30):
            g = random_strongly_connected(rng.randint(4, 9), 0.35, rng)
            p = self._attached(g)
            outcome = lazy_loop(p, SolverConfig(harvest_rounds=3))
            for constraint in outcome.model.constraints:
                sub = g.subgraph(constraint)
                assert not is_acyclic(sub)
            chosen = set(outcome.solution.vertices)
            assert is_acyclic(g.without(chosen))
            assert len(chosen) == minimum_dfvs_size(g)

    def test_grid_like_instances_stay_under_iteration_bound(self):
        rng = random.Random(68)
        for _ in range(15):
            g = bidirected(
                [(i, i + 1) for i in range(1, 7)]
                + [(i, i + 3) for i in range(1, 5)]
            )
            p = self._attached(g)
            outcome = lazy_loop(p, SolverConfig(harvest_rounds=rng.randint(1, 5)))
            assert outcome.iterations <= 25
            assert outcome.solution.size == minimum_dfvs_size(g)


class TestPipeline:
    def test_dag(self):
        g = DirectedGraph.from_arcs(arcs=[(1, 2), (2, 3)])
        assert solve_dfvs(g).size == 0

    def test_triangle(self):
        assert solve_dfvs(directed_cycle([1, 2, 3])).size == 1

    def test_bidirected_c4_and_k4(self):
        c4 = bidirected([(1, 2), (2, 3), (3, 4), (4, 1)])
        assert solve_dfvs(c4).size == 2
        k4 = bidirected([(u, v) for u in range(1, 5) for v in range(u + 1, 5)])
        assert solve_dfvs(k4).size == 3

    def test_matches_oracle_with_reports(self):
        rng = random.Random(70)
        for _ in range(120):
            g = random_digraph(
                rng.randint(1, 12), rng.choice([0.1, 0.2, 0.3, 0.5]), rng, 0.05
            )
            result = run_pipeline(g)
            assert result.solution.optimal
            assert result.solution.size == minimum_dfvs_size(g)
            assert is_acyclic(g.without(result.solution.vertices))
            r = result.report
            assert (
                r.graph_forced + r.graph_removed + r.graph_contracted
                + r.subgraph_vertices
                == g.vertex_count()
            )
            assert r.solution_size == result.solution.size

    def test_deterministic_solution_set(self):
        rng = random.Random(71)
        for _ in range(25):
            g = random_digraph(rng.randint(2, 10), 0.3, rng)
            cfg = SolverConfig(seed=9, harvest_rounds=5)
            a = solve_dfvs(g, cfg)
            b = solve_dfvs(g, cfg)
            assert a.vertices == b.vertices

    def test_budget_zero_still_exact(self):
        rng = random.Random(72)
        cfg = SolverConfig(enum_budget=0, harvest_rounds=5)
        for _ in range(50):
            g = random_digraph(rng.randint(2, 11), rng.choice([0.25, 0.4]), rng)
            result = run_pipeline(g, cfg)
            assert result.solution.size == minimum_dfvs_size(g)

    def test_timeout_propagates_feasible_incumbent(self):
        rng = random.Random(73)
        g = random_digraph(14, 0.4, rng)
        cfg = SolverConfig(time_limit=0.0)
        result = run_pipeline(g, cfg)
        assert is_acyclic(g.without(result.solution.vertices))
        assert result.solution.lower_bound <= result.solution.size
        if result.solution.size != result.solution.lower_bound:
            assert not result.solution.optimal

    def test_lower_bound_equals_size_on_completion(self):
        rng = random.Random(74)
        for _ in range(40):
            g = random_digraph(rng.randint(1, 10), 0.3, rng)
            sol = solve_dfvs(g)
            assert sol.optimal and sol.lower_bound == sol.size


class TestLpExport:
    def test_triangle_text(self):
        text = export_lp(triangle_model())
        assert text.count(">= 1") == 3
        assert "c1: x1 + x2 >= 1" in text
        binary_section = text.split("Binary")[1]
        assert binary_section.count("x") == 3
        assert text.endswith("End\n")

    def test_empty_model(self):
        text = export_lp(IlpModel((), ()))
        assert "End" in text and "obj:" in text

    def test_round_trip_same_optimum(self):
        rng = random.Random(75)
        for _ in range(40):
            n = rng.randint(2, 9)
            constraints = {
                frozenset(rng.sample(range(1, n + 1), rng.randint(2, min(3, n))))
                for _ in range(rng.randint(1, 8))
            }
            model = IlpModel(
                tuple(range(1, n + 1)),
                tuple(sorted(constraints, key=lambda c: (len(c), sorted(c)))),
            )
            again = parse_lp(export_lp(model))
            assert solve_cover_exact(again).size == solve_cover_exact(model).size

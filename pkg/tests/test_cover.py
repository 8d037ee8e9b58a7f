import random

import pytest

from dfvs.cover import (
    CoverLiftError,
    CoverProblem,
    Fold,
    FunnelFold,
    Include,
    lift_cover_solution,
    reduce_cover,
    rule_degree_low,
    rule_desk,
    rule_domination,
    rule_fold_degree_two,
    rule_funnel,
    rule_simplicial,
    rule_subsumption,
    rule_unconfined,
)
from dfvs.oracle import minimum_cover_size
from dfvs.solver import build_model, solve_cover_exact

from gadgets import desk_gadget, directed_cycle, random_cover


def edges_of(p):
    return set(p.edges())


def triangle() -> CoverProblem:
    p = CoverProblem()
    for u, v in [(1, 2), (2, 3), (1, 3)]:
        p.add_edge(u, v)
    return p


def delta_preserved(before: CoverProblem, after: CoverProblem) -> bool:
    lhs = minimum_cover_size(before)
    rhs = (
        minimum_cover_size(after)
        + (after.offset - before.offset)
        + (len(after.forced) - len(before.forced))
    )
    return lhs == rhs


class TestSubsumption:
    def test_edge_swallows_big_set(self):
        p = triangle()
        p.add_big_set({1, 2, 4})
        assert rule_subsumption(p)
        assert p.big_sets == []

    def test_duplicate_big_sets_collapse(self):
        p = CoverProblem()
        p.add_big_set({1, 2, 3})
        p.big_sets.append({1, 2, 3})
        assert rule_subsumption(p)
        assert len(p.big_sets) == 1

    def test_disjoint_sets_unchanged(self):
        p = CoverProblem()
        p.add_big_set({1, 2, 3})
        p.add_big_set({4, 5, 6})
        assert not rule_subsumption(p)
        assert len(p.big_sets) == 2


class TestDegreeLow:
    def test_degree_zero_leaves_its_only_big_set(self):
        p = CoverProblem()
        p.add_big_set({1, 2, 3})
        assert rule_degree_low(p)
        assert p.big_sets == []
        assert (2, 3) in edges_of(p) or (1, 2) in edges_of(p) or (1, 3) in edges_of(p)

    def test_bare_degree_one_commits_neighbor(self):
        p = CoverProblem()
        p.add_edge(1, 2)
        assert rule_degree_low(p)
        assert p.forced == {2} or p.forced == {1}
        assert p.vertex_set() == set()

    def test_degree_zero_in_two_big_sets_untouched(self):
        p = CoverProblem()
        p.add_big_set({1, 2, 3})
        p.add_big_set({1, 4, 5})
        before = [set(s) for s in p.big_sets]
        changed = rule_degree_low(p)
        # vertices 2..5 are each in exactly one big set, so the rule may fire
        # on them, but vertex 1 must keep both sets
        if changed:
            assert all(any(1 in s for s in p.big_sets) or 1 in e for e in [{1}])
        assert before[0] & before[1] == {1}

    def test_vertex_in_graph_not_dropped(self):
        p = CoverProblem()
        g = directed_cycle([1, 2, 3])
        p.attach_graph(g)
        assert not rule_degree_low(p)
        assert p.vertex_set() == {1, 2, 3}


class TestFoldDegreeTwo:
    def test_triangle_neighbors_adjacent(self):
        p = triangle()
        assert rule_fold_degree_two(p)
        assert len(p.forced) == 2
        assert minimum_cover_size(triangle()) == 2

    def test_path_folds(self):
        p = CoverProblem()
        p.add_edge(1, 2)
        p.add_edge(2, 3)
        assert rule_fold_degree_two(p)
        assert p.offset == 1
        assert any(isinstance(e, Fold) for e in p.events)
        # lifted optimum for the 3-path is 1
        residue = solve_cover_exact(build_model(p))
        lifted = lift_cover_solution(residue.vertices, p.events)
        assert len(lifted) == 1

    def test_neighbor_in_graph_blocks_fold(self):
        p = CoverProblem()
        p.add_edge(1, 2)
        p.add_edge(2, 3)
        p.attach_graph(directed_cycle([1, 7, 8]))
        assert not rule_fold_degree_two(p)


class TestSimplicial:
    def test_clique_neighborhood_commits_neighbors(self):
        # K4, all bare: one vertex drops, its three neighbors go in
        p = CoverProblem()
        for u, v in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]:
            p.add_edge(u, v)
        assert rule_simplicial(p)
        assert len(p.forced) == 3

    def test_missing_adjacency_blocks(self):
        # every 4-cycle vertex has two non-adjacent neighbors
        p = CoverProblem()
        for u, v in [(1, 2), (2, 3), (3, 4), (4, 1)]:
            p.add_edge(u, v)
        assert not rule_simplicial(p)

    def test_neighbors_need_not_be_bare(self):
        p = CoverProblem()
        p.add_edge(1, 2)
        p.add_edge(1, 3)
        p.add_edge(2, 3)
        p.add_big_set({2, 3, 9})
        assert rule_simplicial(p)
        assert {2, 3} <= p.forced


class TestDomination:
    def test_triangle_with_pendant(self):
        p = CoverProblem()
        for u, v in [(1, 2), (1, 3), (2, 3), (1, 4)]:
            p.add_edge(u, v)
        before = p.copy()
        assert rule_domination(p)
        assert delta_preserved(before, p)

    def test_dominated_vertex_in_graph_blocks(self):
        p = CoverProblem()
        for u, v in [(1, 2), (1, 3), (2, 3)]:
            p.add_edge(u, v)
        p.attach_graph(directed_cycle([2, 8, 9]))
        # 1 dominates 2 structurally, but 2 sits in a graph
        v_dominates_u = rule_domination(p)
        if v_dominates_u:
            # the rule may still fire elsewhere (3 dominates 1, say) but the
            # committed vertex must never be justified through vertex 2
            assert all(
                not (isinstance(e, Include) and e.vertex == 2) for e in p.events
            )

    def test_five_cycle_has_no_domination(self):
        # triangle-free with minimum degree two: no neighborhood nests in
        # another, and non-neighbors are never candidates
        p = CoverProblem()
        for u, v in [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]:
            p.add_edge(u, v)
        assert not rule_domination(p)


class TestFunnel:
    def test_big_set_replication(self):
        # funnel u=1, v=2 with clique {3, 4}; 3 adjacent to u, 4 not
        p = CoverProblem()
        for u, v in [(1, 2), (2, 3), (2, 4), (3, 4), (1, 3)]:
            p.add_edge(u, v)
        p.add_big_set({1, 8, 9})
        before = p.copy()
        assert rule_funnel(p)
        assert {4, 8, 9} in p.big_sets
        assert all(1 not in s for s in p.big_sets)
        assert delta_preserved(before, p)

    def test_funnel_preserves_optimum(self):
        rng = random.Random(71)
        fired = 0
        while fired < 100:
            p = random_cover(rng, n=rng.randint(4, 8), p=rng.uniform(0.2, 0.5))
            before = p.copy()
            if not rule_funnel(p):
                continue
            fired += 1
            assert delta_preserved(before, p)

    def test_non_bare_center_blocks(self):
        p = CoverProblem()
        for u, v in [(1, 2), (2, 3), (2, 4), (3, 4)]:
            p.add_edge(u, v)
        p.add_big_set({2, 8, 9})
        assert not rule_funnel(p)


class TestUnconfined:
    def test_immediate_witness(self):
        # neighbor whose whole neighborhood sits inside the closed
        # neighborhood of v makes v unconfined at once
        p = CoverProblem()
        for u, v in [(1, 2), (1, 3), (2, 3), (1, 4), (4, 3)]:
            p.add_edge(u, v)
        before = p.copy()
        if rule_unconfined(p):
            assert delta_preserved(before, p)

    def test_five_cycle_fires_and_preserves_optimum(self):
        # the extension labels 5-cycle vertices unconfined, and rightly so:
        # every one of them sits in some minimum cover, so committing the
        # first keeps the optimum at three
        p = CoverProblem()
        for u, v in [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]:
            p.add_edge(u, v)
        before = p.copy()
        assert minimum_cover_size(before) == 3
        assert rule_unconfined(p)
        assert delta_preserved(before, p)

    def test_path_end_is_confined(self):
        # the middle of a 3-path is the unique minimum cover; the procedure
        # must commit it and never an endpoint
        p = CoverProblem()
        p.add_edge(1, 2)
        p.add_edge(2, 3)
        assert rule_unconfined(p)
        assert p.forced == {2}

    def test_witness_touching_big_set_blocks(self):
        p = CoverProblem()
        for u, v in [(1, 2), (1, 3), (2, 3)]:
            p.add_edge(u, v)
        p.add_big_set({2, 8, 9})
        assert not rule_unconfined(p)

    def test_preserves_optimum(self):
        rng = random.Random(81)
        fired = 0
        while fired < 100:
            p = random_cover(rng, n=rng.randint(4, 9), p=rng.uniform(0.25, 0.55))
            before = p.copy()
            if not rule_unconfined(p):
                continue
            fired += 1
            assert delta_preserved(before, p)


class TestDesk:
    def test_chorded_four_cycle_not_induced(self):
        p = CoverProblem()
        for u, v in [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]:
            p.add_edge(u, v)
        for v in (1, 2, 3, 4):
            p.add_edge(v, v + 10)
        assert not rule_desk(p)

    def test_classic_satisfies_generalized(self):
        rng = random.Random(17)
        fired_both = 0
        while fired_both < 100:
            p = desk_gadget(rng, generalized=False)
            classic = p.copy()
            general = p.copy()
            a = rule_desk(classic, generalized=False)
            b = rule_desk(general, generalized=True)
            if a:
                assert b
                fired_both += 1

    def test_generalized_with_high_degree_pair(self):
        rng = random.Random(19)
        fired = 0
        while fired < 100:
            p = desk_gadget(rng, generalized=True)
            before = p.copy()
            if not rule_desk(p, generalized=True):
                continue
            fired += 1
            assert p.offset - before.offset == 2
            assert delta_preserved(before, p)


class TestReduceAndLift:
    def test_triangle_fully_solved(self):
        p = triangle()
        reduce_cover(p)
        assert p.is_empty() or not list(p.edges())
        residue = solve_cover_exact(build_model(p))
        lifted = lift_cover_solution(residue.vertices, p.events)
        assert len(lifted) == 2

    def test_empty_problem_unchanged(self):
        p = CoverProblem()
        reduce_cover(p)
        assert p.is_empty()

    def test_include_removes_vertex_from_graph(self):
        p = CoverProblem()
        p.attach_graph(directed_cycle([1, 2, 3]))
        p.add_edge(1, 5)
        p.include(1)
        # 2 and 3 lose their cycle and peel away entirely
        assert p.graphs == []
        assert 1 not in p

    def test_fixpoint_is_stable(self):
        rng = random.Random(91)
        for _ in range(40):
            p = random_cover(
                rng, n=rng.randint(3, 9), p=0.35, big_sets=rng.randint(0, 2),
                with_graph=rng.random() < 0.3,
            )
            reduce_cover(p)
            snapshot = (
                sorted(p.edges()),
                sorted(sorted(s) for s in p.big_sets),
                len(p.graphs),
                p.offset,
                sorted(p.forced),
            )
            reduce_cover(p)
            assert snapshot == (
                sorted(p.edges()),
                sorted(sorted(s) for s in p.big_sets),
                len(p.graphs),
                p.offset,
                sorted(p.forced),
            )

    def test_no_rule_excludes_graph_vertices(self):
        # a vertex may leave a graph (peeled after an include) and only then
        # be dropped; what must never happen is an exclusion while the vertex
        # still sits in a graph, checked here at fire time
        rng = random.Random(92)
        original_exclude = CoverProblem.exclude_isolated
        observed: list[bool] = []

        def checked_exclude(self, v):
            observed.append(self.in_graph(v))
            return original_exclude(self, v)

        CoverProblem.exclude_isolated = checked_exclude
        try:
            for _ in range(60):
                p = random_cover(rng, n=7, p=0.3, big_sets=1, with_graph=True)
                reduce_cover(p)
        finally:
            CoverProblem.exclude_isolated = original_exclude
        assert observed and not any(observed)

    def test_end_to_end_lift_optimal_on_vertex_cover(self):
        rng = random.Random(93)
        for i in range(150):
            p = random_cover(rng, n=rng.randint(3, 11), p=rng.choice([0.2, 0.35, 0.5]))
            original = p.copy()
            want = minimum_cover_size(original)
            reduce_cover(p, generalized_desks=bool(i % 2))
            assert not p.graphs
            residue = solve_cover_exact(build_model(p))
            lifted = lift_cover_solution(residue.vertices, p.events)
            assert len(lifted) == want
            for u, v in original.edges():
                assert u in lifted or v in lifted

    def test_lift_rejects_unjustified_alternative(self):
        event = FunnelFold(1, 2, frozenset({3}), frozenset({4}))
        with pytest.raises(CoverLiftError):
            lift_cover_solution(set(), [event])

    def test_fold_lift_cases(self):
        fold = Fold(10, (1, 3), 2)
        assert lift_cover_solution({10}, [fold]) == {1, 3}
        assert lift_cover_solution(set(), [fold]) == {2}

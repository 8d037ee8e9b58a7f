import random

import pytest
from hypothesis import given, settings, strategies as st

from dfvs.pace import (
    PaceParseError,
    parse_pace,
    parse_solution,
    read_instance,
    serialize_pace,
    write_solution,
)
from dfvs.random_instances import random_digraph


class TestParse:
    def test_triangle(self):
        g = parse_pace("3 3 0\n2\n3\n1\n")
        assert g.arc_set() == {(1, 2), (2, 3), (3, 1)}

    def test_two_cycle(self):
        g = parse_pace("2 2 0\n2\n1\n")
        assert g.arc_set() == {(1, 2), (2, 1)}

    def test_isolated_vertex(self):
        g = parse_pace("1 0 0\n\n")
        assert g.vertex_set() == {1}
        assert g.arc_count() == 0

    def test_trailing_vertex_lines_may_be_absent(self):
        g = parse_pace("2 1 0\n2\n")
        assert g.arc_set() == {(1, 2)}
        assert g.vertex_set() == {1, 2}

    def test_comments_anywhere(self):
        text = "% header comment\n3 2 0\n2\n% middle\n3\n\n% tail\n"
        g = parse_pace(text)
        assert g.arc_set() == {(1, 2), (2, 3)}

    def test_duplicates_collapse_with_counter(self):
        inst = read_instance("2 3 0\n2 2\n1\n")
        assert inst.duplicate_arcs == 1
        assert inst.graph.arc_set() == {(1, 2), (2, 1)}

    def test_bytes_accepted(self):
        g = parse_pace(b"2 1 0\n2\n")
        assert g.arc_set() == {(1, 2)}

    @pytest.mark.parametrize(
        "text, line",
        [
            ("3 3\n2\n3\n1\n", 1),
            ("a b c\n", 1),
            ("2 1 0\n3\n\n", 2),
            ("2 5 0\n2\n1\n", 1),
            ("1 0 0\n\n7\n", 3),
        ],
    )
    def test_errors_name_lines(self, text, line):
        with pytest.raises(PaceParseError) as err:
            parse_pace(text)
        assert err.value.line == line


class TestWrite:
    def test_sorted_output(self):
        assert write_solution({3, 1}) == "1\n3\n"

    def test_empty(self):
        assert write_solution(set()) == ""

    def test_singleton(self):
        assert write_solution({7}) == "7\n"

    def test_parse_solution_skips_comments(self):
        assert parse_solution("% chosen\n2\n\n5\n") == [2, 5]


class TestRoundTrip:
    @given(
        st.integers(0, 7),
        st.lists(st.tuples(st.integers(1, 7), st.integers(1, 7)), max_size=30),
    )
    @settings(deadline=None)
    def test_serialize_parse_preserves_arcs(self, n, arcs):
        from dfvs.digraph import DirectedGraph

        g = DirectedGraph.from_arcs(vertices=range(1, n + 1), arcs=arcs)
        again = parse_pace(serialize_pace(g))
        assert again.arc_set() == g.arc_set()

    def test_random_graphs_round_trip(self):
        rng = random.Random(4)
        for _ in range(50):
            g = random_digraph(rng.randint(0, 12), 0.3, rng, self_loop_rate=0.1)
            assert parse_pace(serialize_pace(g)).arc_set() == g.arc_set()

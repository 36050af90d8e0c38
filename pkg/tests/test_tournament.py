import random

import pytest

from fo2small.errors import FormatError, ProjectionMismatchError
from fo2small.formula import Vocabulary
from fo2small.satengine import random_structure, random_tournament
from fo2small.tournament import (
    ColoredTournament,
    TypedTournament,
    d_sets,
    edge_colors_between,
    from_structure,
    graph_to_dot,
    graph_to_text,
    king_colors,
    parse_graph,
    profile_of,
    to_structure,
    validate,
)
from fo2small.typespace import invert, two_type_of


def three_vertex_example():
    # king v0 (color 0); u1, u2 share color 1; both king edges colored 0
    return ColoredTournament(
        2, 2, (0, 1, 1), {(0, 1): 0, (0, 2): 0, (1, 2): 1}
    )


class TestValidate:
    def test_single_vertex_valid(self):
        assert validate(ColoredTournament(1, 1, (0,), {}))

    def test_missing_edge(self):
        G = ColoredTournament(1, 1, (0, 0), {})
        result = validate(G)
        assert not result and "missing edge" in result.message

    def test_duplicate_pair(self):
        G = ColoredTournament(1, 1, (0, 0), {(0, 1): 0, (1, 0): 0})
        assert "two edges" in validate(G).message

    def test_self_loop(self):
        G = ColoredTournament(1, 1, (0,), {(0, 0): 0})
        assert "self-loop" in validate(G).message

    def test_flipped_orientation_detected(self):
        rng = random.Random(0)
        for seed in range(10):
            G = random_tournament(3, 2, [2, 2, 1], seed)
            assert validate(G)
            # flip one edge between distinct color classes
            cross = [
                (u, v)
                for (u, v) in G.edges
                if G.vertex_colors[u] != G.vertex_colors[v]
            ]
            u, v = cross[rng.randrange(len(cross))]
            edges = dict(G.edges)
            d = edges.pop((u, v))
            edges[(v, u)] = d
            bad = ColoredTournament(G.num_colors, G.num_edge_colors, G.vertex_colors, edges)
            # only a violation if the class pair still has another edge
            cu, cv = G.vertex_colors[u], G.vertex_colors[v]
            others = [
                e for e in cross
                if {G.vertex_colors[e[0]], G.vertex_colors[e[1]]} == {cu, cv} and e != (u, v)
            ]
            if others:
                result = validate(bad)
                assert not result and "orientation" in result.message


class TestKingsAndProfiles:
    def test_all_distinct_colors_all_kings(self):
        G = random_tournament(4, 2, [1, 1, 1, 1], 3)
        assert king_colors(G) == frozenset({0, 1, 2, 3})

    def test_two_same_colored_no_kings(self):
        G = random_tournament(1, 1, [2], 0)
        assert king_colors(G) == frozenset()

    def test_recount_oracle(self):
        for seed in range(10):
            G = random_tournament(4, 3, [1 + seed % 3, 1, 2, 1 + seed % 2], seed)
            counted = {
                c for c in set(G.vertex_colors) if G.vertex_colors.count(c) == 1
            }
            assert king_colors(G) == counted

    def test_profile_no_kings_empty(self):
        G = random_tournament(1, 2, [3], 1)
        assert profile_of(G, 0) == frozenset()

    def test_profile_three_vertex_example(self):
        G = three_vertex_example()
        assert profile_of(G, 1) == profile_of(G, 2) == frozenset({(0, 0)})

    def test_profile_of_king_rejected(self):
        G = three_vertex_example()
        with pytest.raises(ValueError, match="king"):
            profile_of(G, 0)

    def test_profiles_stable_under_vertex_renumbering(self):
        G = random_tournament(4, 3, [1, 2, 3, 1], 17)
        rng = random.Random(2)
        perm = list(range(G.num_vertices))
        rng.shuffle(perm)  # perm[old] = new id
        edges = {(perm[u], perm[v]): d for (u, v), d in G.edges.items()}
        colors = [0] * G.num_vertices
        for old, new in enumerate(perm):
            colors[new] = G.vertex_colors[old]
        P = ColoredTournament(G.num_colors, G.num_edge_colors, tuple(colors), edges)
        assert validate(P)
        for old in range(G.num_vertices):
            if G.vertex_colors[old] in king_colors(G):
                continue
            assert profile_of(G, old) == profile_of(P, perm[old])


class TestEdgeColorsBetween:
    def test_empty_class(self):
        G = three_vertex_example()
        assert edge_colors_between(G, 0, 1) == frozenset({0})
        assert edge_colors_between(G, 1, 1) == frozenset({1})
        # color id 1 is declared but the pair (0, 0) has no members
        assert edge_colors_between(G, 0, 0) == frozenset()

    def test_union_covers_all_used_colors(self):
        for seed in range(8):
            G = random_tournament(3, 4, [2, 3, 1], 40 + seed)
            union = set()
            colors = G.realized_colors()
            for i, c1 in enumerate(colors):
                for c2 in colors[i:]:
                    union |= edge_colors_between(G, c1, c2)
            assert union == set(G.edges.values())
            assert d_sets(G) == {
                key: edge_colors_between(G, *key)
                for key in d_sets(G)
            }


class TestStructureBridge:
    VOC = Vocabulary(("P",), ("r",))

    def test_singleton(self):
        S = random_structure(self.VOC, 1, 5)
        tt = from_structure(S)
        assert tt.graph.num_vertices == 1 and not tt.graph.edges

    def test_two_elements_same_type(self):
        S = random_structure(self.VOC, 2, 9)
        tt = from_structure(S)
        assert validate(tt.graph)

    def test_round_trip_exact(self):
        for seed in range(25):
            size = seed % 7
            S = random_structure(self.VOC, size, 600 + seed)
            tt = from_structure(S)
            assert validate(tt.graph)
            assert to_structure(tt) == S

    def test_double_round_trip(self):
        S = random_structure(self.VOC, 5, 77)
        tt = from_structure(S)
        tt2 = from_structure(to_structure(tt))
        assert tt2 == tt

    def test_stored_edge_colors_are_pair_types(self):
        S = random_structure(self.VOC, 5, 21)
        tt = from_structure(S)
        for (u, v), d in tt.graph.edges.items():
            assert tt.two_types[d] == two_type_of(S, u, v)
            assert invert(tt.two_types[d]) == two_type_of(S, v, u)

    def test_class_sizes_match_type_multiplicity(self):
        S = random_structure(self.VOC, 6, 33)
        tt = from_structure(S)
        from fo2small.typespace import one_type_of

        for cid, t in enumerate(tt.one_types):
            members = [a for a in range(S.size) if one_type_of(S, a) == t]
            assert len(tt.graph.color_class(cid)) == len(members)

    def test_corrupted_graph_rejected(self):
        S = random_structure(self.VOC, 4, 13)
        tt = from_structure(S)
        # give one vertex a different color: projections no longer match
        colors = list(tt.graph.vertex_colors)
        if len(set(colors)) < 2:
            pytest.skip("needs two realized types")
        colors[0] = (colors[0] + 1) % tt.graph.num_colors
        bad = TypedTournament(
            ColoredTournament(
                tt.graph.num_colors, tt.graph.num_edge_colors, tuple(colors), tt.graph.edges
            ),
            tt.vocab,
            tt.one_types,
            tt.two_types,
        )
        with pytest.raises(ProjectionMismatchError):
            to_structure(bad)

    def test_empty_structure(self):
        S = random_structure(self.VOC, 0, 1)
        tt = from_structure(S)
        assert to_structure(tt).size == 0

    def test_single_king_with_self_loop(self):
        from fo2small.typespace import OneType

        # one vertex whose 1-type sets r(x,x): bit 0 = P(x), bit 1 = r(x,x)
        tt = TypedTournament(
            ColoredTournament(1, 0, (0,), {}),
            self.VOC,
            (OneType(self.VOC, 0b10),),
            (),
        )
        S = to_structure(tt)
        assert S.size == 1
        assert S.binary[0] == frozenset({(0, 0)})
        assert S.unary[0] == frozenset()


class TestGraphFiles:
    def test_round_trip_byte_identical(self):
        G = random_tournament(3, 2, [2, 1, 2], 4)
        text = graph_to_text(G)
        assert parse_graph(text) == G
        assert graph_to_text(parse_graph(text)) == text

    def test_missing_header(self):
        with pytest.raises(FormatError, match="header"):
            parse_graph("vertex 0 0\n")

    def test_non_contiguous_ids(self):
        with pytest.raises(FormatError, match="contiguous"):
            parse_graph("colors 1\nedgecolors 1\nvertex 1 0\n")

    def test_unknown_line(self):
        with pytest.raises(FormatError, match="unknown"):
            parse_graph("colors 1\nedgecolors 1\nvertex 0 0\nnope\n")

    def test_dot_export(self):
        G = three_vertex_example()
        dot = graph_to_dot(G)
        assert dot.startswith("digraph")
        assert 'v0 -> v1 [label="0"]' in dot

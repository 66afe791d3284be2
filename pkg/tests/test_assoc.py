import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from promoboard.assoc import (
    MalformedRowError,
    imageable_concepts,
    ingest_associations,
    load_associations_csv,
    load_lexicon_csv,
    within_two_hops,
)
from oracles import enumerate_two_hops


class TestIngest:
    def test_symmetric_counts(self):
        graph = ingest_associations([("juice", "health", 2), ("juice", "orange", 2)])
        assert graph.edges["juice"]["health"] == pytest.approx(0.5)
        assert graph.edges["juice"]["orange"] == pytest.approx(0.5)

    def test_normalization(self):
        graph = ingest_associations([("a", "b", 3), ("a", "c", 1)])
        assert graph.edges["a"]["b"] == pytest.approx(0.75)
        assert graph.edges["a"]["c"] == pytest.approx(0.25)

    def test_duplicate_rows_summed(self):
        graph = ingest_associations([("a", "b", 1), ("a", "b", 2), ("a", "c", 3)])
        assert graph.edges["a"]["b"] == pytest.approx(0.5)

    def test_strengths_sum_to_one(self):
        rng = random.Random(7)
        rows = [
            (f"cue{rng.randrange(50)}", f"resp{rng.randrange(200)}", rng.randint(1, 9))
            for _ in range(2000)
        ]
        graph = ingest_associations(rows)
        for cue, outgoing in graph.edges.items():
            assert abs(sum(outgoing.values()) - 1.0) < 1e-9, cue

    def test_idempotent(self):
        rows = [("a", "b", 3), ("a", "c", 1), ("b", "c", 2)]
        g1 = ingest_associations(rows)
        g2 = ingest_associations(rows)
        assert g1.edges == g2.edges and g1.nodes == g2.nodes

    @pytest.mark.parametrize(
        "rows", [[("a", "b", 0)], [("a", "b", -1)], [("a", "", 1)], [("a", "b")]]
    )
    def test_malformed_rows_rejected_with_row_number(self, rows):
        with pytest.raises(MalformedRowError) as exc:
            ingest_associations([("ok", "fine", 1)] + rows)
        assert exc.value.row_number == 2

    def test_reverse_direction(self):
        graph = ingest_associations([("a", "b", 1)], reverse=True)
        assert "a" in graph.edges["b"]

    def test_csv_round_trip(self, tmp_path):
        path = tmp_path / "assoc.csv"
        path.write_text("cue,response,count\njuice,orange,3\njuice,health,1\n")
        graph = load_associations_csv(path)
        assert graph.edges["juice"]["orange"] == pytest.approx(0.75)

    def test_lexicon_csv(self, tmp_path):
        graph = ingest_associations([("a", "b", 1)])
        path = tmp_path / "lex.csv"
        path.write_text("word,concreteness,imageability\nb,0.9,0.7\n")
        load_lexicon_csv(graph, path)
        assert graph.scores("b") == (0.9, 0.7)

    def test_lexicon_score_bounds(self, tmp_path):
        graph = ingest_associations([("a", "b", 1)])
        path = tmp_path / "lex.csv"
        path.write_text("b,1.5,0.7\n")
        with pytest.raises(MalformedRowError):
            load_lexicon_csv(graph, path)


class TestWithinTwoHops:
    def test_chain(self):
        graph = ingest_associations([("a", "b", 1), ("b", "c", 1)])
        concepts = within_two_hops(graph, "a")
        by_word = {m.word: m for m in concepts.members}
        assert by_word["a"].hops == 0 and by_word["a"].path_strength == 1.0
        assert by_word["b"].hops == 1
        assert by_word["c"].hops == 2

    def test_max_product_over_paths(self):
        graph = ingest_associations(
            [("a", "b", 1), ("a", "c", 1), ("b", "d", 1), ("c", "d", 4), ("c", "e", 1)]
        )
        # a->b 0.5, b->d 1.0 gives 0.5; a->c 0.5, c->d 0.8 gives 0.4
        concepts = within_two_hops(graph, "a")
        assert concepts.strength_of("d") == pytest.approx(0.5)

    def test_hand_computed_two_path_strengths(self):
        # a->b (0.5) -> d (0.5) = 0.25 vs a->c (0.5) -> d (0.8) = 0.4,
        # with c->e soaking up the remaining strength
        graph = ingest_associations(
            [("a", "b", 1), ("a", "c", 1), ("b", "d", 1), ("b", "x", 1),
             ("c", "d", 4), ("c", "e", 1)]
        )
        assert within_two_hops(graph, "a").strength_of("d") == pytest.approx(0.4)

    def test_isolated_node(self):
        graph = ingest_associations([("a", "b", 1)])
        concepts = within_two_hops(graph, "b")
        assert concepts.words() == {"b"}
        assert concepts.found

    def test_unknown_word_flagged(self):
        graph = ingest_associations([("a", "b", 1)])
        concepts = within_two_hops(graph, "nope")
        assert not concepts.found
        assert concepts.members == ()

    def test_random_graphs_match_path_enumeration(self):
        rng = random.Random(99)
        for trial in range(100):
            n = rng.randint(2, 50)
            words = [f"w{i}" for i in range(n)]
            rows = []
            for _ in range(rng.randint(1, 3 * n)):
                cue, resp = rng.choice(words), rng.choice(words)
                rows.append((cue, resp, rng.randint(1, 5)))
            graph = ingest_associations(rows)
            origin = rng.choice(sorted(graph.nodes))
            expected = enumerate_two_hops(graph.edges, origin)
            got = {m.word: (m.hops, m.path_strength) for m in within_two_hops(graph, origin).members}
            assert got.keys() == expected.keys(), f"trial {trial}"
            for word in expected:
                assert got[word][0] == expected[word][0]
                assert got[word][1] == pytest.approx(expected[word][1])

    def test_hop_one_subset_of_full(self):
        graph = ingest_associations(
            [("a", "b", 1), ("a", "c", 2), ("b", "d", 1), ("c", "d", 1)]
        )
        full = within_two_hops(graph, "a")
        near = {m.word for m in full.members if m.hops <= 1}
        assert near <= full.words()


class TestImageableConcepts:
    def test_vacuous_filter_is_strength_ranking(self, toy_graph):
        for word in toy_graph.nodes:
            toy_graph.lexicon[word] = (1.0, 1.0)
        top = imageable_concepts(toy_graph, "juice", k=3)
        members = within_two_hops(toy_graph, "juice")
        expected = sorted(members.members, key=lambda m: (-m.path_strength, m.word))
        assert top == [m.word for m in expected[:3]]

    def test_below_threshold_absent(self, toy_graph):
        out = imageable_concepts(toy_graph, "juice", k=10)
        assert "health" not in out  # lexicon score 0.3 < 0.4
        assert "orange" in out

    def test_oracle_filter_and_sort(self, toy_graph):
        got = imageable_concepts(toy_graph, "juice", k=10)
        members = within_two_hops(toy_graph, "juice").members
        expected = sorted(
            (m for m in members
             if toy_graph.scores(m.word)[0] >= 0.4 and toy_graph.scores(m.word)[1] >= 0.4),
            key=lambda m: (-m.path_strength, m.word),
        )
        assert got == [m.word for m in expected]

    def test_every_result_clears_thresholds(self, toy_graph):
        for word in imageable_concepts(toy_graph, "juice", k=10):
            conc, imag = toy_graph.scores(word)
            assert conc >= 0.4 and imag >= 0.4

    def test_k_validation(self, toy_graph):
        with pytest.raises(ValueError):
            imageable_concepts(toy_graph, "juice", k=0)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_determinism(self, seed):
        rng = random.Random(seed)
        words = [f"w{i}" for i in range(10)]
        rows = [
            (rng.choice(words), rng.choice(words), rng.randint(1, 4))
            for _ in range(20)
        ]
        graph = ingest_associations(rows)
        for word in graph.nodes:
            graph.lexicon[word] = (rng.random(), rng.random())
        origin = sorted(graph.nodes)[0]
        assert imageable_concepts(graph, origin, k=5) == imageable_concepts(graph, origin, k=5)

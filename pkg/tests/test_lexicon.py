"""Tokenizer, similarity, and keyword-map tests.

The similarity tests carry their own oracles: an independent recursive
levenshtein, and containment scores computed by hand from the formula
base 0.8 + 0.2 * (len(shorter) / len(longer)).
"""

import functools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convoviz.errors import EmptyQuery
from convoviz.lexicon import (
    SIMILARITY_THRESHOLD,
    ExplicitRule,
    KeywordMaps,
    find_chart_mentions,
    levenshtein,
    match_keywords,
    semantic_similarity,
    set_semantic_provider,
    similarity,
    stem,
    syntactic_similarity,
    tokenize,
)


def reference_levenshtein(a: str, b: str) -> int:
    """Plain recursive edit distance, memoized; the oracle for the DP version."""

    @functools.lru_cache(maxsize=None)
    def dist(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        cost = 0 if a[i - 1] == b[j - 1] else 1
        return min(dist(i - 1, j) + 1, dist(i, j - 1) + 1, dist(i - 1, j - 1) + cost)

    return dist(len(a), len(b))


class TestTokenize:
    def test_words_and_positions(self):
        seq = tokenize("Show average prices!")
        assert [t.surface for t in seq.tokens] == ["Show", "average", "prices"]
        assert [t.normalized for t in seq.tokens] == ["show", "average", "prices"]
        assert [t.position for t in seq.tokens] == [0, 5, 13]

    def test_hyphen_and_apostrophe_survive_inside_words(self):
        seq = tokenize("rated PG-13 o'clock")
        assert seq.normalized == ("rated", "pg-13", "o'clock")

    def test_numbers_are_tokens(self):
        seq = tokenize("top 5 between 1.5 and 2")
        assert "5" in seq.normalized and "1.5" in seq.normalized

    def test_ngrams_cover_up_to_four_tokens(self):
        seq = tokenize("a b c d e")
        lengths = {len(g) for g in seq.ngrams}
        assert lengths == {1, 2, 3, 4}
        quads = [g.normalized for g in seq.ngrams if len(g) == 4]
        assert quads == ["a b c d", "b c d e"]

    @pytest.mark.parametrize("bad", ["", "   ", "?!,", None])
    def test_empty_query_raises(self, bad):
        with pytest.raises(EmptyQuery):
            tokenize(bad)


class TestLevenshtein:
    @given(st.text(alphabet="abcde", max_size=8), st.text(alphabet="abcde", max_size=8))
    @settings(max_examples=200)
    def test_matches_reference(self, a, b):
        assert levenshtein(a, b) == reference_levenshtein(a, b)

    def test_known_distances(self):
        assert levenshtein("kitten", "sitting") == 3
        assert levenshtein("", "abc") == 3
        assert levenshtein("same", "same") == 0


class TestStemmer:
    @pytest.mark.parametrize("word,expected", [
        ("grossing", "gross"),
        ("years", "year"),
        ("condos", "condo"),
        ("duplexes", "duplex"),
        ("houses", "house"),
        ("medals", "medal"),
        ("prices", "price"),
        ("genres", "genre"),
        ("skating", "skat"),
        ("countries", "country"),
        ("pass", "pass"),       # ss endings stay
        ("status", "status"),   # us endings stay
        ("this", "this"),       # is endings stay
        ("sort", "sort"),
    ])
    def test_table(self, word, expected):
        assert stem(word) == expected


class TestSyntacticSimilarity:
    def test_exact_is_one_case_insensitive(self):
        assert syntactic_similarity("Price", "price") == 1.0
        assert syntactic_similarity(" price ", "PRICE") == 1.0

    @given(st.text(alphabet="abcdefgh ", min_size=1, max_size=12),
           st.text(alphabet="abcdefgh ", min_size=1, max_size=12))
    @settings(max_examples=200)
    def test_bounds_and_symmetry(self, a, b):
        score = syntactic_similarity(a, b)
        assert 0.0 <= score <= 1.0
        assert score == syntactic_similarity(b, a)

    @given(st.text(alphabet="abcdefgh ", min_size=1, max_size=12),
           st.text(alphabet="abcdefgh ", min_size=1, max_size=12))
    @settings(max_examples=200)
    def test_one_only_on_equality(self, a, b):
        if a.strip() and b.strip():
            score = syntactic_similarity(a, b)
            assert (score == 1.0) == (a.strip().lower() == b.strip().lower())

    @pytest.mark.parametrize("phrase,target,expected", [
        # 0.8 + 0.2 * shorter/longer over raw lowercased strings
        ("medals", "Gold Medals", 0.8 + 0.2 * 6 / 11),
        ("skating", "Figure Skating", 0.8 + 0.2 * 7 / 14),
        ("skating", "Speed Skating", 0.8 + 0.2 * 7 / 13),
        ("skating", "Short Speed Skating", 0.8 + 0.2 * 7 / 19),
        ("years", "Year Built", 0.8 + 0.2 * 5 / 10),
        ("budget", "Production Budget", 0.8 + 0.2 * 6 / 17),
    ])
    def test_containment_scores(self, phrase, target, expected):
        assert syntactic_similarity(phrase, target) == pytest.approx(expected, abs=1e-9)

    def test_containment_needs_whole_stemmed_tokens(self):
        # "medal" is a substring of "Gold Medals" but containment works on
        # token sequences, so an unrelated token sequence scores low
        assert syntactic_similarity("old", "Gold Medals") < SIMILARITY_THRESHOLD

    def test_plain_edit_distance_band(self):
        # price vs price. -> handled by tokenizer; prise vs price by distance
        score = syntactic_similarity("prise", "price")
        assert score == pytest.approx(1 - 1 / 5)

    def test_below_threshold_for_unrelated(self):
        assert syntactic_similarity("zebra", "Price") < SIMILARITY_THRESHOLD


class TestSemanticSimilarity:
    def test_synonym_groups(self):
        assert semantic_similarity("cost", "Price") == 1.0
        assert semantic_similarity("homes", "house") == 1.0   # stem + synonym
        assert semantic_similarity("wage", "Salary") == 1.0
        assert semantic_similarity("nation", "Country") == 1.0

    def test_stem_equality(self):
        assert semantic_similarity("prices", "price") == 1.0

    def test_unrelated_is_zero(self):
        assert semantic_similarity("zebra", "price") == 0.0

    def test_provider_override(self):
        set_semantic_provider(lambda a, b: 0.9)
        try:
            assert semantic_similarity("anything", "else") == 0.9
            assert similarity("anything", "else") == 0.9
        finally:
            set_semantic_provider(None)

    def test_combined_similarity_takes_max(self):
        assert similarity("cost", "Price") == 1.0          # semantic wins
        assert similarity("prise", "price") == pytest.approx(0.8)  # syntactic wins


class TestKeywordMaps:
    def test_default_maps_load_and_validate(self):
        maps = KeywordMaps.load_default()
        assert "replace" in maps.explicit
        assert "instead of" in maps.implicit_non_ambiguous
        assert set(maps.implicit_ambiguous) == {"only", "just", "now", "what about"}

    def test_overlapping_phrases_rejected(self):
        with pytest.raises(ValueError):
            KeywordMaps(
                explicit={"only": ExplicitRule("only", "remove", frozenset(["tasks"]))},
                implicit_non_ambiguous=(),
                implicit_ambiguous=("only",),
            ).validate()

    def test_bad_action_rejected(self):
        with pytest.raises(ValueError):
            KeywordMaps.from_dict({"explicit": {"frobnicate": {
                "action": "explode", "targets": ["tasks"]}}})

    def test_empty_targets_rejected(self):
        with pytest.raises(ValueError):
            KeywordMaps.from_dict({"explicit": {"drop": {
                "action": "remove", "targets": []}}})

    def test_long_phrase_rejected(self):
        with pytest.raises(ValueError):
            KeywordMaps.from_dict({"implicitAmbiguous": ["one two three four five"]})

    def test_round_trip(self):
        maps = KeywordMaps.load_default()
        again = KeywordMaps.from_dict(maps.to_dict())
        assert again.to_dict() == maps.to_dict()


class TestChartMentions:
    def test_noun_pairs(self):
        mentions = find_chart_mentions(tokenize("as a bar chart instead"))
        assert [(m.mark, m.start, m.end) for m in mentions] == [("bar", 2, 4)]

    def test_standalone_nouns(self):
        assert [m.mark for m in find_chart_mentions(tokenize("show a histogram"))] == ["histogram-bar"]
        assert [m.mark for m in find_chart_mentions(tokenize("a scatterplot please"))] == ["point"]

    def test_pie_maps_to_arc(self):
        assert [m.mark for m in find_chart_mentions(tokenize("pie chart of sales"))] == ["arc"]

    def test_bare_data_words_are_not_charts(self):
        # "area" and "line" collide with data vocabulary, so alone they carry
        # no mark; bare generic nouns count as mark-less mentions
        assert find_chart_mentions(tokenize("show the area by line")) == []
        mentions = find_chart_mentions(tokenize("another chart"))
        assert [(m.mark) for m in mentions] == [None]


@pytest.fixture(scope="module")
def maps():
    return KeywordMaps.load_default()


class TestMatchKeywords:
    def test_explicit_hit(self, maps):
        hits = match_keywords(tokenize("replace budget with gross"), maps)
        assert [(h.phrase, h.kind, h.action) for h in hits] == [("replace", "explicit", "replace")]

    def test_chart_noun_gate_blocks_without_noun(self, maps):
        hits = match_keywords(tokenize("show condos instead"), maps)
        assert hits == []

    def test_chart_noun_gate_opens_with_noun(self, maps):
        hits = match_keywords(tokenize("as a bar chart instead"), maps)
        kinds = [(h.phrase, h.kind) for h in hits]
        assert ("as a", "explicit") in kinds
        assert ("instead", "explicit") in kinds

    def test_longer_phrases_win(self, maps):
        # "instead of" (non-ambiguous implicit) claims the tokens before the
        # chart-gated "instead" rule can
        hits = match_keywords(tokenize("show condos instead of duplexes"), maps)
        assert [(h.phrase, h.kind) for h in hits] == [("instead of", "implicitNonAmbiguous")]

    def test_ambiguous_implicit(self, maps):
        hits = match_keywords(tokenize("now show only budget"), maps)
        assert [(h.phrase, h.kind) for h in hits] == [
            ("now", "implicitAmbiguous"), ("only", "implicitAmbiguous")]

    def test_what_about_bigram(self, maps):
        hits = match_keywords(tokenize("what about the condos"), maps)
        assert [(h.phrase, h.kind) for h in hits] == [("what about", "implicitAmbiguous")]

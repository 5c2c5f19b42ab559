"""Ambiguity resolution: explicit selections, auto pick, validation."""

import pytest

import convoviz
from convoviz.errors import SelectionNotAnOption, UnknownAmbiguityKeyword
from convoviz.query_processor import analyze_standalone
from convoviz.resolver import ambiguity_index, apply_resolutions, auto_resolve


@pytest.fixture
def ambiguous(olympics):
    """A query with one value ambiguity per phrase: hockey and skating."""
    return analyze_standalone("total medals for hockey and skating", olympics)


class TestApplyResolutions:
    def test_partial_resolution_keeps_charts_blocked(self, ambiguous, olympics):
        apply_resolutions(ambiguous, {"value": {"hockey": ["Hockey"]}}, olympics)
        index = ambiguity_index(ambiguous)
        assert index["value"]["hockey"].selected == ["Hockey"]
        assert index["value"]["skating"].is_open
        assert ambiguous.vis_list == []
        assert ambiguous.task_map["filter"][0]["values"] == ["Hockey"]

    def test_full_resolution_unblocks_charts(self, ambiguous, olympics):
        apply_resolutions(ambiguous, {"value": {
            "hockey": ["Hockey"],
            "skating": ["Figure Skating", "Speed Skating"],
        }}, olympics)
        assert not ambiguous.has_open_ambiguities
        assert ambiguous.vis_list
        entry = ambiguous.attribute_map["Sport"]
        assert entry["matchKind"] == "valueImplied"
        assert entry["isAmbiguous"] is True
        assert entry["impliedValues"] == ["Hockey", "Figure Skating", "Speed Skating"]
        assert ambiguous.task_map["filter"][0]["values"] == [
            "Hockey", "Figure Skating", "Speed Skating"]

    def test_attribute_resolution_binds_tasks(self, olympics):
        result = analyze_standalone("average medals by country", olympics)
        record = result.ambiguities[0]
        assert record.kind == "attribute"
        assert result.task_map["derived_value"][0]["attributes"] == []
        apply_resolutions(result, {"attribute": {"medals": ["Bronze Medals"]}}, olympics)
        assert result.attribute_map["Bronze Medals"]["isAmbiguous"] is True
        assert result.attribute_map["Bronze Medals"]["matchKind"] == "syntactic"
        assert result.task_map["derived_value"][0]["attributes"] == ["Bronze Medals"]
        assert result.vis_list[0]["markType"] == "bar"

    def test_string_selection_accepted(self, ambiguous, olympics):
        apply_resolutions(ambiguous, {"value": {"hockey": "Hockey"}}, olympics)
        assert ambiguity_index(ambiguous)["value"]["hockey"].selected == ["Hockey"]

    def test_unknown_kind_rejected(self, ambiguous, olympics):
        with pytest.raises(UnknownAmbiguityKeyword):
            apply_resolutions(ambiguous, {"chart": {"hockey": ["Hockey"]}}, olympics)

    def test_unknown_phrase_rejected(self, ambiguous, olympics):
        with pytest.raises(UnknownAmbiguityKeyword):
            apply_resolutions(ambiguous, {"value": {"curling": ["Hockey"]}}, olympics)

    def test_already_resolved_rejected(self, ambiguous, olympics):
        apply_resolutions(ambiguous, {"value": {"hockey": ["Hockey"]}}, olympics)
        with pytest.raises(UnknownAmbiguityKeyword):
            apply_resolutions(ambiguous, {"value": {"hockey": ["Ice Hockey"]}}, olympics)

    def test_selection_must_be_an_option(self, ambiguous, olympics):
        with pytest.raises(SelectionNotAnOption):
            apply_resolutions(ambiguous, {"value": {"hockey": ["Curling"]}}, olympics)

    def test_empty_selection_rejected(self, ambiguous, olympics):
        with pytest.raises(SelectionNotAnOption):
            apply_resolutions(ambiguous, {"value": {"hockey": []}}, olympics)

    def test_attribute_kind_is_single_select(self, olympics):
        result = analyze_standalone("average medals by country", olympics)
        with pytest.raises(SelectionNotAnOption):
            apply_resolutions(result, {"attribute": {
                "medals": ["Gold Medals", "Silver Medals"]}}, olympics)

    def test_failed_validation_leaves_state_untouched(self, ambiguous, olympics):
        before = ambiguous.to_json()
        with pytest.raises(SelectionNotAnOption):
            apply_resolutions(ambiguous, {"value": {
                "hockey": ["Hockey"],      # valid
                "skating": ["Curling"],    # invalid, must abort the whole call
            }}, olympics)
        assert ambiguous.to_json() == before


class TestAutoResolve:
    def test_picks_highest_score(self, ambiguous, olympics):
        auto_resolve(ambiguous, olympics)
        index = ambiguity_index(ambiguous)
        assert index["value"]["hockey"].selected == ["Hockey"]          # 1.0 beats 0.92
        assert index["value"]["skating"].selected == ["Speed Skating"]  # longest ratio
        assert not ambiguous.has_open_ambiguities
        assert ambiguous.vis_list

    def test_tie_prefers_first_detected_option(self):
        # two equally long attribute names containing "gold" tie exactly;
        # the schema-order option wins
        dataset = convoviz.load_dataset(
            "Gold Medals,Gold Points,Country\n3,10,Norway\n1,8,Canada\n", "csv")
        result = analyze_standalone("gold by country", dataset)
        record = result.ambiguities[0]
        assert record.options == ["Gold Medals", "Gold Points"]
        assert record.scores[0] == record.scores[1]
        auto_resolve(result, dataset)
        assert record.selected == ["Gold Medals"]

    def test_idempotent(self, ambiguous, olympics):
        auto_resolve(ambiguous, olympics)
        first = ambiguous.to_json()
        auto_resolve(ambiguous, olympics)
        assert ambiguous.to_json() == first

    def test_noop_without_open_records(self, houses):
        result = analyze_standalone("average price by home type", houses)
        before = result.to_json()
        auto_resolve(result, houses)
        assert result.to_json() == before


class TestEngineResolutionModes:
    def test_engine_auto_resolves_by_default(self, olympics):
        engine = convoviz.Engine(olympics)
        result = engine.analyze_query("total medals for hockey")
        assert not result.has_open_ambiguities
        assert result.vis_list

    def test_engine_update_query_targets_most_recent(self, olympics):
        engine = convoviz.Engine(olympics, auto_resolve=False)
        first = engine.analyze_query("total medals for hockey")
        assert first.vis_list == []
        updated = engine.update_query({"value": {"hockey": ["Ice Hockey"]}})
        assert updated is first
        assert (updated.dialog_id, updated.query_id) == ("0", "0")
        assert updated.vis_list
        # stored object is the same one, still under the same ids
        assert engine.store.get("0", "0") is updated

    def test_callback_receives_open_result(self, olympics):
        engine = convoviz.Engine(olympics)
        seen = {}

        def pick(result):
            seen["phrases"] = [r.query_phrase for r in result.open_ambiguities()]
            return {"value": {"hockey": ["Ice Hockey"]}}

        engine.set_resolution_callback(pick)
        result = engine.analyze_query("total medals for hockey")
        assert seen["phrases"] == ["hockey"]
        assert result.attribute_map["Sport"]["impliedValues"] == ["Ice Hockey"]

    def test_callback_may_leave_open(self, olympics):
        engine = convoviz.Engine(olympics)
        engine.set_resolution_callback(lambda result: None)
        result = engine.analyze_query("total medals for hockey")
        assert result.has_open_ambiguities
        assert result.vis_list == []

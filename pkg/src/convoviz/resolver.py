"""Ambiguity resolution for analyzed queries.

An AmbiguityRecord holds the candidate entities a query phrase could have
meant. Resolution picks one (attribute kind) or several (value kind) of the
recorded options, folds the choice into the attribute and task maps, and,
once no record is left open, produces the chart recommendations that were
held back.

apply_resolutions() takes explicit selections, e.g. from a UI widget or the
REPL prompt; auto_resolve() picks the highest-scoring option per record.
Both mutate the QueryResult in place so stored conversation history reflects
the final state under the same dialog/query ids.
"""

from __future__ import annotations

import logging

from .dataset import Dataset
from .errors import SelectionNotAnOption, UnknownAmbiguityKeyword
from .lexicon import semantic_similarity
from .query_processor import (
    TASK_ORDER,
    _task_entry,
    generate_vis_list,
    merge_attribute_entry,
)
from .result import ATTRIBUTE_KIND, VALUE_KIND, AmbiguityRecord, QueryResult

logger = logging.getLogger(__name__)


def ambiguity_index(result: QueryResult) -> dict[str, dict[str, AmbiguityRecord]]:
    """All ambiguity records keyed by kind then query phrase."""
    index: dict[str, dict[str, AmbiguityRecord]] = {}
    for record in result.ambiguities:
        index.setdefault(record.kind, {})[record.query_phrase] = record
    return index


def _resolved_match_kind(phrase: str, dataset: Dataset, attribute: str) -> str:
    meta = dataset.attribute(attribute)
    lowered = phrase.strip().lower()
    if lowered == meta.name.strip().lower():
        return "exactName"
    if any(lowered == str(alias).strip().lower() for alias in meta.aliases):
        return "alias"
    if semantic_similarity(phrase, meta.name) >= 1.0:
        return "semantic"
    return "syntactic"


def _option_score(record: AmbiguityRecord, label: str) -> float:
    for option, score in zip(record.options, record.scores):
        if record.kind == VALUE_KIND:
            if option["value"] == label:
                return score
        elif option == label:
            return score
    raise SelectionNotAnOption(
        f"{label!r} is not an option for the phrase {record.query_phrase!r}")


def _validate(result: QueryResult, resolutions: dict) -> list[tuple[AmbiguityRecord, list[str]]]:
    index = ambiguity_index(result)
    planned: list[tuple[AmbiguityRecord, list[str]]] = []
    for kind, by_phrase in resolutions.items():
        if kind not in (ATTRIBUTE_KIND, VALUE_KIND):
            raise UnknownAmbiguityKeyword(f"unknown ambiguity kind: {kind!r}")
        if not isinstance(by_phrase, dict):
            raise UnknownAmbiguityKeyword(
                f"resolutions for {kind!r} must map query phrases to selections")
        for phrase, selections in by_phrase.items():
            record = index.get(kind, {}).get(phrase)
            if record is None:
                raise UnknownAmbiguityKeyword(
                    f"no open {kind} ambiguity for the phrase {phrase!r}")
            if not record.is_open:
                raise UnknownAmbiguityKeyword(
                    f"the phrase {phrase!r} was already resolved")
            if isinstance(selections, str):
                selections = [selections]
            selections = list(selections)
            if not selections:
                raise SelectionNotAnOption(
                    f"no selection given for the phrase {phrase!r}")
            if kind == ATTRIBUTE_KIND and len(selections) > 1:
                raise SelectionNotAnOption(
                    "an attribute phrase resolves to exactly one attribute, got "
                    f"{len(selections)} for {phrase!r}")
            for label in selections:
                _option_score(record, label)  # raises SelectionNotAnOption
            planned.append((record, selections))
    return planned


def rebind_task_attributes(task_map: dict, attribute_map: dict, dataset: Dataset) -> None:
    """Fill task entries whose attribute slot is still empty.

    Measure-shaped tasks take the first quantitative attribute, correlation
    the first two, trend the first temporal one.
    """
    q_attrs = [n for n in attribute_map
               if dataset.attribute(n).data_type == "quantitative"
               and attribute_map[n]["matchKind"] != "valueImplied"]
    t_attrs = [n for n in attribute_map
               if dataset.attribute(n).data_type == "temporal"]
    for task, entries in task_map.items():
        for entry in entries:
            if entry["attributes"]:
                continue
            if task in ("derived_value", "find_extremum", "distribution", "sort"):
                entry["attributes"] = q_attrs[:1]
            elif task == "correlation":
                entry["attributes"] = q_attrs[:2]
            elif task == "trend":
                entry["attributes"] = t_attrs[:1]


def rebuild_filters(task_map: dict, attribute_map: dict) -> None:
    """Recompute IN filters from impliedValues, keeping numeric filters."""
    numeric = [e for e in task_map.get("filter", []) if e["operator"] != "IN"]
    implied = [
        _task_entry([name], operator="IN", values=entry["impliedValues"])
        for name, entry in attribute_map.items()
        if entry["impliedValues"]
    ]
    if implied or numeric:
        task_map["filter"] = implied + numeric
    else:
        task_map.pop("filter", None)


def reorder_task_map(task_map: dict) -> dict:
    return {task: task_map[task] for task in TASK_ORDER if task in task_map}


def apply_resolutions(result: QueryResult, resolutions: dict, dataset: Dataset,
                      force_mark: str | None = None) -> QueryResult:
    """Apply explicit selections to a result's open ambiguity records.

    ``resolutions`` is {"attribute"|"value": {queryPhrase: selection or
    [selections]}}. All selections are validated before any state changes so
    a bad request leaves the result untouched. The chart list is generated
    only when every record is settled.
    """
    planned = _validate(result, resolutions)
    for record, selections in planned:
        record.selected = list(selections)
        for label in selections:
            score = _option_score(record, label)
            if record.kind == ATTRIBUTE_KIND:
                merge_attribute_entry(
                    result.attribute_map, label, record.query_phrase,
                    _resolved_match_kind(record.query_phrase, dataset, label),
                    score, is_ambiguous=True,
                )
            else:
                option = next(o for o in record.options if o["value"] == label)
                merge_attribute_entry(
                    result.attribute_map, option["attribute"], record.query_phrase,
                    "valueImplied", score, implied_value=option["value"],
                    is_ambiguous=True,
                )

    rebuild_filters(result.task_map, result.attribute_map)
    rebind_task_attributes(result.task_map, result.attribute_map, dataset)
    result.task_map = reorder_task_map(result.task_map)

    if not result.has_open_ambiguities and result.attribute_map:
        result.vis_list = generate_vis_list(
            result.attribute_map, result.task_map, dataset, force_mark=force_mark)
    logger.debug("resolved %d record(s) on %s/%s", len(planned),
                 result.dialog_id, result.query_id)
    return result


def auto_resolve(result: QueryResult, dataset: Dataset,
                 force_mark: str | None = None) -> QueryResult:
    """Settle every open record by highest score, first option on ties."""
    selections: dict[str, dict[str, list[str]]] = {}
    for record in result.open_ambiguities():
        best_index = max(range(len(record.scores)),
                         key=lambda i: (record.scores[i], -i))
        option = record.options[best_index]
        label = option["value"] if record.kind == VALUE_KIND else option
        selections.setdefault(record.kind, {})[record.query_phrase] = [label]
    if not selections:
        return result
    return apply_resolutions(result, selections, dataset, force_mark=force_mark)
